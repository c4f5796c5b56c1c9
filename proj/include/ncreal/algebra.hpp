#ifndef NCREAL_ALGEBRA_HPP
#define NCREAL_ALGEBRA_HPP

#include <ncreal/matrix.hpp>

#include <concepts>
#include <optional>
#include <vector>

namespace ncreal {

/// A unital algebra over Q as seen by the evaluators. Ring axioms are the
/// instance's responsibility; try_invert must return a two-sided inverse or
/// nothing.
template <class A>
concept UnitalAlgebra = requires(const A& alg, const typename A::Element& x, const Rat& c) {
  typename A::Element;
  { alg.zero() } -> std::convertible_to<typename A::Element>;
  { alg.one() } -> std::convertible_to<typename A::Element>;
  { alg.add(x, x) } -> std::convertible_to<typename A::Element>;
  { alg.neg(x) } -> std::convertible_to<typename A::Element>;
  { alg.mul(x, x) } -> std::convertible_to<typename A::Element>;
  { alg.scale(c, x) } -> std::convertible_to<typename A::Element>;
  { alg.equal(x, x) } -> std::convertible_to<bool>;
  { alg.try_invert(x) } -> std::same_as<std::optional<typename A::Element>>;
};

/// Q^{n x n}.
class MatrixAlgebra {
 public:
  using Element = Mat;

  explicit MatrixAlgebra(std::size_t n) : n_(n) {}
  std::size_t n() const { return n_; }

  Mat zero() const { return Mat(n_, n_); }
  Mat one() const { return Mat::identity(n_); }
  Mat add(const Mat& a, const Mat& b) const { return a + b; }
  Mat neg(const Mat& a) const { return -a; }
  Mat mul(const Mat& a, const Mat& b) const { return a * b; }
  Mat scale(const Rat& c, const Mat& a) const { return c * a; }
  bool equal(const Mat& a, const Mat& b) const { return a == b; }
  std::optional<Mat> try_invert(const Mat& a) const { return try_inverse(a); }

 private:
  std::size_t n_;
};

static_assert(UnitalAlgebra<MatrixAlgebra>);

/// A rows x cols matrix with entries in an algebra.
template <UnitalAlgebra A>
class AlgMatrix {
 public:
  using Element = typename A::Element;

  AlgMatrix() = default;
  AlgMatrix(const A& alg, std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, alg.zero()) {}

  /// Z (x) 1_A for a scalar matrix Z.
  static AlgMatrix lift(const A& alg, const Mat& z) {
    AlgMatrix out(alg, z.rows(), z.cols());
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j)
        if (sgn(z(i, j)) != 0) out(i, j) = alg.scale(z(i, j), alg.one());
    return out;
  }
  /// I_s (x) a.
  static AlgMatrix diagonal(const A& alg, std::size_t s, const Element& a) {
    AlgMatrix out(alg, s, s);
    for (std::size_t i = 0; i < s; ++i) out(i, i) = a;
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  static AlgMatrix add(const A& alg, const AlgMatrix& x, const AlgMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw ShapeError("AlgMatrix add shape mismatch");
    AlgMatrix out = x;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] = alg.add(x.data_[k], y.data_[k]);
    return out;
  }
  static AlgMatrix mul(const A& alg, const AlgMatrix& x, const AlgMatrix& y) {
    if (x.cols_ != y.rows_) throw ShapeError("AlgMatrix mul shape mismatch");
    AlgMatrix out(alg, x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < y.cols_; ++j) {
        Element acc = alg.zero();
        for (std::size_t k = 0; k < x.cols_; ++k) acc = alg.add(acc, alg.mul(x(i, k), y(k, j)));
        out(i, j) = std::move(acc);
      }
    return out;
  }
  static bool equal(const A& alg, const AlgMatrix& x, const AlgMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
    for (std::size_t k = 0; k < x.data_.size(); ++k)
      if (!alg.equal(x.data_[k], y.data_[k])) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Element> data_;
};

/// Flattens an s x s matrix over Q^{n x n} into K^{sn x sn} with s x s
/// outer blocks of size n.
inline Mat flatten(const AlgMatrix<MatrixAlgebra>& a, std::size_t n) {
  Mat out(a.rows() * n, a.cols() * n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.set_block(i * n, j * n, a(i, j));
  return out;
}

/// Inverse of flatten.
inline AlgMatrix<MatrixAlgebra> unflatten(const Mat& x, std::size_t n) {
  MatrixAlgebra alg(n);
  if (n == 0 || x.rows() % n || x.cols() % n) throw ShapeError("unflatten: size not divisible by n");
  AlgMatrix<MatrixAlgebra> out(alg, x.rows() / n, x.cols() / n);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = x.block(i * n, j * n, n, n);
  return out;
}

}  // namespace ncreal

#endif  // NCREAL_ALGEBRA_HPP
