#ifndef NCREAL_TENSOR_HPP
#define NCREAL_TENSOR_HPP

#include <ncreal/matrix.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace ncreal {

/// An element of the tensor power (K^{s x s})^{(x) order}, kept as a sparse
/// combination of pure tensors of matrix units E_{k1} (x) ... (x) E_{kl}
/// (unit index k = p*s + q). The map keeps keys sorted, so equal tensors
/// compare equal.
class TensorEntry {
 public:
  using Key = std::vector<std::uint32_t>;

  TensorEntry() = default;
  TensorEntry(std::size_t s, std::size_t order) : s_(s), order_(order) {}

  static TensorEntry scalar(std::size_t s, const Rat& c) {
    TensorEntry t(s, 0);
    if (sgn(c) != 0) t.terms_[{}] = c;
    return t;
  }
  static TensorEntry from_matrix(const Mat& z) {
    if (!z.is_square()) throw ShapeError("tensor factor must be square");
    const std::size_t s = z.rows();
    TensorEntry t(s, 1);
    for (std::size_t p = 0; p < s; ++p)
      for (std::size_t q = 0; q < s; ++q)
        if (sgn(z(p, q)) != 0) t.terms_[{static_cast<std::uint32_t>(p * s + q)}] = z(p, q);
    return t;
  }

  std::size_t s() const { return s_; }
  std::size_t order() const { return order_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Rat>& terms() const { return terms_; }

  void add_term(const Key& k, const Rat& w) {
    if (k.size() != order_) throw ShapeError("tensor term of wrong order");
    auto [it, inserted] = terms_.try_emplace(k, w);
    if (!inserted) {
      it->second += w;
      if (sgn(it->second) == 0) terms_.erase(it);
    } else if (sgn(w) == 0) {
      terms_.erase(it);
    }
  }

  TensorEntry& operator+=(const TensorEntry& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      s_ = o.s_;
      order_ = o.order_;
    }
    if (o.order_ != order_ || o.s_ != s_) throw ShapeError("adding tensors of different order");
    for (const auto& [k, w] : o.terms_) add_term(k, w);
    return *this;
  }

  /// a (x) b: concatenation of keys, product of weights.
  friend TensorEntry tensor(const TensorEntry& a, const TensorEntry& b) {
    TensorEntry out(a.s_ ? a.s_ : b.s_, a.order_ + b.order_);
    for (const auto& [ka, wa] : a.terms_)
      for (const auto& [kb, wb] : b.terms_) {
        Key k = ka;
        k.insert(k.end(), kb.begin(), kb.end());
        out.add_term(k, wa * wb);
      }
    return out;
  }

  friend bool operator==(const TensorEntry& a, const TensorEntry& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.order_ == b.order_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t s_ = 0;
  std::size_t order_ = 0;
  std::map<Key, Rat> terms_;
};

/// A rows x cols matrix whose entries are tensors over K^{s x s}.
class TensorMatrix {
 public:
  TensorMatrix() = default;
  TensorMatrix(std::size_t rows, std::size_t cols, std::size_t s, std::size_t order)
      : rows_(rows), cols_(cols), entries_(rows * cols, TensorEntry(s, order)) {}

  /// Splits an (s m1) x (s m2) matrix into its s x s blocks (order-1 entries).
  static TensorMatrix from_blocked(const Mat& x, std::size_t s) {
    if (s == 0 || x.rows() % s || x.cols() % s) throw ShapeError("matrix is not blocked by s");
    TensorMatrix t(x.rows() / s, x.cols() / s, s, 1);
    for (std::size_t i = 0; i < t.rows_; ++i)
      for (std::size_t j = 0; j < t.cols_; ++j) t(i, j) = TensorEntry::from_matrix(x.block(i * s, j * s, s, s));
    return t;
  }

  /// Identity of the faux product: scalar 1 on the diagonal.
  static TensorMatrix identity(std::size_t m, std::size_t s) {
    TensorMatrix t(m, m, s, 0);
    for (std::size_t i = 0; i < m; ++i) t(i, i) = TensorEntry::scalar(s, 1);
    return t;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  TensorEntry& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const TensorEntry& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const TensorMatrix& a, const TensorMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<TensorEntry> entries_;
};

/// Faux product: block (i,j) = sum_k P_ik (x) Q_kj.
inline TensorMatrix faux_product(const TensorMatrix& p, const TensorMatrix& q) {
  if (p.cols() != q.rows()) throw ShapeError("faux product: block shapes do not chain");
  std::size_t s = 0, order = 0;
  if (p.rows() && p.cols()) {
    s = p(0, 0).s();
    order = p(0, 0).order();
  }
  if (q.rows() && q.cols()) {
    s = s ? s : q(0, 0).s();
    order += q(0, 0).order();
  }
  TensorMatrix out(p.rows(), q.cols(), s, order);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      for (std::size_t k = 0; k < p.cols(); ++k) {
        if (p(i, k).is_zero() || q(k, j).is_zero()) continue;
        out(i, j) += tensor(p(i, k), q(k, j));
      }
  return out;
}

/// Convenience overload on blocked rational matrices.
inline TensorMatrix faux_product(const Mat& p, const Mat& q, std::size_t s) {
  return faux_product(TensorMatrix::from_blocked(p, s), TensorMatrix::from_blocked(q, s));
}

}  // namespace ncreal

#endif  // NCREAL_TENSOR_HPP
