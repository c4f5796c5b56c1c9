#ifndef NCREAL_POINT_HPP
#define NCREAL_POINT_HPP

#include <ncreal/matrix.hpp>

#include <vector>

namespace ncreal {

/// A d-tuple of n x n matrices; n is the level.
class MatTuple {
 public:
  MatTuple() = default;
  MatTuple(std::initializer_list<Mat> mats) : MatTuple(std::vector<Mat>(mats)) {}
  explicit MatTuple(std::vector<Mat> mats) : mats_(std::move(mats)) {
    for (const auto& m : mats_)
      if (!m.is_square() || m.rows() != mats_.front().rows())
        throw ShapeError("point coordinates must be square matrices of one size");
  }

  std::size_t size() const { return mats_.size(); }
  std::size_t level() const { return mats_.empty() ? 0 : mats_.front().rows(); }
  const Mat& operator[](std::size_t k) const { return mats_[k]; }
  const std::vector<Mat>& mats() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  friend bool operator==(const MatTuple&, const MatTuple&) = default;

 private:
  std::vector<Mat> mats_;
};

/// Coordinatewise f(X_k).
template <class F>
MatTuple map_tuple(const MatTuple& x, F&& f) {
  std::vector<Mat> out;
  out.reserve(x.size());
  for (const auto& m : x) out.push_back(f(m));
  return MatTuple(std::move(out));
}

inline MatTuple direct_sum(const MatTuple& x, const MatTuple& y) {
  if (x.size() != y.size()) throw ShapeError("direct sum of tuples of different arity");
  std::vector<Mat> out;
  for (std::size_t k = 0; k < x.size(); ++k) out.push_back(direct_sum(x[k], y[k]));
  return MatTuple(std::move(out));
}

/// I_m (x) Y, coordinatewise.
inline MatTuple ampliate(std::size_t m, const MatTuple& y) {
  return map_tuple(y, [m](const Mat& a) { return kron_identity(m, a); });
}

/// T X T^{-1} coordinatewise, given T and its inverse.
inline MatTuple conjugate(const MatTuple& x, const Mat& t, const Mat& t_inv) {
  return map_tuple(x, [&](const Mat& a) { return t * a * t_inv; });
}

}  // namespace ncreal

#endif  // NCREAL_POINT_HPP
