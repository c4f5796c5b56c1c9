#ifndef NCREAL_DELTA_HPP
#define NCREAL_DELTA_HPP

#include <ncreal/lla.hpp>
#include <ncreal/realization.hpp>
#include <ncreal/word.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

namespace ncreal {

using Evaluator = std::function<Mat(const MatTuple&)>;

class PreconditionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The block upper-bidiagonal point with X^0..X^k on the diagonal and, in
/// coordinate w[t], Z^{t+1} between X^t and X^{t+1}.
inline MatTuple delta_point(const Word& w, const std::vector<MatTuple>& points, const std::vector<Mat>& dirs) {
  const std::size_t k = w.size();
  if (points.size() != k + 1 || dirs.size() != k) throw ShapeError("need |w|+1 points and |w| directions");
  const std::size_t d = points[0].size();
  if (w.max_letter() > d) throw ShapeError("word letter exceeds the number of variables");
  std::vector<std::size_t> off{0};
  for (const auto& p : points) {
    if (p.size() != d) throw ShapeError("points have different arity");
    off.push_back(off.back() + p.level());
  }
  for (std::size_t t = 0; t < k; ++t)
    if (dirs[t].rows() != points[t].level() || dirs[t].cols() != points[t + 1].level())
      throw ShapeError("direction " + std::to_string(t + 1) + " does not chain the point sizes");
  std::vector<Mat> coords;
  for (std::size_t j = 0; j < d; ++j) {
    Mat big(off.back(), off.back());
    for (std::size_t t = 0; t <= k; ++t) big.set_block(off[t], off[t], points[t][j]);
    for (std::size_t t = 0; t < k; ++t)
      if (w[t] == j) big.set_block(off[t], off[t + 1], dirs[t]);
    coords.push_back(std::move(big));
  }
  return MatTuple(std::move(coords));
}

/// Delta_{w[k-1]} ... Delta_{w[0]} f (X^0, ..., X^k)(Z^1, ..., Z^k): one
/// evaluation of f at the bidiagonal point, top-right block. Values whose
/// size is a fixed multiple of the input size (such as the pencil inverse)
/// are cut at the proportional offsets.
inline Mat delta_block(const Evaluator& f, const Word& w, const std::vector<MatTuple>& points,
                       const std::vector<Mat>& dirs) {
  MatTuple big = delta_point(w, points, dirs);
  Mat value = f(big);
  const std::size_t n = big.level();
  if (n == 0) return value;
  auto scaled = [&](std::size_t x, std::size_t out) {
    if ((x * out) % n) throw ShapeError("value size is not proportional to the point size");
    return x * out / n;
  };
  const std::size_t first = points.front().level(), last = points.back().level();
  const std::size_t rows = scaled(first, value.rows()), cols = scaled(last, value.cols());
  return value.block(0, value.cols() - cols, rows, cols);
}

namespace detail {

inline void require_lla(const FMRealization& r, bool check) {
  if (check && !lla_check(r).pass) throw PreconditionFailure("realization fails the linearized lost-abbey conditions");
}

inline std::size_t delta_level(const FMRealization& r, const Word& w, const MatTuple& x, const std::vector<Mat>& z) {
  if (z.size() != w.size()) throw ShapeError("need one direction per letter");
  if (w.max_letter() > r.d) throw ShapeError("word letter exceeds d");
  const std::size_t m = block_count(r, x);
  for (const auto& zz : z)
    if (zz.rows() != x.level() || zz.cols() != x.level()) throw ShapeError("directions must be sm x sm");
  return m;
}

}  // namespace detail

/// (I_m (x) C) F3(X) (Z^1)A_{j1} ... (Z^{k-1})A_{j(k-1)} (Z^k)B_{jk}, the
/// derivative of R at (X, I_m (x) Y, ..., I_m (x) Y). F3 is the inverse
/// pencil. The empty word gives R(X).
inline Mat delta_closed_form(const FMRealization& r, const Word& w, const MatTuple& x, const std::vector<Mat>& z,
                             bool check_lla = true) {
  detail::require_lla(r, check_lla);
  const std::size_t m = detail::delta_level(r, w, x, z);
  if (w.empty()) return eval_realization(r, x);
  Mat acc = kron_identity(m, r.C) * pencil_inverse(r, x);
  for (std::size_t t = 0; t + 1 < w.size(); ++t) acc = acc * block_apply(r.A[w[t]], z[t], m);
  return acc * block_apply(r.B[w[w.size() - 1]], z.back(), m);
}

/// (Z^1)A_{j1} ... (Z^k)A_{jk} F3(X), the derivative of the inverse pencil
/// at (I_m (x) Y, ..., I_m (x) Y, X).
inline Mat delta_pencil_closed_form(const FMRealization& r, const Word& w, const MatTuple& x,
                                    const std::vector<Mat>& z, bool check_lla = true) {
  detail::require_lla(r, check_lla);
  const std::size_t m = detail::delta_level(r, w, x, z);
  Mat acc = Mat::identity(r.L * m);
  for (std::size_t t = 0; t < w.size(); ++t) acc = acc * block_apply(r.A[w[t]], z[t], m);
  return acc * pencil_inverse(r, x);
}

}  // namespace ncreal

#endif  // NCREAL_DELTA_HPP
