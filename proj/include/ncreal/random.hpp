#ifndef NCREAL_RANDOM_HPP
#define NCREAL_RANDOM_HPP

#include <ncreal/point.hpp>

#include <cstdint>
#include <random>

namespace ncreal {

using Rng = std::mt19937_64;

inline long random_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// Integer entries uniform in [-bound, bound].
inline Mat random_mat(Rng& rng, std::size_t r, std::size_t c, long bound) {
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_int(rng, -bound, bound);
  return m;
}

inline MatTuple random_tuple(Rng& rng, std::size_t d, std::size_t n, long bound) {
  std::vector<Mat> mats;
  for (std::size_t k = 0; k < d; ++k) mats.push_back(random_mat(rng, n, n, bound));
  return MatTuple(std::move(mats));
}

/// Random matrix with nonzero determinant (rejection sampling).
inline Mat random_invertible(Rng& rng, std::size_t n, long bound) {
  for (;;) {
    Mat t = random_mat(rng, n, n, bound);
    if (sgn(det(t)) != 0) return t;
  }
}

/// Random strictly block-upper-triangular matrix: m x m blocks of size s.
inline Mat random_strict_block_upper(Rng& rng, std::size_t s, std::size_t m, long bound) {
  Mat out(s * m, s * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) out.set_block(i * s, j * s, random_mat(rng, s, s, bound));
  return out;
}

}  // namespace ncreal

#endif  // NCREAL_RANDOM_HPP
