#ifndef NCREAL_REALIZATION_HPP
#define NCREAL_REALIZATION_HPP

#include <ncreal/algebra.hpp>
#include <ncreal/block_map.hpp>
#include <ncreal/point.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ncreal {

class SingularPencil : public OutOfDomain {
 public:
  SingularPencil() : OutOfDomain("point outside the realization domain: pencil is singular") {}
};

/// The value at I_s (x) X did not have the I_s (x) f pattern; only possible
/// when the realization violates the linearized lost-abbey conditions.
class ScalarStructureViolation : public std::runtime_error {
 public:
  ScalarStructureViolation() : std::runtime_error("value at I_s (x) X is not of the form I_s (x) F") {}
};

/// Elimination over the algebra found no invertible pivot. This does not
/// prove the pencil is non-invertible.
class AlgebraSingular : public OutOfDomain {
 public:
  AlgebraSingular() : OutOfDomain("no invertible pivot sequence found for the pencil over the algebra") {}
};

/// Fornasini-Marchesini realization centred at Y:
///   R(X) = I_m(x)D + (I_m(x)C) Lambda(X)^{-1} sum_k (X_k - I_m(x)Y_k) B_k,
///   Lambda(X) = I_{Lm} - sum_k (X_k - I_m(x)Y_k) A_k,
/// on d-tuples of sm x sm matrices. L = 0 is allowed (constant function).
struct FMRealization {
  std::size_t d = 0;
  std::size_t s = 0;
  std::size_t L = 0;
  std::vector<Mat> Y;              // d matrices, s x s
  Mat D;                           // s x s
  Mat C;                           // s x L
  std::vector<BlockLinearMap> A;   // s x s -> L x L
  std::vector<BlockLinearMap> B;   // s x s -> L x s

  MatTuple centre() const { return MatTuple(Y); }

  /// Throws ShapeError on inconsistent shapes.
  void validate() const {
    auto fail = [](const std::string& m) { throw ShapeError("invalid realization: " + m); };
    if (s == 0) fail("s must be positive");
    if (Y.size() != d || A.size() != d || B.size() != d) fail("need d centre matrices and d maps A_k, B_k");
    for (const auto& y : Y)
      if (y.rows() != s || y.cols() != s) fail("centre matrices must be s x s");
    if (D.rows() != s || D.cols() != s) fail("D must be s x s");
    if (C.rows() != s || C.cols() != L) fail("C must be s x L");
    for (const auto& a : A)
      if (a.s_in() != s || a.r_out() != L || a.c_out() != L) fail("A_k must map s x s into L x L");
    for (const auto& b : B)
      if (b.s_in() != s || b.r_out() != L || b.c_out() != s) fail("B_k must map s x s into L x s");
  }

  friend bool operator==(const FMRealization&, const FMRealization&) = default;
};

namespace detail {

inline std::size_t block_count(const FMRealization& r, const MatTuple& x) {
  if (x.size() != r.d) throw ShapeError("point has " + std::to_string(x.size()) + " coordinates, realization has d = " +
                                        std::to_string(r.d));
  if (x.level() % r.s) throw ShapeError("level " + std::to_string(x.level()) + " is not a multiple of s = " +
                                        std::to_string(r.s));
  return x.level() / r.s;
}

/// sum_k (X_k - I_m (x) Y_k) T_k
inline Mat sum_applied(const std::vector<BlockLinearMap>& maps, const FMRealization& r, const MatTuple& x,
                       std::size_t m) {
  Mat out(maps.empty() ? 0 : maps[0].r_out() * m, maps.empty() ? 0 : maps[0].c_out() * m);
  for (std::size_t k = 0; k < r.d; ++k) out += block_apply(maps[k], x[k] - kron_identity(m, r.Y[k]), m);
  return out;
}

}  // namespace detail

/// Lambda(X), an Lm x Lm matrix.
inline Mat pencil(const FMRealization& r, const MatTuple& x) {
  const std::size_t m = detail::block_count(r, x);
  Mat lam = Mat::identity(r.L * m);
  if (r.L) lam -= detail::sum_applied(r.A, r, x, m);
  return lam;
}

/// sum_k (X_k - I_m (x) Y_k) B_k, an Lm x sm matrix.
inline Mat input_term(const FMRealization& r, const MatTuple& x) {
  const std::size_t m = detail::block_count(r, x);
  if (r.L == 0) return Mat(0, r.s * m);
  return detail::sum_applied(r.B, r, x, m);
}

inline bool in_domain(const FMRealization& r, const MatTuple& x) { return sgn(det(pencil(r, x))) != 0; }

/// R(X) at level sm. Throws SingularPencil outside the domain.
inline Mat eval_realization(const FMRealization& r, const MatTuple& x) {
  const std::size_t m = detail::block_count(r, x);
  Mat value = kron_identity(m, r.D);
  if (r.L == 0) return value;
  auto w = solve(pencil(r, x), input_term(r, x));
  if (!w) throw SingularPencil();
  value += kron_identity(m, r.C) * *w;
  return value;
}

inline std::optional<Mat> try_eval_realization(const FMRealization& r, const MatTuple& x) {
  try {
    return eval_realization(r, x);
  } catch (const SingularPencil&) {
    return std::nullopt;
  }
}

/// Lambda(X)^{-1}; the F3 factor of R = D + C F3 F4.
inline Mat pencil_inverse(const FMRealization& r, const MatTuple& x) {
  auto inv = try_inverse(pencil(r, x));
  if (!inv) throw SingularPencil();
  return *std::move(inv);
}

/// Evaluation at any level n: computes M = R(I_s (x) X), checks that
/// M = I_s (x) F and returns F.
inline Mat eval_at_level_n(const FMRealization& r, const MatTuple& x) {
  const std::size_t n = x.level();
  MatTuple big = ampliate(r.s, x);
  Mat m = eval_realization(r, big);
  Mat top = m.block(0, 0, n, n);
  if (!(m == kron_identity(r.s, top))) throw ScalarStructureViolation();
  return top;
}

/// Returns f when M = I_s (x) f over the algebra, nothing otherwise.
template <UnitalAlgebra A>
std::optional<typename A::Element> scalar_extract(const AlgMatrix<A>& m, const A& alg) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (m.rows() == 0) return std::nullopt;
  const auto zero = alg.zero();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i == j) {
        if (!alg.equal(m(i, i), m(0, 0))) return std::nullopt;
      } else if (!alg.equal(m(i, j), zero)) {
        return std::nullopt;
      }
    }
  return m(0, 0);
}

namespace detail {

/// (A) T^A for an s x s algebra matrix: sum_pq T(E_pq) (x) a_pq.
template <UnitalAlgebra A>
AlgMatrix<A> apply_over_algebra(const BlockLinearMap& t, const AlgMatrix<A>& a, const A& alg) {
  AlgMatrix<A> out(alg, t.r_out(), t.c_out());
  for (std::size_t p = 0; p < t.s_in(); ++p)
    for (std::size_t q = 0; q < t.s_in(); ++q) {
      const Mat& img = t.image(p, q);
      for (std::size_t i = 0; i < img.rows(); ++i)
        for (std::size_t j = 0; j < img.cols(); ++j)
          if (sgn(img(i, j)) != 0) out(i, j) = alg.add(out(i, j), alg.scale(img(i, j), a(p, q)));
    }
  return out;
}

}  // namespace detail

/// R^A(a) for a d-tuple of s x s matrices over A. The pencil is inverted by
/// Gaussian elimination over A taking the first invertible pivot in each
/// column; failure raises AlgebraSingular.
template <UnitalAlgebra A>
AlgMatrix<A> eval_algebra(const FMRealization& r, const std::vector<AlgMatrix<A>>& a, const A& alg) {
  if (a.size() != r.d) throw ShapeError("algebra point has wrong arity");
  std::vector<AlgMatrix<A>> diff;
  for (std::size_t k = 0; k < r.d; ++k) {
    if (a[k].rows() != r.s || a[k].cols() != r.s) throw ShapeError("algebra point coordinates must be s x s");
    AlgMatrix<A> dk = a[k];
    AlgMatrix<A> yk = AlgMatrix<A>::lift(alg, r.Y[k]);
    for (std::size_t i = 0; i < r.s; ++i)
      for (std::size_t j = 0; j < r.s; ++j) dk(i, j) = alg.add(dk(i, j), alg.neg(yk(i, j)));
    diff.push_back(std::move(dk));
  }
  const std::size_t L = r.L;
  AlgMatrix<A> lam = AlgMatrix<A>::lift(alg, Mat::identity(L));
  AlgMatrix<A> rhs(alg, L, r.s);
  for (std::size_t k = 0; k < r.d; ++k) {
    auto ak = detail::apply_over_algebra(r.A[k], diff[k], alg);
    auto bk = detail::apply_over_algebra(r.B[k], diff[k], alg);
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) lam(i, j) = alg.add(lam(i, j), alg.neg(ak(i, j)));
      for (std::size_t j = 0; j < r.s; ++j) rhs(i, j) = alg.add(rhs(i, j), bk(i, j));
    }
  }

  // Gauss-Jordan on [lam | rhs] with left multiplications only.
  auto swap_rows = [&](AlgMatrix<A>& m, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
  };
  for (std::size_t col = 0; col < L; ++col) {
    std::optional<typename A::Element> pinv;
    std::size_t p = col;
    for (; p < L; ++p) {
      pinv = alg.try_invert(lam(p, col));
      if (pinv) break;
    }
    if (!pinv) throw AlgebraSingular();
    if (p != col) {
      swap_rows(lam, p, col);
      swap_rows(rhs, p, col);
    }
    for (std::size_t c = 0; c < L; ++c) lam(col, c) = alg.mul(*pinv, lam(col, c));
    for (std::size_t c = 0; c < r.s; ++c) rhs(col, c) = alg.mul(*pinv, rhs(col, c));
    for (std::size_t i = 0; i < L; ++i) {
      if (i == col) continue;
      const auto f = lam(i, col);
      if (alg.equal(f, alg.zero())) continue;
      for (std::size_t c = 0; c < L; ++c) lam(i, c) = alg.add(lam(i, c), alg.neg(alg.mul(f, lam(col, c))));
      for (std::size_t c = 0; c < r.s; ++c) rhs(i, c) = alg.add(rhs(i, c), alg.neg(alg.mul(f, rhs(col, c))));
    }
  }

  AlgMatrix<A> out = AlgMatrix<A>::lift(alg, r.D);
  AlgMatrix<A> c = AlgMatrix<A>::lift(alg, r.C);
  return AlgMatrix<A>::add(alg, out, AlgMatrix<A>::mul(alg, c, rhs));
}

}  // namespace ncreal

#endif  // NCREAL_REALIZATION_HPP
