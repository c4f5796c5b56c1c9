#ifndef NCREAL_SYNTHESIS_HPP
#define NCREAL_SYNTHESIS_HPP

#include <ncreal/expr.hpp>
#include <ncreal/realization.hpp>
#include <ncreal/subspace.hpp>

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ncreal {

/// The expression is not regular at the centre: an inversion fails at Y.
class CentreSingular : public DomainError {
 public:
  explicit CentreSingular(std::vector<int> path)
      : DomainError(path, "centre is outside the expression domain: singular inversion at " +
                              DomainError::path_string(path)) {}
};

// --------------------------------------------------------------------------
// Builders.

inline FMRealization realize_const(const Rat& c, const MatTuple& y) {
  FMRealization r;
  r.d = y.size();
  r.s = y.level();
  r.L = 0;
  r.Y = y.mats();
  r.D = Mat::scalar(r.s, c);
  r.C = Mat(r.s, 0);
  r.A.assign(r.d, BlockLinearMap(r.s, 0, 0));
  r.B.assign(r.d, BlockLinearMap(r.s, 0, r.s));
  return r;
}

/// x_k (1-based): L = s, D = Y_k, C = I, A = 0, B_j(Z) = delta_jk Z.
inline FMRealization realize_var(std::size_t k, const MatTuple& y) {
  if (k == 0 || k > y.size()) throw ShapeError("variable index out of range");
  FMRealization r;
  r.d = y.size();
  r.s = y.level();
  r.L = r.s;
  r.Y = y.mats();
  r.D = y[k - 1];
  r.C = Mat::identity(r.s);
  r.A.assign(r.d, BlockLinearMap(r.s, r.s, r.s));
  r.B.assign(r.d, BlockLinearMap(r.s, r.s, r.s));
  r.B[k - 1] = BlockLinearMap::identity(r.s);
  return r;
}

inline FMRealization realize_scale(const Rat& c, FMRealization r) {
  r.D *= c;
  r.C *= c;
  return r;
}

namespace detail {
using Row = BlockLinearMap::Row;

inline void check_compatible(const FMRealization& a, const FMRealization& b) {
  if (a.d != b.d || a.s != b.s || a.Y != b.Y) throw ShapeError("realizations have different (d, s, Y)");
}
}  // namespace detail

/// R1 + R2: block diagonal state.
inline FMRealization realize_sum(const FMRealization& r1, const FMRealization& r2) {
  using detail::Row;
  detail::check_compatible(r1, r2);
  FMRealization r;
  r.d = r1.d;
  r.s = r1.s;
  r.Y = r1.Y;
  r.L = r1.L + r2.L;
  r.D = r1.D + r2.D;
  r.C = hstack({r1.C, r2.C});
  for (std::size_t k = 0; k < r.d; ++k) {
    r.A.push_back(BlockLinearMap::assemble({Row{r1.A[k], BlockLinearMap(r.s, r1.L, r2.L)},
                                            Row{BlockLinearMap(r.s, r2.L, r1.L), r2.A[k]}}));
    r.B.push_back(BlockLinearMap::assemble({Row{r1.B[k]}, Row{r2.B[k]}}));
  }
  return r;
}

/// R1 R2: C = [C1, D1 C2], A = [[A1, B1 C2], [0, A2]], B = [B1 D2; B2].
inline FMRealization realize_product(const FMRealization& r1, const FMRealization& r2) {
  using detail::Row;
  detail::check_compatible(r1, r2);
  FMRealization r;
  r.d = r1.d;
  r.s = r1.s;
  r.Y = r1.Y;
  r.L = r1.L + r2.L;
  r.D = r1.D * r2.D;
  r.C = hstack({r1.C, r1.D * r2.C});
  for (std::size_t k = 0; k < r.d; ++k) {
    r.A.push_back(BlockLinearMap::assemble(
        {Row{r1.A[k], r1.B[k].right_mul(r2.C)}, Row{BlockLinearMap(r.s, r2.L, r1.L), r2.A[k]}}));
    r.B.push_back(BlockLinearMap::assemble({Row{r1.B[k].right_mul(r2.D)}, Row{r2.B[k]}}));
  }
  return r;
}

/// R1^{-1}; needs D1 = R1(Y) invertible. Returns nullopt otherwise.
inline std::optional<FMRealization> try_realize_inverse(const FMRealization& r1) {
  auto dinv = try_inverse(r1.D);
  if (!dinv) return std::nullopt;
  FMRealization r = r1;
  r.D = *dinv;
  Mat dinv_c = *dinv * r1.C;
  r.C = -dinv_c;
  for (std::size_t k = 0; k < r.d; ++k) {
    r.A[k] = r1.A[k] - r1.B[k].right_mul(dinv_c);
    r.B[k] = r1.B[k].right_mul(*dinv);
  }
  return r;
}

inline FMRealization realize_inverse(const FMRealization& r1) {
  auto r = try_realize_inverse(r1);
  if (!r) throw CentreSingular({});
  return *std::move(r);
}

// --------------------------------------------------------------------------
// Controllability, observability, minimization.

/// How a reachable vector was produced: column `col` of B_k(E_unit), then
/// the listed A_k(E_unit) applied left to right.
struct ReachRecipe {
  std::size_t k = 0, unit = 0, col = 0;
  std::vector<std::pair<std::size_t, std::size_t>> steps;
};

namespace detail {

/// Closure of the B-images under all A_k(E_pq). Returns the independent
/// generators found (as columns) with how each was produced.
inline std::pair<EchelonBasis, std::vector<std::pair<std::vector<Rat>, ReachRecipe>>> reachable_closure(
    const FMRealization& r) {
  EchelonBasis basis(r.L);
  std::vector<std::pair<std::vector<Rat>, ReachRecipe>> gens;
  const std::size_t units = r.s * r.s;
  for (std::size_t k = 0; k < r.d && basis.dim() < r.L; ++k)
    for (std::size_t u = 0; u < units; ++u) {
      const Mat& b = r.B[k].image(u);
      for (std::size_t c = 0; c < b.cols(); ++c) {
        auto v = column_vector(b, c);
        if (basis.insert(v)) gens.push_back({std::move(v), ReachRecipe{k, u, c, {}}});
      }
    }
  for (std::size_t g = 0; g < gens.size() && basis.dim() < r.L; ++g)
    for (std::size_t k = 0; k < r.d; ++k)
      for (std::size_t u = 0; u < units; ++u) {
        Mat w = r.A[k].image(u) * Mat::column(gens[g].first);
        auto v = column_vector(w, 0);
        if (basis.insert(v)) {
          ReachRecipe rec = gens[g].second;
          rec.steps.push_back({k, u});
          gens.push_back({std::move(v), std::move(rec)});
        }
      }
  return {std::move(basis), std::move(gens)};
}

/// Row space spanned by the rows of C A^w(E...) for all words.
inline EchelonBasis observable_closure(const FMRealization& r) {
  EchelonBasis basis(r.L);
  std::vector<std::vector<Rat>> gens;
  for (std::size_t i = 0; i < r.C.rows(); ++i) {
    auto v = row_vector(r.C, i);
    if (basis.insert(v)) gens.push_back(std::move(v));
  }
  const std::size_t units = r.s * r.s;
  for (std::size_t g = 0; g < gens.size() && basis.dim() < r.L; ++g)
    for (std::size_t k = 0; k < r.d; ++k)
      for (std::size_t u = 0; u < units; ++u) {
        Mat row(1, r.L);
        for (std::size_t j = 0; j < r.L; ++j) row(0, j) = gens[g][j];
        auto v = row_vector(row * r.A[k].image(u), 0);
        if (basis.insert(v)) gens.push_back(std::move(v));
      }
  return basis;
}

inline Mat replay(const FMRealization& r, const ReachRecipe& rec) {
  Mat v = r.B[rec.k].image(rec.unit).col(rec.col);
  for (auto [k, u] : rec.steps) v = r.A[k].image(u) * v;
  return v;
}

}  // namespace detail

/// Smallest subspace containing every column of B_k(E_pq) and invariant
/// under every A_k(E_pq).
inline Subspace controllability_span(const FMRealization& r) {
  auto [basis, gens] = detail::reachable_closure(r);
  return Subspace::span_of_rows(basis.as_rows(), r.L);
}

/// Largest subspace of ker C invariant under every A_k(E_pq): the kernel of
/// the observable row space.
inline Subspace unobservable_subspace(const FMRealization& r) {
  Mat rows = detail::observable_closure(r).as_rows();
  if (rows.rows() == 0) return Subspace::full(r.L);
  return Subspace::span_of_columns(kernel_basis(rows));
}

inline bool is_controllable(const FMRealization& r) { return controllability_span(r).dim() == r.L; }
inline bool is_observable(const FMRealization& r) { return detail::observable_closure(r).dim() == r.L; }
inline bool is_minimal(const FMRealization& r) { return is_controllable(r) && is_observable(r); }

namespace detail {

/// New realization with state x' = P x restricted along V: A' = P A V,
/// B' = P B, C' = C V, where P V = I.
inline FMRealization compress(const FMRealization& r, const Mat& p, const Mat& v) {
  FMRealization out = r;
  out.L = v.cols();
  out.C = r.C * v;
  for (std::size_t k = 0; k < r.d; ++k) {
    std::vector<Mat> a, b;
    for (const auto& img : r.A[k].images()) a.push_back(p * img * v);
    for (const auto& img : r.B[k].images()) b.push_back(p * img);
    out.A[k] = BlockLinearMap(r.s, out.L, out.L, std::move(a));
    out.B[k] = BlockLinearMap(r.s, out.L, r.s, std::move(b));
  }
  return out;
}

}  // namespace detail

/// Restricts to the controllable subspace, then factors out the unobservable
/// subspace. Already-minimal realizations are returned unchanged.
inline FMRealization minimize(const FMRealization& r) {
  FMRealization out = r;
  Subspace reach = controllability_span(out);
  if (!reach.is_full()) out = detail::compress(out, reach.coordinates(), reach.basis());
  Subspace obs = Subspace::span_of_rows(detail::observable_closure(out).as_rows(), out.L);
  if (!obs.is_full()) {
    // Rows W of the observable space satisfy W A = A' W and C = C' W.
    Mat w = obs.basis_rows();
    Mat w_right = obs.coordinates().transpose();
    out = detail::compress(out, w, w_right);
  }
  return out;
}

namespace detail {

/// Calls f(P, word, units) for every word of length <= max_len with the
/// product P = A_{i1}(E_{u1}) ... A_{ij}(E_{uj}).
inline void for_each_word_product(
    const FMRealization& r, std::size_t max_len,
    const std::function<void(const Mat&, const std::vector<std::size_t>&, const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> word, units;
  std::function<void(const Mat&)> rec = [&](const Mat& p) {
    f(p, word, units);
    if (word.size() == max_len) return;
    for (std::size_t k = 0; k < r.d; ++k)
      for (std::size_t u = 0; u < r.s * r.s; ++u) {
        word.push_back(k);
        units.push_back(u);
        rec(p * r.A[k].image(u));
        word.pop_back();
        units.pop_back();
      }
  };
  rec(Mat::identity(r.L));
}

}  // namespace detail

/// [ (A^w B_k)(Z...) ] over |w| <= ell, all k and basis tuples: L x (N s).
inline Mat controllability_matrix_trunc(const FMRealization& r, std::size_t ell) {
  std::vector<Mat> blocks;
  detail::for_each_word_product(r, ell, [&](const Mat& p, const auto&, const auto&) {
    for (std::size_t k = 0; k < r.d; ++k)
      for (std::size_t u = 0; u < r.s * r.s; ++u) blocks.push_back(p * r.B[k].image(u));
  });
  if (blocks.empty() || r.L == 0) return Mat(r.L, 0);
  return hstack(blocks);
}

/// [ C A^w(Z...) ] stacked over |w| <= ell and basis tuples: (N s) x L.
inline Mat observability_matrix_trunc(const FMRealization& r, std::size_t ell) {
  std::vector<Mat> blocks;
  detail::for_each_word_product(r, ell, [&](const Mat& p, const auto&, const auto&) { blocks.push_back(r.C * p); });
  if (blocks.empty() || r.L == 0) return Mat(0, r.L);
  return vstack(blocks);
}

/// The unique invertible T with C2 = C1 T^{-1}, B2_k = T B1_k,
/// A2_k = T A1_k T^{-1}, or nothing. R1 must be controllable, which pins T
/// down by its action on reachable vectors.
inline std::optional<Mat> find_similarity(const FMRealization& r1, const FMRealization& r2) {
  if (r1.d != r2.d || r1.s != r2.s || r1.L != r2.L || r1.Y != r2.Y || !(r1.D == r2.D)) return std::nullopt;
  const std::size_t L = r1.L;
  if (L == 0) return Mat(0, 0);
  auto [basis, gens] = detail::reachable_closure(r1);
  if (basis.dim() != L) return std::nullopt;
  std::vector<Mat> c1, c2;
  for (const auto& [v, rec] : gens) {
    c1.push_back(Mat::column(v));
    c2.push_back(detail::replay(r2, rec));
  }
  Mat v1 = hstack(c1), v2 = hstack(c2);
  auto v1_inv = try_inverse(v1);
  if (!v1_inv) return std::nullopt;
  Mat t = v2 * *v1_inv;
  if (sgn(det(t)) == 0) return std::nullopt;
  if (!(r2.C * t == r1.C)) return std::nullopt;
  for (std::size_t k = 0; k < r1.d; ++k)
    for (std::size_t u = 0; u < r1.s * r1.s; ++u) {
      if (!(t * r1.B[k].image(u) == r2.B[k].image(u))) return std::nullopt;
      if (!(t * r1.A[k].image(u) == r2.A[k].image(u) * t)) return std::nullopt;
    }
  return t;
}

/// Conjugates a realization by T: C T^{-1}, T B_k, T A_k T^{-1}.
inline FMRealization conjugate_realization(const FMRealization& r, const Mat& t) {
  Mat t_inv = inverse(t);
  FMRealization out = r;
  out.C = r.C * t_inv;
  for (std::size_t k = 0; k < r.d; ++k) {
    out.A[k] = r.A[k].left_mul(t).right_mul(t_inv);
    out.B[k] = r.B[k].left_mul(t);
  }
  return out;
}

// --------------------------------------------------------------------------
// Expression compiler.

struct SynthesisOptions {
  bool minimize = true;               // minimize the final realization
  bool minimize_intermediate = true;  // minimize after every builder step
};

namespace detail {

inline FMRealization realize_node(const NcExpr& e, const MatTuple& y, const SynthesisOptions& opt,
                                  std::vector<int>& path) {
  auto step = [&](FMRealization r) { return opt.minimize_intermediate ? minimize(r) : r; };
  auto child = [&](const NcExpr& c, int idx) {
    path.push_back(idx);
    FMRealization r = realize_node(c, y, opt, path);
    path.pop_back();
    return r;
  };
  switch (e.kind()) {
    case ExprKind::Const: return realize_const(e.value(), y);
    case ExprKind::Var: return realize_var(e.var_index(), y);
    case ExprKind::Neg: return realize_scale(-1, child(e.lhs(), 0));
    case ExprKind::Sum: {
      FMRealization a = child(e.lhs(), 0);
      return step(realize_sum(a, child(e.rhs(), 1)));
    }
    case ExprKind::Prod: {
      FMRealization a = child(e.lhs(), 0);
      return step(realize_product(a, child(e.rhs(), 1)));
    }
    case ExprKind::Inv: {
      auto r = try_realize_inverse(child(e.lhs(), 0));
      if (!r) throw CentreSingular(path);
      return step(*std::move(r));
    }
  }
  return realize_const(0, y);
}

}  // namespace detail

/// Compiles e into a realization centred at Y (d = |Y|, s = level of Y).
/// Throws CentreSingular naming the Inv node when Y is outside dom_s(e).
inline FMRealization realize_expr(const NcExpr& e, const MatTuple& y, const SynthesisOptions& opt = {}) {
  if (y.size() == 0 || y.level() == 0) throw ShapeError("centre must be a nonempty tuple of nonempty matrices");
  if (e.arity() > y.size())
    throw ShapeError("expression uses x" + std::to_string(e.arity()) + " but the centre has " +
                     std::to_string(y.size()) + " coordinates");
  std::vector<int> path;
  FMRealization r = detail::realize_node(e, y, opt, path);
  return opt.minimize ? minimize(r) : r;
}

}  // namespace ncreal

#endif  // NCREAL_SYNTHESIS_HPP
