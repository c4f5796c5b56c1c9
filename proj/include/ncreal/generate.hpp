#ifndef NCREAL_GENERATE_HPP
#define NCREAL_GENERATE_HPP

#include <ncreal/expr.hpp>
#include <ncreal/random.hpp>
#include <ncreal/synthesis.hpp>

#include <optional>

namespace ncreal {

struct ExprShape {
  std::size_t d = 2;
  std::size_t max_depth = 3;
  std::size_t max_inversions = 2;
  long const_bound = 3;
};

namespace detail {

inline NcExpr random_leaf(Rng& rng, const ExprShape& sh) {
  if (random_int(rng, 0, 3) > 0) return NcExpr::var(static_cast<std::size_t>(random_int(rng, 1, static_cast<long>(sh.d))));
  Rat c(Int(random_int(rng, -sh.const_bound, sh.const_bound)), Int(random_int(rng, 1, 2)));
  c.canonicalize();
  return NcExpr::constant(c);
}

inline NcExpr random_node(Rng& rng, const ExprShape& sh, std::size_t depth, std::size_t& inversions) {
  if (depth == 0 || random_int(rng, 0, 4) == 0) return random_leaf(rng, sh);
  switch (random_int(rng, 0, 8)) {
    case 0: case 1: case 2: {
      NcExpr a = random_node(rng, sh, depth - 1, inversions);
      return a + random_node(rng, sh, depth - 1, inversions);
    }
    case 3: case 4: case 5: {
      NcExpr a = random_node(rng, sh, depth - 1, inversions);
      return a * random_node(rng, sh, depth - 1, inversions);
    }
    case 6: return -random_node(rng, sh, depth - 1, inversions);
    default:
      if (inversions >= sh.max_inversions) return random_node(rng, sh, depth - 1, inversions);
      ++inversions;
      return NcExpr::inv(random_node(rng, sh, depth - 1, inversions));
  }
}

}  // namespace detail

/// A random expression tree with at most `max_depth` levels of operations.
inline NcExpr random_expr(Rng& rng, const ExprShape& sh) {
  std::size_t inversions = 0;
  return detail::random_node(rng, sh, sh.max_depth, inversions);
}

struct CompiledSample {
  NcExpr expr;
  MatTuple centre;
  FMRealization realization;
};

/// Draws expressions and s x s centres until the centre lies in the domain
/// of the expression, and compiles. Constant expressions, and expressions
/// whose domain misses every tried centre, are discarded.
inline CompiledSample random_compiled(Rng& rng, const ExprShape& sh, std::size_t s, long centre_bound = 2,
                                      std::size_t centre_tries = 4) {
  for (;;) {
    NcExpr e = random_expr(rng, sh);
    if (e.arity() == 0) continue;
    for (std::size_t t = 0; t < centre_tries; ++t) {
      MatTuple y = random_tuple(rng, sh.d, s, centre_bound);
      try {
        FMRealization r = realize_expr(e, y);
        return {e, y, std::move(r)};
      } catch (const CentreSingular&) {
      }
    }
  }
}

}  // namespace ncreal

#endif  // NCREAL_GENERATE_HPP
