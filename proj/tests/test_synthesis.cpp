#include <ncreal/generate.hpp>
#include <ncreal/lla.hpp>
#include <ncreal/synthesis.hpp>

#include <gtest/gtest.h>

using namespace ncreal;

namespace {

const Mat E12{{0, 1}, {0, 0}}, E21{{0, 0}, {1, 0}};

std::vector<CompiledSample> samples(std::uint64_t seed, int count) {
  Rng rng(seed);
  ExprShape sh;
  std::vector<CompiledSample> out;
  for (int i = 0; i < count; ++i) out.push_back(random_compiled(rng, sh, 2));
  return out;
}

// Appends one state fed from the old state that C never reads.
FMRealization pad_unobservable(const FMRealization& r, Rng& rng) {
  FMRealization out = r;
  const std::size_t L = r.L + 1;
  out.L = L;
  out.C = hstack({r.C, Mat(r.s, 1)});
  for (std::size_t k = 0; k < r.d; ++k) {
    std::vector<Mat> a, b;
    for (std::size_t u = 0; u < r.s * r.s; ++u) {
      Mat ak(L, L);
      ak.set_block(0, 0, r.A[k].image(u));
      ak.set_block(r.L, 0, random_mat(rng, 1, r.L, 2));
      ak(r.L, r.L) = random_int(rng, -2, 2);
      a.push_back(ak);
      b.push_back(vstack({r.B[k].image(u), random_mat(rng, 1, r.s, 2)}));
    }
    out.A[k] = BlockLinearMap(r.s, L, L, a);
    out.B[k] = BlockLinearMap(r.s, L, r.s, b);
  }
  return out;
}

// Appends one state that nothing reaches.
FMRealization pad_unreachable(const FMRealization& r, Rng& rng) {
  FMRealization out = r;
  const std::size_t L = r.L + 1;
  out.L = L;
  out.C = hstack({r.C, random_mat(rng, r.s, 1, 2)});
  for (std::size_t k = 0; k < r.d; ++k) {
    std::vector<Mat> a, b;
    for (std::size_t u = 0; u < r.s * r.s; ++u) {
      Mat ak(L, L);
      ak.set_block(0, 0, r.A[k].image(u));
      ak.set_block(0, r.L, random_mat(rng, r.L, 1, 2));
      a.push_back(ak);
      b.push_back(vstack({r.B[k].image(u), Mat(1, r.s)}));
    }
    out.A[k] = BlockLinearMap(r.s, L, L, a);
    out.B[k] = BlockLinearMap(r.s, L, r.s, b);
  }
  return out;
}

}  // namespace

TEST(Builders, Constant) {
  Rng rng(51);
  MatTuple y = random_tuple(rng, 2, 2, 3);
  FMRealization r = realize_const(Rat(-2, 3), y);
  EXPECT_EQ(r.L, 0u);
  EXPECT_EQ(r.D, Mat::scalar(2, Rat(-2, 3)));
  EXPECT_EQ(eval_realization(r, random_tuple(rng, 2, 6, 3)), Mat::scalar(6, Rat(-2, 3)));
  EXPECT_EQ(minimize(r), r);
  EXPECT_TRUE(lla_check(r).pass);
}

TEST(Builders, Variable) {
  Rng rng(52);
  MatTuple y = random_tuple(rng, 2, 2, 3);
  FMRealization r = realize_var(1, y);
  EXPECT_EQ(r.L, 2u);
  MatTuple p = random_tuple(rng, 2, 4, 3);
  EXPECT_EQ(eval_realization(r, p), p[0]);
  EXPECT_TRUE(controllability_span(r).is_full());
  EXPECT_TRUE(unobservable_subspace(r).is_trivial());
  EXPECT_EQ(find_similarity(minimize(r), r), Mat::identity(2));
  EXPECT_TRUE(lla_check(r).pass);
}

TEST(Builders, SumProductInverseEvaluate) {
  Rng rng(54);
  MatTuple y = samples(53, 1)[0].centre;
  ExprShape sh;
  int compared = 0;
  for (int t = 0; t < 20; ++t) {
    NcExpr e1 = random_expr(rng, sh), e2 = random_expr(rng, sh);
    if (!in_expr_domain(e1, y) || !in_expr_domain(e2, y)) continue;
    FMRealization r1 = realize_expr(e1, y), r2 = realize_expr(e2, y);
    FMRealization sum = realize_sum(r1, r2), prod = realize_product(r1, r2);
    EXPECT_EQ(eval_realization(prod, y), r1.D * r2.D);
    for (int u = 0; u < 4; ++u) {
      MatTuple p = random_tuple(rng, 2, 2 * (1 + u % 2), 2);
      auto f1 = try_eval_realization(r1, p), f2 = try_eval_realization(r2, p);
      if (!f1 || !f2) continue;
      ++compared;
      EXPECT_EQ(eval_realization(sum, p), *f1 + *f2);
      EXPECT_EQ(eval_realization(prod, p), *f1 * *f2);
      if (auto inv = try_realize_inverse(r1)) {
        if (auto g = try_eval_realization(*inv, p)) {
          EXPECT_EQ(*g * *f1, Mat::identity(p.level()));
        }
      }
    }
  }
  EXPECT_GT(compared, 20);
}

TEST(Builders, NeutralElementsAndZero) {
  for (const auto& c : samples(55, 15)) {
    FMRealization m = minimize(c.realization);
    auto t0 = find_similarity(m, minimize(realize_sum(c.realization, realize_const(0, c.centre))));
    EXPECT_TRUE(t0) << to_string(c.expr);
    auto t1 = find_similarity(m, minimize(realize_product(c.realization, realize_const(1, c.centre))));
    EXPECT_TRUE(t1) << to_string(c.expr);
    FMRealization zero = minimize(realize_sum(c.realization, realize_scale(-1, c.realization)));
    EXPECT_EQ(zero.L, 0u);
    EXPECT_TRUE(zero.D.is_zero());
  }
}

TEST(Builders, InverseOfConstant) {
  MatTuple y{E12, E21};
  auto r = realize_inverse(realize_const(4, y));
  EXPECT_EQ(r.D, Mat::scalar(2, Rat(1, 4)));
  EXPECT_EQ(eval_realization(r, MatTuple{E21, E12}), Mat::scalar(2, Rat(1, 4)));
  EXPECT_FALSE(try_realize_inverse(realize_const(0, y)));
}

TEST(Builders, DoubleInverse) {
  int tried = 0;
  for (const auto& c : samples(56, 20)) {
    auto i1 = try_realize_inverse(c.realization);
    if (!i1) continue;
    auto i2 = try_realize_inverse(minimize(*i1));
    ASSERT_TRUE(i2);
    ++tried;
    EXPECT_TRUE(find_similarity(minimize(c.realization), minimize(*i2))) << to_string(c.expr);
  }
  EXPECT_GT(tried, 5);
}

TEST(Compile, VariableHasStateS) {
  Rng rng(57);
  for (std::size_t s = 1; s <= 3; ++s) EXPECT_EQ(realize_expr(parse_expr("x2"), random_tuple(rng, 2, s, 3)).L, s);
}

TEST(Compile, CommutatorInverseMinimalState) {
  FMRealization r = realize_expr(parse_expr("(x1*x2 - x2*x1)^-1"), MatTuple{E12, E21});
  EXPECT_EQ(r.L, 6u);
  EXPECT_TRUE(is_minimal(r));
}

TEST(Compile, CentreOutsideDomain) {
  Mat e11{{1, 0}, {0, 0}};
  try {
    realize_expr(parse_expr("x1 + (x2*x1)^-1"), MatTuple{e11, e11});
    ADD_FAILURE();
  } catch (const CentreSingular& err) {
    EXPECT_EQ(err.path(), std::vector<int>{1});
  }
  EXPECT_THROW(realize_expr(parse_expr("(x1*x2 - x2*x1)^-1"), MatTuple{Mat{{1}}, Mat{{2}}}), CentreSingular);
}

TEST(Compile, DomainInclusion) {
  Rng rng(58);
  for (const auto& c : samples(59, 15)) {
    for (int t = 0; t < 10; ++t) {
      MatTuple p = random_tuple(rng, 2, 2 * (1 + t % 3), 2);
      if (in_expr_domain(c.expr, p)) {
        EXPECT_TRUE(in_domain(c.realization, p)) << to_string(c.expr);
      }
    }
  }
}

TEST(Subspaces, EmptyAndZeroOutput) {
  Rng rng(60);
  FMRealization k = realize_const(1, random_tuple(rng, 2, 2, 3));
  EXPECT_EQ(controllability_span(k).dim(), 0u);
  EXPECT_TRUE(controllability_span(k).is_full());
  FMRealization r = realize_var(1, random_tuple(rng, 2, 2, 3));
  r.C = Mat(2, 2);
  EXPECT_TRUE(unobservable_subspace(r).is_full());
}

TEST(Subspaces, PaddingIsDetected) {
  Rng rng(61);
  for (const auto& c : samples(62, 10)) {
    const FMRealization& r = c.realization;
    FMRealization hidden = pad_unobservable(r, rng);
    EXPECT_EQ(unobservable_subspace(hidden).dim(), 1u);
    Mat pad(hidden.L, 1);
    pad(r.L, 0) = 1;
    EXPECT_TRUE(unobservable_subspace(hidden).contains(pad));
    FMRealization dead = pad_unreachable(r, rng);
    EXPECT_EQ(controllability_span(dead).dim(), r.L);
    EXPECT_FALSE(controllability_span(dead).contains(pad));
    for (const auto& padded : {hidden, dead}) {
      EXPECT_FALSE(is_minimal(padded));
      FMRealization m = minimize(padded);
      EXPECT_EQ(m.L, r.L);
      EXPECT_TRUE(find_similarity(r, m));
    }
  }
}

TEST(Subspaces, SumWithZeroKeepsSpan) {
  for (const auto& c : samples(63, 8)) {
    FMRealization s = realize_sum(c.realization, realize_const(0, c.centre));
    EXPECT_EQ(controllability_span(s).dim(), controllability_span(c.realization).dim());
  }
}

TEST(Truncated, RanksMatchSubspaces) {
  Rng rng(64);
  FMRealization v = realize_var(1, random_tuple(rng, 2, 2, 3));
  EXPECT_EQ(rank(controllability_matrix_trunc(v, 0)), 2u);
  FMRealization k = realize_const(3, v.centre());
  EXPECT_EQ(controllability_matrix_trunc(k, 2).rows(), 0u);
  EXPECT_EQ(observability_matrix_trunc(k, 2).cols(), 0u);
  for (const auto& c : samples(65, 6)) {
    FMRealization hidden = pad_unobservable(c.realization, rng);
    std::size_t ell = hidden.L - 1;
    if (ell > 3) continue;  // enumeration grows like (d s^2)^ell
    EXPECT_EQ(rank(controllability_matrix_trunc(hidden, ell)), controllability_span(hidden).dim());
    EXPECT_EQ(rank(observability_matrix_trunc(hidden, ell)), hidden.L - unobservable_subspace(hidden).dim());
  }
}

TEST(Similarity, RecoversConjugator) {
  Rng rng(66);
  for (const auto& c : samples(67, 15)) {
    const FMRealization& r = c.realization;
    if (r.L == 0) continue;
    Mat t0 = random_invertible(rng, r.L, 3);
    auto t = find_similarity(r, conjugate_realization(r, t0));
    ASSERT_TRUE(t);
    EXPECT_EQ(*t, t0);
    EXPECT_EQ(find_similarity(r, r), Mat::identity(r.L));
  }
}

TEST(Similarity, RejectsDifferentFunctions) {
  MatTuple y{E12, E21};
  auto a = realize_expr(parse_expr("x1*x2"), y), b = realize_expr(parse_expr("x2*x1 + x1*x2 - x2*x1"), y);
  EXPECT_TRUE(find_similarity(a, b));
  auto c = realize_expr(parse_expr("x1*x2 + x2"), y);
  EXPECT_FALSE(find_similarity(a, c));
}

TEST(Similarity, SynthesisOrders) {
  for (const auto& c : samples(68, 15)) {
    SynthesisOptions late;
    late.minimize_intermediate = false;
    FMRealization other = realize_expr(c.expr, c.centre, late);
    EXPECT_TRUE(find_similarity(c.realization, other)) << to_string(c.expr);
  }
}
