#include <ncreal/expr.hpp>
#include <ncreal/generate.hpp>

#include <gtest/gtest.h>

using namespace ncreal;

namespace {

NcExpr x(std::size_t k) { return NcExpr::var(k); }

const Mat E11{{1, 0}, {0, 0}}, E12{{0, 1}, {0, 0}}, E21{{0, 0}, {1, 0}}, E22{{0, 0}, {0, 1}};

}  // namespace

TEST(Parse, Commutator) {
  EXPECT_EQ(parse_expr("x1*x2 - x2*x1"), NcExpr::sum(x(1) * x(2), NcExpr::neg(x(2) * x(1))));
}

TEST(Parse, InverseOfCommutator) {
  NcExpr c = parse_expr("x1*x2 - x2*x1");
  EXPECT_EQ(parse_expr("(x1*x2 - x2*x1)^-1"), NcExpr::inv(c));
  EXPECT_EQ(parse_expr("inv(x1*x2 - x2*x1)"), NcExpr::inv(c));
}

TEST(Parse, RationalConstant) {
  EXPECT_EQ(parse_expr("3/2 + x1"), NcExpr::constant(Rat(3, 2)) + x(1));
  EXPECT_EQ(parse_expr("6/4"), NcExpr::constant(Rat(3, 2)));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse_expr("x1 + x2*x3"), x(1) + x(2) * x(3));
  EXPECT_EQ(parse_expr("x1*x2^-1"), x(1) * NcExpr::inv(x(2)));
  EXPECT_EQ(parse_expr("x1 - x2 - x3"), (x(1) - x(2)) - x(3));
}

TEST(Parse, Rejects) {
  for (const char* bad : {"", "x0", "x1 +", "(x1", "x1)", "1/0", "x1 ^ 2", "y1", "x1 x2", "2.5"})
    EXPECT_THROW(parse_expr(bad), ParseError) << bad;
}

TEST(Parse, PrintRoundTrip) {
  Rng rng(31);
  ExprShape sh;
  sh.d = 3;
  sh.max_depth = 5;
  sh.max_inversions = 3;
  for (int t = 0; t < 300; ++t) {
    NcExpr e = random_expr(rng, sh);
    std::string text = to_string(e);
    EXPECT_EQ(parse_expr(text), e) << text;
  }
}

TEST(Eval, CommutatorInverseIsDiag) {
  // [E12, E21] = E11 - E22 = diag(1, -1), its own inverse.
  NcExpr e = parse_expr("(x1*x2 - x2*x1)^-1");
  EXPECT_EQ(eval_expr(e, MatTuple{E12, E21}), (Mat{{1, 0}, {0, -1}}));
}

TEST(Eval, ScalarPointsOutsideDomain) {
  NcExpr e = parse_expr("(x1*x2 - x2*x1)^-1");
  Rng rng(32);
  for (int t = 0; t < 50; ++t) {
    MatTuple p = random_tuple(rng, 2, 1, 9);
    try {
      eval_expr(e, p);
      ADD_FAILURE() << "scalar point evaluated";
    } catch (const DomainError& err) {
      EXPECT_EQ(err.path(), std::vector<int>{});
    }
  }
}

TEST(Eval, DomainErrorPath) {
  NcExpr e = x(1) + NcExpr::inv(x(2));
  try {
    eval_expr(e, MatTuple{E11, E11});
    ADD_FAILURE();
  } catch (const DomainError& err) {
    EXPECT_EQ(err.path(), std::vector<int>{1});
  }
}

TEST(Eval, VariableAndConstant) {
  Rng rng(33);
  MatTuple p = random_tuple(rng, 2, 3, 5);
  EXPECT_EQ(eval_expr(x(1), p), p[0]);
  EXPECT_EQ(eval_expr(parse_expr("7/3"), p), Mat::scalar(3, Rat(7, 3)));
  EXPECT_THROW(eval_expr(x(3), p), ShapeError);
}

TEST(Eval, HandExpansion) {
  Mat a{{1, 2}, {0, 1}}, b{{3, 0}, {1, 1}};
  Mat a_inv{{1, -2}, {0, 1}};
  EXPECT_EQ(eval_expr(parse_expr("x1*x2 + 2*x1^-1 - 1"), MatTuple{a, b}),
            a * b + Rat(2) * a_inv - Mat::identity(2));
}

TEST(EvalAlgebra, AgreesWithMatrixEvaluation) {
  Rng rng(34);
  ExprShape sh;
  for (int t = 0; t < 150; ++t) {
    NcExpr e = random_expr(rng, sh);
    std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 3));
    MatTuple p = random_tuple(rng, 2, n, 3);
    MatrixAlgebra alg(n);
    auto direct = try_eval_expr(e, p);
    std::optional<Mat> via;
    try {
      via = eval_expr_algebra(e, p.mats(), alg);
    } catch (const DomainError&) {
    }
    ASSERT_EQ(direct.has_value(), via.has_value()) << to_string(e);
    if (direct) {
      EXPECT_EQ(*direct, *via);
    }
  }
}

TEST(EvalAlgebra, ConstantAndSingular) {
  MatrixAlgebra alg(2);
  EXPECT_EQ(eval_expr_algebra(parse_expr("5"), std::vector<Mat>{}, alg), Mat::scalar(2, 5));
  EXPECT_THROW(eval_expr_algebra(parse_expr("x1^-1"), std::vector<Mat>{E12}, alg), DomainError);
}

TEST(Equivalence, CancellingInverse) {
  // x2 (x1 x2)^{-1} x1 = 1 wherever x1 x2 is invertible.
  Rng rng(35);
  auto v = equivalence_check(parse_expr("x2*(x1*x2)^-1*x1 + x1*x2"), parse_expr("1 + x1*x2"), 40, {1, 2, 3}, rng);
  EXPECT_TRUE(v.equivalent_up_to_sampling);
  EXPECT_GT(v.compared, 60u);
}

TEST(Equivalence, DistinctVariables) {
  Rng rng(36);
  auto v = equivalence_check(x(1), x(2), 20, {1}, rng);
  ASSERT_FALSE(v.equivalent_up_to_sampling);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->level(), 1u);
  EXPECT_NE(*v.value1, *v.value2);
}

TEST(Equivalence, CommutativeOnlyAtLevelOne) {
  Rng rng(37);
  auto one = equivalence_check(x(1) * x(2), x(2) * x(1), 30, {1}, rng);
  EXPECT_TRUE(one.equivalent_up_to_sampling);
  auto two = equivalence_check(x(1) * x(2), x(2) * x(1), 30, {2}, rng);
  ASSERT_FALSE(two.equivalent_up_to_sampling);
  const MatTuple& p = *two.counterexample;
  EXPECT_EQ(p.level(), 2u);
  EXPECT_NE(p[0] * p[1], p[1] * p[0]);
}

TEST(NcFunction, RespectsDirectSumsSimilarityAmpliation) {
  Rng rng(38);
  ExprShape sh;
  int checked = 0;
  for (int t = 0; t < 120; ++t) {
    NcExpr e = random_expr(rng, sh);
    MatTuple p = random_tuple(rng, 2, 2, 3), q = random_tuple(rng, 2, 1, 3);
    auto fp = try_eval_expr(e, p), fq = try_eval_expr(e, q);
    if (!fp || !fq) continue;
    ++checked;
    EXPECT_EQ(eval_expr(e, direct_sum(p, q)), direct_sum(*fp, *fq));
    EXPECT_EQ(eval_expr(e, ampliate(2, p)), kron_identity(2, *fp));
    Mat tm = random_invertible(rng, 2, 3);
    EXPECT_EQ(eval_expr(e, conjugate(p, tm, inverse(tm))), tm * *fp * inverse(tm));
  }
  EXPECT_GT(checked, 40);
}
