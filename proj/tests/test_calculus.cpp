#include <ncreal/delta.hpp>
#include <ncreal/generate.hpp>
#include <ncreal/harness.hpp>
#include <ncreal/lla.hpp>
#include <ncreal/selftest.hpp>
#include <ncreal/series.hpp>

#include <gtest/gtest.h>

using namespace ncreal;

namespace {

const Mat E11{{1, 0}, {0, 0}}, E12{{0, 1}, {0, 0}}, E21{{0, 0}, {1, 0}}, E22{{0, 0}, {0, 1}};

std::vector<CompiledSample> samples(std::uint64_t seed, int count, std::size_t max_depth = 3) {
  Rng rng(seed);
  ExprShape sh;
  sh.max_depth = max_depth;
  std::vector<CompiledSample> out;
  for (int i = 0; i < count; ++i) out.push_back(random_compiled(rng, sh, 2));
  return out;
}

MatTuple nilpotent_point(Rng& rng, const FMRealization& r, std::size_t m) {
  std::vector<Mat> xs;
  for (const auto& y : r.Y) xs.push_back(kron_identity(m, y) + random_strict_block_upper(rng, r.s, m, 3));
  return MatTuple(xs);
}

Evaluator of(const NcExpr& e) {
  return [e](const MatTuple& p) { return eval_expr(e, p); };
}

CoefficientOracle coefficients(const FMRealization& r) {
  return [&r](const Word& w, const std::vector<Mat>& z) { return tt_coefficient(r, w, z); };
}

std::vector<Mat> random_dirs(Rng& rng, std::size_t k, std::size_t n) {
  std::vector<Mat> z;
  for (std::size_t i = 0; i < k; ++i) z.push_back(random_mat(rng, n, n, 3));
  return z;
}

}  // namespace

TEST(Lla, CompiledRealizationsPass) {
  for (const auto& c : samples(71, 40)) {
    auto rep = lla_check(c.realization);
    EXPECT_TRUE(rep.pass) << to_string(c.expr);
    EXPECT_TRUE(rep.minimal);
  }
}

TEST(Lla, CounterexampleResidual) {
  auto rep = lla_check(abbey_counterexample());
  ASSERT_FALSE(rep.pass);
  bool at_e11 = false;
  for (const auto& v : rep.violations) {
    EXPECT_EQ(v.equation, 'a');
    if (v.units == std::vector<std::size_t>{0}) {
      at_e11 = true;
      EXPECT_EQ(v.residual, E12);
    }
  }
  EXPECT_TRUE(at_e11);
  // S D - D S by hand for each unit S; the right side vanishes since Y = 0.
  for (const auto& v : rep.violations) {
    Mat s = Mat::unit(2, 2, v.units[0] / 2, v.units[0] % 2);
    EXPECT_EQ(v.residual, s * E12 - E12 * s);
  }
  EXPECT_EQ(rep.violations.size(), 3u);
}

TEST(Lla, EmptyStatePasses) {
  Rng rng(72);
  EXPECT_TRUE(lla_check(realize_const(3, random_tuple(rng, 2, 2, 3))).pass);
  EXPECT_TRUE(lla_check(realize_var(2, random_tuple(rng, 2, 3, 3))).pass);
}

TEST(Lla, ExtendedRectangular) {
  Rng rng(73);
  for (const auto& c : samples(74, 6)) {
    EXPECT_TRUE(lla_check_extended(c.realization, 1, 2, 50, rng).pass);
    EXPECT_TRUE(lla_check_extended(c.realization, 2, 1, 20, rng).pass);
    EXPECT_TRUE(lla_check_extended(c.realization, 1, 1, 20, rng).pass);
  }
  auto bad = lla_check_extended(abbey_counterexample(), 1, 2, 20, rng);
  ASSERT_FALSE(bad.pass);
  EXPECT_EQ(bad.violations[0].equation, 'a');
  EXPECT_FALSE(lla_check_extended(abbey_counterexample(), 1, 1, 20, rng).pass);
}

TEST(Taylor, VariableCoefficients) {
  Rng rng(75);
  FMRealization r = realize_var(1, random_tuple(rng, 2, 2, 3));
  Mat z = random_mat(rng, 2, 2, 4);
  EXPECT_EQ(tt_coefficient(r, Word{0}, {z}), z);
  EXPECT_TRUE(tt_coefficient(r, Word{1}, {z}).is_zero());
  EXPECT_TRUE(tt_coefficient(r, Word{0, 0}, {z, z}).is_zero());
  EXPECT_EQ(tt_coefficient(r, Word(), {}), r.D);
}

TEST(Taylor, ProductAtZeroScalarCentre) {
  FMRealization r = realize_expr(parse_expr("x1*x2"), MatTuple{Mat{{0}}, Mat{{0}}});
  Mat one{{1}};
  EXPECT_EQ(tt_coefficient(r, Word::parse("g1g2"), {one, one}), one);
  EXPECT_TRUE(tt_coefficient(r, Word::parse("g2g1"), {one, one}).is_zero());
  EXPECT_TRUE(tt_coefficient(r, Word::parse("g1"), {one}).is_zero());
  EXPECT_TRUE(tt_coefficient(r, Word(), {}).is_zero());
}

TEST(Taylor, WordParsing) {
  EXPECT_EQ(Word::parse("g1g12"), (Word{0, 11}));
  EXPECT_EQ(Word::parse("e"), Word());
  EXPECT_EQ(Word{1}.str(), "g2");
  EXPECT_THROW(Word::parse("g0"), InputError);
  EXPECT_THROW(Word::parse("g1x"), InputError);
}

TEST(Series, CentreGivesD) {
  for (const auto& c : samples(76, 5)) {
    EXPECT_EQ(tt_series_eval(c.realization, ampliate(2, c.centre)), kron_identity(2, c.realization.D));
    EXPECT_EQ(tt_series_eval_bruteforce(c.realization, ampliate(2, c.centre)), kron_identity(2, c.realization.D));
  }
}

TEST(Series, NilpotentPerturbationsAgree) {
  Rng rng(77);
  for (const auto& c : samples(78, 15)) {
    for (std::size_t m = 2; m <= 3; ++m) {
      MatTuple p = nilpotent_point(rng, c.realization, m);
      Mat pencil_value = eval_realization(c.realization, p);
      EXPECT_EQ(tt_series_eval(c.realization, p), pencil_value);
      EXPECT_EQ(tt_series_eval_bruteforce(c.realization, p), pencil_value);
      EXPECT_EQ(pencil_value, eval_expr(c.expr, p));
    }
  }
}

TEST(Series, GenericPointsAreNotNilpotent) {
  Rng rng(79);
  MatTuple y{E12, E21};
  FMRealization r = realize_expr(parse_expr("(x1*x2 - x2*x1)^-1"), y);
  for (int t = 0; t < 20; ++t) EXPECT_THROW(tt_series_eval(r, random_tuple(rng, 2, 4, 3)), NotNilpotent);
  // A polynomial has a nilpotent pencil everywhere, so its series always terminates.
  NcExpr poly = parse_expr("x1*x2*x1 - 2*x2");
  FMRealization p = realize_expr(poly, y);
  for (int t = 0; t < 10; ++t) {
    MatTuple x = random_tuple(rng, 2, 2, 3);
    EXPECT_EQ(tt_series_eval(p, x), eval_expr(poly, x));
  }
  FMRealization v = realize_var(1, MatTuple{Mat(2, 2)});
  EXPECT_THROW(tt_series_eval_bruteforce(realize_inverse(realize_sum(realize_const(1, v.centre()), v)),
                                         MatTuple{Mat::identity(2)}),
               NotNilpotent);
}

TEST(Series, VariableTruncatesAtLengthOne) {
  Rng rng(81);
  FMRealization r = realize_var(2, random_tuple(rng, 2, 2, 3));
  MatTuple p = nilpotent_point(rng, r, 3);
  EXPECT_EQ(tt_series_eval_bruteforce(r, p), p[1]);
}

TEST(Series, ScalarCaseIsPowerSeries) {
  // 1 / (1 - x) at 0 on a nilpotent 3 x 3 point: 1 + N + N^2.
  FMRealization r = realize_expr(parse_expr("(1 - x1)^-1"), MatTuple{Mat{{0}}});
  Mat n{{0, 2, 1}, {0, 0, 3}, {0, 0, 0}};
  Mat want = Mat::identity(3) + n + n * n;
  EXPECT_EQ(tt_series_eval(r, MatTuple{n}), want);
  EXPECT_EQ(tt_series_eval_bruteforce(r, MatTuple{n}), want);
}

TEST(Delta, FirstVariable) {
  Rng rng(82);
  MatTuple a = random_tuple(rng, 2, 2, 3), b = random_tuple(rng, 2, 3, 3);
  Mat z = random_mat(rng, 2, 3, 3);
  EXPECT_EQ(delta_block(of(parse_expr("x1")), Word{0}, {a, b}, {z}), z);
  EXPECT_TRUE(delta_block(of(parse_expr("x1")), Word{1}, {a, b}, {z}).is_zero());
}

TEST(Delta, MonomialHandExpansion) {
  // [[X1, Z], [0, X1']] [[X2, 0], [0, X2']] has top-right Z X2'; with Z in
  // coordinate 2 the product top-right is X1 Z.
  Rng rng(83);
  MatTuple a = random_tuple(rng, 2, 2, 3), b = random_tuple(rng, 2, 2, 3);
  Mat z = random_mat(rng, 2, 2, 3);
  auto f = of(parse_expr("x1*x2"));
  EXPECT_EQ(delta_block(f, Word{1}, {a, b}, {z}), a[0] * z);
  EXPECT_EQ(delta_block(f, Word{0}, {a, b}, {z}), z * b[1]);
  MatTuple c = random_tuple(rng, 2, 2, 3);
  Mat z2 = random_mat(rng, 2, 2, 3);
  EXPECT_EQ(delta_block(f, Word{0, 1}, {a, b, c}, {z, z2}), z * z2);
  EXPECT_TRUE(delta_block(f, Word{1, 0}, {a, b, c}, {z, z2}).is_zero());
}

TEST(Delta, ProductRule) {
  Rng rng(84);
  ExprShape sh;
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    NcExpr f = random_expr(rng, sh), g = random_expr(rng, sh);
    MatTuple a = random_tuple(rng, 2, 2, 2), b = random_tuple(rng, 2, 1 + t % 2, 2);
    Mat z = random_mat(rng, 2, b.level(), 3);
    Word w{static_cast<std::size_t>(t % 2)};
    MatTuple big = delta_point(w, {a, b}, {z});
    if (!in_expr_domain(f, big) || !in_expr_domain(g, big)) continue;
    ++checked;
    Mat lhs = delta_block(of(f * g), w, {a, b}, {z});
    Mat rhs = eval_expr(f, a) * delta_block(of(g), w, {a, b}, {z}) + delta_block(of(f), w, {a, b}, {z}) * eval_expr(g, b);
    EXPECT_EQ(lhs, rhs);
  }
  EXPECT_GT(checked, 20);
}

TEST(Delta, ClosedFormAtCentre) {
  Rng rng(85);
  for (const auto& c : samples(86, 8)) {
    const auto& r = c.realization;
    MatTuple centre = ampliate(2, c.centre);
    Mat z = random_mat(rng, 4, 4, 3);
    for (std::size_t j = 0; j < r.d; ++j)
      EXPECT_EQ(delta_closed_form(r, Word{j}, centre, {z}), kron_identity(2, r.C) * block_apply(r.B[j], z, 2));
  }
}

TEST(Delta, ClosedFormMatchesBlockEvaluation) {
  Rng rng(87);
  for (const auto& c : samples(88, 10)) {
    const auto& r = c.realization;
    Evaluator f = [&r](const MatTuple& p) { return eval_realization(r, p); };
    Evaluator f3 = [&r](const MatTuple& p) { return pencil_inverse(r, p); };
    for (std::size_t len = 1; len <= 3; ++len) {
      auto x = random_domain_point(r, rng, 1, 2);
      ASSERT_TRUE(x);
      MatTuple centre = c.centre;
      std::vector<MatTuple> pts(len + 1, centre), rev(len + 1, centre);
      pts[0] = *x;
      rev[len] = *x;
      for_each_word(r.d, len, [&](const Word& w) {
        auto z = random_dirs(rng, len, 2);
        EXPECT_EQ(delta_block(f, w, pts, z), delta_closed_form(r, w, *x, z, false)) << w.str();
        EXPECT_EQ(delta_block(f3, w, rev, z), delta_pencil_closed_form(r, w, *x, z, false)) << w.str();
      });
    }
  }
}

TEST(Delta, RequiresLla) {
  FMRealization bad = abbey_counterexample();
  MatTuple x{Mat(2, 2)};
  EXPECT_THROW(delta_closed_form(bad, Word{0}, x, {E11}), PreconditionFailure);
  EXPECT_NO_THROW(delta_closed_form(bad, Word{0}, x, {E11}, false));
}

TEST(LostAbbey, CompiledSeriesPass) {
  for (const auto& c : samples(89, 4, 2)) EXPECT_TRUE(la_check_series(coefficients(c.realization), c.centre, 3).pass);
}

TEST(LostAbbey, CounterexampleFailsConstantCondition) {
  FMRealization bad = abbey_counterexample();
  auto rep = la_check_series(coefficients(bad), bad.centre(), 2);
  ASSERT_FALSE(rep.pass);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.condition == LaCondition::Constant && v.s_unit == 0) {
      found = true;
      EXPECT_EQ(v.residual, E12);
    }
  EXPECT_TRUE(found);
}

TEST(LostAbbey, ScalarCentreIsTautological) {
  Rng rng(90);
  FMRealization r;
  r.d = 2;
  r.s = 1;
  r.L = 2;
  r.Y = {Mat{{1}}, Mat{{-2}}};
  r.D = Mat{{3}};
  r.C = random_mat(rng, 1, 2, 3);
  for (int k = 0; k < 2; ++k) {
    r.A.emplace_back(1, 2, 2, std::vector<Mat>{random_mat(rng, 2, 2, 3)});
    r.B.emplace_back(1, 2, 1, std::vector<Mat>{random_mat(rng, 2, 1, 3)});
  }
  EXPECT_TRUE(la_check_series(coefficients(r), r.centre(), 3).pass);
  EXPECT_TRUE(lla_check(r).pass);
}

TEST(Harness, CompiledMinimalPass) {
  Rng rng(91);
  for (const auto& c : samples(92, 4)) {
    auto rep = nc_property_harness(c.realization, 100, rng);
    EXPECT_TRUE(rep.pass) << (rep.failures.empty() ? "" : rep.failures[0]);
    EXPECT_GE(rep.checked["direct_sum"], 100u);
  }
}

TEST(Harness, EmptyStateIsVacuous) {
  Rng rng(93);
  auto rep = nc_property_harness(realize_const(2, random_tuple(rng, 2, 2, 2)), 20, rng);
  EXPECT_TRUE(rep.pass);
}

TEST(Harness, NonMinimalStillRespectsDirectSums) {
  Rng rng(94);
  for (const auto& c : samples(95, 4)) {
    SynthesisOptions raw;
    raw.minimize = raw.minimize_intermediate = false;
    FMRealization r = realize_expr(c.expr, c.centre, raw);
    auto rep = nc_property_harness(r, 30, rng);
    EXPECT_TRUE(rep.pass) << to_string(c.expr);
  }
}
