#include <ncreal/block_map.hpp>
#include <ncreal/random.hpp>
#include <ncreal/tensor.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace ncreal;

namespace {

// Leibniz expansion, independent of elimination.
Rat leibniz_det(const Mat& a) {
  std::vector<std::size_t> p(a.rows());
  std::iota(p.begin(), p.end(), 0);
  Rat total = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inv;
    Rat term = inv % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) term *= a(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rat("3/6"), Rat(1, 2));
  EXPECT_EQ(parse_rat("-4"), Rat(-4));
  EXPECT_EQ(parse_rat(" 0/5 "), Rat(0));
  EXPECT_THROW(parse_rat("6/-1"), InputError);
  EXPECT_EQ(to_string(Rat(-3, 4)), "-3/4");
  EXPECT_EQ(to_string(Rat(0)), "0");
  EXPECT_THROW(parse_rat("1/0"), InputError);
  EXPECT_THROW(parse_rat("1.5"), InputError);
  EXPECT_THROW(parse_rat(""), InputError);
}

TEST(Kron, TrivialCases) {
  Mat q{{1, 2}, {3, 4}};
  EXPECT_EQ(kron(Mat{{1}}, q), q);
  EXPECT_EQ(kron(Mat{{0, 1}, {0, 0}}, Mat{{2}}), (Mat{{0, 2}, {0, 0}}));
}

TEST(Kron, IndexFormula) {
  Rng rng(11);
  Mat p = random_mat(rng, 2, 3, 5), q = random_mat(rng, 2, 2, 5);
  Mat k = kron(p, q);
  ASSERT_EQ(k.rows(), 4u);
  ASSERT_EQ(k.cols(), 6u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(k(i * 2 + a, j * 2 + b), p(i, j) * q(a, b));
}

TEST(PermMatrix, SmallCases) {
  EXPECT_EQ(perm_matrix(1, 3), Mat::identity(3));
  Mat e22{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  EXPECT_EQ(perm_matrix(2, 2), e22);
}

TEST(PermMatrix, SwapRuleFixedShapes) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    Mat p = random_mat(rng, 3, 2, 4), q = random_mat(rng, 2, 4, 4);
    EXPECT_EQ(kron(p, q), perm_matrix(3, 2) * kron(q, p) * perm_matrix(2, 4).transpose());
  }
}

TEST(PermMatrix, IsPermutationWithInverse) {
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = 1; b <= 4; ++b) {
      Mat e = perm_matrix(a, b);
      EXPECT_EQ(e * perm_matrix(b, a), Mat::identity(a * b));
      EXPECT_EQ(e * e.transpose(), Mat::identity(a * b));
    }
}

TEST(Elimination, DeterminantMatchesLeibniz) {
  Rng rng(13);
  EXPECT_EQ(det(Mat::identity(3)), 1);
  EXPECT_EQ(det(Mat(0, 0)), 1);
  EXPECT_EQ(det(Mat{{0, 1}, {0, 0}}), 0);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 5));
    Mat a = random_mat(rng, n, n, 3);
    if (t % 4 == 0) a(0, 0) = Rat(1, 3);
    EXPECT_EQ(det(a), leibniz_det(a));
  }
}

TEST(Elimination, KernelOfNilpotent) {
  Mat k = kernel_basis(Mat{{0, 1}, {0, 0}});
  EXPECT_EQ(k, (Mat{{1}, {0}}));
}

TEST(Elimination, InverseMultipliesBack) {
  Rng rng(14);
  for (int t = 0; t < 30; ++t) {
    Mat a = random_mat(rng, 4, 4, 3);
    auto inv = try_inverse(a);
    if (sgn(det(a)) == 0) {
      EXPECT_FALSE(inv);
      EXPECT_THROW(inverse(a), SingularMatrix);
      continue;
    }
    ASSERT_TRUE(inv);
    EXPECT_EQ(*inv * a, Mat::identity(4));
    EXPECT_EQ(a * *inv, Mat::identity(4));
    EXPECT_EQ(det(*inv), 1 / det(a));
  }
}

TEST(Elimination, RankNullityAndSolve) {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    std::size_t r = static_cast<std::size_t>(random_int(rng, 1, 5)), c = static_cast<std::size_t>(random_int(rng, 1, 5));
    Mat a = random_mat(rng, r, c, 2);
    if (t % 3 == 0 && r > 1) a.set_block(r - 1, 0, a.row(0) * Rat(2));  // force dependence
    Mat k = kernel_basis(a);
    EXPECT_EQ(rank(a) + k.cols(), c);
    EXPECT_TRUE((a * k).is_zero());
    EXPECT_EQ(image_basis(a).cols(), rank(a));
    if (r != c) {
      EXPECT_THROW(solve(a, a), ShapeError);
      continue;
    }
    Mat x = random_mat(rng, c, 2, 3);
    auto sol = solve(a, a * x);
    EXPECT_EQ(sol.has_value(), sgn(det(a)) != 0);
    if (sol) {
      EXPECT_EQ(*sol, x);
    }
  }
}

TEST(Elimination, OneSidedInverses) {
  Mat a{{1, 2, 3}, {0, 1, 4}};
  auto r = right_inverse(a);
  ASSERT_TRUE(r);
  EXPECT_EQ(a * *r, Mat::identity(2));
  auto l = left_inverse(a.transpose());
  ASSERT_TRUE(l);
  EXPECT_EQ(*l * a.transpose(), Mat::identity(2));
  EXPECT_FALSE(right_inverse(Mat{{1, 2}, {2, 4}}));
}

TEST(BlockApply, TraceMapOnAmpliation) {
  auto tr = BlockLinearMap::from_function(2, 2, 2, [](const Mat& z) { return Mat::scalar(2, z.trace()); });
  Rng rng(16);
  Mat w = random_mat(rng, 2, 2, 5);
  Mat x = kron_identity(2, w);
  Mat expected(4, 4);
  for (std::size_t i = 0; i < 4; ++i) expected(i, i) = w(0, 0) + w(1, 1);
  EXPECT_EQ(block_apply(tr, x, 2), expected);
}

TEST(BlockApply, IdentityAndLevelOne) {
  Rng rng(17);
  auto id = BlockLinearMap::identity(2);
  Mat x = random_mat(rng, 6, 6, 4);
  EXPECT_EQ(block_apply(id, x, 3), x);
  auto t = BlockLinearMap(2, 3, 1, {random_mat(rng, 3, 1, 3), random_mat(rng, 3, 1, 3), random_mat(rng, 3, 1, 3),
                                    random_mat(rng, 3, 1, 3)});
  Mat z = random_mat(rng, 2, 2, 4);
  EXPECT_EQ(block_apply(t, z, 1), t(z));
  EXPECT_THROW(block_apply(t, Mat(3, 3), 1), ShapeError);
}

TEST(BlockApply, LinearAndRespectsDirectSums) {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Mat> imgs;
    for (int u = 0; u < 4; ++u) imgs.push_back(random_mat(rng, 3, 2, 3));
    BlockLinearMap t(2, 3, 2, imgs);
    Mat x = random_mat(rng, 4, 4, 3), y = random_mat(rng, 4, 4, 3), w = random_mat(rng, 2, 2, 3);
    Rat c(Int(random_int(rng, -5, 5)), Int(random_int(rng, 1, 4)));
    c.canonicalize();
    EXPECT_EQ(block_apply(t, x + y, 2), block_apply(t, x, 2) + block_apply(t, y, 2));
    EXPECT_EQ(block_apply(t, c * x, 2), c * block_apply(t, x, 2));
    EXPECT_EQ(block_apply(t, direct_sum(x, w), 3), direct_sum(block_apply(t, x, 2), block_apply(t, w, 1)));
  }
}

TEST(FauxProduct, ScalarBlocksAreOrdinaryProduct) {
  Rng rng(19);
  Mat p = random_mat(rng, 3, 2, 4), q = random_mat(rng, 2, 3, 4);
  TensorMatrix f = faux_product(p, q, 1);
  Mat pq = p * q;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Rat total = 0;
      for (const auto& [key, w] : f(i, j).terms()) {
        ASSERT_EQ(key, (TensorEntry::Key{0, 0}));
        total += w;
      }
      EXPECT_EQ(total, pq(i, j));
    }
}

TEST(FauxProduct, SingleBlockIsPureTensor) {
  Mat z1{{1, 2}, {0, 3}}, z2{{0, 1}, {4, 0}};
  TensorMatrix f = faux_product(z1, z2, 2);
  TensorEntry expected(2, 2);
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b) {
      Rat w = z1(a / 2, a % 2) * z2(b / 2, b % 2);
      if (sgn(w) != 0) expected.add_term({a, b}, w);
    }
  EXPECT_EQ(f(0, 0), expected);
}

TEST(FauxProduct, Associative) {
  Rng rng(20);
  for (int t = 0; t < 10; ++t) {
    auto p = TensorMatrix::from_blocked(random_mat(rng, 4, 4, 2), 2);
    auto q = TensorMatrix::from_blocked(random_mat(rng, 4, 4, 2), 2);
    auto r = TensorMatrix::from_blocked(random_mat(rng, 4, 4, 2), 2);
    EXPECT_EQ(faux_product(faux_product(p, q), r), faux_product(p, faux_product(q, r)));
  }
}
