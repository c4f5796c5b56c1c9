#ifndef NCREAL_LLA_HPP
#define NCREAL_LLA_HPP

#include <ncreal/random.hpp>
#include <ncreal/realization.hpp>
#include <ncreal/synthesis.hpp>
#include <ncreal/word.hpp>

#include <functional>
#include <string>
#include <vector>

namespace ncreal {

/// One failed identity. `equation` is one of 'a','b','c','f','e','d' for the
/// six linearized conditions; `units` lists the matrix-unit indices of
/// (S, Z1[, Z2]) and `vars` the 0-based (i1[, i2]). Randomized checks leave
/// `units` empty and record the trial number in `trial`.
struct LlaViolation {
  char equation = 'a';
  std::vector<std::size_t> units;
  std::vector<std::size_t> vars;
  std::size_t trial = 0;
  Mat residual;
};

struct LlaReport {
  bool pass = true;
  std::vector<LlaViolation> violations;
  /// Set when the realization is controllable and observable. For
  /// non-minimal realizations a failure does not show that the underlying
  /// series is not a nc function.
  bool minimal = false;

  void add(LlaViolation v) {
    pass = false;
    violations.push_back(std::move(v));
  }
};

namespace detail {

struct LlaContext {
  const FMRealization& r;
  std::size_t s, units;
  std::vector<Mat> basis;  // E_u
  std::vector<Mat> ma;     // sum_k A_k([E_u, Y_k]) per S unit
  std::vector<Mat> mb;     // sum_k B_k([E_u, Y_k]) per S unit

  explicit LlaContext(const FMRealization& rr) : r(rr), s(rr.s), units(rr.s * rr.s) {
    for (std::size_t u = 0; u < units; ++u) basis.push_back(Mat::unit(s, s, u / s, u % s));
    for (std::size_t u = 0; u < units; ++u) {
      Mat a(r.L, r.L), b(r.L, s);
      for (std::size_t k = 0; k < r.d; ++k) {
        Mat c = commutator(basis[u], r.Y[k]);
        a += r.A[k](c);
        b += r.B[k](c);
      }
      ma.push_back(std::move(a));
      mb.push_back(std::move(b));
    }
  }
};

}  // namespace detail

/// Checks the six linearized lost-abbey identities on every basis triple
/// (S, Z1, Z2) of matrix units and every i1, i2. Multilinearity makes this
/// exhaustive.
inline LlaReport lla_check(const FMRealization& r) {
  r.validate();
  LlaReport rep;
  rep.minimal = is_minimal(r);
  detail::LlaContext ctx(r);
  const auto& E = ctx.basis;
  const std::size_t U = ctx.units;
  auto record = [&](char eq, Mat res, std::vector<std::size_t> units, std::vector<std::size_t> vars) {
    if (!res.is_zero()) rep.add({eq, std::move(units), std::move(vars), 0, std::move(res)});
  };

  // (a) S D - D S = C sum_k B_k([S, Y_k])
  for (std::size_t su = 0; su < U; ++su) record('a', E[su] * r.D - r.D * E[su] - r.C * ctx.mb[su], {su}, {});

  // (b), (c): S C T(Z) - C T(S Z) = C M_A(S) T(Z) for T = B_i, A_i
  for (std::size_t su = 0; su < U; ++su) {
    Mat sc = E[su] * r.C;
    Mat cma = r.C * ctx.ma[su];
    for (std::size_t i = 0; i < r.d; ++i)
      for (std::size_t zu = 0; zu < U; ++zu) {
        Mat sz = E[su] * E[zu];
        const Mat& bz = r.B[i].image(zu);
        record('b', sc * bz - r.C * r.B[i](sz) - cma * bz, {su, zu}, {i});
      }
  }
  for (std::size_t su = 0; su < U; ++su) {
    Mat sc = E[su] * r.C;
    Mat cma = r.C * ctx.ma[su];
    for (std::size_t i = 0; i < r.d; ++i)
      for (std::size_t zu = 0; zu < U; ++zu) {
        Mat sz = E[su] * E[zu];
        const Mat& az = r.A[i].image(zu);
        record('c', sc * az - r.C * r.A[i](sz) - cma * az, {su, zu}, {i});
      }
  }

  // (f) B_i(Z S) - B_i(Z) S = A_i(Z) M_B(S)
  for (std::size_t su = 0; su < U; ++su)
    for (std::size_t i = 0; i < r.d; ++i)
      for (std::size_t zu = 0; zu < U; ++zu) {
        Mat zs = E[zu] * E[su];
        record('f', r.B[i](zs) - r.B[i].image(zu) * E[su] - r.A[i].image(zu) * ctx.mb[su], {su, zu}, {i});
      }

  // (e), (d): A_i1(Z1 S) T(Z2) - A_i1(Z1) [T(S Z2) + M_A(S) T(Z2)] = 0 for T = B_i2, A_i2
  for (char eq : {'e', 'd'}) {
    const auto& second = eq == 'e' ? r.B : r.A;
    for (std::size_t su = 0; su < U; ++su)
      for (std::size_t i2 = 0; i2 < r.d; ++i2)
        for (std::size_t z2 = 0; z2 < U; ++z2) {
          const Mat& t2 = second[i2].image(z2);
          Mat g = second[i2](E[su] * E[z2]) + ctx.ma[su] * t2;
          for (std::size_t i1 = 0; i1 < r.d; ++i1)
            for (std::size_t z1 = 0; z1 < U; ++z1) {
              Mat z1s = E[z1] * E[su];
              Mat lhs = z1s.is_zero() ? Mat(r.L, t2.cols()) : r.A[i1](z1s) * t2;
              record(eq, lhs - r.A[i1].image(z1) * g, {su, z1, z2}, {i1, i2});
            }
        }
  }
  return rep;
}

/// Randomized check of the rectangular extensions: S in K^{sn x sm},
/// Z1 in K^{sm x sm}, Z2 in K^{sn x sn}, all (i1, i2).
inline LlaReport lla_check_extended(const FMRealization& r, std::size_t n, std::size_t m, std::size_t trials,
                                    Rng& rng, long bound = 3) {
  r.validate();
  LlaReport rep;
  rep.minimal = is_minimal(r);
  const std::size_t s = r.s;
  const Mat In_C = kron_identity(n, r.C);
  const Mat Im_C = kron_identity(m, r.C);
  const Mat In_D = kron_identity(n, r.D);
  const Mat Im_D = kron_identity(m, r.D);
  for (std::size_t t = 0; t < trials; ++t) {
    Mat S = random_mat(rng, s * n, s * m, bound);
    Mat Z1 = random_mat(rng, s * m, s * m, bound);
    Mat Z2 = random_mat(rng, s * n, s * n, bound);
    Mat MA(r.L * n, r.L * m), MB(r.L * n, s * m);
    for (std::size_t k = 0; k < r.d; ++k) {
      Mat w = S * kron_identity(m, r.Y[k]) - kron_identity(n, r.Y[k]) * S;
      MA += r.A[k].apply_blocks(w);
      MB += r.B[k].apply_blocks(w);
    }
    auto record = [&](char eq, Mat res, std::vector<std::size_t> vars) {
      if (!res.is_zero()) rep.add({eq, {}, std::move(vars), t, std::move(res)});
    };
    record('a', S * Im_D - In_D * S - In_C * MB, {});
    Mat SZ1 = S * Z1, Z2S = Z2 * S;
    for (std::size_t i = 0; i < r.d; ++i) {
      Mat z1b = r.B[i].apply_blocks(Z1), z1a = r.A[i].apply_blocks(Z1);
      record('b', S * Im_C * z1b - In_C * r.B[i].apply_blocks(SZ1) - In_C * MA * z1b, {i});
      record('c', S * Im_C * z1a - In_C * r.A[i].apply_blocks(SZ1) - In_C * MA * z1a, {i});
      record('f', r.B[i].apply_blocks(Z2S) - r.B[i].apply_blocks(Z2) * S - r.A[i].apply_blocks(Z2) * MB, {i});
    }
    for (std::size_t i2 = 0; i2 < r.d; ++i2) {
      Mat z2s_a = r.A[i2].apply_blocks(Z2S), z2_a = r.A[i2].apply_blocks(Z2);
      for (std::size_t i1 = 0; i1 < r.d; ++i1) {
        for (char eq : {'e', 'd'}) {
          const auto& T = eq == 'e' ? r.B[i1] : r.A[i1];
          Mat z1t = T.apply_blocks(Z1);
          record(eq, z2s_a * z1t - z2_a * T.apply_blocks(SZ1) - z2_a * MA * z1t, {i2, i1});
        }
      }
    }
  }
  return rep;
}

// --------------------------------------------------------------------------
// Lost-abbey conditions on a coefficient family.

/// Multilinear coefficient oracle: (word, Z_1..Z_l) -> s x s matrix.
using CoefficientOracle = std::function<Mat(const Word&, const std::vector<Mat>&)>;

enum class LaCondition { Constant, Left, Right, Interior };

inline const char* to_string(LaCondition c) {
  switch (c) {
    case LaCondition::Constant: return "constant";
    case LaCondition::Left: return "left";
    case LaCondition::Right: return "right";
    case LaCondition::Interior: return "interior";
  }
  return "?";
}

struct LaViolation {
  LaCondition condition;
  Word word;
  std::size_t s_unit = 0;
  std::vector<std::size_t> z_units;
  std::size_t position = 0;  // j for Interior
  Mat residual;
};

struct LaReport {
  bool pass = true;
  std::vector<LaViolation> violations;
};

/// Verifies the four lost-abbey identities on matrix-unit tuples for all
/// words of length <= max_len:
///   S f_e - f_e S                 = sum_k f_{g_k}([S,Y_k])
///   S f_w(Z..) - f_w(S Z1, ..)     = sum_k f_{g_k w}([S,Y_k], Z..)
///   f_w(.., Zl S) - f_w(Z..) S     = sum_k f_{w g_k}(Z.., [S,Y_k])
///   f_w(.., Zj S, Zj+1, ..) - f_w(.., Zj, S Zj+1, ..)
///                                  = sum_k f_{w with g_k after j}(.., Zj, [S,Y_k], Zj+1, ..)
inline LaReport la_check_series(const CoefficientOracle& f, const MatTuple& y, std::size_t max_len) {
  LaReport rep;
  const std::size_t d = y.size(), s = y.level(), U = s * s;
  std::vector<Mat> E;
  for (std::size_t u = 0; u < U; ++u) E.push_back(Mat::unit(s, s, u / s, u % s));
  auto add = [&](LaCondition c, const Word& w, std::size_t su, const std::vector<std::size_t>& zu, std::size_t pos,
                 Mat res) {
    if (res.is_zero()) return;
    rep.pass = false;
    rep.violations.push_back({c, w, su, zu, pos, std::move(res)});
  };

  for (std::size_t su = 0; su < U; ++su) {
    const Mat& S = E[su];
    std::vector<Mat> comm;
    for (std::size_t k = 0; k < d; ++k) comm.push_back(commutator(S, y[k]));
    Mat fe = f(Word(), {});
    Mat rhs(s, s);
    for (std::size_t k = 0; k < d; ++k) rhs += f(Word{k}, {comm[k]});
    add(LaCondition::Constant, Word(), su, {}, 0, S * fe - fe * S - rhs);

    for (std::size_t len = 1; len <= max_len; ++len) {
      for_each_word(d, len, [&](const Word& w) {
        std::vector<std::size_t> zu(len, 0);
        for (;;) {
          std::vector<Mat> Z;
          for (auto u : zu) Z.push_back(E[u]);
          Mat fz = f(w, Z);
          // left
          {
            auto Zs = Z;
            Zs[0] = S * Z[0];
            Mat res = S * fz - f(w, Zs);
            for (std::size_t k = 0; k < d; ++k) {
              auto Zk = Z;
              Zk.insert(Zk.begin(), comm[k]);
              res -= f(w.inserted(0, k), Zk);
            }
            add(LaCondition::Left, w, su, zu, 0, std::move(res));
          }
          // right
          {
            auto Zs = Z;
            Zs[len - 1] = Z[len - 1] * S;
            Mat res = f(w, Zs) - fz * S;
            for (std::size_t k = 0; k < d; ++k) {
              auto Zk = Z;
              Zk.push_back(comm[k]);
              res -= f(w.inserted(len, k), Zk);
            }
            add(LaCondition::Right, w, su, zu, len, std::move(res));
          }
          // interior, j = 1..len-1 (1-based): between Z_j and Z_{j+1}
          for (std::size_t j = 1; j < len; ++j) {
            auto Za = Z, Zb = Z;
            Za[j - 1] = Z[j - 1] * S;
            Zb[j] = S * Z[j];
            Mat res = f(w, Za) - f(w, Zb);
            for (std::size_t k = 0; k < d; ++k) {
              auto Zk = Z;
              Zk.insert(Zk.begin() + static_cast<std::ptrdiff_t>(j), comm[k]);
              res -= f(w.inserted(j, k), Zk);
            }
            add(LaCondition::Interior, w, su, zu, j, std::move(res));
          }
          std::size_t i = len;
          while (i > 0) {
            if (++zu[i - 1] < U) break;
            zu[i - 1] = 0;
            --i;
          }
          if (i == 0) break;
        }
      });
    }
  }
  return rep;
}

}  // namespace ncreal

#endif  // NCREAL_LLA_HPP
