#ifndef NCREAL_HARNESS_HPP
#define NCREAL_HARNESS_HPP

#include <ncreal/lla.hpp>
#include <ncreal/random.hpp>
#include <ncreal/realization.hpp>

#include <map>
#include <string>
#include <vector>

namespace ncreal {

struct HarnessReport {
  bool pass = true;
  std::map<std::string, std::size_t> checked;  // per property
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(const std::string& what, std::size_t trial) {
    pass = false;
    failures.push_back(what + " (trial " + std::to_string(trial) + ")");
  }
};

/// A random point of Omega at level s*m, or nothing after `attempts` draws.
inline std::optional<MatTuple> random_domain_point(const FMRealization& r, Rng& rng, std::size_t m, long bound,
                                                   std::size_t attempts = 50) {
  for (std::size_t a = 0; a < attempts; ++a) {
    MatTuple x = random_tuple(rng, r.d, r.s * m, bound);
    if (in_domain(r, x)) return x;
  }
  return std::nullopt;
}

/// Samples the nc-function structure of R on Omega: direct sums, block
/// upper-triangular points, the intertwiners [I; 0] and [0 I] between them,
/// and (for minimal realizations passing lla_check) similarities.
inline HarnessReport nc_property_harness(const FMRealization& r, std::size_t trials, Rng& rng, long bound = 2) {
  r.validate();
  HarnessReport rep;
  const LlaReport lla = lla_check(r);
  const bool similarity = lla.pass && lla.minimal;
  if (!similarity) rep.notes.push_back("similarity checks skipped: realization is not minimal or fails lla_check");
  const std::size_t s = r.s;

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m1 = static_cast<std::size_t>(random_int(rng, 1, 2));
    const std::size_t m2 = static_cast<std::size_t>(random_int(rng, 1, 2));
    auto x1 = random_domain_point(r, rng, m1, bound);
    auto x2 = random_domain_point(r, rng, m2, bound);
    if (!x1 || !x2) {
      rep.notes.push_back("trial " + std::to_string(t) + ": no domain point found");
      continue;
    }
    const std::size_t n1 = s * m1, n2 = s * m2;
    const Mat f1 = eval_realization(r, *x1), f2 = eval_realization(r, *x2);

    // Direct sums.
    MatTuple xs = direct_sum(*x1, *x2);
    ++rep.checked["direct_sum"];
    auto fs = try_eval_realization(r, xs);
    if (!fs) rep.fail("direct sum left the domain", t);
    else if (!(*fs == direct_sum(f1, f2))) rep.fail("value at direct sum is not the direct sum", t);

    // Upper-triangular augmentation [[X1, Z], [0, X2]].
    std::vector<Mat> up;
    for (std::size_t k = 0; k < r.d; ++k) {
      Mat u = direct_sum((*x1)[k], (*x2)[k]);
      u.set_block(0, n1, random_mat(rng, n1, n2, bound));
      up.push_back(std::move(u));
    }
    MatTuple xu(std::move(up));
    ++rep.checked["upper_triangular"];
    if (!in_domain(r, xu)) {
      rep.fail("upper-triangular point left the domain", t);
      continue;
    }
    const Mat fu = eval_realization(r, xu);
    if (!(fu.block(0, 0, n1, n1) == f1) || !(fu.block(n1, n1, n2, n2) == f2) || !fu.block(n1, 0, n2, n1).is_zero())
      rep.fail("upper-triangular value has wrong diagonal blocks", t);

    // Intertwiners: Xu [I;0] = [I;0] X1 and [0 I] Xu = X2 [0 I].
    Mat emb = vstack({Mat::identity(n1), Mat(n2, n1)});
    Mat proj = hstack({Mat(n2, n1), Mat::identity(n2)});
    ++rep.checked["intertwining"];
    if (!(fu * emb == emb * f1)) rep.fail("column embedding does not intertwine values", t);
    if (!(proj * fu == f2 * proj)) rep.fail("row projection does not intertwine values", t);
    if (fs && !(*fs * emb == emb * f1)) rep.fail("direct-sum embedding does not intertwine", t);

    if (similarity) {
      Mat tm = random_invertible(rng, n1, bound);
      Mat ti = inverse(tm);
      MatTuple xc = conjugate(*x1, tm, ti);
      ++rep.checked["similarity"];
      if (!in_domain(r, xc)) rep.fail("similar point left the domain", t);
      else if (!(eval_realization(r, xc) == tm * f1 * ti)) rep.fail("value does not conjugate", t);
    }
  }
  return rep;
}

}  // namespace ncreal

#endif  // NCREAL_HARNESS_HPP
