#ifndef NCREAL_SERIES_HPP
#define NCREAL_SERIES_HPP

#include <ncreal/realization.hpp>
#include <ncreal/tensor.hpp>
#include <ncreal/word.hpp>

#include <map>
#include <vector>

namespace ncreal {

class NotNilpotent : public std::runtime_error {
 public:
  explicit NotNilpotent(const std::string& what = "perturbation of the centre is not jointly nilpotent")
      : std::runtime_error(what) {}
};

/// Taylor-Taylor coefficient: D for the empty word, otherwise
/// C A_{i1}(Z1) ... A_{i(l-1)}(Z(l-1)) B_{il}(Zl).
inline Mat tt_coefficient(const FMRealization& r, const Word& w, const std::vector<Mat>& z) {
  if (z.size() != w.size()) throw ShapeError("coefficient needs one matrix per letter");
  if (w.max_letter() > r.d) throw ShapeError("word letter exceeds d");
  if (w.empty()) return r.D;
  Mat acc = r.C;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) acc = acc * r.A[w[i]](z[i]);
  return acc * r.B[w[w.size() - 1]](z.back());
}

/// Finite Neumann-series evaluation at a point whose perturbation
/// P = sum_k (X_k - I(x)Y_k) A_k is nilpotent. Throws NotNilpotent when
/// P^{Lm} != 0.
inline Mat tt_series_eval(const FMRealization& r, const MatTuple& x) {
  Mat p = pencil(r, x);
  const std::size_t n = p.rows();
  p = Mat::identity(n) - p;  // sum_k (X_k - I(x)Y_k) A_k
  const std::size_t m = x.level() / r.s;
  Mat neumann(n, n), power = Mat::identity(n);
  for (std::size_t j = 0;; ++j) {
    if (power.is_zero()) break;
    if (j >= n) throw NotNilpotent();
    neumann += power;
    power = power * p;
  }
  Mat value = kron_identity(m, r.D);
  if (n) value += kron_identity(m, r.C) * neumann * input_term(r, x);
  return value;
}

/// Literal sum over words of (X - I(x)Y)^{faux w} R_w, with faux powers
/// built entry by entry as tensors and each coefficient applied by linear
/// extension on matrix units. Words are enumerated until every faux power
/// of some length vanishes; more than sm letters raises NotNilpotent.
inline Mat tt_series_eval_bruteforce(const FMRealization& r, const MatTuple& x) {
  r.validate();
  if (x.size() != r.d || x.level() % r.s) throw ShapeError("point does not match the realization");
  const std::size_t s = r.s, m = x.level() / s, n = x.level();
  std::vector<TensorMatrix> delta;
  for (std::size_t k = 0; k < r.d; ++k) delta.push_back(TensorMatrix::from_blocked(x[k] - kron_identity(m, r.Y[k]), s));

  // C A(E_k1) ... A(E_k(l-1)) cached by (word prefix, unit prefix).
  std::map<std::pair<std::vector<std::size_t>, std::vector<std::uint32_t>>, Mat> prefix_cache;
  auto prefix = [&](const Word& w, const TensorEntry::Key& key, std::size_t len) -> Mat {
    std::vector<std::size_t> wl(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(len));
    TensorEntry::Key kl(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(len));
    auto id = std::make_pair(wl, kl);
    if (auto it = prefix_cache.find(id); it != prefix_cache.end()) return it->second;
    Mat acc = r.C;
    for (std::size_t i = 0; i < len; ++i) acc = acc * r.A[wl[i]].image(kl[i]);
    prefix_cache.emplace(id, acc);
    return acc;
  };
  auto apply_coefficient = [&](const Word& w, const TensorEntry& t) -> Mat {
    Mat out(s, s);
    if (w.empty()) {
      for (const auto& [key, weight] : t.terms()) out.add_scaled(weight, r.D);
      return out;
    }
    const std::size_t l = w.size();
    for (const auto& [key, weight] : t.terms())
      out.add_scaled(weight, prefix(w, key, l - 1) * r.B[w[l - 1]].image(key[l - 1]));
    return out;
  };
  auto accumulate = [&](Mat& value, const Word& w, const TensorMatrix& pw) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (pw(i, j).is_zero()) continue;
        Mat blk = value.block(i * s, j * s, s, s) + apply_coefficient(w, pw(i, j));
        value.set_block(i * s, j * s, blk);
      }
  };

  Mat value(n, n);
  std::map<Word, TensorMatrix> level{{Word(), TensorMatrix::identity(m, s)}};
  accumulate(value, Word(), level.begin()->second);
  for (std::size_t len = 1;; ++len) {
    std::map<Word, TensorMatrix> next;
    for (const auto& [w, pw] : level) {
      if (pw.is_zero()) continue;
      for (std::size_t k = 0; k < r.d; ++k) {
        TensorMatrix q = faux_product(pw, delta[k]);
        if (!q.is_zero()) next.emplace(w.inserted(w.size(), k), std::move(q));
      }
    }
    if (next.empty()) break;
    if (len > n) throw NotNilpotent("faux powers do not vanish within sm letters");
    for (const auto& [w, pw] : next) accumulate(value, w, pw);
    level = std::move(next);
  }
  return value;
}

}  // namespace ncreal

#endif  // NCREAL_SERIES_HPP
