#ifndef NCREAL_RATIONAL_HPP
#define NCREAL_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncreal {

/// Exact rational scalar. GMP keeps every value canonical (gcd 1, positive
/// denominator, zero stored as 0/1).
using Rat = mpq_class;
using Int = mpz_class;

/// Thrown for malformed textual input (numbers, matrices, expressions, JSON).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for every "point is outside the domain" failure (singular inversion,
/// singular pencil, failed pivot search over an algebra).
class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_zero(const Rat& x) { return sgn(x) == 0; }

/// Parses "p", "-p", "p/q" (q != 0). Surrounding whitespace is ignored.
inline Rat parse_rat(std::string_view text) {
  auto b = text.find_first_not_of(" \t\n\r");
  auto e = text.find_last_not_of(" \t\n\r");
  if (b == std::string_view::npos) throw InputError("empty rational literal");
  std::string s(text.substr(b, e - b + 1));
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw InputError("malformed rational literal '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  Int n(num, 10), d(den, 10);
  if (d == 0) throw InputError("zero denominator in '" + s + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rat& x) { return x.get_str(10); }

}  // namespace ncreal

#endif  // NCREAL_RATIONAL_HPP
