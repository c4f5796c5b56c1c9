#ifndef NCREAL_EXPR_HPP
#define NCREAL_EXPR_HPP

#include <ncreal/algebra.hpp>
#include <ncreal/point.hpp>
#include <ncreal/random.hpp>

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncreal {

enum class ExprKind { Const, Var, Sum, Prod, Inv, Neg };

/// Immutable AST of a nc rational expression. Nodes are shared, so copies
/// are cheap. Subtraction a - b is stored as Sum(a, Neg(b)).
class NcExpr {
 public:
  struct Node {
    ExprKind kind;
    Rat value;            // Const
    std::size_t var = 0;  // Var, 1-based
    std::shared_ptr<const Node> lhs, rhs;
  };

  NcExpr() : NcExpr(constant(0)) {}

  static NcExpr constant(const Rat& c) { return NcExpr(std::make_shared<Node>(Node{ExprKind::Const, c, 0, {}, {}})); }
  static NcExpr var(std::size_t k) {
    if (k == 0) throw InputError("variables are numbered from 1");
    return NcExpr(std::make_shared<Node>(Node{ExprKind::Var, 0, k, {}, {}}));
  }
  static NcExpr sum(const NcExpr& a, const NcExpr& b) { return binary(ExprKind::Sum, a, b); }
  static NcExpr prod(const NcExpr& a, const NcExpr& b) { return binary(ExprKind::Prod, a, b); }
  static NcExpr inv(const NcExpr& a) { return unary(ExprKind::Inv, a); }
  static NcExpr neg(const NcExpr& a) { return unary(ExprKind::Neg, a); }

  friend NcExpr operator+(const NcExpr& a, const NcExpr& b) { return sum(a, b); }
  friend NcExpr operator-(const NcExpr& a, const NcExpr& b) { return sum(a, neg(b)); }
  friend NcExpr operator*(const NcExpr& a, const NcExpr& b) { return prod(a, b); }
  friend NcExpr operator-(const NcExpr& a) { return neg(a); }

  ExprKind kind() const { return node_->kind; }
  const Rat& value() const { return node_->value; }
  std::size_t var_index() const { return node_->var; }
  NcExpr lhs() const { return NcExpr(node_->lhs); }
  NcExpr rhs() const { return NcExpr(node_->rhs); }
  const Node* node() const { return node_.get(); }

  /// Largest variable index occurring (0 for constant expressions).
  std::size_t arity() const { return arity(node_.get()); }
  std::size_t inversion_count() const { return count(node_.get(), ExprKind::Inv); }
  std::size_t depth() const { return depth(node_.get()); }

  friend bool operator==(const NcExpr& a, const NcExpr& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  explicit NcExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static NcExpr binary(ExprKind k, const NcExpr& a, const NcExpr& b) {
    return NcExpr(std::make_shared<Node>(Node{k, 0, 0, a.node_, b.node_}));
  }
  static NcExpr unary(ExprKind k, const NcExpr& a) { return NcExpr(std::make_shared<Node>(Node{k, 0, 0, a.node_, {}})); }

  static std::size_t arity(const Node* n) {
    if (!n) return 0;
    if (n->kind == ExprKind::Var) return n->var;
    return std::max(arity(n->lhs.get()), arity(n->rhs.get()));
  }
  static std::size_t count(const Node* n, ExprKind k) {
    if (!n) return 0;
    return (n->kind == k ? 1 : 0) + count(n->lhs.get(), k) + count(n->rhs.get(), k);
  }
  static std::size_t depth(const Node* n) {
    if (!n) return 0;
    return 1 + std::max(depth(n->lhs.get()), depth(n->rhs.get()));
  }
  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
      case ExprKind::Const: return a->value == b->value;
      case ExprKind::Var: return a->var == b->var;
      default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

// --------------------------------------------------------------------------
// Parsing and printing.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' NUMBER | '-' unary | postfix
//   postfix := primary ('^-1')*
//   primary := NUMBER | 'x' INDEX | '(' expr ')' | 'inv' '(' expr ')'
//   NUMBER  := DIGITS ('/' DIGITS)?

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : InputError("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  NcExpr parse() {
    NcExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string digits() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (b == pos_) fail("expected digits");
    return std::string(text_.substr(b, pos_ - b));
  }

  Rat number() {
    std::string num = digits();
    if (accept('/')) {
      std::size_t at = pos_;
      std::string den = digits();
      if (Int(den) == 0) throw ParseError("zero denominator", at);
      return parse_rat(num + "/" + den);
    }
    return parse_rat(num);
  }

  NcExpr expr() {
    NcExpr e = term();
    for (;;) {
      if (accept('+'))
        e = NcExpr::sum(e, term());
      else if (accept('-'))
        e = NcExpr::sum(e, NcExpr::neg(term()));
      else
        return e;
    }
  }

  NcExpr term() {
    NcExpr e = unary();
    while (accept('*')) e = NcExpr::prod(e, unary());
    return e;
  }

  NcExpr unary() {
    if (accept('-')) {
      if (at_digit()) return postfix(NcExpr::constant(-number()));
      return NcExpr::neg(unary());
    }
    return postfix(primary());
  }

  NcExpr postfix(NcExpr e) {
    while (accept('^')) {
      if (!accept('-') || !accept('1')) fail("only the exponent ^-1 is supported");
      if (at_digit()) fail("only the exponent ^-1 is supported");
      e = NcExpr::inv(e);
    }
    return e;
  }

  NcExpr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (at_digit()) return NcExpr::constant(number());
    if (accept('(')) {
      NcExpr e = expr();
      expect(')');
      return e;
    }
    if (text_.substr(pos_, 3) == "inv") {
      pos_ += 3;
      expect('(');
      NcExpr e = expr();
      expect(')');
      return NcExpr::inv(e);
    }
    if (text_[pos_] == 'x') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected a variable index after 'x'");
      std::size_t b = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      unsigned long k = std::stoul(std::string(text_.substr(b, pos_ - b)));
      if (k == 0) throw ParseError("variables are numbered from 1", b);
      return NcExpr::var(k);
    }
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels for printing: 0 sum, 1 product, 2 unary, 3 postfix.
inline std::string print(const NcExpr& e, int ctx) {
  auto wrap = [](bool paren, std::string s) { return paren ? "(" + s + ")" : s; };
  switch (e.kind()) {
    case ExprKind::Const: {
      std::string s = to_string(e.value());
      if (sgn(e.value()) < 0) return "(" + s + ")";
      if (ctx >= 3 && e.value().get_den() != 1) return "(" + s + ")";
      return s;
    }
    case ExprKind::Var: return "x" + std::to_string(e.var_index());
    case ExprKind::Sum: {
      std::string lhs = print(e.lhs(), 0);
      std::string body = e.rhs().kind() == ExprKind::Neg ? lhs + " - " + print(e.rhs().lhs(), 1)
                                                           : lhs + " + " + print(e.rhs(), 1);
      return wrap(ctx > 0, body);
    }
    case ExprKind::Prod: return wrap(ctx > 1, print(e.lhs(), 1) + "*" + print(e.rhs(), 3));
    case ExprKind::Neg: {
      // A leading digit after the sign would read back as a negative literal.
      std::string inner = print(e.lhs(), 2);
      if (std::isdigit(static_cast<unsigned char>(inner[0]))) inner = "(" + inner + ")";
      return wrap(ctx > 2, "-" + inner);
    }
    case ExprKind::Inv: return print(e.lhs(), 3) + "^-1";
  }
  return {};
}

}  // namespace detail

inline NcExpr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Text form that parses back to the same tree.
inline std::string to_string(const NcExpr& e) { return detail::print(e, 0); }

// --------------------------------------------------------------------------
// Evaluation.

/// Raised when some inversion in the expression fails. `path` leads from the
/// root to the offending Inv node (0 = first operand, 1 = second operand).
class DomainError : public OutOfDomain {
 public:
  explicit DomainError(std::vector<int> path, const std::string& what = "")
        : OutOfDomain(what.empty() ? "point outside the domain: singular inversion at " + path_string(path) : what),
        path_(std::move(path)) {}
  const std::vector<int>& path() const { return path_; }

  static std::string path_string(const std::vector<int>& p) {
    std::string s = "root";
    for (int i : p) s += i == 0 ? ".0" : ".1";
    return s;
  }

 private:
  std::vector<int> path_;
};

namespace detail {

inline Mat eval_mat(const NcExpr::Node* n, const MatTuple& x, std::vector<int>& path) {
  const std::size_t lvl = x.level();
  switch (n->kind) {
    case ExprKind::Const: return Mat::scalar(lvl, n->value);
    case ExprKind::Var: return x[n->var - 1];
    case ExprKind::Neg: {
      path.push_back(0);
      Mat v = -eval_mat(n->lhs.get(), x, path);
      path.pop_back();
      return v;
    }
    case ExprKind::Inv: {
      path.push_back(0);
      Mat v = eval_mat(n->lhs.get(), x, path);
      path.pop_back();
      auto inv = try_inverse(v);
      if (!inv) throw DomainError(path);
      return *std::move(inv);
    }
    case ExprKind::Sum:
    case ExprKind::Prod: {
      path.push_back(0);
      Mat a = eval_mat(n->lhs.get(), x, path);
      path.back() = 1;
      Mat b = eval_mat(n->rhs.get(), x, path);
      path.pop_back();
      return n->kind == ExprKind::Sum ? a + b : a * b;
    }
  }
  return {};
}

template <UnitalAlgebra A>
typename A::Element eval_alg(const NcExpr::Node* n, const std::vector<typename A::Element>& a, const A& alg,
                             std::vector<int>& path) {
  switch (n->kind) {
    case ExprKind::Const: return alg.scale(n->value, alg.one());
    case ExprKind::Var: return a[n->var - 1];
    case ExprKind::Neg: {
      path.push_back(0);
      auto v = alg.neg(eval_alg(n->lhs.get(), a, alg, path));
      path.pop_back();
      return v;
    }
    case ExprKind::Inv: {
      path.push_back(0);
      auto v = eval_alg(n->lhs.get(), a, alg, path);
      path.pop_back();
      auto inv = alg.try_invert(v);
      if (!inv) throw DomainError(path);
      return *std::move(inv);
    }
    case ExprKind::Sum:
    case ExprKind::Prod: {
      path.push_back(0);
      auto l = eval_alg(n->lhs.get(), a, alg, path);
      path.back() = 1;
      auto r = eval_alg(n->rhs.get(), a, alg, path);
      path.pop_back();
      return n->kind == ExprKind::Sum ? alg.add(l, r) : alg.mul(l, r);
    }
  }
  return alg.zero();
}

}  // namespace detail

/// e(X) with constants evaluated as c I_n. Throws DomainError naming the
/// first Inv node (left-to-right, innermost first) whose argument is singular.
inline Mat eval_expr(const NcExpr& e, const MatTuple& x) {
  if (e.arity() > x.size())
    throw ShapeError("expression uses x" + std::to_string(e.arity()) + " but the point has " +
                     std::to_string(x.size()) + " coordinates");
  std::vector<int> path;
  return detail::eval_mat(e.node(), x, path);
}

inline std::optional<Mat> try_eval_expr(const NcExpr& e, const MatTuple& x) {
  try {
    return eval_expr(e, x);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

inline bool in_expr_domain(const NcExpr& e, const MatTuple& x) { return try_eval_expr(e, x).has_value(); }

/// e evaluated over a unital algebra.
template <UnitalAlgebra A>
typename A::Element eval_expr_algebra(const NcExpr& e, const std::vector<typename A::Element>& a, const A& alg) {
  if (e.arity() > a.size()) throw ShapeError("expression arity exceeds number of algebra elements");
  std::vector<int> path;
  return detail::eval_alg(e.node(), a, alg, path);
}

// --------------------------------------------------------------------------
// Sampling-based equivalence.

struct EquivalenceVerdict {
  /// True when no sampled common-domain point separated the expressions.
  /// This is never a proof of equivalence.
  bool equivalent_up_to_sampling = true;
  std::size_t compared = 0;  // points in both domains
  std::optional<MatTuple> counterexample;
  std::optional<Mat> value1, value2;
};

inline EquivalenceVerdict equivalence_check(const NcExpr& e1, const NcExpr& e2, std::size_t trials,
                                            const std::vector<std::size_t>& levels, Rng& rng, long bound = 3,
                                            std::size_t d = 0) {
  d = std::max({d, e1.arity(), e2.arity(), std::size_t{1}});
  EquivalenceVerdict v;
  for (std::size_t n : levels) {
    for (std::size_t t = 0; t < trials; ++t) {
      MatTuple x = random_tuple(rng, d, n, bound);
      auto a = try_eval_expr(e1, x);
      if (!a) continue;
      auto b = try_eval_expr(e2, x);
      if (!b) continue;
      ++v.compared;
      if (!(*a == *b)) {
        v.equivalent_up_to_sampling = false;
        v.counterexample = x;
        v.value1 = std::move(a);
        v.value2 = std::move(b);
        return v;
      }
    }
  }
  return v;
}

}  // namespace ncreal

#endif  // NCREAL_EXPR_HPP
