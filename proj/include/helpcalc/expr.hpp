#pragma once

// Coefficient expressions in one real variable x.
//
// Grammar (whitespace is insignificant):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | func '(' sum ')' | '(' sum ')'
//   func    := exp | sin | cos | sqrt

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "helpcalc/errors.hpp"

namespace helpcalc {

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Sqrt };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // Number only
  std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

inline double int_power(double base, long long n) {
  if (n < 0) {
    if (base == 0.0) throw DomainError("division by zero in ^ (zero base, negative exponent)");
    return 1.0 / int_power(base, -n);
  }
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

inline double power(double base, double e) {
  if (std::nearbyint(e) == e && std::abs(e) < 1e15) {
    return checked(int_power(base, static_cast<long long>(e)), "^");
  }
  if (base > 0.0) return checked(std::exp(e * std::log(base)), "^");
  if (base == 0.0 && e > 0.0) return 0.0;
  throw DomainError("non-integer power of a non-positive base");
}

inline double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case NodeKind::Number:
      return n.value;
    case NodeKind::Variable:
      return x;
    case NodeKind::Add:
      return eval_node(*n.args[0], x) + eval_node(*n.args[1], x);
    case NodeKind::Sub:
      return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
    case NodeKind::Mul:
      return eval_node(*n.args[0], x) * eval_node(*n.args[1], x);
    case NodeKind::Div: {
      const double num = eval_node(*n.args[0], x);
      const double den = eval_node(*n.args[1], x);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case NodeKind::Pow:
      return power(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    case NodeKind::Neg:
      return -eval_node(*n.args[0], x);
    case NodeKind::Exp:
      return checked(std::exp(eval_node(*n.args[0], x)), "exp");
    case NodeKind::Sin:
      return std::sin(eval_node(*n.args[0], x));
    case NodeKind::Cos:
      return std::cos(eval_node(*n.args[0], x));
    case NodeKind::Sqrt: {
      const double v = eval_node(*n.args[0], x);
      if (v < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(v);
    }
  }
  return 0.0;
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::Exp: return "exp";
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Sqrt: return "sqrt";
    default: return "";
  }
}

inline void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number:
      // negative literals only arise from hand-built trees; keep them atomic
      if (n.value < 0.0) {
        out += "(" + format_number(n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case NodeKind::Variable:
      out += 'x';
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case NodeKind::Exp:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Sqrt:
      out += function_name(n.kind);
      out += '(';
      print_node(*n.args[0], out);
      out += ')';
      return;
    default:
      break;
  }
  static constexpr char ops[] = {'+', '-', '*', '/', '^'};
  const char op = ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
  out += '(';
  print_node(*n.args[0], out);
  out += op;
  print_node(*n.args[1], out);
  out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::shared_ptr<const ExprNode> parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError(pos_, "empty expression");
    auto root = sum();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    }
    return root;
  }

 private:
  using NodePtr = std::shared_ptr<const ExprNode>;

  static NodePtr make(NodeKind k, std::vector<NodePtr> args, double v = 0.0) {
    return std::make_shared<const ExprNode>(ExprNode{k, v, std::move(args)});
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr sum() {
    auto lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = make(NodeKind::Add, {lhs, product()});
      } else if (accept('-')) {
        lhs = make(NodeKind::Sub, {lhs, product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(NodeKind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(NodeKind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(NodeKind::Neg, {unary()});
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(NodeKind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) throw ParseError(start, "malformed number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return make(NodeKind::Number, {}, v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make(NodeKind::Variable, {});
    NodeKind k;
    if (name == "exp") {
      k = NodeKind::Exp;
    } else if (name == "sin") {
      k = NodeKind::Sin;
    } else if (name == "cos") {
      k = NodeKind::Cos;
    } else if (name == "sqrt") {
      k = NodeKind::Sqrt;
    } else {
      throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    auto arg = sum();
    expect(')');
    return make(k, {arg});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Immutable parsed expression. Cheap to copy; safe to evaluate concurrently.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr parse(std::string_view text) { return Expr(detail::Parser(text).parse()); }

  static Expr constant(double v) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{NodeKind::Number, v, {}}));
  }

  double operator()(double x) const { return detail::eval_node(*root_, x); }

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
  }

  const ExprNode& root() const { return *root_; }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  std::shared_ptr<const ExprNode> root_;
};

inline Expr parse(std::string_view text) { return Expr::parse(text); }

inline double eval(const Expr& e, double x) { return e(x); }

}  // namespace helpcalc
