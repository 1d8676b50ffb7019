#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/expr.hpp"

namespace helpcalc {

/// Coefficients of ((p y'')' - (s y'))' + q y = lambda w y.
struct CoefficientSet {
  Expr p;
  Expr s;
  Expr q;
  Expr w = Expr::constant(1.0);
};

/// 2x2 blocks of the symmetric 4x4 Hamiltonian matrix S(x; lambda) acting on
/// (y, y', -(p y'')' + s y', p y'').
struct SBlocks {
  ComplexMat2 s11;
  ComplexMat2 s12;
  ComplexMat2 s21;
  ComplexMat2 s22;
};

/// Fourth-order problem on [0, X], X standing in for infinity.
class Problem {
 public:
  static constexpr int kPositivityGrid = 1000;

  Problem(CoefficientSet coeffs, double truncation_x, std::string label = {})
      : coeffs_(std::move(coeffs)), x_(truncation_x), label_(std::move(label)) {
    if (!(std::isfinite(x_) && x_ > 0.0)) throw ConfigError("X must be a finite positive number");
    validate();
  }

  const CoefficientSet& coeffs() const { return coeffs_; }
  double truncation_x() const { return x_; }
  const std::string& label() const { return label_; }

  /// Same coefficients on a different interval [0, X].
  Problem with_truncation(double truncation_x) const { return Problem(coeffs_, truncation_x, label_); }

 private:
  void validate() const {
    for (int i = 0; i <= kPositivityGrid; ++i) {
      const double x = x_ * static_cast<double>(i) / kPositivityGrid;
      double p = 0.0, w = 0.0;
      try {
        p = coeffs_.p(x);
        w = coeffs_.w(x);
        (void)coeffs_.s(x);
        (void)coeffs_.q(x);
      } catch (const DomainError& e) {
        throw ConfigError("coefficient evaluation failed at x = " + std::to_string(x) + ": " + e.what());
      }
      if (i > 0 && !(p > 0.0)) throw ConfigError("p must be positive on (0, X]");
      if (!(w > 0.0)) throw ConfigError("w must be positive on [0, X]");
    }
  }

  CoefficientSet coeffs_;
  double x_;
  std::string label_;
};

/// S(x; lambda) in block form. Throws DomainError when p(x) == 0.
inline SBlocks s_blocks(const Problem& prob, double x, Complex lambda) {
  const auto& c = prob.coeffs();
  const double p = c.p(x);
  if (p == 0.0) throw DomainError("singular coefficient: p(x) = 0 at x = " + std::to_string(x));
  SBlocks b;
  b.s11 = ComplexMat2::diag(lambda * c.w(x) - c.q(x), -c.s(x));
  b.s12 = ComplexMat2(0.0, 0.0, 1.0, 0.0);
  b.s21 = ComplexMat2(0.0, 1.0, 0.0, 0.0);
  b.s22 = ComplexMat2::diag(0.0, 1.0 / p);
  return b;
}

// ---------------------------------------------------------------------------
// Config files: one `key = value` per line, '#' starts a comment. Expression
// and label values are double-quoted; X is a bare number.

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(const std::string& v, int line) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  throw ConfigError("line " + std::to_string(line) + ": expected a double-quoted value");
}

inline Expr parse_coefficient(const std::string& key, const std::string& text, int line) {
  try {
    return Expr::parse(text);
  } catch (const ParseError& e) {
    throw ConfigError("line " + std::to_string(line) + ": coefficient " + key + ": " + e.what());
  }
}

}  // namespace detail

inline Problem parse_problem_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string body = raw;
    // '#' inside quotes is not a comment
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    body = detail::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key != "p" && key != "s" && key != "q" && key != "w" && key != "X" && key != "label") {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    if (entries.count(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    entries[key] = {value, line};
  }

  for (const char* required : {"p", "s", "q", "X"}) {
    if (!entries.count(required)) throw ConfigError(std::string("missing key '") + required + "'");
  }

  CoefficientSet coeffs;
  for (const char* key : {"p", "s", "q", "w"}) {
    auto it = entries.find(key);
    if (it == entries.end()) continue;
    const auto& [value, ln] = it->second;
    Expr e = detail::parse_coefficient(key, detail::unquote(value, ln), ln);
    if (key[0] == 'p') coeffs.p = e;
    if (key[0] == 's') coeffs.s = e;
    if (key[0] == 'q') coeffs.q = e;
    if (key[0] == 'w') coeffs.w = e;
  }

  const auto& [xs, xline] = entries["X"];
  double x = 0.0;
  std::size_t used = 0;
  try {
    x = std::stod(xs, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != xs.size() || xs.empty()) throw ConfigError("line " + std::to_string(xline) + ": X is not a number");

  std::string label;
  if (auto it = entries.find("label"); it != entries.end()) label = detail::unquote(it->second.first, it->second.second);
  return Problem(std::move(coeffs), x, std::move(label));
}

inline Problem load_problem_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_problem_config(ss.str());
}

// ---------------------------------------------------------------------------
// Bundled example problems.

namespace fixtures {

/// y'''' - (s y')' + q y = lambda y with a double Dirichlet eigenvalue at 0.
inline constexpr std::string_view kEq1 = R"cfg(label = "eq1"
p = "1"
s = "8*x^2*(x^4-3*x^2-5)/(x^2+1)^2"
q = "4*(4*x^12-24*x^10-7*x^8+96*x^6+46*x^4-60*x^2-15)/(x^2+1)^4"
w = "1"
X = 10
)cfg";

/// Formal square of -y'' + x^2 y.
inline constexpr std::string_view kEq2 = R"cfg(label = "eq2"
p = "1"
s = "2*x^2"
q = "x^4-2"
w = "1"
X = 20
)cfg";

/// Formal square of -y'' + exp(x) y.
inline constexpr std::string_view kEq3 = R"cfg(label = "eq3"
p = "1"
s = "2*exp(x)"
q = "exp(2*x)-exp(x)"
w = "1"
X = 10
)cfg";

inline Problem eq1() { return parse_problem_config(kEq1); }
inline Problem eq2() { return parse_problem_config(kEq2); }
inline Problem eq3() { return parse_problem_config(kEq3); }

/// Returns the bundled problem called `name` (eq1, eq2, eq3), if any.
inline std::optional<Problem> by_name(std::string_view name) {
  if (name == "eq1") return eq1();
  if (name == "eq2") return eq2();
  if (name == "eq3") return eq3();
  return std::nullopt;
}

}  // namespace fixtures

}  // namespace helpcalc
