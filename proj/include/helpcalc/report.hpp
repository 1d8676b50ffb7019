#pragma once

// Text output for analyses: a flat key=value record for machines and a
// tabular layout for people. Complex numbers print as "re,im" in records and
// parse from "a+bi" on input.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/spectral.hpp"

namespace helpcalc {

/// %.17g, which round-trips every finite double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_complex(Complex z) { return format_real(z.real()) + "," + format_real(z.imag()); }

namespace detail {

inline double parse_real_strict(std::string_view s, std::string_view what) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

inline double parse_real(std::string_view s) { return detail::parse_real_strict(s, "number"); }

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i" (spaces ignored, j accepted
/// for i). Both parts must be finite.
inline Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {detail::parse_real_strict(s, "complex number"), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  const double re = re_part.empty() ? 0.0 : detail::parse_real_strict(re_part, "complex number");
  return {re, detail::parse_real_strict(im_part, "complex number")};
}

/// Ordered key=value record.
class Record {
 public:
  void add(std::string key, std::string value) { fields_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double v) { add(std::move(key), format_real(v)); }
  void add(std::string key, Complex z) { add(std::move(key), format_complex(z)); }
  void add(std::string key, int v) { add(std::move(key), std::to_string(v)); }
  void add(std::string key, bool v) { add(std::move(key), std::string(v ? "true" : "false")); }
  void add(std::string key, const char* v) { add(std::move(key), std::string(v)); }

  void add_matrix(const std::string& prefix, const ComplexMat2& m) {
    add(prefix + "_11", m(0, 0));
    add(prefix + "_12", m(0, 1));
    add(prefix + "_21", m(1, 0));
    add(prefix + "_22", m(1, 1));
  }

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : fields_) out += k + "=" + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

inline void add_residue_fields(Record& rec, const std::string& prefix, const ResidueReport& r) {
  rec.add(prefix + "bc", to_string(r.bc));
  rec.add(prefix + "lambda0", r.lambda0);
  rec.add(prefix + "alpha", r.alpha);
  rec.add(prefix + "X", r.x_used);
  rec.add(prefix + "tol", r.tol_used);
  rec.add(prefix + "pole_present", r.pole_present);
  rec.add_matrix(prefix + "residue", r.residue);
  rec.add(prefix + "error_estimate", r.error_estimate);
  rec.add(prefix + "realness_defect", r.realness_defect);
  rec.add(prefix + "det_residue", r.det_residue);
  rec.add(prefix + "abs_a0", r.abs_a0);
  rec.add(prefix + "abs_a1", r.abs_a1);
  rec.add(prefix + "branch", to_string(r.branch));
  rec.add(prefix + "rank", r.numerical_rank);
  rec.add(prefix + "taylor_status", to_string(r.taylor.status));
  rec.add(prefix + "taylor_m", r.taylor.m_final);
  rec.add(prefix + "taylor_mu", r.taylor.mu_final);
  for (std::size_t i = 0; i < r.taylor.error_estimates.size(); ++i) {
    rec.add(prefix + "psi_error_" + std::to_string(i), r.taylor.error_estimates[i]);
  }
  rec.add(prefix + "convention", r.convention);
}

namespace detail {

inline std::string sci(double v, int digits = 1) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

inline std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string complex_text(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g %c i%.2g", z.real(), z.imag() < 0 ? '-' : '+', std::abs(z.imag()));
  return buf;
}

}  // namespace detail

/// Residue report laid out like a results table.
inline std::string format_residue_human(const ResidueReport& r) {
  std::string o;
  o += "Using alpha = " + detail::complex_text(r.alpha) + ", truncating [0,inf) to [0," + format_real(r.x_used) + "]:\n";
  const std::string name = r.bc == BoundaryCondition::Dirichlet ? "M_D" : "M_N";
  o += "Res(" + name + ", lambda=" + format_real(r.lambda0) + ") =\n";
  if (!r.pole_present) {
    o += "  0   (no pole: |a0| = " + detail::sci(r.abs_a0, 2) + ")\n";
  } else {
    for (int i = 0; i < 2; ++i) {
      char line[160];
      std::snprintf(line, sizeof line, "  [ %12.5f %12.5f ] %s [ %9.1e %9.1e ]\n", r.residue(i, 0).real(),
                    r.residue(i, 1).real(), i == 0 ? "   " : "+ i", r.residue(i, 0).imag(), r.residue(i, 1).imag());
      o += line;
    }
  }
  o += "Code error estimate (sup norm): " + detail::sci(r.error_estimate) + "\n";
  o += "Determinant of residue matrix: " + detail::complex_text(r.det_residue) + "\n";
  o += "Value of |a1|: " + detail::sci(r.abs_a1) + "\n";
  o += "Integration tolerance for Psi: " + detail::sci(r.tol_used, 0) + "\n";
  o += "Numerical rank: " + std::to_string(r.numerical_rank) + "\n";
  if (!r.target_reached()) o += "Warning: target accuracy not reached\n";
  return o;
}

}  // namespace helpcalc
