#pragma once

// Adaptive Dormand-Prince 5(4) integrator for ODEs whose state is a 2x2
// complex matrix. Integrates in either x-direction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"

namespace helpcalc {

struct IntegratorSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  long max_steps = 10'000'000;
  /// Zero selects a starting step automatically.
  double initial_step = 0.0;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integration tolerances must be positive");
    if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
    if (initial_step < 0.0) throw ConfigError("initial_step must be non-negative");
  }
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

namespace detail {

// Dormand & Prince (1980) RK5(4)7M tableau.
struct DoPri {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // b - bhat
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

/// Max over the 8 real components.
inline double component_max(const ComplexMat2& m) {
  double r = 0.0;
  for (const auto& v : m.a) r = std::max({r, std::abs(v.real()), std::abs(v.imag())});
  return r;
}

}  // namespace detail

/// Integrates Y' = rhs(x, Y) from x0 to x1 (either order). Each accepted step
/// has estimated local error <= rel_tol * |Y| + abs_tol in the max norm over
/// the 8 real components.
template <typename Rhs>
ComplexMat2 integrate(Rhs&& rhs, double x0, double x1, const ComplexMat2& y0, const IntegratorSettings& settings,
                      IntegrationStats* stats = nullptr) {
  settings.validate();
  using T = detail::DoPri;
  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;

  if (x0 == x1) return y0;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  ComplexMat2 y = y0;
  double x = x0;
  ComplexMat2 k1 = rhs(x, y);
  ++st.rhs_evals;

  auto scale_of = [&](const ComplexMat2& a, const ComplexMat2& b) {
    return settings.abs_tol + settings.rel_tol * std::max(detail::component_max(a), detail::component_max(b));
  };

  double h = settings.initial_step;
  if (h == 0.0) {
    // Hairer-Norsett-Wanner starting step
    const double sc = scale_of(y, y);
    const double d0 = detail::component_max(y) / sc;
    const double d1 = detail::component_max(k1) / sc;
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const ComplexMat2 k2 = rhs(x + dir * h0, y + (dir * h0) * k1);
    ++st.rhs_evals;
    const double d2 = detail::component_max(k2 - k1) / sc / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, span);

  const double eps = std::numeric_limits<double>::epsilon();
  while ((x1 - x) * dir > 0.0) {
    if (st.accepted + st.rejected >= settings.max_steps) {
      throw IntegrationError("maximum number of steps exceeded", x);
    }
    if (h < 16.0 * eps * std::max(std::abs(x), 1.0)) {
      throw IntegrationError("step size underflow", x);
    }
    const bool last = h >= std::abs(x1 - x);
    const double hs = last ? (x1 - x) : dir * h;

    const ComplexMat2 k2 = rhs(x + T::c2 * hs, y + hs * (T::a21 * k1));
    const ComplexMat2 k3 = rhs(x + T::c3 * hs, y + hs * (T::a31 * k1 + T::a32 * k2));
    const ComplexMat2 k4 = rhs(x + T::c4 * hs, y + hs * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const ComplexMat2 k5 =
        rhs(x + T::c5 * hs, y + hs * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const ComplexMat2 k6 =
        rhs(x + hs, y + hs * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
    const ComplexMat2 ynew = y + hs * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    const double xnew = last ? x1 : x + hs;
    const ComplexMat2 k7 = rhs(xnew, ynew);
    st.rhs_evals += 6;

    const ComplexMat2 err = hs * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const double ratio = detail::component_max(err) / scale_of(y, ynew);

    if (!std::isfinite(ratio)) {
      ++st.rejected;
      h *= 0.1;
      continue;
    }
    if (ratio <= 1.0) {
      ++st.accepted;
      x = xnew;
      y = ynew;
      k1 = k7;  // FSAL
      const double fac = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      h = std::abs(hs) * fac;
    } else {
      ++st.rejected;
      h = std::abs(hs) * std::max(0.2, 0.9 * std::pow(ratio, -0.2));
    }
  }
  return y;
}

}  // namespace helpcalc
