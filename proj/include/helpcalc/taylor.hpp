#pragma once

// Taylor coefficients of Psi about a (real) point lambda0 from samples at
// lambda0 + mu / 2^j, with the adaptive choice of the degree m and the
// sampling radius |mu|.

#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/riccati.hpp"
#include "helpcalc/vandermonde.hpp"

namespace helpcalc {

enum class TaylorStatus { Ok, TargetNotReached };

inline const char* to_string(TaylorStatus s) { return s == TaylorStatus::Ok ? "ok" : "target-not-reached"; }

/// One candidate approximation considered by adaptive_taylor.
struct TaylorStep {
  enum class Phase { Initial, IncreaseM, DoubleMu };
  Phase phase;
  int m;
  Complex mu;
  /// Sup-norm change of Psi_0..Psi_k relative to the previously accepted
  /// approximation; infinite for the initial fit.
  double change;
  bool accepted;
};

struct TaylorSeries {
  Complex lambda0;
  Complex mu_final;
  int m_final = 0;
  /// Number of coefficients requested (k + 1 = requested + 1).
  int requested = 0;
  /// Psi_0 .. Psi_{m_final}.
  std::vector<ComplexMat2> coeffs;
  /// Sup-norm change of each coefficient between the final and the
  /// penultimate accepted approximations.
  std::vector<double> error_estimates;
  /// Penultimate accepted approximation (may be shorter than coeffs).
  std::vector<ComplexMat2> previous;
  TaylorStatus status = TaylorStatus::Ok;
  std::vector<TaylorStep> history;
  int integrations = 0;

  /// Largest error estimate among Psi_0..Psi_k.
  double max_requested_error() const {
    double e = 0.0;
    for (int i = 0; i <= requested && i < static_cast<int>(error_estimates.size()); ++i) {
      e = std::max(e, error_estimates[static_cast<std::size_t>(i)]);
    }
    return e;
  }
};

struct TaylorOptions {
  double start_mu = 0.025;
  double max_mu = 0.5;
  int max_m = 7;
  /// Direction of mu (normalized). The default samples straight up the
  /// imaginary axis.
  Complex direction = Complex(0.0, 1.0);
};

/// Psi(lambda0 + mu / 2^j) for j = 0..m.
inline std::vector<PsiValue> sample_psi(const Problem& prob, BoundaryCondition bc, Complex lambda0, Complex mu, int m,
                                        Complex alpha, const IntegratorSettings& settings) {
  if (mu.imag() == 0.0) throw InvalidArgument("mu must have a non-zero imaginary part");
  if (m < 0) throw InvalidArgument("m must be non-negative");
  std::vector<PsiValue> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    const Complex offset = mu * std::ldexp(1.0, -j);
    try {
      out.push_back(compute_psi(prob, bc, lambda0 + offset, alpha, settings));
    } catch (const IntegrationError& e) {
      throw IntegrationError("sample j = " + std::to_string(j) + ": " + e.what(), e.x_reached());
    }
  }
  return out;
}

inline std::vector<PsiValue> sample_psi(const Problem& prob, Complex lambda0, Complex mu, int m, Complex alpha,
                                        const IntegratorSettings& settings) {
  return sample_psi(prob, BoundaryCondition::Dirichlet, lambda0, mu, m, alpha, settings);
}

/// Taylor coefficients Psi_0..Psi_m from values at offsets mu, mu/2, ...,
/// mu/2^m (in that order).
inline std::vector<ComplexMat2> fit_taylor(std::span<const ComplexMat2> values, Complex mu, int m) {
  if (static_cast<int>(values.size()) != m + 1) throw InvalidArgument("need exactly m + 1 samples");
  std::vector<ComplexMat2> coeffs(static_cast<std::size_t>(m) + 1);
  const auto nodes = DualVandermondeSystem::geometric_nodes(m);
  for (int entry = 0; entry < 4; ++entry) {
    std::vector<Complex> g(static_cast<std::size_t>(m) + 1);
    // nodes ascend 2^-m..1, so the rhs runs from the smallest offset up
    for (int j = 0; j <= m; ++j) g[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(m - j)].a[entry];
    const auto a = bp_dual_solve({m, nodes, std::move(g)});
    Complex mu_pow = 1.0;
    for (int nu = 0; nu <= m; ++nu) {
      coeffs[static_cast<std::size_t>(nu)].a[entry] = a[static_cast<std::size_t>(nu)] / mu_pow;
      mu_pow *= mu;
    }
  }
  return coeffs;
}

inline std::vector<ComplexMat2> fit_taylor(std::span<const PsiValue> samples, Complex mu, int m) {
  std::vector<ComplexMat2> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.psi);
  return fit_taylor(std::span<const ComplexMat2>(values), mu, m);
}

namespace detail {

inline double coefficient_change(const std::vector<ComplexMat2>& a, const std::vector<ComplexMat2>& b, int k) {
  double d = 0.0;
  for (int i = 0; i <= k; ++i) d = std::max(d, sup_norm(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
  return d;
}

}  // namespace detail

/// First k + 1 Taylor coefficients of Psi about lambda0 (0 <= k <= 4).
///
/// Starts from |mu| = 0.025 with m = k + 1, raises m while successive
/// approximations of Psi_0..Psi_k improve (m <= 7), then doubles mu at fixed m
/// while they improve, until the target accuracy is met or |mu| would exceed
/// 0.5. A change that grows by more than a factor 2 counts as divergence and
/// the candidate is discarded.
inline TaylorSeries adaptive_taylor(const Problem& prob, BoundaryCondition bc, Complex lambda0, int k, Complex alpha,
                                    const IntegratorSettings& settings, double target_acc,
                                    const TaylorOptions& opts = {}) {
  if (k < 0 || k > 4) throw InvalidArgument("k must be in 0..4");
  if (!(target_acc > 0.0)) throw InvalidArgument("target accuracy must be positive");
  if (opts.max_m > kMaxVandermondeDegree || opts.max_m < k + 1) throw InvalidArgument("invalid max_m");

  if (opts.direction == Complex(0.0) || opts.direction.imag() == 0.0) {
    throw InvalidArgument("mu direction must have a non-zero imaginary part");
  }
  const Complex dir = opts.direction / std::abs(opts.direction);
  const Complex mu0 = opts.start_mu * dir;

  TaylorSeries ts;
  ts.lambda0 = lambda0;
  ts.requested = k;

  // samples keyed by e, offset = mu0 * 2^e
  std::map<int, ComplexMat2> cache;
  auto sample = [&](int e) -> const ComplexMat2& {
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    const Complex offset = mu0 * std::ldexp(1.0, e);
    try {
      ++ts.integrations;
      const ComplexMat2 v = compute_psi(prob, bc, lambda0 + offset, alpha, settings).psi;
      return cache.emplace(e, v).first->second;
    } catch (const IntegrationError& err) {
      throw IntegrationError("Taylor sample at offset (" + std::to_string(offset.real()) + ", " +
                                 std::to_string(offset.imag()) + "): " + err.what(),
                             err.x_reached());
    }
  };
  // fit of degree m with largest offset mu0 * 2^d
  auto fit = [&](int m, int d) {
    std::vector<ComplexMat2> values;
    for (int j = 0; j <= m; ++j) values.push_back(sample(d - j));
    return fit_taylor(std::span<const ComplexMat2>(values), mu0 * std::ldexp(1.0, d), m);
  };

  int m = k + 1;
  int d = 0;
  std::vector<ComplexMat2> current = fit(m, d);
  std::vector<ComplexMat2> previous;
  ts.history.push_back({TaylorStep::Phase::Initial, m, mu0, INFINITY, true});
  double last_change = INFINITY;

  auto error_of = [&](const std::vector<ComplexMat2>& cur, const std::vector<ComplexMat2>& prev) {
    return previous.empty() ? INFINITY : detail::coefficient_change(cur, prev, k);
  };

  // Returns true when the search should continue.
  auto consider = [&](std::vector<ComplexMat2> cand, TaylorStep::Phase phase, int cand_m, int cand_d) {
    const double change = detail::coefficient_change(cand, current, k);
    const Complex cand_mu = mu0 * std::ldexp(1.0, cand_d);
    if (!std::isfinite(change) || (std::isfinite(last_change) && change > 2.0 * last_change)) {
      ts.history.push_back({phase, cand_m, cand_mu, change, false});
      return false;
    }
    ts.history.push_back({phase, cand_m, cand_mu, change, true});
    const bool improving = !std::isfinite(last_change) || change < last_change;
    previous = std::move(current);
    current = std::move(cand);
    m = cand_m;
    d = cand_d;
    last_change = change;
    if (error_of(current, previous) <= target_acc) return false;
    return improving;
  };

  bool go_on = true;
  while (go_on && m < opts.max_m) go_on = consider(fit(m + 1, d), TaylorStep::Phase::IncreaseM, m + 1, d);

  const bool reached = !previous.empty() && error_of(current, previous) <= target_acc;
  if (!reached) {
    go_on = true;
    while (go_on && opts.start_mu * std::ldexp(1.0, d + 1) <= opts.max_mu * (1.0 + 1e-12)) {
      go_on = consider(fit(m, d + 1), TaylorStep::Phase::DoubleMu, m, d + 1);
    }
  }

  ts.m_final = m;
  ts.mu_final = mu0 * std::ldexp(1.0, d);
  ts.coeffs = current;
  ts.previous = previous;
  ts.error_estimates.resize(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    ts.error_estimates[i] = i < previous.size() ? sup_norm(current[i] - previous[i]) : sup_norm(current[i]);
  }
  ts.status = ts.max_requested_error() <= target_acc ? TaylorStatus::Ok : TaylorStatus::TargetNotReached;
  return ts;
}

}  // namespace helpcalc
