#pragma once

// End-to-end analyses on top of Psi: M-matrix evaluation, real pole search,
// residue reports, ranks, the Bennewitz rank criterion and sector sampling of
// Im(lambda^2 M_N) near a pole.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/laurent.hpp"
#include "helpcalc/riccati.hpp"
#include "helpcalc/taylor.hpp"

namespace helpcalc {

inline constexpr int kDefaultPoleGrid = 64;
inline constexpr int kGoldenSectionCap = 200;
inline constexpr int kDefaultResidueOrder = 3;

inline constexpr const char* kConventionNote =
    "M_N Nevanlinna-normalized (Im M_N > 0 for Im lambda > 0), M_D = -M_N^{-1}; "
    "residues of M_D are negative semidefinite";

/// M_N or M_D at complex lambda.
inline ComplexMat2 evaluate_m(const Problem& prob, BoundaryCondition bc, Complex lambda, Complex alpha,
                              const IntegratorSettings& settings) {
  return m_from_psi(compute_psi(prob, bc, lambda, alpha, settings));
}

/// Default |g| threshold below which a real lambda is taken to be a pole.
inline double default_pole_tol(Complex alpha) { return 1e-8 * (1.0 + std::norm(alpha)); }

/// |a_0| threshold for deciding that M has a pole at a given lambda0.
inline double pole_presence_tol(Complex alpha) { return 1e-6 * (1.0 + std::norm(alpha)); }

struct PoleLocation {
  double lambda = 0.0;
  /// |g| at lambda.
  double g_abs = 0.0;
  int iterations = 0;
};

struct PoleSearchOptions {
  int grid = kDefaultPoleGrid;
  /// Zero selects default_pole_tol(alpha).
  double pole_tol = 0.0;
  int max_iterations = kGoldenSectionCap;
};

namespace detail {

inline double g_abs_at(const Problem& prob, BoundaryCondition bc, double lambda, Complex alpha,
                       const IntegratorSettings& settings) {
  return std::abs(pole_denominator(compute_psi(prob, bc, lambda, alpha, settings).psi, alpha));
}

inline PoleLocation golden_section(const std::function<double(double)>& f, double a, double b, int cap) {
  const double r = std::numbers::phi - 1.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < cap; ++it) {
    if (std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? PoleLocation{c, fc, it} : PoleLocation{d, fd, it};
}

}  // namespace detail

/// All real poles of M (for `bc`) in [lo, hi]: local minima of |g| on a
/// uniform grid, each refined by golden section and kept when |g| drops
/// below the pole tolerance. Ascending.
inline std::vector<PoleLocation> locate_poles(const Problem& prob, BoundaryCondition bc, double lo, double hi,
                                              Complex alpha, const IntegratorSettings& settings,
                                              const PoleSearchOptions& opts = {}) {
  if (alpha.imag() == 0.0) throw InvalidArgument("pole search on the real axis requires Im(alpha) != 0");
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) throw InvalidArgument("bracket must satisfy lo < hi");
  if (opts.grid < 3) throw InvalidArgument("grid needs at least 3 points");
  const double tol = opts.pole_tol > 0.0 ? opts.pole_tol : default_pole_tol(alpha);

  auto f = [&](double l) { return detail::g_abs_at(prob, bc, l, alpha, settings); };
  const int n = opts.grid;
  std::vector<double> xs(static_cast<std::size_t>(n)), gs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    gs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
  }

  std::vector<PoleLocation> out;
  for (int i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const bool left_ok = i == 0 || gs[u] <= gs[u - 1];
    const bool right_ok = i == n - 1 || gs[u] < gs[u + 1];
    if (!left_ok || !right_ok) continue;
    const double a = xs[static_cast<std::size_t>(std::max(i - 1, 0))];
    const double b = xs[static_cast<std::size_t>(std::min(i + 1, n - 1))];
    PoleLocation p = detail::golden_section(f, a, b, opts.max_iterations);
    if (gs[u] < p.g_abs) p = {xs[u], gs[u], p.iterations};
    if (p.g_abs < tol) out.push_back(p);
  }
  return out;
}

/// The pole in [lo, hi] with the smallest |g|.
inline double locate_pole(const Problem& prob, BoundaryCondition bc, double lo, double hi, Complex alpha,
                          const IntegratorSettings& settings, const PoleSearchOptions& opts = {}) {
  const auto poles = locate_poles(prob, bc, lo, hi, alpha, settings, opts);
  if (poles.empty()) {
    // report the best grid point for diagnosis
    double best_l = lo, best_g = INFINITY;
    const int n = std::max(opts.grid, 3);
    for (int i = 0; i < n; ++i) {
      const double l = lo + (hi - lo) * i / (n - 1);
      const double g = detail::g_abs_at(prob, bc, l, alpha, settings);
      if (g < best_g) best_g = g, best_l = l;
    }
    throw PoleNotFoundError("no pole found in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "]; smallest |g| = " + std::to_string(best_g) + " at lambda = " + std::to_string(best_l),
                            best_l, best_g);
  }
  return std::min_element(poles.begin(), poles.end(),
                          [](const PoleLocation& x, const PoleLocation& y) { return x.g_abs < y.g_abs; })
      ->lambda;
}

/// Number of singular values above scale_tol times the largest.
inline int numerical_rank(const ComplexMat2& m, double scale_tol) {
  if (!(scale_tol > 0.0)) throw InvalidArgument("scale_tol must be positive");
  const auto sv = singular_values(m);
  if (sv[0] == 0.0) return 0;
  return (sv[0] > 0.0 ? 1 : 0) + (sv[1] > scale_tol * sv[0] ? 1 : 0);
}

inline double default_rank_tol(const ComplexMat2& residue, double error_estimate) {
  const double n = sup_norm(residue);
  return std::max(1e-6, n > 0.0 ? 10.0 * error_estimate / n : 0.0);
}

struct ResidueReport {
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double lambda0 = 0.0;
  Complex alpha;
  /// False when |a_0| shows that M has no pole at lambda0; the residue is
  /// then zero and the rank 0.
  bool pole_present = true;
  ComplexMat2 residue;
  double realness_defect = 0.0;
  Complex det_residue;
  double abs_a0 = 0.0;
  double abs_a1 = 0.0;
  LaurentBranch branch = LaurentBranch::A1Nonzero;
  int numerical_rank = 0;
  double error_estimate = 0.0;
  double x_used = 0.0;
  double tol_used = 0.0;
  TaylorSeries taylor;
  std::string convention = kConventionNote;

  bool target_reached() const { return taylor.status == TaylorStatus::Ok; }
};

/// Residue of M (for `bc`) at the real point lambda0. Not reaching the target
/// accuracy is reported through taylor.status, not thrown.
inline ResidueReport residue_report(const Problem& prob, BoundaryCondition bc, double lambda0, Complex alpha,
                                    const IntegratorSettings& settings, double target_acc,
                                    int k = kDefaultResidueOrder, const TaylorOptions& opts = {}) {
  ResidueReport r;
  r.bc = bc;
  r.lambda0 = lambda0;
  r.alpha = alpha;
  r.x_used = prob.truncation_x();
  r.tol_used = settings.rel_tol;
  r.taylor = adaptive_taylor(prob, bc, lambda0, k, alpha, settings, target_acc, opts);

  const auto a = denominator_coeffs(r.taylor.coeffs, alpha);
  r.abs_a0 = std::abs(a[0]);
  r.abs_a1 = a.size() > 1 ? std::abs(a[1]) : 0.0;
  if (r.abs_a0 > pole_presence_tol(alpha)) {
    r.pole_present = false;
    r.residue = ComplexMat2::zero();
    r.det_residue = 0.0;
    r.numerical_rank = 0;
    r.error_estimate = r.taylor.max_requested_error();
    return r;
  }

  const LaurentSeries ls = laurent_from_taylor(r.taylor, alpha, settings.rel_tol);
  r.branch = ls.branch;
  r.residue = ls.m_minus1;
  r.realness_defect = ls.realness_defect;
  r.det_residue = det(ls.m_minus1);

  // residue from the penultimate Taylor approximation, same branch
  double spread = 0.0;
  if (!r.taylor.previous.empty()) {
    try {
      const LaurentSeries prev = laurent_from_coeffs(r.taylor.previous, alpha, settings.rel_tol, lambda0, ls.branch);
      spread = sup_norm(prev.m_minus1 - ls.m_minus1);
    } catch (const Error&) {
      spread = INFINITY;
    }
  }
  r.error_estimate = std::max(spread, r.realness_defect);
  r.numerical_rank = numerical_rank(r.residue, default_rank_tol(r.residue, r.error_estimate));
  return r;
}

enum class HelpOutcome { InequalityHolds, CriterionNotMet };

inline const char* to_string(HelpOutcome o) {
  return o == HelpOutcome::InequalityHolds ? "InequalityHolds" : "CriterionNotMet";
}

struct HelpVerdict {
  int rank_d = 0;
  int rank_n = 0;
  int n = 2;
  HelpOutcome outcome = HelpOutcome::CriterionNotMet;
  double lambda0 = 0.0;
  std::string notes;

  /// e.g. "InequalityHolds (rank 1 + rank 1 = 2)".
  std::string summary() const {
    return std::string(to_string(outcome)) + " (rank " + std::to_string(rank_d) + " + rank " +
           std::to_string(rank_n) + " = " + std::to_string(rank_d + rank_n) + ")";
  }
};

/// Bennewitz rank criterion for n = 2.
inline HelpVerdict bennewitz_check(int rank_d, int rank_n) {
  if (rank_d < 0 || rank_d > 2 || rank_n < 0 || rank_n > 2) throw InvalidArgument("ranks must be in 0..2");
  HelpVerdict v;
  v.rank_d = rank_d;
  v.rank_n = rank_n;
  if (rank_d + rank_n == v.n) {
    v.outcome = HelpOutcome::InequalityHolds;
    v.notes = "rank(sigma_D) + rank(sigma_N) = 2: a HELP inequality holds";
  } else {
    v.outcome = HelpOutcome::CriterionNotMet;
    v.notes = "rank(sigma_D) + rank(sigma_N) != 2: no HELP inequality is expected, "
              "but nonexistence is conjectured, not proved";
  }
  return v;
}

struct VerdictResult {
  HelpVerdict verdict;
  ResidueReport dirichlet;
  ResidueReport neumann;
};

/// Residues of M_D and M_N at lambda0 and the resulting verdict. A matrix
/// without a pole at lambda0 contributes rank 0.
inline VerdictResult help_verdict(const Problem& prob, double lambda0, Complex alpha,
                                  const IntegratorSettings& settings, double target_acc) {
  VerdictResult out;
  out.dirichlet = residue_report(prob, BoundaryCondition::Dirichlet, lambda0, alpha, settings, target_acc);
  out.neumann = residue_report(prob, BoundaryCondition::Neumann, lambda0, alpha, settings, target_acc);
  out.verdict = bennewitz_check(out.dirichlet.numerical_rank, out.neumann.numerical_rank);
  out.verdict.lambda0 = lambda0;
  if (!out.dirichlet.pole_present && !out.neumann.pole_present) {
    out.verdict.notes += "; neither M_D nor M_N has a pole at this lambda0";
  }
  return out;
}

struct SectorSample {
  double rho = 0.0;
  double theta = 0.0;
  Complex lambda;
  /// Smallest eigenvalue of the symmetrized Im(-/+ lambda'^2 M_N).
  double min_eigenvalue = 0.0;
  bool ok = true;
  std::string error;
};

struct SectorScan {
  double lambda0 = 0.0;
  std::vector<SectorSample> samples;
  /// Extent of the first-quadrant (plus) and third-quadrant (minus) grids:
  /// largest rho and smallest angle from the real axis.
  double rho_plus = 0.0, theta_plus = 0.0;
  double rho_minus = 0.0, theta_minus = 0.0;

  bool all_positive() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const SectorSample& s) { return s.ok && s.min_eigenvalue > 0.0; });
  }
};

/// Samples M_N at lambda0 + rho e^{i theta}. First-quadrant angles use
/// Im(-lambda'^2 M_N), third-quadrant angles Im(lambda'^2 M_N).
inline SectorScan sector_scan(const Problem& prob, double lambda0, const std::vector<double>& rhos,
                              const std::vector<double>& thetas, Complex alpha, const IntegratorSettings& settings) {
  const double pi = std::numbers::pi;
  for (double t : thetas) {
    const bool first = t > 0.0 && t < pi / 2;
    const bool third = t > pi && t < 1.5 * pi;
    if (!first && !third) throw InvalidArgument("angles must lie in (0, pi/2) or (pi, 3pi/2)");
  }
  for (double r : rhos) {
    if (!(r > 0.0)) throw InvalidArgument("radii must be positive");
  }

  SectorScan scan;
  scan.lambda0 = lambda0;
  scan.theta_plus = pi / 2;
  scan.theta_minus = pi / 2;
  for (double rho : rhos) {
    for (double theta : thetas) {
      const bool first = theta < pi;
      SectorSample s;
      s.rho = rho;
      s.theta = theta;
      const Complex shift = std::polar(rho, theta);
      s.lambda = lambda0 + shift;
      try {
        const ComplexMat2 m = evaluate_m(prob, BoundaryCondition::Neumann, s.lambda, alpha, settings);
        const ComplexMat2 h = (first ? -1.0 : 1.0) * (shift * shift) * m;
        s.min_eigenvalue = symmetric_eigenvalues(imag_part(h))[0];
      } catch (const Error& e) {
        s.ok = false;
        s.error = e.what();
      }
      if (first) {
        scan.rho_plus = std::max(scan.rho_plus, rho);
        scan.theta_plus = std::min(scan.theta_plus, theta);
      } else {
        scan.rho_minus = std::max(scan.rho_minus, rho);
        scan.theta_minus = std::min(scan.theta_minus, theta - pi);
      }
      scan.samples.push_back(std::move(s));
    }
  }
  return scan;
}

}  // namespace helpcalc
