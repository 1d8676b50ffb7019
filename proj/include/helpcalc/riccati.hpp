#pragma once

// Desingularized variable Psi = (alpha I + M^{-1})^{-1}, computed from the
// Riccati equation for Gamma(x) = (alpha I + U V^{-1}(x))^{-1} integrated from
// x = X down to x = 0.
//
// Sign conventions. With Z(X) = (0; I) the shot U V^{-1}(0) approximates
// -M_N, where M_N is the Nevanlinna-normalized Neumann matrix
// (Im M_N > 0 for Im lambda > 0). Hence
//   Dirichlet: M_D = (U V^{-1}(0))^{-1},    Psi_D = (alpha I + U V^{-1}(0))^{-1}
//   Neumann:   M_N = -U V^{-1}(0),          Psi_N = (alpha I - V U^{-1}(0))^{-1}
// Psi_N is obtained from the same Riccati equation after the symplectic
// rotation (u, v) -> (v, -u), which maps the shot to Gamma(X) = 0.

#include <cmath>
#include <string>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/odeint.hpp"
#include "helpcalc/problem.hpp"

namespace helpcalc {

enum class BoundaryCondition { Dirichlet, Neumann };

inline const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

struct PsiValue {
  Complex lambda;
  Complex alpha;
  ComplexMat2 psi;
  std::string label;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double symmetry_defect = 0.0;
  /// Set when the symmetry defect exceeds 1e4 * rel_tol.
  bool symmetry_warning = false;
};

/// Right-hand side of the Riccati equation for Gamma.
inline ComplexMat2 gamma_rhs(const SBlocks& s, const ComplexMat2& gamma, Complex alpha) {
  const ComplexMat2 r = ComplexMat2::identity() - alpha * gamma;
  return -(gamma * s.s21 * r + r * s.s12 * gamma + r * s.s11 * r + gamma * s.s22 * gamma);
}

/// Blocks of the rotated system (u, v) -> (v, -u).
inline SBlocks rotate_blocks(const SBlocks& s) { return {s.s22, -s.s21, -s.s12, s.s11}; }

namespace detail {

inline void check_psi_args(Complex lambda, Complex alpha) {
  if (alpha == Complex(0.0)) throw InvalidArgument("alpha must be non-zero");
  if (lambda.imag() == 0.0 && alpha.imag() == 0.0) {
    throw InvalidArgument("real lambda requires Im(alpha) != 0");
  }
}

inline auto psi_rhs(const Problem& prob, BoundaryCondition bc, Complex lambda, Complex alpha) {
  const bool rotated = bc == BoundaryCondition::Neumann;
  return [&prob, rotated, lambda, alpha](double x, const ComplexMat2& g) {
    const SBlocks s = s_blocks(prob, x, lambda);
    return gamma_rhs(rotated ? rotate_blocks(s) : s, g, alpha);
  };
}

inline ComplexMat2 psi_start(BoundaryCondition bc, Complex alpha) {
  return bc == BoundaryCondition::Neumann ? ComplexMat2::zero() : ComplexMat2::identity() / alpha;
}

inline PsiValue make_psi_value(const Problem& prob, BoundaryCondition bc, Complex lambda, Complex alpha,
                               const ComplexMat2& psi, double rel_tol) {
  PsiValue out;
  out.lambda = lambda;
  out.alpha = alpha;
  out.label = prob.label();
  out.bc = bc;
  out.psi = psi;
  out.symmetry_defect = symmetry_defect(psi);
  out.symmetry_warning = out.symmetry_defect > 1e4 * rel_tol;
  return out;
}

}  // namespace detail

/// Psi(lambda) for the requested boundary convention.
inline PsiValue compute_psi(const Problem& prob, BoundaryCondition bc, Complex lambda, Complex alpha,
                            const IntegratorSettings& settings) {
  detail::check_psi_args(lambda, alpha);
  const ComplexMat2 psi = integrate(detail::psi_rhs(prob, bc, lambda, alpha), prob.truncation_x(), 0.0,
                                    detail::psi_start(bc, alpha), settings);
  return detail::make_psi_value(prob, bc, lambda, alpha, psi, settings.rel_tol);
}

/// Dirichlet convention.
inline PsiValue compute_psi(const Problem& prob, Complex lambda, Complex alpha, const IntegratorSettings& settings) {
  return compute_psi(prob, BoundaryCondition::Dirichlet, lambda, alpha, settings);
}

/// Denominator 1 - alpha tr(Psi) + alpha^2 det(Psi) = det(I - alpha Psi); it
/// vanishes exactly at the poles of M.
inline Complex pole_denominator(const ComplexMat2& psi, Complex alpha) {
  return 1.0 - alpha * trace(psi) + alpha * alpha * det(psi);
}

/// M = (Psi - alpha det(Psi) I) / (1 - alpha tr(Psi) + alpha^2 det(Psi)).
inline ComplexMat2 m_from_psi(const ComplexMat2& psi, Complex alpha) {
  const Complex den = pole_denominator(psi, alpha);
  const double a = std::abs(alpha);
  const double n = sup_norm(psi);
  if (std::abs(den) <= 1e-13 * (1.0 + a * a * n * n)) {
    throw PoleProximityError("M requested too close to a pole (denominator " + std::to_string(std::abs(den)) +
                             "); use the Laurent expansion instead");
  }
  return (psi - alpha * det(psi) * ComplexMat2::identity()) / den;
}

inline ComplexMat2 m_from_psi(const PsiValue& v) { return m_from_psi(v.psi, v.alpha); }

}  // namespace helpcalc
