#pragma once

// Laurent expansion of M about a simple pole from the Taylor expansion of
// Psi. With
//   1 - alpha tr(Psi) + alpha^2 det(Psi) = a1 l + a2 l^2 + ...
//   Psi - alpha det(Psi) I             = A0 + A1 l + A2 l^2 + ...
// M is their quotient. When the residue has full rank Psi(0) = I / alpha,
// a1 = 0 and A0 = 0, and the quotient is taken one order higher.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/taylor.hpp"

namespace helpcalc {

inline constexpr int kMaxLaurentOrder = 4;

/// Coefficient of l^n in det(sum_k Psi_k l^k), for n <= psi.size() - 1.
inline Complex det_series_coeff(std::span<const ComplexMat2> psi, int n) {
  Complex sum = 0.0;
  for (int i = 0; 2 * i < n; ++i) sum += trace(adjugate(psi[static_cast<std::size_t>(i)]) * psi[static_cast<std::size_t>(n - i)]);
  if (n % 2 == 0) sum += det(psi[static_cast<std::size_t>(n / 2)]);
  return sum;
}

/// a_0..a_N of 1 - alpha tr(Psi) + alpha^2 det(Psi), N = min(4, size - 1).
/// a_0 vanishes at a pole and is returned for diagnostics.
inline std::vector<Complex> denominator_coeffs(std::span<const ComplexMat2> psi, Complex alpha) {
  const int n = std::min<int>(kMaxLaurentOrder, static_cast<int>(psi.size()) - 1);
  std::vector<Complex> a;
  for (int i = 0; i <= n; ++i) {
    Complex v = -alpha * trace(psi[static_cast<std::size_t>(i)]) + alpha * alpha * det_series_coeff(psi, i);
    if (i == 0) v += 1.0;
    a.push_back(v);
  }
  return a;
}

/// A_0..A_N of Psi - alpha det(Psi) I, N = min(4, size - 1).
inline std::vector<ComplexMat2> numerator_coeffs(std::span<const ComplexMat2> psi, Complex alpha) {
  const int n = std::min<int>(kMaxLaurentOrder, static_cast<int>(psi.size()) - 1);
  std::vector<ComplexMat2> out;
  for (int i = 0; i <= n; ++i) {
    out.push_back(psi[static_cast<std::size_t>(i)] - alpha * det_series_coeff(psi, i) * ComplexMat2::identity());
  }
  return out;
}

enum class LaurentBranch { A1Nonzero, A1Zero };

inline const char* to_string(LaurentBranch b) { return b == LaurentBranch::A1Nonzero ? "a1-nonzero" : "a1-zero"; }

struct LaurentSeries {
  Complex lambda0;
  LaurentBranch branch = LaurentBranch::A1Nonzero;
  /// Residue.
  ComplexMat2 m_minus1;
  /// Higher terms; empty when not enough Taylor coefficients were supplied.
  std::optional<ComplexMat2> m0;
  std::optional<ComplexMat2> m1;
  std::optional<ComplexMat2> m2;
  /// True when some M_k the branch could produce was omitted for lack of data.
  bool truncated = false;
  /// a_0..a_N and A_0..A_N.
  std::vector<Complex> a_coeffs;
  std::vector<ComplexMat2> big_a_coeffs;
  /// Sup norm of the imaginary part of the residue.
  double realness_defect = 0.0;
};

/// Laurent coefficients from Psi_0..Psi_n. |a1| > tol selects the a1 != 0
/// formulas unless `branch` forces one. Requires Psi_0..Psi_1 (a1 != 0) or
/// Psi_0..Psi_2 (a1 == 0).
inline LaurentSeries laurent_from_coeffs(std::span<const ComplexMat2> psi, Complex alpha, double tol,
                                         Complex lambda0 = 0.0, std::optional<LaurentBranch> branch = {}) {
  if (psi.size() < 2) throw InvalidArgument("need at least Psi_0 and Psi_1");
  LaurentSeries ls;
  ls.lambda0 = lambda0;
  ls.a_coeffs = denominator_coeffs(psi, alpha);
  ls.big_a_coeffs = numerator_coeffs(psi, alpha);
  const auto& a = ls.a_coeffs;
  const auto& A = ls.big_a_coeffs;
  const int n = static_cast<int>(a.size()) - 1;

  if (branch ? *branch == LaurentBranch::A1Nonzero : std::abs(a[1]) > tol) {
    ls.branch = LaurentBranch::A1Nonzero;
    const Complex a1 = a[1];
    ls.m_minus1 = A[0] / a1;
    if (n >= 2) {
      const Complex c2 = a[2] / (a1 * a1);
      ls.m0 = A[1] / a1 - c2 * A[0];
      if (n >= 3) {
        const Complex c3 = a[2] * a[2] / (a1 * a1 * a1) - a[3] / (a1 * a1);
        ls.m1 = A[2] / a1 - c2 * A[1] + c3 * A[0];
        if (n >= 4) {
          const Complex c4 = (2.0 * a1 * a[3] - a[2] * a[2]) * a[2] / (a1 * a1 * a1 * a1) - a[4] / (a1 * a1);
          ls.m2 = A[3] / a1 - c2 * A[2] + c3 * A[1] + c4 * A[0];
        }
      }
    }
    ls.truncated = n < 4;
  } else {
    ls.branch = LaurentBranch::A1Zero;
    if (n < 2) throw InvalidArgument("a1 vanishes; need at least Psi_0..Psi_2");
    const Complex a2 = a[2];
    if (std::abs(a2) <= tol || a2 == Complex(0.0)) {
      throw NumericalError("a1 and a2 both vanish, which cannot happen for a simple pole; "
                           "reduce the integration tolerance");
    }
    ls.m_minus1 = A[1] / a2;
    if (n >= 3) {
      const Complex c3 = a[3] / (a2 * a2);
      ls.m0 = A[2] / a2 - c3 * A[1];
      if (n >= 4) ls.m1 = A[3] / a2 - c3 * A[2] + (a[3] * a[3] / (a2 * a2 * a2) - a[4] / (a2 * a2)) * A[1];
    }
    ls.truncated = n < 4;
  }
  ls.realness_defect = imag_sup_norm(ls.m_minus1);
  return ls;
}

inline LaurentSeries laurent_from_taylor(const TaylorSeries& ts, Complex alpha, double tol) {
  return laurent_from_coeffs(ts.coeffs, alpha, tol, ts.lambda0);
}

}  // namespace helpcalc
