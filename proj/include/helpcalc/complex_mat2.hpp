#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace helpcalc {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix, row-major. Carries S-blocks, Gamma, Psi, M and
/// residues.
struct ComplexMat2 {
  std::array<Complex, 4> a{};

  constexpr ComplexMat2() = default;
  constexpr ComplexMat2(Complex a11, Complex a12, Complex a21, Complex a22)
      : a{a11, a12, a21, a22} {}

  static constexpr ComplexMat2 zero() { return {}; }
  static constexpr ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr ComplexMat2 diag(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }

  constexpr Complex& operator()(int i, int j) { return a[2 * i + j]; }
  constexpr const Complex& operator()(int i, int j) const { return a[2 * i + j]; }

  ComplexMat2& operator+=(const ComplexMat2& o) {
    for (int k = 0; k < 4; ++k) a[k] += o.a[k];
    return *this;
  }
  ComplexMat2& operator-=(const ComplexMat2& o) {
    for (int k = 0; k < 4; ++k) a[k] -= o.a[k];
    return *this;
  }
  ComplexMat2& operator*=(Complex s) {
    for (auto& v : a) v *= s;
    return *this;
  }
  ComplexMat2& operator/=(Complex s) {
    for (auto& v : a) v /= s;
    return *this;
  }

  friend ComplexMat2 operator+(ComplexMat2 l, const ComplexMat2& r) { return l += r; }
  friend ComplexMat2 operator-(ComplexMat2 l, const ComplexMat2& r) { return l -= r; }
  friend ComplexMat2 operator-(ComplexMat2 m) {
    for (auto& v : m.a) v = -v;
    return m;
  }
  friend ComplexMat2 operator*(ComplexMat2 m, Complex s) { return m *= s; }
  friend ComplexMat2 operator*(Complex s, ComplexMat2 m) { return m *= s; }
  friend ComplexMat2 operator*(ComplexMat2 m, double s) { return m *= Complex(s); }
  friend ComplexMat2 operator*(double s, ComplexMat2 m) { return m *= Complex(s); }
  friend ComplexMat2 operator/(ComplexMat2 m, Complex s) { return m /= s; }
  friend ComplexMat2 operator/(ComplexMat2 m, double s) { return m /= Complex(s); }

  friend ComplexMat2 operator*(const ComplexMat2& l, const ComplexMat2& r) {
    return {l.a[0] * r.a[0] + l.a[1] * r.a[2], l.a[0] * r.a[1] + l.a[1] * r.a[3],
            l.a[2] * r.a[0] + l.a[3] * r.a[2], l.a[2] * r.a[1] + l.a[3] * r.a[3]};
  }

  friend bool operator==(const ComplexMat2&, const ComplexMat2&) = default;
};

inline Complex trace(const ComplexMat2& m) { return m.a[0] + m.a[3]; }
inline Complex det(const ComplexMat2& m) { return m.a[0] * m.a[3] - m.a[1] * m.a[2]; }

/// Matrix of cofactors: B * adjugate(B) == det(B) * I.
inline ComplexMat2 adjugate(const ComplexMat2& m) { return {m.a[3], -m.a[1], -m.a[2], m.a[0]}; }

inline ComplexMat2 transpose(const ComplexMat2& m) { return {m.a[0], m.a[2], m.a[1], m.a[3]}; }

inline ComplexMat2 conj(const ComplexMat2& m) {
  return {std::conj(m.a[0]), std::conj(m.a[1]), std::conj(m.a[2]), std::conj(m.a[3])};
}

inline ComplexMat2 adjoint(const ComplexMat2& m) { return conj(transpose(m)); }

inline ComplexMat2 real_part(const ComplexMat2& m) {
  return {m.a[0].real(), m.a[1].real(), m.a[2].real(), m.a[3].real()};
}

inline ComplexMat2 imag_part(const ComplexMat2& m) {
  return {m.a[0].imag(), m.a[1].imag(), m.a[2].imag(), m.a[3].imag()};
}

/// Inverse via the adjugate; the caller is responsible for det != 0.
inline ComplexMat2 inverse(const ComplexMat2& m) { return adjugate(m) / det(m); }

/// Largest modulus of any entry.
inline double sup_norm(const ComplexMat2& m) {
  double r = 0.0;
  for (const auto& v : m.a) r = std::max(r, std::abs(v));
  return r;
}

/// Largest modulus of the imaginary part of any entry.
inline double imag_sup_norm(const ComplexMat2& m) {
  double r = 0.0;
  for (const auto& v : m.a) r = std::max(r, std::abs(v.imag()));
  return r;
}

inline double symmetry_defect(const ComplexMat2& m) { return std::abs(m.a[1] - m.a[2]); }

/// Eigenvalues of a real symmetric 2x2 matrix (only the real parts of the
/// entries are used, the off-diagonal is symmetrized), ascending.
inline std::array<double, 2> symmetric_eigenvalues(const ComplexMat2& m) {
  const double p = m.a[0].real();
  const double r = m.a[3].real();
  const double q = 0.5 * (m.a[1].real() + m.a[2].real());
  const double mean = 0.5 * (p + r);
  const double rad = std::hypot(0.5 * (p - r), q);
  return {mean - rad, mean + rad};
}

/// Singular values, descending, from the closed-form eigenvalues of m^H m.
inline std::array<double, 2> singular_values(const ComplexMat2& m) {
  const ComplexMat2 g = adjoint(m) * m;
  const double t = g.a[0].real() + g.a[3].real();
  const double d = std::abs(det(m)) * std::abs(det(m));
  const double disc = std::sqrt(std::max(0.0, 0.25 * t * t - d));
  const double big = 0.5 * t + disc;
  // small eigenvalue from the product to avoid cancellation
  const double small = big > 0.0 ? d / big : 0.0;
  return {std::sqrt(std::max(big, 0.0)), std::sqrt(std::max(small, 0.0))};
}

}  // namespace helpcalc
