#pragma once

// Dual Vandermonde systems V^T a = g (polynomial interpolation) solved by the
// Bjorck-Pereyra recurrences.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"

namespace helpcalc {

inline constexpr int kMaxVandermondeDegree = 12;

/// sum_k a_k nodes[j]^k = rhs[j] for j = 0..m.
struct DualVandermondeSystem {
  int m = 0;
  std::vector<double> nodes;
  std::vector<Complex> rhs;

  /// Nodes 2^(j-m), j = 0..m: 1/2^m, ..., 1/2, 1.
  static std::vector<double> geometric_nodes(int m) {
    std::vector<double> n(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) n[static_cast<std::size_t>(j)] = std::ldexp(1.0, j - m);
    return n;
  }

  static DualVandermondeSystem geometric(int m, std::vector<Complex> rhs) {
    return {m, geometric_nodes(m), std::move(rhs)};
  }
};

/// Returns a with V^T a = g in O(m^2) operations without forming V.
/// Nodes must be positive and strictly ascending; m <= 12.
inline std::vector<Complex> bp_dual_solve(const DualVandermondeSystem& sys) {
  const int m = sys.m;
  if (m < 0) throw InvalidArgument("degree must be non-negative");
  if (m > kMaxVandermondeDegree) {
    throw InvalidArgument("degree " + std::to_string(m) + " exceeds the cap of " +
                          std::to_string(kMaxVandermondeDegree));
  }
  const auto n = static_cast<std::size_t>(m) + 1;
  if (sys.nodes.size() != n || sys.rhs.size() != n) throw InvalidArgument("system size does not match degree");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(sys.nodes[j] > 0.0)) throw InvalidArgument("nodes must be positive");
    if (j > 0 && sys.nodes[j] == sys.nodes[j - 1]) throw InvalidArgument("duplicate nodes");
    if (j > 0 && sys.nodes[j] < sys.nodes[j - 1]) throw InvalidArgument("nodes must be ascending");
  }

  const std::span<const double> x(sys.nodes);
  std::vector<Complex> c = sys.rhs;
  // divided differences
  for (std::size_t k = 0; k < n - 1; ++k) {
    for (std::size_t i = n - 1; i > k; --i) {
      c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k - 1]);
    }
  }
  // Newton form -> monomial form
  for (std::size_t kk = n - 1; kk-- > 0;) {
    for (std::size_t i = kk; i < n - 1; ++i) {
      c[i] -= x[kk] * c[i + 1];
    }
  }
  return c;
}

}  // namespace helpcalc
