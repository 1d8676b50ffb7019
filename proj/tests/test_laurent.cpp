#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "helpcalc/laurent.hpp"
#include "test_support.hpp"

using namespace helpcalc;

namespace {

// Truncated power series of 2x2 matrices, degree <= 4.
using MatSeries = std::vector<ComplexMat2>;
using ScalarSeries = std::vector<Complex>;

// det of a matrix series: entrywise products of scalar series.
ScalarSeries det_series(const MatSeries& p) {
  ScalarSeries d(5, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size() && i + j < 5; ++j) {
      d[i + j] += p[i](0, 0) * p[j](1, 1) - p[i](0, 1) * p[j](1, 0);
    }
  }
  return d;
}

// Taylor coefficients of Psi = (alpha I + M^{-1})^{-1} when M^{-1} = lambda D + E
// is linear in lambda: Psi = sum (-1)^k (B^{-1} D)^k B^{-1} lambda^k, B = alpha I + E.
MatSeries psi_of_linear_inverse(const ComplexMat2& d, const ComplexMat2& e, Complex alpha, int n = 5) {
  const ComplexMat2 binv = inverse(alpha * ComplexMat2::identity() + e);
  MatSeries out;
  ComplexMat2 term = binv;
  for (int k = 0; k < n; ++k) {
    out.push_back(term);
    term = -(binv * d) * term;
  }
  return out;
}

}  // namespace

TEST_CASE("adjugate identity", "[laurent]") {
  const ComplexMat2 b{Complex(3, 1), 2.0, Complex(-1, 4), 5.0};
  CHECK(b * adjugate(b) == det(b) * ComplexMat2::identity());
  CHECK(adjugate(b) * b == det(b) * ComplexMat2::identity());
  const ComplexMat2 r{0.5, 0.25, -0.75, 2.0};
  CHECK(r * adjugate(r) == det(r) * ComplexMat2::identity());
}

TEST_CASE("series of (1/lambda) I", "[laurent]") {
  // Psi = I / (1 + lambda): Psi_nu = (-1)^nu I
  MatSeries psi;
  for (int nu = 0; nu < 5; ++nu) psi.push_back((nu % 2 == 0 ? 1.0 : -1.0) * ComplexMat2::identity());
  const auto a = denominator_coeffs(psi, 1.0);
  REQUIRE(a.size() == 5);
  CHECK(std::abs(a[0]) <= 1e-15);
  CHECK(std::abs(a[1]) <= 1e-15);
  CHECK(std::abs(a[2] - 1.0) <= 1e-15);
  const auto A = numerator_coeffs(psi, 1.0);
  CHECK(sup_norm(A[0]) <= 1e-15);
  CHECK(sup_norm(A[1] - ComplexMat2::identity()) <= 1e-15);

  const LaurentSeries ls = laurent_from_coeffs(psi, 1.0, 1e-9);
  CHECK(ls.branch == LaurentBranch::A1Zero);
  CHECK(sup_norm(ls.m_minus1 - ComplexMat2::identity()) <= 1e-10);
  REQUIRE(ls.m0.has_value());
  CHECK(sup_norm(*ls.m0) <= 1e-10);
  REQUIRE(ls.m1.has_value());
  CHECK(sup_norm(*ls.m1) <= 1e-10);
  CHECK_FALSE(ls.m2.has_value());
}

TEST_CASE("constant Psi has vanishing higher denominator terms", "[laurent]") {
  MatSeries psi{testing::random_symmetric(), ComplexMat2::zero(), ComplexMat2::zero(), ComplexMat2::zero(),
                ComplexMat2::zero()};
  const auto a = denominator_coeffs(psi, Complex(1, 1));
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k] == Complex(0.0));
}

TEST_CASE("full-rank residue numerator starts at zero", "[laurent]") {
  const Complex alpha(1.0, 1.0);
  MatSeries psi{ComplexMat2::identity() / alpha, testing::random_symmetric()};
  CHECK(sup_norm(numerator_coeffs(psi, alpha)[0]) <= 1e-15);
}

TEST_CASE("rank one residue diag(1/lambda, c)", "[laurent]") {
  const Complex c = 0.7;
  for (Complex alpha : {Complex(1.0), Complex(1.0, 1.0), Complex(0.5, -2.0)}) {
    // M^{-1} = diag(lambda, 1/c)
    const auto psi = psi_of_linear_inverse(ComplexMat2::diag(1.0, 0.0), ComplexMat2::diag(0.0, 1.0 / c), alpha);
    const LaurentSeries ls = laurent_from_coeffs(psi, alpha, 1e-9);
    CHECK(ls.branch == LaurentBranch::A1Nonzero);
    CHECK(sup_norm(ls.m_minus1 - ComplexMat2::diag(1.0, 0.0)) <= 1e-10);
    REQUIRE(ls.m0.has_value());
    CHECK(sup_norm(*ls.m0 - ComplexMat2::diag(0.0, c)) <= 1e-10);
    CHECK(sup_norm(*ls.m1) <= 1e-10);
    CHECK(sup_norm(*ls.m2) <= 1e-10);
    CHECK(ls.realness_defect <= 1e-10);
  }
}

TEST_CASE("coefficients agree with polynomial arithmetic", "[laurent][property]") {
  for (int n = 0; n < 20; ++n) {
    const Complex alpha = testing::random_complex(2.0);
    MatSeries psi;
    for (int k = 0; k < 5; ++k) psi.push_back(testing::random_matrix());
    const ScalarSeries d = det_series(psi);
    const auto a = denominator_coeffs(psi, alpha);
    const auto A = numerator_coeffs(psi, alpha);
    for (std::size_t k = 0; k < 5; ++k) {
      const Complex expected = (k == 0 ? 1.0 : 0.0) - alpha * trace(psi[k]) + alpha * alpha * d[k];
      CHECK(std::abs(a[k] - expected) <= 1e-12 * (1.0 + std::abs(expected)));
      const ComplexMat2 expected_a = psi[k] - alpha * d[k] * ComplexMat2::identity();
      CHECK(sup_norm(A[k] - expected_a) <= 1e-12 * (1.0 + sup_norm(expected_a)));
    }
  }
}

TEST_CASE("both branches recover a known residue", "[laurent][property]") {
  for (int n = 0; n < 10; ++n) {
    // M^{-1} = lambda D + E with E singular gives a pole at 0 with residue
    // determined by the kernel of E.
    const double t = testing::uniform(0.0, 3.0);
    const ComplexMat2 rot{std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    const double e = testing::uniform(0.5, 2.0);
    const double dk = testing::uniform(0.5, 2.0);
    const ComplexMat2 einv_part = rot * ComplexMat2::diag(0.0, e) * transpose(rot);
    const ComplexMat2 d = rot * ComplexMat2::diag(dk, testing::uniform(-1, 1)) * transpose(rot);
    const Complex alpha(1.0, 1.0);
    const auto psi = psi_of_linear_inverse(d, einv_part, alpha);
    const LaurentSeries ls = laurent_from_coeffs(psi, alpha, 1e-9);
    CHECK(ls.branch == LaurentBranch::A1Nonzero);
    // residue = (1/dk) v v^T with v the kernel direction of E
    const ComplexMat2 v{std::cos(t), 0.0, std::sin(t), 0.0};
    const ComplexMat2 expected = (v * transpose(v)) / dk;
    CHECK(sup_norm(ls.m_minus1 - expected) <= 1e-10);
  }
  // a1 = 0 exactly: M^{-1} = lambda D with D symmetric positive definite
  for (int n = 0; n < 10; ++n) {
    const ComplexMat2 dd = real_part(testing::random_symmetric());
    const ComplexMat2 d = dd * dd + 0.5 * ComplexMat2::identity();
    const Complex alpha(1.0, -0.5);
    const auto psi = psi_of_linear_inverse(d, ComplexMat2::zero(), alpha);
    const LaurentSeries ls = laurent_from_coeffs(psi, alpha, 1e-9);
    CHECK(ls.branch == LaurentBranch::A1Zero);
    CHECK(sup_norm(ls.m_minus1 - inverse(d)) <= 1e-10);
  }
}

TEST_CASE("paired expansions multiply to -I", "[laurent][property]") {
  // M_D = (lambda D + E)^{-1} with E of rank one, M_N = -M_D^{-1} = -(lambda D + E)
  const ComplexMat2 d{2.0, 0.3, 0.3, 1.0};
  const ComplexMat2 e{0.0, 0.0, 0.0, 1.5};
  const Complex alpha(1.0, 1.0);
  const LaurentSeries md = laurent_from_coeffs(psi_of_linear_inverse(d, e, alpha), alpha, 1e-9);
  // M_N is entire here; its Psi is (alpha I - (lambda D + E)^{-1})^{-1}
  const auto mn_at = [&](Complex l) { return -(l * d + e); };
  for (double r : {1e-2, 1e-3}) {
    const Complex l(0.0, r);
    const ComplexMat2 md_l = md.m_minus1 / l + *md.m0 + l * *md.m1 + l * l * *md.m2;
    CHECK(sup_norm(md_l * mn_at(l) + ComplexMat2::identity()) <= 50.0 * r * r * r);
  }
}

TEST_CASE("truncated data omits higher terms", "[laurent]") {
  const auto psi = psi_of_linear_inverse(ComplexMat2::diag(1.0, 0.0), ComplexMat2::diag(0.0, 2.0), 1.0, 3);
  const LaurentSeries ls = laurent_from_coeffs(psi, 1.0, 1e-9);
  CHECK(ls.truncated);
  CHECK(ls.m0.has_value());
  CHECK_FALSE(ls.m1.has_value());
  CHECK_FALSE(ls.m2.has_value());
}

TEST_CASE("degenerate inputs", "[laurent]") {
  MatSeries one{ComplexMat2::identity()};
  CHECK_THROWS_AS(laurent_from_coeffs(one, 1.0, 1e-9), InvalidArgument);
  // a1 = a2 = 0: constant Psi = I / alpha
  MatSeries flat(5, ComplexMat2::zero());
  flat[0] = ComplexMat2::identity();
  CHECK_THROWS_AS(laurent_from_coeffs(flat, 1.0, 1e-9), NumericalError);
  MatSeries short_zero{ComplexMat2::identity(), ComplexMat2::zero()};
  CHECK_THROWS_AS(laurent_from_coeffs(short_zero, 1.0, 1e-9), InvalidArgument);
}

TEST_CASE("forced branch", "[laurent]") {
  const auto psi = psi_of_linear_inverse(ComplexMat2::diag(1.0, 0.0), ComplexMat2::diag(0.0, 2.0), 1.0);
  const LaurentSeries ls = laurent_from_coeffs(psi, 1.0, 1e-9, 0.0, LaurentBranch::A1Nonzero);
  CHECK(ls.branch == LaurentBranch::A1Nonzero);
}
