#include <cstdio>
#include <fstream>
#include <string>

#include "catch_amalgamated.hpp"
#include "helpcalc/problem.hpp"
#include "test_support.hpp"

using namespace helpcalc;

namespace {

Problem simple(const char* p, const char* s, const char* q, double x = 5.0) {
  return Problem({parse(p), parse(s), parse(q), Expr::constant(1.0)}, x, "test");
}

// Full 4x4 S assembled from the blocks.
std::array<std::array<Complex, 4>, 4> assemble(const SBlocks& b) {
  std::array<std::array<Complex, 4>, 4> s{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s[i][j] = b.s11(i, j);
      s[i][j + 2] = b.s12(i, j);
      s[i + 2][j] = b.s21(i, j);
      s[i + 2][j + 2] = b.s22(i, j);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("zero coefficients give trivial blocks", "[problem]") {
  const Problem prob = simple("1", "0", "0");
  const SBlocks b = s_blocks(prob, 2.5, 0.0);
  CHECK(b.s11 == ComplexMat2::zero());
  CHECK(b.s22 == ComplexMat2::diag(0.0, 1.0));
}

TEST_CASE("blocks of the formal square of the oscillator", "[problem]") {
  const SBlocks b = s_blocks(fixtures::eq2(), 1.0, 0.0);
  CHECK(b.s11 == ComplexMat2::diag(1.0, -2.0));
  CHECK(b.s22 == ComplexMat2::diag(0.0, 1.0));
}

TEST_CASE("off-diagonal blocks are constant", "[problem]") {
  for (const auto& prob : {fixtures::eq1(), fixtures::eq2(), fixtures::eq3()}) {
    for (int i = 0; i < 10; ++i) {
      const SBlocks b = s_blocks(prob, testing::uniform(0.0, prob.truncation_x()), testing::random_complex(50.0));
      CHECK(b.s12 == ComplexMat2{0.0, 0.0, 1.0, 0.0});
      CHECK(b.s21 == ComplexMat2{0.0, 1.0, 0.0, 0.0});
    }
  }
}

TEST_CASE("assembled S is symmetric", "[problem][property]") {
  const Problem prob = fixtures::eq1();
  for (int n = 0; n < 100; ++n) {
    const auto s = assemble(s_blocks(prob, testing::uniform(0.0, 10.0), testing::uniform(-100.0, 100.0)));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) CHECK(s[i][j] == s[j][i]);
    }
  }
}

TEST_CASE("real lambda gives real blocks", "[problem][property]") {
  const SBlocks b = s_blocks(fixtures::eq3(), 1.3, 35.5);
  CHECK(imag_sup_norm(b.s11) == 0.0);
  CHECK(imag_sup_norm(b.s22) == 0.0);
}

TEST_CASE("S is affine in lambda with weight w", "[problem][property]") {
  const Problem prob({parse("1+x"), parse("x"), parse("x^2"), parse("2+sin(x)")}, 3.0);
  for (int n = 0; n < 50; ++n) {
    const double x = testing::uniform(0.0, 3.0);
    const Complex lambda = testing::random_complex(20.0);
    const auto d = assemble(s_blocks(prob, x, lambda));
    const auto z = assemble(s_blocks(prob, x, 0.0));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Complex expected = (i == 0 && j == 0) ? lambda * prob.coeffs().w(x) : Complex(0.0);
        CHECK(std::abs(d[i][j] - z[i][j] - expected) <= 1e-12 * (1.0 + std::abs(expected)));
      }
    }
  }
}

TEST_CASE("coefficient positivity is enforced", "[problem]") {
  CHECK_THROWS_WITH(simple("0", "0", "0"), "p must be positive on (0, X]");
  CHECK_THROWS_AS(simple("x-1", "0", "0"), ConfigError);
  CHECK_NOTHROW(simple("x", "0", "0"));  // p(0) = 0 is allowed
  CHECK_THROWS_AS(Problem({parse("1"), parse("0"), parse("0"), parse("x-1")}, 5.0), ConfigError);
  CHECK_THROWS_AS(simple("1", "0", "0", 0.0), ConfigError);
  CHECK_THROWS_AS(simple("1", "0", "1/(x-1)", 2.0), ConfigError);
}

TEST_CASE("config text parses", "[problem]") {
  const Problem prob = parse_problem_config(
      "# comment\n"
      "label = \"demo\"\n"
      "p = \"1\"   # trailing comment\n"
      "s = \"2*x^2\"\n"
      "q = \"x^4-2\"\n"
      "X = 7.5\n");
  CHECK(prob.label() == "demo");
  CHECK(prob.truncation_x() == 7.5);
  CHECK(prob.coeffs().w(3.0) == 1.0);
  CHECK(prob.coeffs().q(1.0) == -1.0);
}

TEST_CASE("config errors", "[problem]") {
  CHECK_THROWS_AS(parse_problem_config("p = \"1\"\ns = \"0\"\nq = \"0\"\n"), ConfigError);           // no X
  CHECK_THROWS_AS(parse_problem_config("p = \"1\"\ns = \"0\"\nq = \"0\"\nX = 1\nz = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_problem_config("p = \"1\"\np = \"1\"\ns = \"0\"\nq = \"0\"\nX = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_problem_config("p = \"1+\"\ns = \"0\"\nq = \"0\"\nX = 1\n"), Error);
  CHECK_THROWS_AS(parse_problem_config("p = \"1\"\ns = \"0\"\nq = \"0\"\nX = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_problem_config("just text\n"), ConfigError);
  CHECK_THROWS_AS(load_problem_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("bundled config files match the built-in problems", "[problem]") {
  for (const char* name : {"eq1", "eq2", "eq3"}) {
    const Problem file = load_problem_config(std::string(HELPCALC_FIXTURE_DIR) + "/" + name + ".cfg");
    const Problem builtin = *fixtures::by_name(name);
    CHECK(file.label() == builtin.label());
    CHECK(file.truncation_x() == builtin.truncation_x());
    for (double x : {0.0, 0.7, 3.0, 9.5}) {
      CHECK(file.coeffs().s(x) == builtin.coeffs().s(x));
      CHECK(file.coeffs().q(x) == builtin.coeffs().q(x));
    }
  }
  CHECK_FALSE(fixtures::by_name("eq4").has_value());
  CHECK(fixtures::eq1().truncation_x() == 10.0);
  CHECK(fixtures::eq2().truncation_x() == 20.0);
  CHECK(fixtures::eq3().truncation_x() == 10.0);
}

TEST_CASE("truncation can be changed", "[problem]") {
  const Problem p = fixtures::eq1().with_truncation(100.0);
  CHECK(p.truncation_x() == 100.0);
  CHECK(p.label() == "eq1");
}
