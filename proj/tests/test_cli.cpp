#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "cli_app.hpp"

using namespace helpcalc;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "helpcalc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(HELPCALC_FIXTURE_DIR) + "/" + name; }

std::string field(const std::string& record, const std::string& key) {
  std::istringstream in(record);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

// With the default target 1e-6 the Psi_3 estimate usually stays above target,
// which is a warning (exit 2), so content checks only exclude hard errors.
TEST_CASE("residue on eq1", "[cli]") {
  const Run r = run({"residue", "-p", "eq1", "--lambda0", "0", "--alpha", "1+1i"});
  CHECK(r.code != cli::kError);
  CHECK(r.out.find("Determinant of residue matrix: 2303.") != std::string::npos);
  CHECK(r.out.find("Numerical rank: 2") != std::string::npos);
}

TEST_CASE("verdict on eq2 from a config file", "[cli]") {
  const Run r = run({"verdict", "-p", fixture("eq2.cfg"), "--lambda0", "16", "--alpha", "1"});
  CHECK(r.code != cli::kError);
  CHECK(r.out.find("InequalityHolds (rank 1 + rank 1 = 2)") != std::string::npos);
}

TEST_CASE("machine output is deterministic and parseable", "[cli]") {
  const std::vector<std::string> args{"residue", "-p", "eq2", "--lambda0", "16", "--alpha", "1", "--machine"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code != cli::kError);
  CHECK(a.out == b.out);
  CHECK(field(a.out, "command") == "residue");
  CHECK(field(a.out, "rank") == "1");
  CHECK(field(a.out, "bc") == "dirichlet");
  const std::string r11 = field(a.out, "residue_11");
  const Complex z = parse_complex(r11.substr(0, r11.find(',')));
  CHECK(std::abs(z.real() + 82.62549) <= 1e-3);
  CHECK(std::stod(field(a.out, "X")) == 20.0);
}

TEST_CASE("eval-m and locate-poles", "[cli]") {
  const Run e = run({"eval-m", "-p", "eq2", "--bc", "N", "--lambda", "1+1i", "-m"});
  CHECK(e.code == cli::kOk);
  CHECK(!field(e.out, "m_11").empty());
  const Run l = run({"locate-poles", "-p", "eq2", "--bc", "dirichlet", "--bracket", "10", "70", "-m"});
  CHECK(l.code == cli::kOk);
  CHECK(field(l.out, "count") == "2");
  CHECK(std::abs(std::stod(field(l.out, "pole_1")) - 64.0) <= 1e-3);
}

TEST_CASE("sector-scan", "[cli]") {
  const Run r = run({"sector-scan", "-p", "eq2", "--lambda0", "16", "-m"});
  CHECK(r.code == cli::kOk);
  CHECK(field(r.out, "count") == "4");
  CHECK(field(r.out, "all_positive") == "true");
}

TEST_CASE("output file", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "helpcalc_cli_test.txt";
  std::filesystem::remove(path);
  const Run r = run({"eval-m", "-p", "eq1", "--lambda", "2i", "-m", "-o", path.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(field(ss.str(), "command") == "eval-m");
  std::filesystem::remove(path);
}

TEST_CASE("errors exit with code 1", "[cli]") {
  const Run zero_p = run({"eval-m", "-p", std::string(HELPCALC_TEST_DATA_DIR) + "/zero_p.cfg"});
  CHECK(zero_p.code == cli::kError);
  CHECK(zero_p.err.find("p must be positive on (0, X]") != std::string::npos);

  CHECK(run({}).code == cli::kError);
  CHECK(run({"residue", "-p", "eq1"}).code == cli::kError);
  CHECK(run({"frobnicate"}).code == cli::kError);
  CHECK(run({"eval-m", "-p", "eq9"}).code == cli::kError);
  CHECK(run({"eval-m", "-p", "eq1", "--alpha", "1+"}).code == cli::kError);
  CHECK(run({"eval-m", "-p", "eq1", "--bc", "robin"}).code == cli::kError);
  CHECK(run({"eval-m", "-p", "eq1", "--tol", "-1"}).code == cli::kError);
  CHECK(run({"locate-poles", "-p", "eq2", "--bracket", "20", "10"}).code == cli::kError);
  CHECK(run({"sector-scan", "-p", "eq2", "--lambda0", "16", "--theta", "100"}).code == cli::kError);
}

TEST_CASE("help exits with code 0", "[cli]") {
  const Run r = run({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("residue") != std::string::npos);
}

TEST_CASE("target accuracy decides between exit codes 0 and 2", "[cli]") {
  const Run ok = run({"residue", "-p", "eq2", "--lambda0", "16", "--alpha", "1", "--target-acc", "1e-3"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("Warning") == std::string::npos);

  const Run r = run({"residue", "-p", "eq2", "--lambda0", "16", "--alpha", "1", "--target-acc", "1e-14"});
  CHECK(r.code == cli::kTargetNotReached);
  CHECK(r.out.find("Warning: target accuracy not reached") != std::string::npos);
  CHECK(r.err.find("warning") != std::string::npos);
}
