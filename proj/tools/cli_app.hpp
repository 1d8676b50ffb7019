#pragma once

// Command-line front end. run_cli parses arguments, runs one analysis and
// writes the report; main() only forwards to it so tests can drive it
// in-process.

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helpcalc/helpcalc.hpp"

namespace helpcalc::cli {

enum ExitCode : int { kOk = 0, kError = 1, kTargetNotReached = 2 };

struct RunConfig {
  std::string command;
  std::string problem;
  std::string bc = "dirichlet";
  std::string lambda = "1+1i";
  double lambda0 = 0.0;
  std::vector<double> bracket;
  std::string alpha = "1+1i";
  double tol = 1e-9;
  double target_acc = 1e-6;
  double x_override = 0.0;
  std::vector<double> rhos{1e-2, 1e-3};
  std::vector<double> thetas_deg{80.0, 85.0};
  std::string output;
  bool machine = false;
};

inline Problem load_problem(const RunConfig& cfg) {
  auto builtin = fixtures::by_name(cfg.problem);
  Problem prob = builtin ? *builtin : load_problem_config(cfg.problem);
  if (cfg.x_override != 0.0) prob = prob.with_truncation(cfg.x_override);
  return prob;
}

inline BoundaryCondition parse_bc(const std::string& s) {
  if (s == "dirichlet" || s == "D") return BoundaryCondition::Dirichlet;
  if (s == "neumann" || s == "N") return BoundaryCondition::Neumann;
  throw ConfigError("unknown boundary condition '" + s + "' (dirichlet or neumann)");
}

struct Output {
  std::string text;
  int code = kOk;
};

inline Record base_record(const RunConfig& cfg, const Problem& prob, Complex alpha) {
  Record rec;
  rec.add("command", cfg.command);
  rec.add("problem", prob.label());
  rec.add("X", prob.truncation_x());
  rec.add("alpha", alpha);
  rec.add("tol", cfg.tol);
  return rec;
}

inline Output execute(const RunConfig& cfg) {
  const Problem prob = load_problem(cfg);
  const Complex alpha = parse_complex(cfg.alpha);
  IntegratorSettings settings;
  settings.rel_tol = cfg.tol;
  settings.abs_tol = cfg.tol;
  settings.validate();

  Record rec = base_record(cfg, prob, alpha);
  std::ostringstream human;
  Output out;

  if (cfg.command == "eval-m") {
    const auto bc = parse_bc(cfg.bc);
    const Complex lambda = parse_complex(cfg.lambda);
    const ComplexMat2 m = evaluate_m(prob, bc, lambda, alpha, settings);
    rec.add("bc", to_string(bc));
    rec.add("lambda", lambda);
    rec.add_matrix("m", m);
    human << (bc == BoundaryCondition::Dirichlet ? "M_D" : "M_N") << "(" << format_complex(lambda) << ") =\n";
    for (int i = 0; i < 2; ++i) {
      human << "  [ " << format_complex(m(i, 0)) << "   " << format_complex(m(i, 1)) << " ]\n";
    }
  } else if (cfg.command == "locate-poles") {
    const auto bc = parse_bc(cfg.bc);
    if (cfg.bracket.size() != 2) throw ConfigError("--bracket needs two numbers");
    const auto poles = locate_poles(prob, bc, cfg.bracket[0], cfg.bracket[1], alpha, settings);
    rec.add("bc", to_string(bc));
    rec.add("bracket_lo", cfg.bracket[0]);
    rec.add("bracket_hi", cfg.bracket[1]);
    rec.add("count", static_cast<int>(poles.size()));
    human << "Poles of " << (bc == BoundaryCondition::Dirichlet ? "M_D" : "M_N") << " in [" << cfg.bracket[0]
          << ", " << cfg.bracket[1] << "]:\n";
    for (std::size_t i = 0; i < poles.size(); ++i) {
      rec.add("pole_" + std::to_string(i), poles[i].lambda);
      rec.add("g_" + std::to_string(i), poles[i].g_abs);
      char line[96];
      std::snprintf(line, sizeof line, "  %.9f   |g| = %.1e\n", poles[i].lambda, poles[i].g_abs);
      human << line;
    }
    if (poles.empty()) human << "  none\n";
  } else if (cfg.command == "residue") {
    const auto bc = parse_bc(cfg.bc);
    const ResidueReport r = residue_report(prob, bc, cfg.lambda0, alpha, settings, cfg.target_acc);
    add_residue_fields(rec, "", r);
    human << format_residue_human(r);
    if (!r.target_reached()) out.code = kTargetNotReached;
  } else if (cfg.command == "verdict") {
    const VerdictResult v = help_verdict(prob, cfg.lambda0, alpha, settings, cfg.target_acc);
    add_residue_fields(rec, "dirichlet_", v.dirichlet);
    add_residue_fields(rec, "neumann_", v.neumann);
    rec.add("rank_d", v.verdict.rank_d);
    rec.add("rank_n", v.verdict.rank_n);
    rec.add("outcome", to_string(v.verdict.outcome));
    rec.add("notes", v.verdict.notes);
    human << format_residue_human(v.dirichlet) << "\n" << format_residue_human(v.neumann) << "\n";
    human << v.verdict.summary() << "\n" << v.verdict.notes << "\n";
    if (!v.dirichlet.target_reached() || !v.neumann.target_reached()) out.code = kTargetNotReached;
  } else if (cfg.command == "sector-scan") {
    std::vector<double> thetas;
    for (double d : cfg.thetas_deg) thetas.push_back(d * std::numbers::pi / 180.0);
    const SectorScan scan = sector_scan(prob, cfg.lambda0, cfg.rhos, thetas, alpha, settings);
    rec.add("lambda0", cfg.lambda0);
    rec.add("count", static_cast<int>(scan.samples.size()));
    rec.add("all_positive", scan.all_positive());
    human << "Sector samples of Im(-/+ l^2 M_N) about lambda0 = " << cfg.lambda0 << ":\n";
    for (std::size_t i = 0; i < scan.samples.size(); ++i) {
      const auto& s = scan.samples[i];
      const std::string k = "sample_" + std::to_string(i) + "_";
      rec.add(k + "rho", s.rho);
      rec.add(k + "theta", s.theta);
      rec.add(k + "ok", s.ok);
      rec.add(k + "min_eigenvalue", s.min_eigenvalue);
      char line[128];
      std::snprintf(line, sizeof line, "  rho = %.3g  theta = %.2f deg  min eig = %s\n", s.rho,
                    s.theta * 180.0 / std::numbers::pi, s.ok ? detail::sci(s.min_eigenvalue, 3).c_str() : s.error.c_str());
      human << line;
    }
    human << (scan.all_positive() ? "all samples positive\n" : "some samples not positive\n");
  } else {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }

  out.text = cfg.machine ? rec.str() : human.str();
  return out;
}

inline void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--problem,-p", cfg.problem, "problem config file, or eq1/eq2/eq3")->required();
  sub->add_option("--alpha", cfg.alpha, "complex alpha, e.g. 1+1i")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "integration tolerance")->capture_default_str();
  sub->add_option("--X", cfg.x_override, "override the truncation point X");
  sub->add_option("--output,-o", cfg.output, "write the report to this file");
  sub->add_flag("--machine,-m", cfg.machine, "flat key=value output");
}

/// Parses argv, runs the selected command and writes its report. Returns the
/// process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Titchmarsh-Weyl M-matrix residues and HELP inequality checks"};
  app.require_subcommand(1, 1);

  auto* eval = app.add_subcommand("eval-m", "evaluate M_D or M_N at a complex lambda");
  add_common_options(eval, cfg);
  eval->add_option("--bc", cfg.bc, "dirichlet or neumann")->capture_default_str();
  eval->add_option("--lambda", cfg.lambda, "complex lambda, e.g. 1+1i")->capture_default_str();

  auto* locate = app.add_subcommand("locate-poles", "find real poles of M_D or M_N in a bracket");
  add_common_options(locate, cfg);
  locate->add_option("--bc", cfg.bc, "dirichlet or neumann")->capture_default_str();
  locate->add_option("--bracket", cfg.bracket, "lo hi")->expected(2)->required();

  auto* residue = app.add_subcommand("residue", "residue of M_D or M_N at a real pole");
  add_common_options(residue, cfg);
  residue->add_option("--bc", cfg.bc, "dirichlet or neumann")->capture_default_str();
  residue->add_option("--lambda0", cfg.lambda0, "real pole")->required();
  residue->add_option("--target-acc", cfg.target_acc, "target accuracy of the Taylor coefficients")
      ->capture_default_str();

  auto* verdict = app.add_subcommand("verdict", "residues of both matrices and the rank criterion");
  add_common_options(verdict, cfg);
  verdict->add_option("--lambda0", cfg.lambda0, "real pole")->required();
  verdict->add_option("--target-acc", cfg.target_acc, "target accuracy of the Taylor coefficients")
      ->capture_default_str();

  auto* sector = app.add_subcommand("sector-scan", "sample Im(-/+ l^2 M_N) in sectors about a pole");
  add_common_options(sector, cfg);
  sector->add_option("--lambda0", cfg.lambda0, "real pole")->required();
  sector->add_option("--rho", cfg.rhos, "radii")->capture_default_str();
  sector->add_option("--theta", cfg.thetas_deg, "angles in degrees")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    const Output result = execute(cfg);
    if (cfg.output.empty()) {
      out << result.text;
    } else {
      std::ofstream f(cfg.output);
      if (!f) throw ConfigError("cannot write " + cfg.output);
      f << result.text;
    }
    if (result.code == kTargetNotReached) err << "warning: target accuracy not reached\n";
    return result.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace helpcalc::cli
