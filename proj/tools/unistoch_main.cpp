// Command-line front end: every subcommand assembles a one-task scenario and
// feeds it through the same runner as `run`, so reports and exit codes are
// uniform across entry points.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "unistoch/scenario.hpp"
#include "unistoch/version.hpp"

namespace {

using unistoch::Tolerance;
using unistoch::cli::json;
using unistoch::cli::Report;
using unistoch::cli::RunOptions;

struct CommonOpts {
  double tol = 0.0;  // 0 means "not set"
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tol", opts.tol, "algebraic tolerance override");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--out", opts.out, "write the report to this path instead of stdout");
  cmd->add_option("--format", opts.format, "report format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

RunOptions make_run_options(const CommonOpts& opts) {
  RunOptions ro;
  if (const char* env = std::getenv("UNISTOCH_TOL"); env != nullptr && *env != '\0') {
    ro.tol.alg = std::stod(env);
  }
  if (opts.tol > 0.0) ro.tol.alg = opts.tol;
  ro.tol.validate();
  return ro;
}

int emit_report(const Report& report, const CommonOpts& opts) {
  const std::string payload =
      opts.format == "text" ? report.to_text() : report.to_json().dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << payload;
  } else {
    unistoch::io::write_file(opts.out, payload);
  }
  return report.all_hold ? unistoch::cli::kOk : unistoch::cli::kTaskFailure;
}

json scenario_skeleton(const std::string& name, std::uint64_t seed) {
  return {{"schema", 1},
          {"name", name},
          {"seed", seed},
          {"objects", json::object()},
          {"tasks", json::array()}};
}

int run_one_task(const std::string& name, json objects, json task, const CommonOpts& opts) {
  json scenario = scenario_skeleton(name, opts.seed);
  scenario["objects"] = std::move(objects);
  scenario["tasks"].push_back(std::move(task));
  const Report report = unistoch::cli::run_scenario(scenario, make_run_options(opts));
  return emit_report(report, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unistoch: indivisible stochastic processes and their Hilbert-space "
               "representations"};
  app.set_version_flag("--version", std::string(unistoch::kVersion));
  app.require_subcommand(1);

  // run
  CommonOpts run_opts;
  std::string scenario_path;
  bool parallel = false;
  auto* cmd_run = app.add_subcommand("run", "execute a scenario file");
  cmd_run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  cmd_run->add_flag("--parallel", parallel, "run independent tasks concurrently");
  add_common(cmd_run, run_opts);

  // validate
  CommonOpts validate_opts;
  std::string validate_matrix, validate_check;
  auto* cmd_validate = app.add_subcommand("validate", "check a matrix property");
  cmd_validate->add_option("--matrix", validate_matrix, "matrix literal file")->required();
  cmd_validate
      ->add_option("--check", validate_check,
                   "property: unitary, self_adjoint, psd, projector, stochastic")
      ->required();
  add_common(cmd_validate, validate_opts);

  // evolve
  CommonOpts evolve_opts;
  std::string evolve_theta, evolve_rho0, evolve_hamiltonian, evolve_psi0;
  double evolve_t = 1.0, evolve_dt = 1e-3, evolve_theta_t = 0.0;
  auto* cmd_evolve = app.add_subcommand(
      "evolve", "evolve a density matrix by Theta, or integrate the Schrodinger equation");
  cmd_evolve->add_option("--theta", evolve_theta, "evolution-operator matrix file");
  cmd_evolve->add_option("--theta-t", evolve_theta_t, "target time carried by Theta");
  cmd_evolve->add_option("--rho0", evolve_rho0, "initial density matrix file");
  cmd_evolve->add_option("--hamiltonian", evolve_hamiltonian, "Hamiltonian matrix file");
  cmd_evolve->add_option("--psi0", evolve_psi0, "initial state vector file");
  cmd_evolve->add_option("--t", evolve_t, "integration horizon");
  cmd_evolve->add_option("--dt", evolve_dt, "integration step");
  add_common(cmd_evolve, evolve_opts);

  // divisibility
  CommonOpts div_opts;
  std::string div_process, div_expect = "divisible";
  double div_t = 0.0, div_tprime = 0.0;
  auto* cmd_div = app.add_subcommand("divisibility", "test a process split for divisibility");
  cmd_div->add_option("--process", div_process, "process JSON file")->required();
  cmd_div->add_option("--t", div_t, "target time")->required();
  cmd_div->add_option("--tprime", div_tprime, "split time")->required();
  cmd_div->add_option("--expect", div_expect, "expected outcome: divisible, indivisible, any")
      ->check(CLI::IsMember({"divisible", "indivisible", "any"}));
  add_common(cmd_div, div_opts);

  // gauge-check
  CommonOpts gauge_opts;
  std::string gauge_theta, gauge_phases, gauge_generator, gauge_rho0;
  double gauge_t = 0.0, gauge_theta_t = 0.0;
  auto* cmd_gauge = app.add_subcommand(
      "gauge-check", "verify Schur-Hadamard or Foldy-Wouthuysen gauge invariance");
  cmd_gauge->add_option("--theta", gauge_theta, "evolution-operator matrix file")->required();
  cmd_gauge->add_option("--theta-t", gauge_theta_t, "target time carried by Theta");
  cmd_gauge->add_option("--phases", gauge_phases,
                        "phase matrix file, or 'random' (Schur-Hadamard mode)");
  cmd_gauge->add_option("--fw-generator", gauge_generator,
                        "self-adjoint generator file for V(t) = exp(-iGt) (FW mode)");
  cmd_gauge->add_option("--rho0", gauge_rho0, "density matrix file (FW mode)");
  cmd_gauge->add_option("--t", gauge_t, "evaluation time (FW mode)");
  add_common(cmd_gauge, gauge_opts);

  // symmetry-check
  CommonOpts sym_opts;
  std::string sym_v, sym_theta;
  double sym_theta_t = 0.0;
  bool sym_wigner = false;
  int sym_trials = 64;
  auto* cmd_sym = app.add_subcommand("symmetry-check", "test a dynamical-symmetry candidate");
  cmd_sym->add_option("--v", sym_v, "unitary candidate matrix file")->required();
  cmd_sym->add_option("--theta", sym_theta, "evolution-operator matrix file")->required();
  cmd_sym->add_option("--theta-t", sym_theta_t, "target time carried by Theta");
  cmd_sym->add_flag("--wigner", sym_wigner, "also test in random bases");
  cmd_sym->add_option("--trials", sym_trials, "number of Wigner trial bases");
  add_common(cmd_sym, sym_opts);

  // dilate
  CommonOpts dilate_opts;
  std::string dilate_theta;
  double dilate_theta_t = 0.0;
  Eigen::Index dilate_d = 2, dilate_gamma = 0;
  auto* cmd_dilate = app.add_subcommand("dilate", "tensor-dilate and reconstruct Gamma");
  cmd_dilate->add_option("--theta", dilate_theta, "evolution-operator matrix file")->required();
  cmd_dilate->add_option("--theta-t", dilate_theta_t, "target time carried by Theta");
  cmd_dilate->add_option("--d", dilate_d, "internal dimension");
  cmd_dilate->add_option("--gamma-index", dilate_gamma, "internal projector slot");
  add_common(cmd_dilate, dilate_opts);

  // stinespring
  CommonOpts stine_opts;
  std::string stine_kraus;
  auto* cmd_stine = app.add_subcommand("stinespring", "dilate a Kraus set to a unitary");
  cmd_stine->add_option("--kraus", stine_kraus, "Kraus set JSON file")->required();
  add_common(cmd_stine, stine_opts);

  // realify
  CommonOpts real_opts;
  std::string real_matrix;
  auto* cmd_real = app.add_subcommand("realify", "real 2Nx2N representation of a matrix");
  cmd_real->add_option("--matrix", real_matrix, "matrix literal file")->required();
  add_common(cmd_real, real_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      RunOptions ro = make_run_options(run_opts);
      ro.parallel = parallel;
      const Report report = unistoch::cli::run_scenario_file(scenario_path, ro);
      return emit_report(report, run_opts);
    }
    if (cmd_validate->parsed()) {
      json objects = {{"m", unistoch::io::load_file(validate_matrix)}};
      json task = {{"kind", "validate"}, {"object", "m"}, {"check", validate_check}};
      return run_one_task("validate", std::move(objects), std::move(task), validate_opts);
    }
    if (cmd_evolve->parsed()) {
      if (!evolve_theta.empty()) {
        if (evolve_rho0.empty()) {
          std::cerr << "evolve: --theta requires --rho0\n";
          return unistoch::cli::kParseError;
        }
        json objects = {
            {"theta",
             {{"type", "evolution_operator"},
              {"matrix", unistoch::io::load_file(evolve_theta)},
              {"t", evolve_theta_t}}},
            {"rho0",
             {{"type", "density_matrix"}, {"matrix", unistoch::io::load_file(evolve_rho0)}}}};
        json task = {{"kind", "evolve_density"}, {"theta", "theta"}, {"rho0", "rho0"}};
        return run_one_task("evolve", std::move(objects), std::move(task), evolve_opts);
      }
      if (evolve_hamiltonian.empty() || evolve_psi0.empty()) {
        std::cerr << "evolve: need either --theta/--rho0 or --hamiltonian/--psi0\n";
        return unistoch::cli::kParseError;
      }
      json objects = {
          {"h",
           {{"type", "hamiltonian"}, {"matrix", unistoch::io::load_file(evolve_hamiltonian)}}},
          {"psi0",
           {{"type", "state_vector"}, {"values", unistoch::io::load_file(evolve_psi0)}}}};
      json task = {{"kind", "evolve_schrodinger"},
                   {"hamiltonian", "h"},
                   {"psi0", "psi0"},
                   {"t_end", evolve_t},
                   {"dt", evolve_dt}};
      return run_one_task("evolve", std::move(objects), std::move(task), evolve_opts);
    }
    if (cmd_div->parsed()) {
      json process = unistoch::io::load_file(div_process);
      process["type"] = "process";
      json objects = {{"proc", std::move(process)}};
      json task = {{"kind", "divisibility"},
                   {"process", "proc"},
                   {"t", div_t},
                   {"tprime", div_tprime},
                   {"expect", div_expect}};
      return run_one_task("divisibility", std::move(objects), std::move(task), div_opts);
    }
    if (cmd_gauge->parsed()) {
      json objects = {{"theta",
                       {{"type", "evolution_operator"},
                        {"matrix", unistoch::io::load_file(gauge_theta)},
                        {"t", gauge_theta_t}}}};
      json task;
      if (!gauge_generator.empty()) {
        if (gauge_rho0.empty()) {
          std::cerr << "gauge-check: FW mode requires --rho0\n";
          return unistoch::cli::kParseError;
        }
        objects["v"] = {{"type", "fw_transform"},
                        {"builtin", "exp_generator"},
                        {"generator", unistoch::io::load_file(gauge_generator)}};
        objects["rho0"] = {{"type", "density_matrix"},
                           {"matrix", unistoch::io::load_file(gauge_rho0)}};
        task = {{"kind", "fw_gauge_check"},
                {"theta", "theta"},
                {"rho", "rho0"},
                {"v", "v"},
                {"t", gauge_t}};
      } else {
        task = {{"kind", "sh_gauge_check"}, {"theta", "theta"}};
        if (!gauge_phases.empty()) {
          task["phases"] = gauge_phases == "random"
                               ? json("random")
                               : unistoch::io::load_file(gauge_phases);
        }
      }
      return run_one_task("gauge-check", std::move(objects), std::move(task), gauge_opts);
    }
    if (cmd_sym->parsed()) {
      json objects = {{"v", unistoch::io::load_file(sym_v)},
                      {"theta",
                       {{"type", "evolution_operator"},
                        {"matrix", unistoch::io::load_file(sym_theta)},
                        {"t", sym_theta_t}}}};
      json task;
      if (sym_wigner) {
        task = {{"kind", "wigner_check"}, {"v", "v"}, {"theta", "theta"},
                {"trials", sym_trials}};
      } else {
        task = {{"kind", "symmetry_check"}, {"v", "v"}, {"theta", "theta"}};
      }
      return run_one_task("symmetry-check", std::move(objects), std::move(task), sym_opts);
    }
    if (cmd_dilate->parsed()) {
      json objects = {{"theta",
                       {{"type", "evolution_operator"},
                        {"matrix", unistoch::io::load_file(dilate_theta)},
                        {"t", dilate_theta_t}}}};
      json task = {{"kind", "dilate"},
                   {"theta", "theta"},
                   {"d", dilate_d},
                   {"gamma_index", dilate_gamma}};
      return run_one_task("dilate", std::move(objects), std::move(task), dilate_opts);
    }
    if (cmd_stine->parsed()) {
      json kraus = unistoch::io::load_file(stine_kraus);
      kraus["type"] = "kraus_set";
      json objects = {{"ks", std::move(kraus)}};
      json task = {{"kind", "stinespring"}, {"kraus", "ks"}};
      return run_one_task("stinespring", std::move(objects), std::move(task), stine_opts);
    }
    if (cmd_real->parsed()) {
      json objects = {{"m", unistoch::io::load_file(real_matrix)}};
      json task = {{"kind", "realify"}, {"matrix", "m"}};
      return run_one_task("realify", std::move(objects), std::move(task), real_opts);
    }
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return unistoch::cli::kParseError;
  } catch (const unistoch::cli::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return unistoch::cli::kParseError;
  } catch (const unistoch::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return unistoch::cli::kValidationError;
  } catch (const unistoch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return unistoch::cli::kValidationError;
  }
  return unistoch::cli::kOk;
}
