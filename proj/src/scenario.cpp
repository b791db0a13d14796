#include "unistoch/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "unistoch/correspondence.hpp"
#include "unistoch/dilation.hpp"
#include "unistoch/dynamics.hpp"
#include "unistoch/gauge.hpp"
#include "unistoch/linalg.hpp"
#include "unistoch/rng.hpp"
#include "unistoch/symmetry.hpp"
#include "unistoch/version.hpp"

namespace unistoch::cli {

namespace {

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

const char* classification_name(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Unitary: return "unitary";
    case SymmetryClass::AntiUnitary: return "anti_unitary";
    case SymmetryClass::PhaseGeneral: return "phase_general";
    default: return "none";
  }
}

// Resolves named objects out of the scenario's `objects` table. Families and
// transforms are rebuilt per lookup; everything is a pure value.
class Resolver {
public:
  Resolver(const json& objects, Tolerance tol, std::uint64_t seed)
      : objects_(objects), tol_(tol), seed_(seed) {}

  const json& raw(const std::string& name) const {
    const auto it = objects_.find(name);
    if (it == objects_.end()) {
      throw ScenarioError("unresolved object reference '" + name + "'");
    }
    return *it;
  }

  static std::string type_of(const json& obj) {
    if (!obj.is_object() || !obj.contains("type")) {
      throw ScenarioError("object definitions need a 'type' field");
    }
    return obj.at("type").get<std::string>();
  }

  cmat matrix(const std::string& name) const {
    const json& obj = raw(name);
    if (obj.is_array()) return io::parse_cmat(obj, name);
    if (obj.is_object() && obj.contains("matrix")) {
      return io::parse_cmat(obj.at("matrix"), name);
    }
    throw ScenarioError("object '" + name + "' does not define a matrix");
  }

  EvolutionOperator theta(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "evolution_operator") {
      throw ScenarioError("object '" + name + "' is not an evolution_operator");
    }
    return EvolutionOperator(io::parse_cmat(obj.at("matrix"), name), obj.value("t", 0.0),
                             obj.value("anchor_time", 0.0), tol_.alg);
  }

  TransitionMatrix transition(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "transition_matrix") {
      throw ScenarioError("object '" + name + "' is not a transition_matrix");
    }
    return TransitionMatrix(io::parse_rmat(obj.at("matrix"), name), obj.value("t", 0.0),
                            obj.value("anchor_time", 0.0), tol_.alg);
  }

  rmat stochastic_matrix(const std::string& name) const {
    const json& obj = raw(name);
    if (obj.is_array()) return io::parse_rmat(obj, name);
    if (obj.is_object() && obj.contains("matrix")) {
      return io::parse_rmat(obj.at("matrix"), name);
    }
    throw ScenarioError("object '" + name + "' does not define a real matrix");
  }

  Process process(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "process") {
      throw ScenarioError("object '" + name + "' is not a process");
    }
    return io::parse_process(obj, tol_.alg);
  }

  ProbVector prob(const std::string& name) const {
    const json& obj = raw(name);
    if (obj.is_array()) return ProbVector(io::parse_rvec(obj, name), tol_.alg);
    if (type_of(obj) != "prob_vector") {
      throw ScenarioError("object '" + name + "' is not a prob_vector");
    }
    return ProbVector(io::parse_rvec(obj.at("values"), name), tol_.alg);
  }

  DensityMatrix density(const std::string& name) const {
    const json& obj = raw(name);
    const std::string type = type_of(obj);
    if (type == "density_matrix") {
      return DensityMatrix(io::parse_cmat(obj.at("matrix"), name), tol_.alg);
    }
    if (type == "prob_vector") {
      return initial_density(prob(name), tol_.alg);
    }
    throw ScenarioError("object '" + name + "' is not a density_matrix");
  }

  StateVector state(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "state_vector") {
      throw ScenarioError("object '" + name + "' is not a state_vector");
    }
    return StateVector(io::parse_cvec(obj.at("values"), name), tol_.alg);
  }

  KrausSet kraus(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "kraus_set") {
      throw ScenarioError("object '" + name + "' is not a kraus_set");
    }
    return io::parse_kraus(obj, tol_.alg);
  }

  DilatedSystem dilated(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "dilated_system") {
      throw ScenarioError("object '" + name + "' is not a dilated_system");
    }
    return io::parse_dilated(obj, tol_.alg);
  }

  Hamiltonian hamiltonian(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "hamiltonian") {
      throw ScenarioError("object '" + name + "' is not a hamiltonian");
    }
    if (obj.contains("matrix")) {
      return Hamiltonian(io::parse_cmat(obj.at("matrix"), name), tol_.alg);
    }
    const std::string builtin = obj.value("builtin", "");
    if (builtin == "pauli_x") return Hamiltonian(pauli_x(), tol_.alg);
    if (builtin == "pauli_y") return Hamiltonian(pauli_y(), tol_.alg);
    if (builtin == "pauli_z") return Hamiltonian(pauli_z(), tol_.alg);
    if (builtin == "diagonal") {
      const rvec spectrum = io::parse_rvec(obj.at("spectrum"), name);
      return Hamiltonian(cmat(spectrum.cast<complex>().asDiagonal()), tol_.alg);
    }
    throw ScenarioError("hamiltonian '" + name + "': need 'matrix' or a known 'builtin'");
  }

  UnitaryFamily family(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "unitary_family") {
      throw ScenarioError("object '" + name + "' is not a unitary_family");
    }
    const double hbar = obj.value("hbar", 1.0);
    const std::string builtin = obj.value("builtin", "constant_h");
    if (builtin == "identity") {
      const auto n = obj.at("dim").get<Eigen::Index>();
      return UnitaryFamily(n, [n](double) { return cmat(cmat::Identity(n, n)); }, hbar,
                           tol_.alg);
    }
    if (builtin == "constant_h") {
      return family_from_constant_h(io::parse_cmat(obj.at("matrix"), name), hbar, tol_.alg);
    }
    if (builtin == "pauli_x_rotation") return family_from_constant_h(pauli_x(), hbar, tol_.alg);
    if (builtin == "pauli_y_rotation") return family_from_constant_h(pauli_y(), hbar, tol_.alg);
    if (builtin == "pauli_z_rotation") return family_from_constant_h(pauli_z(), hbar, tol_.alg);
    if (builtin == "diagonal") {
      const rvec spectrum = io::parse_rvec(obj.at("spectrum"), name);
      return family_from_constant_h(cmat(spectrum.cast<complex>().asDiagonal()), hbar,
                                    tol_.alg);
    }
    throw ScenarioError("unitary_family '" + name + "': unknown builtin '" + builtin + "'");
  }

  FWTransform fw_transform(const std::string& name) const {
    const json& obj = raw(name);
    if (type_of(obj) != "fw_transform") {
      throw ScenarioError("object '" + name + "' is not a fw_transform");
    }
    const std::string builtin = obj.value("builtin", "constant");
    if (builtin == "constant") {
      return FWTransform(io::parse_cmat(obj.at("matrix"), name), tol_.alg);
    }
    if (builtin == "exp_generator") {
      // V(t) = exp(-i G t) for self-adjoint G.
      const UnitaryFamily fam =
          family_from_constant_h(io::parse_cmat(obj.at("generator"), name), 1.0, tol_.alg);
      return FWTransform(fam.dim(), [fam](double t) { return fam.at(t); }, tol_.alg);
    }
    if (builtin == "adjoint_of_family") {
      const UnitaryFamily fam = family(obj.at("family").get<std::string>());
      return FWTransform(fam.dim(), [fam](double t) { return cmat(fam.at(t).adjoint()); },
                         tol_.alg);
    }
    throw ScenarioError("fw_transform '" + name + "': unknown builtin '" + builtin + "'");
  }

  // Phase matrices may be given literally or as "random", seeded from the
  // scenario seed and the consuming task's name.
  PhaseMatrix phases(const json& given, Eigen::Index dim, const std::string& stream) const {
    if (given.is_string() && given.get<std::string>() == "random") {
      Rng rng = Rng(seed_).split(stream);
      return PhaseMatrix(random_phases(dim, rng));
    }
    return PhaseMatrix(io::parse_rmat(given, "phases"));
  }

  Tolerance tol() const { return tol_; }
  std::uint64_t seed() const { return seed_; }

private:
  const json& objects_;
  Tolerance tol_;
  std::uint64_t seed_;
};

std::string require_ref(const json& task, const std::string& field) {
  if (!task.contains(field) || !task.at(field).is_string()) {
    throw ScenarioError("task '" + task.value("kind", "?") + "' needs a '" + field +
                        "' object reference");
  }
  return task.at(field).get<std::string>();
}

double require_number(const json& task, const std::string& field) {
  if (!task.contains(field) || !task.at(field).is_number()) {
    throw ScenarioError("task '" + task.value("kind", "?") + "' needs numeric '" + field + "'");
  }
  return task.at(field).get<double>();
}

json run_validate(const Resolver& r, const json& task) {
  const std::string check = task.value("check", "");
  const std::string name = require_ref(task, "object");
  Verdict v;
  if (check == "unitary") {
    v = is_unitary(r.matrix(name), r.tol().alg);
  } else if (check == "self_adjoint") {
    v = is_self_adjoint(r.matrix(name), r.tol().alg);
  } else if (check == "psd") {
    v = is_psd(r.matrix(name), r.tol().alg);
  } else if (check == "projector") {
    v = is_projector(r.matrix(name), r.tol().alg);
  } else if (check == "stochastic") {
    const StochasticCheck chk = column_stochastic_check(r.stochastic_matrix(name));
    v.ok = chk.ok(r.tol().alg);
    v.max_deviation = std::max(-chk.min_entry, chk.max_column_sum_error);
  } else if (check == "kraus_identity") {
    // KrausSet construction is itself the check.
    try {
      r.kraus(name);
      v = {true, 0.0};
    } catch (const ValidationError&) {
      v = {false, 1.0};
    }
  } else {
    throw ScenarioError("validate: unknown check '" + check + "'");
  }
  return {{"holds", v.ok}, {"max_deviation", v.max_deviation}, {"check", check}};
}

json run_gamma_from_theta(const Resolver& r, const json& task) {
  const TransitionMatrix g = gamma_from_theta(r.theta(require_ref(task, "theta")), r.tol().alg);
  return {{"gamma", io::dump_rmat(g.gamma())}, {"t", g.target_time()}};
}

json run_theta_from_gamma(const Resolver& r, const json& task) {
  const TransitionMatrix g = r.transition(require_ref(task, "gamma"));
  std::optional<rmat> ph;
  if (task.contains("phases")) {
    ph = r.phases(task.at("phases"), g.dim(), "theta_from_gamma-phases").phases();
  }
  const EvolutionOperator th = theta_from_gamma(g, ph, r.tol().alg);
  return {{"theta", io::dump_cmat(th.theta())}, {"t", th.target_time()}};
}

json run_propagate(const Resolver& r, const json& task) {
  if (task.contains("process")) {
    const Process proc = r.process(require_ref(task, "process"));
    const double t = require_number(task, "t");
    const ProbVector p = propagate(proc.sample_at(t), proc.initial(), r.tol().alg);
    return {{"p", io::dump_rvec(p.values())}, {"t", t}};
  }
  const TransitionMatrix g = r.transition(require_ref(task, "gamma"));
  const ProbVector p0 = r.prob(require_ref(task, "p0"));
  const ProbVector p = propagate(g, p0, r.tol().alg);
  return {{"p", io::dump_rvec(p.values())}, {"t", g.target_time()}};
}

json run_markov_power(const Resolver& r, const json& task) {
  const rmat g = r.stochastic_matrix(require_ref(task, "gamma"));
  const auto n = static_cast<Eigen::Index>(require_number(task, "n"));
  return {{"power", io::dump_rmat(markov_power(g, n, r.tol().alg))}, {"n", n}};
}

json run_divisibility(const Resolver& r, const json& task) {
  const Process proc = r.process(require_ref(task, "process"));
  const DivisibilityReport rep = is_divisible_at(proc, require_number(task, "t"),
                                                 require_number(task, "tprime"), r.tol().alg);
  const std::string expect = task.value("expect", "divisible");
  bool holds = rep.is_stochastic;
  if (expect == "indivisible") holds = !rep.is_stochastic;
  else if (expect == "any") holds = true;
  return {{"holds", holds},
          {"divisible", rep.is_stochastic},
          {"expect", expect},
          {"split_time", rep.split_time},
          {"candidate", io::dump_rmat(rep.candidate)},
          {"min_entry", rep.min_entry},
          {"max_column_sum_error", rep.max_column_sum_error}};
}

json run_classify_inverse(const Resolver& r, const json& task) {
  const InverseClassification c =
      stochastic_inverse_classify(r.stochastic_matrix(require_ref(task, "gamma")), r.tol().alg);
  return {{"classification", c.kind == InverseClass::PermutationBothStochastic
                                 ? "permutation_both_stochastic"
                                 : "inverse_pseudo_stochastic"},
          {"inverse", io::dump_rmat(c.inverse)},
          {"min_inverse_entry", c.min_inverse_entry}};
}

json run_evolve_density(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const DensityMatrix rho0 = r.density(require_ref(task, "rho0"));
  const DensityMatrix rho = evolve_density(rho0, th, r.tol().alg);
  const bool diag0 = rho0.is_diagonal(r.tol().alg);
  const bool unitary = is_unitary(th.theta(), r.tol().alg).ok;
  json out = {{"rho", io::dump_cmat(rho.rho())},
              {"initial_diagonal", diag0},
              {"theta_unitary", unitary}};
  if (!diag0 && !unitary) {
    out["note"] = "non-diagonal initial data under non-unitary evolution: output validated, "
                  "semantics outside the configuration-diagonal dictionary";
  }
  return out;
}

json run_evolve_schrodinger(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const StateVector psi0 = r.state(require_ref(task, "psi0"));
  const SchrodingerResult res =
      integrate_schrodinger(h, psi0, require_number(task, "t_end"), task.value("dt", 1e-3),
                            task.value("hbar", 1.0), r.tol());
  return {{"holds", res.norm_drift <= r.tol().integ},
          {"psi", io::dump_cvec(res.psi.psi())},
          {"norm_drift", res.norm_drift}};
}

json run_evolve_von_neumann(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const DensityMatrix rho0 = r.density(require_ref(task, "rho0"));
  const VonNeumannResult res =
      integrate_von_neumann(h, rho0, require_number(task, "t_end"), task.value("dt", 1e-3),
                            task.value("hbar", 1.0), r.tol());
  return {{"holds", res.trace_drift <= r.tol().integ && res.hermiticity_drift <= r.tol().integ},
          {"rho", io::dump_cmat(res.rho.rho())},
          {"trace_drift", res.trace_drift},
          {"hermiticity_drift", res.hermiticity_drift}};
}

json run_born_rule(const Resolver& r, const json& task) {
  const DensityMatrix rho = r.density(require_ref(task, "rho"));
  const PVM pvm = configuration_pvm(rho.dim());
  json probs = json::array();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    probs.push_back(clamp01(born_rule(rho, pvm, i, r.tol().alg)));
  }
  return {{"probabilities", std::move(probs)}};
}

json run_expectation(const Resolver& r, const json& task) {
  const rvec values = io::parse_rvec(task.at("values"), "expectation.values");
  if (task.contains("p")) {
    return {{"value", expectation(values, r.prob(require_ref(task, "p")))}};
  }
  const DensityMatrix rho = r.density(require_ref(task, "rho"));
  return {{"value", expect_obs(Beable(values), rho, r.tol().alg)}};
}

json run_sh_gauge_check(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const PhaseMatrix ph = r.phases(task.contains("phases") ? task.at("phases") : json("random"),
                                  th.dim(), "sh-gauge-phases");
  const EvolutionOperator transformed = sh_gauge(th, ph, r.tol().alg);
  const double dev = max_abs_diff(gamma_from_theta(transformed, r.tol().alg).gamma(),
                                  gamma_from_theta(th, r.tol().alg).gamma());
  return {{"holds", dev <= r.tol().alg},
          {"max_gamma_deviation", dev},
          {"theta_transformed", io::dump_cmat(transformed.theta())}};
}

json run_fw_gauge_check(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const DensityMatrix rho = r.density(require_ref(task, "rho"));
  const FWTransform v = r.fw_transform(require_ref(task, "v"));
  const double t = task.value("t", th.target_time());
  std::vector<cmat> obs;
  if (task.contains("observables")) {
    for (const json& name : task.at("observables")) {
      obs.push_back(r.matrix(name.get<std::string>()));
    }
  }
  const FWBundle bundle = fw_gauge(th, rho, obs, v, t, r.tol().alg);
  const PVM config = configuration_pvm(th.dim());

  double worst = 0.0;
  for (Eigen::Index i = 0; i < th.dim(); ++i) {
    worst = std::max(worst, std::abs(born_rule(bundle.rho, bundle.pvm_target, i, r.tol().alg) -
                                     born_rule(rho, config, i, r.tol().alg)));
  }
  for (size_t k = 0; k < obs.size(); ++k) {
    worst = std::max(worst, std::abs(expect_obs(bundle.observables[k], bundle.rho, r.tol().alg) -
                                     expect_obs(obs[k], rho, r.tol().alg)));
  }
  for (Eigen::Index i = 0; i < th.dim(); ++i) {
    for (Eigen::Index j = 0; j < th.dim(); ++j) {
      worst = std::max(
          worst, std::abs(dictionary_rhs(bundle.theta, bundle.pvm_target, bundle.pvm_anchor, i,
                                         j) -
                          dictionary_rhs(th, config, i, j)));
    }
  }
  return {{"holds", worst <= r.tol().alg}, {"max_deviation", worst}};
}

json run_transform_hamiltonian(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const FWTransform v = r.fw_transform(require_ref(task, "v"));
  const double t = require_number(task, "t");
  const double h_step = task.value("h_step", 1e-5);
  const cmat hv = transform_hamiltonian(h, v, t, h_step, task.value("hbar", 1.0));
  return {{"h_v", io::dump_cmat(hv)},
          {"self_adjoint_deviation", is_self_adjoint(hv, 1.0).max_deviation},
          {"norm", max_abs(hv)}};
}

json run_covariant_derivative_check(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const FWTransform v = r.fw_transform(require_ref(task, "v"));
  const StateVector psi = r.state(require_ref(task, "psi"));
  const double h_step = task.value("h_step", 1e-5);
  const double residual = check_covariant_derivative(h, v, psi, require_number(task, "t"),
                                                     h_step, task.value("hbar", 1.0));
  const double bound = 10.0 * h_step * h_step + r.tol().integ;
  return {{"holds", residual <= bound}, {"residual", residual}, {"bound", bound}};
}

json run_symmetry_check(const Resolver& r, const json& task) {
  const SymmetryCandidate v(r.matrix(require_ref(task, "v")), SymmetryKind::Unknown,
                            r.tol().alg);
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const SymmetryVerdict verdict = check_dynamical_symmetry(v, th, r.tol().alg);
  json out = {{"holds", verdict.holds},
              {"classification", classification_name(verdict.classification)},
              {"max_violation", verdict.max_violation}};
  if (verdict.recovered_phases) {
    out["recovered_phases"] = io::dump_rmat(verdict.recovered_phases->reduced());
    json unconstrained = json::array();
    for (Eigen::Index i = 0; i < verdict.unconstrained.rows(); ++i) {
      for (Eigen::Index j = 0; j < verdict.unconstrained.cols(); ++j) {
        if (verdict.unconstrained(i, j)) unconstrained.push_back(json::array({i, j}));
      }
    }
    out["unconstrained_entries"] = std::move(unconstrained);
  }
  return out;
}

json run_antiunitary_check(const Resolver& r, const json& task) {
  const SymmetryCandidate v(r.matrix(require_ref(task, "v")), SymmetryKind::Unknown,
                            r.tol().alg);
  const Verdict verdict =
      check_antiunitary_form(v, r.theta(require_ref(task, "theta")), r.tol().alg);
  return {{"holds", verdict.ok}, {"max_deviation", verdict.max_deviation}};
}

json run_wigner_check(const Resolver& r, const json& task) {
  const SymmetryCandidate v(r.matrix(require_ref(task, "v")), SymmetryKind::Unknown,
                            r.tol().alg);
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const int trials = task.value("trials", 64);
  const WignerVerdict verdict = check_wigner(v, th, trials, r.seed(), r.tol().alg);
  json out = {{"holds", verdict.holds},
              {"trials", verdict.trials},
              {"max_violation", verdict.max_violation}};
  if (verdict.counterexample) {
    out["counterexample_basis"] = io::dump_cmat(verdict.counterexample->vectors());
    out["counterexample_trial"] = verdict.counterexample_trial;
  }
  const std::string expect = task.value("expect", "symmetric");
  if (expect == "broken") out["holds"] = !verdict.holds;
  return out;
}

json run_noether_check(const Resolver& r, const json& task) {
  const cmat g = r.matrix(require_ref(task, "g"));
  const UnitaryFamily fam = r.family(require_ref(task, "family"));
  const DensityMatrix rho0 = r.density(require_ref(task, "rho0"));
  std::vector<double> times;
  for (const json& t : task.at("times")) times.push_back(t.get<double>());
  const NoetherReport rep = noether_check(g, fam, rho0, times, r.tol().alg);
  const bool holds = !rep.precondition_holds || rep.max_drift <= 10.0 * r.tol().alg;
  return {{"holds", holds},
          {"precondition_holds", rep.precondition_holds},
          {"max_commutator_norm", rep.max_commutator_norm},
          {"max_drift", rep.max_drift}};
}

json run_kraus_from_theta(const Resolver& r, const json& task) {
  const KrausSet ks = kraus_from_theta(r.theta(require_ref(task, "theta")), r.tol().alg);
  return {{"kraus", io::dump_kraus(ks)}};
}

json run_gamma_from_kraus(const Resolver& r, const json& task) {
  const KrausSet ks = r.kraus(require_ref(task, "kraus"));
  const TransitionMatrix g = gamma_from_kraus(ks, configuration_pvm(ks.dim()), r.tol().alg);
  return {{"gamma", io::dump_rmat(g.gamma())}};
}

json run_evolve_density_kraus(const Resolver& r, const json& task) {
  const KrausSet ks = r.kraus(require_ref(task, "kraus"));
  const DensityMatrix rho0 = r.density(require_ref(task, "rho0"));
  const DensityMatrix rho = evolve_density_kraus(rho0, ks, r.tol().alg);
  return {{"rho", io::dump_cmat(rho.rho())},
          {"purity", (rho.rho() * rho.rho()).trace().real()}};
}

json run_dilate(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const auto d = static_cast<Eigen::Index>(require_number(task, "d"));
  const auto gamma_index = static_cast<Eigen::Index>(task.value("gamma_index", 0));
  const DilatedSystem ds = dilate_trivial(th, d, gamma_index, r.tol().alg);
  const TransitionMatrix rec = reconstruct_gamma(ds, r.tol().alg);
  const double dev = max_abs_diff(rec.gamma(), gamma_from_theta(th, r.tol().alg).gamma());
  return {{"holds", dev <= r.tol().alg},
          {"gamma", io::dump_rmat(rec.gamma())},
          {"reconstruction_deviation", dev},
          {"dilated", io::dump_dilated(ds)}};
}

json run_blockwise_gauge_check(const Resolver& r, const json& task) {
  // Accepts either a dilated system object or a theta to dilate trivially.
  const DilatedSystem ds =
      task.contains("dilated")
          ? r.dilated(require_ref(task, "dilated"))
          : dilate_trivial(r.theta(require_ref(task, "theta")),
                           static_cast<Eigen::Index>(task.value("d", 2)), 0, r.tol().alg);
  Rng rng = Rng(r.seed()).split("blockwise-gauge");
  std::vector<cmat> blocks;
  const Eigen::Index n = ds.system_dim();
  const Eigen::Index d = ds.internal_dim();
  blocks.reserve(static_cast<size_t>(n * n));
  for (Eigen::Index k = 0; k < n * n; ++k) blocks.push_back(random_unitary(d, rng));
  const DilatedSystem transformed = blockwise_gauge(ds, blocks, r.tol().alg);
  const double dev = max_abs_diff(reconstruct_gamma(transformed, r.tol().alg).gamma(),
                                  reconstruct_gamma(ds, r.tol().alg).gamma());
  return {{"holds", dev <= r.tol().alg},
          {"max_gamma_deviation", dev},
          {"factorization_error_before", kron_factor_error(ds.evolution(), n, d)},
          {"factorization_error_after", kron_factor_error(transformed.evolution(), n, d)}};
}

json run_stinespring(const Resolver& r, const json& task) {
  const KrausSet ks = r.kraus(require_ref(task, "kraus"));
  const DilatedSystem ds = stinespring_unitary(ks, r.seed(), r.tol().alg);
  const TransitionMatrix rec = reconstruct_gamma(ds, r.tol().alg);
  const TransitionMatrix direct = gamma_from_kraus(ks, configuration_pvm(ks.dim()), r.tol().alg);
  const double unitarity = is_unitary(ds.evolution(), r.tol().alg).max_deviation;
  const double dev = max_abs_diff(rec.gamma(), direct.gamma());
  return {{"holds", unitarity <= r.tol().alg && dev <= r.tol().alg},
          {"gamma", io::dump_rmat(rec.gamma())},
          {"unitarity_deviation", unitarity},
          {"reconstruction_deviation", dev},
          {"dilated", io::dump_dilated(ds)}};
}

json run_realify(const Resolver& r, const json& task) {
  const cmat m = r.matrix(require_ref(task, "matrix"));
  const rmat real = realify(m);
  json out = {{"real_matrix", io::dump_rmat(real)}};
  if (m.rows() == m.cols() && is_unitary(m, r.tol().alg)) {
    const rmat gram = real.transpose() * real;
    out["orthogonality_deviation"] =
        max_abs_diff(gram, rmat::Identity(gram.rows(), gram.cols()));
  }
  return out;
}

json run_extract_hamiltonian(const Resolver& r, const json& task) {
  const UnitaryFamily fam = r.family(require_ref(task, "family"));
  const cmat h = extract_hamiltonian(fam, require_number(task, "t"), task.value("h_step", 1e-5));
  return {{"hamiltonian", io::dump_cmat(h)}};
}

json run_ehrenfest_check(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const DensityMatrix rho0 = r.density(require_ref(task, "rho0"));
  const rvec values = io::parse_rvec(task.at("values"), "ehrenfest.values");
  const double h_step = task.value("h_step", 1e-5);
  const double residual = check_ehrenfest(h, BeableFamily(Beable(values)), rho0,
                                          require_number(task, "t"), h_step,
                                          task.value("dt", 1e-3), task.value("hbar", 1.0));
  const double bound = 10.0 * h_step * h_step + r.tol().integ;
  return {{"holds", residual <= bound}, {"residual", residual}, {"bound", bound}};
}

json run_heisenberg_check(const Resolver& r, const json& task) {
  const Hamiltonian h = r.hamiltonian(require_ref(task, "hamiltonian"));
  const UnitaryFamily fam = r.family(require_ref(task, "family"));
  const rvec values = io::parse_rvec(task.at("values"), "heisenberg.values");
  const double h_step = task.value("h_step", 1e-5);
  const double residual = check_heisenberg_eom(h, BeableFamily(Beable(values)), fam,
                                               require_number(task, "t"), h_step);
  const double bound = 10.0 * h_step * h_step + r.tol().integ;
  return {{"holds", residual <= bound}, {"residual", residual}, {"bound", bound}};
}

json run_to_heisenberg(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const rvec values = io::parse_rvec(task.at("values"), "to_heisenberg.values");
  const Emergeable ah = to_heisenberg(Beable(values), th, r.tol().alg);
  json out = {{"heisenberg", io::dump_cmat(ah.matrix())}};
  // For a projector-valued beable the Heisenberg image need not stay a
  // projector under non-unitary evolution; reported, never enforced.
  const bool projector_input =
      ((values.array() - 0.0).abs() < r.tol().alg || (values.array() - 1.0).abs() < r.tol().alg)
          .all();
  if (projector_input) {
    out["projector_deviation"] = is_projector(ah.matrix(), 1.0).max_deviation;
  }
  return out;
}

json run_emergeable_rate(const Resolver& r, const json& task) {
  const UnitaryFamily fam = r.family(require_ref(task, "family"));
  const rvec values = io::parse_rvec(task.at("values"), "emergeable_rate.values");
  const Beable a(values);
  const Emergeable rate = emergeable_rate(a, fam, task.value("h_step", 1e-5));
  const cmat commutator = a.matrix() * rate.matrix() - rate.matrix() * a.matrix();
  return {{"rate", io::dump_cmat(rate.matrix())},
          {"commutator_with_beable_norm", max_abs(commutator)}};
}

json run_dictionary_check(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const PVM config = configuration_pvm(th.dim());
  const rmat direct = gamma_from_theta(th, r.tol().alg).gamma();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < th.dim(); ++i) {
    for (Eigen::Index j = 0; j < th.dim(); ++j) {
      worst = std::max(worst, std::abs(dictionary_rhs(th, config, i, j) - direct(i, j)));
    }
  }
  return {{"holds", worst <= r.tol().alg}, {"max_deviation", worst}};
}

json run_born_check(const Resolver& r, const json& task) {
  const EvolutionOperator th = r.theta(require_ref(task, "theta"));
  const ProbVector p0 = r.prob(require_ref(task, "p0"));
  const DensityMatrix rho_t = evolve_density(initial_density(p0, r.tol().alg), th, r.tol().alg);
  const ProbVector direct = propagate(gamma_from_theta(th, r.tol().alg), p0, r.tol().alg);
  const PVM config = configuration_pvm(th.dim());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < th.dim(); ++i) {
    worst = std::max(worst, std::abs(born_rule(rho_t, config, i, r.tol().alg) - direct[i]));
  }
  return {{"holds", worst <= r.tol().alg}, {"max_deviation", worst}};
}

json dispatch_task(const Resolver& r, const json& task) {
  if (!task.is_object() || !task.contains("kind")) {
    throw ScenarioError("each task needs a 'kind' field");
  }
  const std::string kind = task.at("kind").get<std::string>();
  if (kind == "validate") return run_validate(r, task);
  if (kind == "gamma_from_theta") return run_gamma_from_theta(r, task);
  if (kind == "theta_from_gamma") return run_theta_from_gamma(r, task);
  if (kind == "propagate") return run_propagate(r, task);
  if (kind == "markov_power") return run_markov_power(r, task);
  if (kind == "divisibility") return run_divisibility(r, task);
  if (kind == "classify_inverse") return run_classify_inverse(r, task);
  if (kind == "evolve_density") return run_evolve_density(r, task);
  if (kind == "evolve_schrodinger") return run_evolve_schrodinger(r, task);
  if (kind == "evolve_von_neumann") return run_evolve_von_neumann(r, task);
  if (kind == "born_rule") return run_born_rule(r, task);
  if (kind == "expectation") return run_expectation(r, task);
  if (kind == "sh_gauge_check") return run_sh_gauge_check(r, task);
  if (kind == "fw_gauge_check") return run_fw_gauge_check(r, task);
  if (kind == "transform_hamiltonian") return run_transform_hamiltonian(r, task);
  if (kind == "covariant_derivative_check") return run_covariant_derivative_check(r, task);
  if (kind == "symmetry_check") return run_symmetry_check(r, task);
  if (kind == "antiunitary_check") return run_antiunitary_check(r, task);
  if (kind == "wigner_check") return run_wigner_check(r, task);
  if (kind == "noether_check") return run_noether_check(r, task);
  if (kind == "kraus_from_theta") return run_kraus_from_theta(r, task);
  if (kind == "gamma_from_kraus") return run_gamma_from_kraus(r, task);
  if (kind == "evolve_density_kraus") return run_evolve_density_kraus(r, task);
  if (kind == "dilate") return run_dilate(r, task);
  if (kind == "blockwise_gauge_check") return run_blockwise_gauge_check(r, task);
  if (kind == "stinespring") return run_stinespring(r, task);
  if (kind == "realify") return run_realify(r, task);
  if (kind == "extract_hamiltonian") return run_extract_hamiltonian(r, task);
  if (kind == "to_heisenberg") return run_to_heisenberg(r, task);
  if (kind == "ehrenfest_check") return run_ehrenfest_check(r, task);
  if (kind == "heisenberg_check") return run_heisenberg_check(r, task);
  if (kind == "emergeable_rate") return run_emergeable_rate(r, task);
  if (kind == "dictionary_check") return run_dictionary_check(r, task);
  if (kind == "born_check") return run_born_check(r, task);
  throw ScenarioError("unknown task kind '" + kind + "'");
}

}  // namespace

json Report::to_json() const {
  json out = deterministic;
  out["elapsed_ms"] = elapsed_ms;
  return out;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "scenario: " << deterministic.value("scenario", "?") << "\n";
  os << "seed: " << deterministic.value("seed", 0) << "\n";
  for (const json& task : deterministic.at("tasks")) {
    os << "  [" << task.at("index").get<int>() << "] " << task.at("kind").get<std::string>();
    if (task.contains("holds")) {
      os << (task.at("holds").get<bool>() ? "  PASS" : "  FAIL");
    }
    os << "\n";
    for (const auto& [key, value] : task.items()) {
      if (key == "index" || key == "kind" || key == "holds") continue;
      os << "      " << key << ": " << value.dump() << "\n";
    }
  }
  os << (all_hold ? "all verdicts hold" : "SOME VERDICTS FAILED") << "\n";
  return os.str();
}

Report run_scenario(const json& scenario, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!scenario.is_object()) throw ScenarioError("scenario: expected a JSON object");
  const int schema = scenario.value("schema", 0);
  if (schema != 1) {
    throw ScenarioError("scenario: unsupported schema version " + std::to_string(schema));
  }
  if (!scenario.contains("seed") || !scenario.at("seed").is_number_integer()) {
    throw ScenarioError("scenario: integer 'seed' is mandatory");
  }
  const auto seed = scenario.at("seed").get<std::uint64_t>();
  const std::string name = scenario.value("name", "unnamed");
  const json objects = scenario.value("objects", json::object());
  if (!scenario.contains("tasks") || !scenario.at("tasks").is_array()) {
    throw ScenarioError("scenario: 'tasks' array is mandatory");
  }
  const json& tasks = scenario.at("tasks");

  Resolver resolver(objects, opts.tol, seed);

  std::vector<json> results(tasks.size());
  auto run_one = [&](size_t idx) {
    const std::string where =
        "task " + std::to_string(idx) + " (" + tasks[idx].value("kind", "?") + "): ";
    try {
      json result = dispatch_task(resolver, tasks[idx]);
      result["index"] = idx;
      result["kind"] = tasks[idx].at("kind").get<std::string>();
      return result;
    } catch (const ScenarioError& e) {
      throw ScenarioError(where + e.what());
    } catch (const SingularityError& e) {
      throw SingularityError(where + e.what(), e.smallest_singular_value());
    } catch (const NotRankOneError& e) {
      throw NotRankOneError(where + e.what(), e.second_eigenvalue());
    } catch (const DimensionError& e) {
      throw DimensionError(where + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  };

  if (opts.parallel) {
    std::vector<std::future<json>> futures;
    futures.reserve(tasks.size());
    for (size_t i = 0; i < tasks.size(); ++i) {
      futures.push_back(std::async(std::launch::async, run_one, i));
    }
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = run_one(i);
  }

  Report report;
  report.all_hold = true;
  json task_array = json::array();
  for (json& result : results) {
    if (result.contains("holds") && !result.at("holds").get<bool>()) {
      report.all_hold = false;
    }
    task_array.push_back(std::move(result));
  }
  report.deterministic = {{"schema", 1},
                          {"scenario", name},
                          {"seed", seed},
                          {"tool_version", kVersion},
                          {"tasks", std::move(task_array)},
                          {"all_hold", report.all_hold}};
  const auto end = std::chrono::steady_clock::now();
  report.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

Report run_scenario_file(const std::string& path, const RunOptions& opts) {
  return run_scenario(io::load_file(path), opts);
}

}  // namespace unistoch::cli
