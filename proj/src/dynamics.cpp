#include "unistoch/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "unistoch/linalg.hpp"

namespace unistoch {

namespace {

// One classical RK4 step for y' = f(t, y) on complex matrices/vectors.
template <typename State, typename Rhs>
State rk4_step(const State& y, double t, double dt, const Rhs& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, (y + 0.5 * dt * k1).eval());
  const State k3 = f(t + 0.5 * dt, (y + 0.5 * dt * k2).eval());
  const State k4 = f(t + dt, (y + dt * k3).eval());
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance from 0 to t_end with fixed steps of dt plus one remainder step.
template <typename State, typename Rhs>
State rk4_integrate(State y, double t_end, double dt, const Rhs& f) {
  const auto steps = static_cast<long long>(std::floor(t_end / dt));
  double t = 0.0;
  for (long long k = 0; k < steps; ++k) {
    y = rk4_step(y, t, dt, f);
    t = static_cast<double>(k + 1) * dt;
  }
  const double rem = t_end - t;
  if (rem > 1e-14 * std::max(1.0, std::abs(t_end))) {
    y = rk4_step(y, t, rem, f);
  }
  return y;
}

void check_step_args(double t_end, double dt, const std::string& who) {
  if (!(dt > 0.0)) throw ValidationError(who + ": step must be positive");
  if (dt > t_end) {
    throw ValidationError(who + ": step " + std::to_string(dt) + " exceeds horizon " +
                          std::to_string(t_end));
  }
}

}  // namespace

UnitaryFamily::UnitaryFamily(Eigen::Index dim, Evaluator evaluator, double hbar, double tol)
    : dim_(dim), evaluator_(std::move(evaluator)), hbar_(hbar), tol_(tol) {
  if (dim_ < 1) throw DimensionError("UnitaryFamily: dimension must be >= 1");
  if (!evaluator_) throw ValidationError("UnitaryFamily: missing evaluator");
  if (!(hbar_ > 0.0)) throw ValidationError("UnitaryFamily: hbar must be positive");
  const cmat u0 = at(0.0);
  const double dev = max_abs_diff(u0, cmat::Identity(dim_, dim_));
  if (dev > tol_) {
    throw ValidationError("UnitaryFamily: U(0) deviates from identity by " +
                          std::to_string(dev));
  }
}

cmat UnitaryFamily::at(double t) const {
  cmat u = evaluator_(t);
  if (u.rows() != dim_ || u.cols() != dim_) {
    throw DimensionError("UnitaryFamily: evaluator returned wrong shape at t = " +
                         std::to_string(t));
  }
  const Verdict v = is_unitary(u, tol_);
  if (!v) {
    throw ValidationError("UnitaryFamily: U(" + std::to_string(t) +
                          ") not unitary, deviation " + std::to_string(v.max_deviation));
  }
  return u;
}

EvolutionOperator UnitaryFamily::evolution(double t) const {
  return EvolutionOperator(at(t), t, 0.0, tol_);
}

Hamiltonian::Hamiltonian(Eigen::Index dim, Evaluator evaluator, double tol)
    : dim_(dim), evaluator_(std::move(evaluator)), tol_(tol) {
  if (dim_ < 1) throw DimensionError("Hamiltonian: dimension must be >= 1");
  if (!evaluator_) throw ValidationError("Hamiltonian: missing evaluator");
}

Hamiltonian::Hamiltonian(const cmat& constant, double tol)
    : Hamiltonian(constant.rows(), [m = constant](double) { return m; }, tol) {
  require_square(constant, "Hamiltonian");
  at(0.0);
}

cmat Hamiltonian::at(double t) const {
  cmat h = evaluator_(t);
  if (h.rows() != dim_ || h.cols() != dim_) {
    throw DimensionError("Hamiltonian: evaluator returned wrong shape at t = " +
                         std::to_string(t));
  }
  const Verdict v = is_self_adjoint(h, tol_);
  if (!v) {
    throw ValidationError("Hamiltonian: H(" + std::to_string(t) +
                          ") not self-adjoint, deviation " + std::to_string(v.max_deviation));
  }
  return h;
}

BeableFamily::BeableFamily(Eigen::Index dim, Evaluator values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ < 1) throw DimensionError("BeableFamily: dimension must be >= 1");
  if (!values_) throw ValidationError("BeableFamily: missing evaluator");
}

BeableFamily::BeableFamily(const Beable& constant)
    : dim_(constant.dim()), values_([v = constant.values()](double) { return v; }) {}

rvec BeableFamily::values(double t) const {
  rvec v = values_(t);
  if (v.size() != dim_) {
    throw DimensionError("BeableFamily: evaluator returned wrong size at t = " +
                         std::to_string(t));
  }
  if (!v.allFinite()) throw ValidationError("BeableFamily: non-finite value");
  return v;
}

cmat BeableFamily::matrix(double t) const {
  return values(t).cast<complex>().asDiagonal();
}

UnitaryFamily family_from_constant_h(const cmat& h, double hbar, double tol) {
  require_square(h, "family_from_constant_h");
  const Verdict herm = is_self_adjoint(h, tol);
  if (!herm) {
    throw ValidationError("family_from_constant_h: H not self-adjoint, deviation " +
                          std::to_string(herm.max_deviation));
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(h);
  if (es.info() != Eigen::Success) {
    throw ValidationError("family_from_constant_h: eigendecomposition failed");
  }
  const rvec evals = es.eigenvalues();
  const cmat evecs = es.eigenvectors();
  auto evaluator = [evals, evecs, hbar](double t) {
    cvec phases(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
      phases(k) = std::polar(1.0, -evals(k) * t / hbar);
    }
    return cmat(evecs * phases.asDiagonal() * evecs.adjoint());
  };
  return UnitaryFamily(h.rows(), std::move(evaluator), hbar, tol);
}

cmat extract_hamiltonian(const UnitaryFamily& fam, double t, double h_step) {
  if (!(h_step > 0.0)) throw ValidationError("extract_hamiltonian: step must be positive");
  const cmat du = (fam.at(t + h_step) - fam.at(t - h_step)) / (2.0 * h_step);
  const cmat h = complex(0.0, 1.0) * fam.hbar() * du * fam.at(t).adjoint();
  return 0.5 * (h + h.adjoint());
}

SchrodingerResult integrate_schrodinger(const Hamiltonian& h, const StateVector& psi0,
                                        double t_end, double dt, double hbar, Tolerance tol) {
  check_step_args(t_end, dt, "integrate_schrodinger");
  if (h.dim() != psi0.dim()) {
    throw DimensionError("integrate_schrodinger: Hamiltonian dim does not match state dim");
  }
  const complex minus_i_over_hbar(0.0, -1.0 / hbar);
  auto rhs = [&](double t, const cvec& y) { return cvec(minus_i_over_hbar * (h.at(t) * y)); };
  cvec psi = rk4_integrate(cvec(psi0.psi()), t_end, dt, rhs);
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > tol.integ) {
    throw ValidationError("integrate_schrodinger: norm drifted by " + std::to_string(drift));
  }
  psi /= psi.norm();
  return {StateVector(std::move(psi), tol.alg), drift};
}

VonNeumannResult integrate_von_neumann(const Hamiltonian& h, const DensityMatrix& rho0,
                                       double t_end, double dt, double hbar, Tolerance tol) {
  check_step_args(t_end, dt, "integrate_von_neumann");
  if (h.dim() != rho0.dim()) {
    throw DimensionError("integrate_von_neumann: Hamiltonian dim does not match density dim");
  }
  const complex minus_i_over_hbar(0.0, -1.0 / hbar);
  auto rhs = [&](double t, const cmat& y) {
    const cmat ht = h.at(t);
    return cmat(minus_i_over_hbar * (ht * y - y * ht));
  };
  cmat rho = rk4_integrate(cmat(rho0.rho()), t_end, dt, rhs);
  const double trace_drift = std::abs(rho.trace() - complex(1.0, 0.0));
  const double herm_drift = max_abs_diff(rho, rho.adjoint().eval());
  if (trace_drift > tol.integ || herm_drift > tol.integ) {
    throw ValidationError("integrate_von_neumann: drift exceeded tolerance (trace " +
                          std::to_string(trace_drift) + ", hermiticity " +
                          std::to_string(herm_drift) + ")");
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  // Integration error can push small eigenvalues slightly negative, so the
  // output is validated at the integration tolerance, not the algebraic one.
  Tolerance out_tol = tol;
  out_tol.alg = std::max(tol.alg, tol.integ);
  return {DensityMatrix(std::move(rho), out_tol.alg), trace_drift, herm_drift};
}

double check_ehrenfest(const Hamiltonian& h, const BeableFamily& a, const DensityMatrix& rho0,
                       double t, double h_step, double dt, double hbar) {
  if (!(h_step > 0.0)) throw ValidationError("check_ehrenfest: step must be positive");
  if (h.dim() != a.dim() || h.dim() != rho0.dim()) {
    throw DimensionError("check_ehrenfest: dimension mismatch");
  }
  const complex minus_i_over_hbar(0.0, -1.0 / hbar);
  auto rhs = [&](double s, const cmat& y) {
    const cmat hs = h.at(s);
    return cmat(minus_i_over_hbar * (hs * y - y * hs));
  };
  cmat rho_t = rho0.rho();
  if (t > 0.0) rho_t = rk4_integrate(rho_t, t, std::min(dt, t), rhs);

  // Both sides are evaluated around the same state, so the transport error in
  // rho_t cancels and the residual probes only the equation itself.
  const cmat rho_plus = rk4_step(rho_t, t, h_step, rhs);
  const cmat rho_minus = rk4_step(rho_t, t, -h_step, rhs);
  const double lhs = ((a.matrix(t + h_step) * rho_plus).trace().real() -
                      (a.matrix(t - h_step) * rho_minus).trace().real()) /
                     (2.0 * h_step);

  const cmat ht = h.at(t);
  const cmat at = a.matrix(t);
  const cmat commutator_term = complex(0.0, 1.0 / hbar) * (ht * at - at * ht);
  const cmat da_dt = (a.matrix(t + h_step) - a.matrix(t - h_step)) / (2.0 * h_step);
  const double rhs_value = (commutator_term * rho_t).trace().real() +
                           (da_dt * rho_t).trace().real();
  return std::abs(lhs - rhs_value);
}

double check_heisenberg_eom(const Hamiltonian& h, const BeableFamily& a,
                            const UnitaryFamily& fam, double t, double h_step) {
  if (!(h_step > 0.0)) throw ValidationError("check_heisenberg_eom: step must be positive");
  if (h.dim() != a.dim() || h.dim() != fam.dim()) {
    throw DimensionError("check_heisenberg_eom: dimension mismatch");
  }
  const double hbar = fam.hbar();
  auto heisenberg = [&](double s) {
    const cmat u = fam.at(s);
    return cmat(u.adjoint() * a.matrix(s) * u);
  };
  const cmat lhs = (heisenberg(t + h_step) - heisenberg(t - h_step)) / (2.0 * h_step);

  const cmat ut = fam.at(t);
  const cmat hh = ut.adjoint() * h.at(t) * ut;
  const cmat ah = heisenberg(t);
  const cmat da_dt = (a.matrix(t + h_step) - a.matrix(t - h_step)) / (2.0 * h_step);
  const cmat rhs = complex(0.0, 1.0 / hbar) * (hh * ah - ah * hh) +
                   ut.adjoint() * da_dt * ut;
  return max_abs_diff(lhs, rhs);
}

}  // namespace unistoch
