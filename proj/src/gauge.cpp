#include "unistoch/gauge.hpp"

#include <cmath>

#include "unistoch/linalg.hpp"

namespace unistoch {

PhaseMatrix::PhaseMatrix(rmat phases) : phases_(std::move(phases)) {
  require_finite(phases_, "PhaseMatrix");
  if (phases_.rows() != phases_.cols() || phases_.rows() < 1) {
    throw DimensionError("PhaseMatrix: must be square");
  }
}

rmat PhaseMatrix::reduced() const {
  rmat out = phases_;
  const double two_pi = 2.0 * M_PI;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      double x = std::fmod(out(i, j), two_pi);
      if (x < 0.0) x += two_pi;
      out(i, j) = x;
    }
  }
  return out;
}

FWTransform::FWTransform(Eigen::Index dim, Evaluator evaluator, double tol)
    : dim_(dim), evaluator_(std::move(evaluator)), tol_(tol) {
  if (dim_ < 1) throw DimensionError("FWTransform: dimension must be >= 1");
  if (!evaluator_) throw ValidationError("FWTransform: missing evaluator");
}

FWTransform::FWTransform(const cmat& constant, double tol)
    : FWTransform(constant.rows(), [m = constant](double) { return m; }, tol) {
  require_square(constant, "FWTransform");
  at(0.0);
}

cmat FWTransform::at(double t) const {
  cmat v = evaluator_(t);
  if (v.rows() != dim_ || v.cols() != dim_) {
    throw DimensionError("FWTransform: evaluator returned wrong shape at t = " +
                         std::to_string(t));
  }
  const Verdict u = is_unitary(v, tol_);
  if (!u) {
    throw ValidationError("FWTransform: V(" + std::to_string(t) +
                          ") not unitary, deviation " + std::to_string(u.max_deviation));
  }
  return v;
}

EvolutionOperator sh_gauge(const EvolutionOperator& theta, const PhaseMatrix& phases,
                           double tol) {
  if (phases.dim() != theta.dim()) {
    throw DimensionError("sh_gauge: phase matrix dim does not match operator dim");
  }
  cmat out = theta.theta();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) *= std::polar(1.0, phases.phases()(i, j));
    }
  }
  return EvolutionOperator(std::move(out), theta.target_time(), theta.anchor_time(), tol);
}

FWBundle fw_gauge(const EvolutionOperator& theta, const DensityMatrix& rho,
                  const std::vector<cmat>& observables, const FWTransform& v, double t,
                  double tol) {
  const Eigen::Index n = theta.dim();
  if (rho.dim() != n || v.dim() != n) {
    throw DimensionError("fw_gauge: dimension mismatch");
  }
  const cmat vt = v.at(t);
  const cmat v0 = v.at(theta.anchor_time());

  cmat theta_v = vt * theta.theta() * v0.adjoint();
  DensityMatrix rho_v(vt * rho.rho() * vt.adjoint(), tol);
  std::vector<Emergeable> obs_v;
  obs_v.reserve(observables.size());
  for (const cmat& a : observables) {
    if (a.rows() != n || a.cols() != n) {
      throw DimensionError("fw_gauge: observable dim mismatch");
    }
    obs_v.emplace_back(vt * a * vt.adjoint(), tol);
  }
  const PVM config = configuration_pvm(n);
  // pvm_from_unitary applies W^dag P W, so pass W = V^dag to get V P V^dag.
  PVM pvm_target = pvm_from_unitary(vt.adjoint(), config, tol);
  PVM pvm_anchor = pvm_from_unitary(v0.adjoint(), config, tol);
  return FWBundle{std::move(theta_v), theta.target_time(), theta.anchor_time(),
                  std::move(rho_v),   std::move(obs_v),    std::move(pvm_target),
                  std::move(pvm_anchor)};
}

cmat transform_hamiltonian(const Hamiltonian& h, const FWTransform& v, double t,
                           double h_step, double hbar) {
  if (!(h_step > 0.0)) throw ValidationError("transform_hamiltonian: step must be positive");
  if (h.dim() != v.dim()) {
    throw DimensionError("transform_hamiltonian: dimension mismatch");
  }
  const cmat vt = v.at(t);
  const cmat dv_dag =
      (v.at(t + h_step).adjoint() - v.at(t - h_step).adjoint()) / (2.0 * h_step);
  return vt * h.at(t) * vt.adjoint() - complex(0.0, hbar) * vt * dv_dag;
}

double check_covariant_derivative(const Hamiltonian& h, const FWTransform& v,
                                  const StateVector& psi, double t, double h_step,
                                  double hbar) {
  if (!(h_step > 0.0)) {
    throw ValidationError("check_covariant_derivative: step must be positive");
  }
  if (h.dim() != v.dim() || h.dim() != psi.dim()) {
    throw DimensionError("check_covariant_derivative: dimension mismatch");
  }
  const cvec x = psi.psi();
  const cmat vt = v.at(t);
  const complex i_over_hbar(0.0, 1.0 / hbar);

  // Constant test trajectory: d/dt psi = 0 on the left.
  const cvec lhs = vt * (i_over_hbar * (h.at(t) * x));

  const cmat dv = (v.at(t + h_step) - v.at(t - h_step)) / (2.0 * h_step);
  const cmat h_v = transform_hamiltonian(h, v, t, h_step, hbar);
  const cvec rhs = dv * x + i_over_hbar * (h_v * (vt * x));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace unistoch
