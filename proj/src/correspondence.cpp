#include "unistoch/correspondence.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "unistoch/dynamics.hpp"
#include "unistoch/linalg.hpp"

namespace unistoch {

namespace {

rmat modulus_square(const cmat& m) { return m.cwiseAbs2(); }

void check_summation_condition(const cmat& theta, double tol) {
  const rmat sq = modulus_square(theta);
  for (Eigen::Index j = 0; j < sq.cols(); ++j) {
    const double err = std::abs(sq.col(j).sum() - 1.0);
    if (err > tol) {
      throw ValidationError("EvolutionOperator: column " + std::to_string(j) +
                            " violates the summation condition by " + std::to_string(err));
    }
  }
}

}  // namespace

EvolutionOperator::EvolutionOperator(cmat theta, double target_time, double anchor_time,
                                     double tol)
    : theta_(std::move(theta)), target_time_(target_time), anchor_time_(anchor_time) {
  require_finite(theta_, "EvolutionOperator");
  require_square(theta_, "EvolutionOperator");
  if (theta_.rows() < 1) throw DimensionError("EvolutionOperator: dimension must be >= 1");
  check_summation_condition(theta_, tol);
}

DensityMatrix::DensityMatrix(cmat rho, double tol) : rho_(std::move(rho)) {
  require_finite(rho_, "DensityMatrix");
  require_square(rho_, "DensityMatrix");
  if (rho_.rows() < 1) throw DimensionError("DensityMatrix: dimension must be >= 1");
  const Verdict herm = is_self_adjoint(rho_, tol);
  if (!herm) {
    throw ValidationError("DensityMatrix: not self-adjoint, deviation " +
                          std::to_string(herm.max_deviation));
  }
  const Verdict psd = is_psd(rho_, tol);
  if (!psd) {
    throw ValidationError("DensityMatrix: not positive-semidefinite, deviation " +
                          std::to_string(psd.max_deviation));
  }
  const double trace_err = std::abs(rho_.trace() - complex(1.0, 0.0));
  if (trace_err > tol) {
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(trace_err));
  }
}

bool DensityMatrix::is_diagonal(double tol) const {
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
      if (i != j && std::abs(rho_(i, j)) > tol) return false;
    }
  }
  return true;
}

StateVector::StateVector(cvec psi, double tol) : psi_(std::move(psi)) {
  if (psi_.size() < 1) throw DimensionError("StateVector: dimension must be >= 1");
  if (!psi_.allFinite()) throw ValidationError("StateVector: non-finite entry");
  const double norm_err = std::abs(psi_.norm() - 1.0);
  if (norm_err > tol) {
    throw ValidationError("StateVector: norm deviates from 1 by " + std::to_string(norm_err));
  }
}

DensityMatrix StateVector::to_density(double tol) const {
  return DensityMatrix(psi_ * psi_.adjoint(), tol);
}

Beable::Beable(rvec values, double explicit_time)
    : values_(std::move(values)), explicit_time_(explicit_time) {
  if (values_.size() < 1) throw DimensionError("Beable: dimension must be >= 1");
  if (!values_.allFinite()) throw ValidationError("Beable: non-finite value");
}

Emergeable::Emergeable(cmat m, double tol) : m_(std::move(m)) {
  require_finite(m_, "Emergeable");
  require_square(m_, "Emergeable");
  const Verdict herm = is_self_adjoint(m_, tol);
  if (!herm) {
    throw ValidationError("Emergeable: not self-adjoint, deviation " +
                          std::to_string(herm.max_deviation));
  }
}

TransitionMatrix gamma_from_theta(const EvolutionOperator& theta, double tol) {
  return TransitionMatrix(modulus_square(theta.theta()), theta.target_time(),
                          theta.anchor_time(), tol);
}

EvolutionOperator theta_from_gamma(const TransitionMatrix& gamma,
                                   const std::optional<rmat>& phases, double tol) {
  const rmat& g = gamma.gamma();
  cmat theta(g.rows(), g.cols());
  if (phases) {
    if (phases->rows() != g.rows() || phases->cols() != g.cols()) {
      throw DimensionError("theta_from_gamma: phase matrix shape mismatch");
    }
    require_finite(*phases, "theta_from_gamma phases");
  }
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double r = std::sqrt(std::max(g(i, j), 0.0));
      theta(i, j) = phases ? std::polar(r, (*phases)(i, j)) : complex(r, 0.0);
    }
  }
  return EvolutionOperator(std::move(theta), gamma.target_time(), gamma.anchor_time(), tol);
}

double dictionary_rhs(const EvolutionOperator& theta, const PVM& pvm, Eigen::Index i,
                      Eigen::Index j) {
  return dictionary_rhs(theta, pvm, pvm, i, j);
}

double dictionary_rhs(const EvolutionOperator& theta, const PVM& pvm_target,
                      const PVM& pvm_anchor, Eigen::Index i, Eigen::Index j) {
  return dictionary_rhs(theta.theta(), pvm_target, pvm_anchor, i, j);
}

double dictionary_rhs(const cmat& theta, const PVM& pvm_target, const PVM& pvm_anchor,
                      Eigen::Index i, Eigen::Index j) {
  require_square(theta, "dictionary_rhs");
  if (pvm_target.dim() != theta.rows() || pvm_anchor.dim() != theta.rows()) {
    throw DimensionError("dictionary_rhs: PVM dim does not match operator dim");
  }
  const complex value =
      (theta.adjoint() * pvm_target.projector(i) * theta * pvm_anchor.projector(j)).trace();
  return value.real();
}

DensityMatrix initial_density(const ProbVector& p0, double tol) {
  return DensityMatrix(p0.values().cast<complex>().asDiagonal(), tol);
}

DensityMatrix evolve_density(const DensityMatrix& rho0, const EvolutionOperator& theta,
                             double tol) {
  if (rho0.dim() != theta.dim()) {
    throw DimensionError("evolve_density: density dim " + std::to_string(rho0.dim()) +
                         " vs operator dim " + std::to_string(theta.dim()));
  }
  return DensityMatrix(theta.theta() * rho0.rho() * theta.theta().adjoint(), tol);
}

double born_rule(const DensityMatrix& rho, const PVM& pvm, Eigen::Index i, double tol) {
  if (pvm.dim() != rho.dim()) {
    throw DimensionError("born_rule: PVM dim does not match density dim");
  }
  const complex value = (pvm.projector(i) * rho.rho()).trace();
  const double p = value.real();
  if (p < -tol || p > 1.0 + tol) {
    throw ValidationError("born_rule: probability " + std::to_string(p) + " outside [0, 1]");
  }
  return p;
}

double born_rule_state(const StateVector& psi, Eigen::Index i) {
  if (i < 0 || i >= psi.dim()) {
    throw DimensionError("born_rule_state: index " + std::to_string(i) + " out of range");
  }
  return std::norm(psi.psi()(i));
}

StateVector factor_rank_one(const DensityMatrix& rho, double rank_tol, double tol) {
  Eigen::SelfAdjointEigenSolver<cmat> es(rho.rho());
  const rvec evals = es.eigenvalues();  // ascending
  const Eigen::Index n = rho.dim();
  const double second = n >= 2 ? evals(n - 2) : 0.0;
  if (second > rank_tol) {
    throw NotRankOneError("factor_rank_one: density matrix has rank > 1, second eigenvalue " +
                          std::to_string(second), second);
  }
  cvec psi = es.eigenvectors().col(n - 1);
  psi /= psi.norm();
  // Fix the residual overall phase: first component above tolerance becomes
  // real positive.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(psi(i));
    if (a > tol) {
      psi *= std::conj(psi(i)) / a;
      break;
    }
  }
  return StateVector(std::move(psi), tol);
}

double expect_obs(const cmat& observable, const DensityMatrix& rho, double tol) {
  require_square(observable, "expect_obs");
  if (observable.rows() != rho.dim()) {
    throw DimensionError("expect_obs: observable dim does not match density dim");
  }
  const Verdict herm = is_self_adjoint(observable, tol);
  if (!herm) {
    throw ValidationError("expect_obs: observable not self-adjoint, deviation " +
                          std::to_string(herm.max_deviation));
  }
  const complex value = (observable * rho.rho()).trace();
  if (std::abs(value.imag()) > tol) {
    throw ValidationError("expect_obs: expectation has imaginary residue " +
                          std::to_string(value.imag()));
  }
  return value.real();
}

double expect_obs(const Beable& a, const DensityMatrix& rho, double tol) {
  return expect_obs(a.matrix(), rho, tol);
}

double expect_obs(const Emergeable& a, const DensityMatrix& rho, double tol) {
  return expect_obs(a.matrix(), rho, tol);
}

Emergeable to_heisenberg(const Beable& a, const EvolutionOperator& theta, double tol) {
  if (a.dim() != theta.dim()) {
    throw DimensionError("to_heisenberg: observable dim does not match operator dim");
  }
  const cmat& th = theta.theta();
  return Emergeable(th.adjoint() * a.matrix() * th, tol);
}

Emergeable to_heisenberg(const Emergeable& a, const EvolutionOperator& theta, double tol) {
  if (a.dim() != theta.dim()) {
    throw DimensionError("to_heisenberg: observable dim does not match operator dim");
  }
  const cmat& th = theta.theta();
  return Emergeable(th.adjoint() * a.matrix() * th, tol);
}

Emergeable emergeable_rate(const Beable& a, const UnitaryFamily& family, double h) {
  if (h <= 0.0) throw ValidationError("emergeable_rate: step must be positive");
  if (a.dim() != family.dim()) {
    throw DimensionError("emergeable_rate: observable dim does not match family dim");
  }
  const cmat obs = a.matrix();
  const cmat up = family.at(h);
  const cmat um = family.at(-h);
  const cmat diff =
      (up.adjoint() * obs * up - um.adjoint() * obs * um) / (2.0 * h);
  return Emergeable(0.5 * (diff + diff.adjoint()));
}

}  // namespace unistoch
