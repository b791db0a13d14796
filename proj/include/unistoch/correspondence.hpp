#ifndef UNISTOCH_CORRESPONDENCE_HPP
#define UNISTOCH_CORRESPONDENCE_HPP

#include <optional>

#include "unistoch/pvm.hpp"
#include "unistoch/stochastic.hpp"
#include "unistoch/types.hpp"

namespace unistoch {

class UnitaryFamily;  // dynamics.hpp

// Complex matrix whose entrywise modulus-squares form a transition matrix.
// The defining invariant is the summation condition: every column of
// |Theta_ij|^2 sums to 1. Unitarity is a special case, not a requirement.
class EvolutionOperator {
public:
  EvolutionOperator(cmat theta, double target_time, double anchor_time = 0.0,
                    double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return theta_.rows(); }
  const cmat& theta() const { return theta_; }
  double target_time() const { return target_time_; }
  double anchor_time() const { return anchor_time_; }

private:
  cmat theta_;
  double target_time_;
  double anchor_time_;
};

// Self-adjoint, positive-semidefinite, trace-one matrix.
class DensityMatrix {
public:
  explicit DensityMatrix(cmat rho, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return rho_.rows(); }
  const cmat& rho() const { return rho_; }
  bool is_diagonal(double tol = Tolerance{}.alg) const;

private:
  cmat rho_;
};

// Unit-norm column vector; the rank-one factor of a pure density matrix.
class StateVector {
public:
  explicit StateVector(cvec psi, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return psi_.size(); }
  const cvec& psi() const { return psi_; }
  DensityMatrix to_density(double tol = Tolerance{}.alg) const;

private:
  cvec psi_;
};

// Random variable over configurations: per-configuration values a(i,t) at an
// explicit time, represented as a diagonal self-adjoint matrix.
class Beable {
public:
  explicit Beable(rvec values, double explicit_time = 0.0);

  Eigen::Index dim() const { return values_.size(); }
  const rvec& values() const { return values_; }
  double explicit_time() const { return explicit_time_; }
  cmat matrix() const { return values_.cast<complex>().asDiagonal(); }

private:
  rvec values_;
  double explicit_time_;
};

// Self-adjoint observable that is generically not diagonal in the
// configuration basis.
class Emergeable {
public:
  explicit Emergeable(cmat m, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return m_.rows(); }
  const cmat& matrix() const { return m_; }

private:
  cmat m_;
};

// Entrywise modulus-square of Theta; column-stochastic by the summation
// condition.
TransitionMatrix gamma_from_theta(const EvolutionOperator& theta,
                                  double tol = Tolerance{}.alg);

// Entrywise square roots of Gamma, optionally dressed with phases:
// Theta_ij = sqrt(Gamma_ij) exp(i phases_ij). Omitted phases mean the
// canonical non-negative-real gauge.
EvolutionOperator theta_from_gamma(const TransitionMatrix& gamma,
                                   const std::optional<rmat>& phases = std::nullopt,
                                   double tol = Tolerance{}.alg);

// tr(Theta^dag P_i Theta P_j) for one PVM on both slots.
double dictionary_rhs(const EvolutionOperator& theta, const PVM& pvm, Eigen::Index i,
                      Eigen::Index j);

// Same trace with independent PVMs for the target-time (i) and anchor-time
// (j) slots; needed when the two slots transform with different unitaries.
double dictionary_rhs(const EvolutionOperator& theta, const PVM& pvm_target,
                      const PVM& pvm_anchor, Eigen::Index i, Eigen::Index j);

// Raw-matrix form, for transformed operators that are not representable as
// EvolutionOperator values (see FWBundle).
double dictionary_rhs(const cmat& theta, const PVM& pvm_target, const PVM& pvm_anchor,
                      Eigen::Index i, Eigen::Index j);

// diag(p_1(0), ..., p_N(0)).
DensityMatrix initial_density(const ProbVector& p0, double tol = Tolerance{}.alg);

// Congruence transformation Theta rho Theta^dag. The output is re-validated:
// for non-diagonal rho and non-unitary Theta the result can fail the density
// invariants, which surfaces as a ValidationError.
DensityMatrix evolve_density(const DensityMatrix& rho0, const EvolutionOperator& theta,
                             double tol = Tolerance{}.alg);

// tr(P_i rho).
double born_rule(const DensityMatrix& rho, const PVM& pvm, Eigen::Index i,
                 double tol = Tolerance{}.alg);

// |Psi_i|^2.
double born_rule_state(const StateVector& psi, Eigen::Index i);

// Unit eigenvector of a rank-one density matrix, phase-fixed so the first
// component above tolerance is real positive.
StateVector factor_rank_one(const DensityMatrix& rho, double rank_tol = 1e-8,
                            double tol = Tolerance{}.alg);

// tr(A rho); the imaginary residue is checked against tol and discarded.
double expect_obs(const Beable& a, const DensityMatrix& rho, double tol = Tolerance{}.alg);
double expect_obs(const Emergeable& a, const DensityMatrix& rho,
                  double tol = Tolerance{}.alg);
double expect_obs(const cmat& observable, const DensityMatrix& rho,
                  double tol = Tolerance{}.alg);

// Heisenberg picture: Theta^dag A Theta.
Emergeable to_heisenberg(const Beable& a, const EvolutionOperator& theta,
                         double tol = Tolerance{}.alg);
Emergeable to_heisenberg(const Emergeable& a, const EvolutionOperator& theta,
                         double tol = Tolerance{}.alg);

// Rate emergeable Adot = d/dt [U^dag(t) A U(t)] at t = 0, by central
// difference with step h, symmetrized to exact self-adjointness.
Emergeable emergeable_rate(const Beable& a, const UnitaryFamily& family, double h = 1e-5);

}  // namespace unistoch

#endif
