#ifndef UNISTOCH_GAUGE_HPP
#define UNISTOCH_GAUGE_HPP

#include <functional>
#include <vector>

#include "unistoch/correspondence.hpp"
#include "unistoch/dynamics.hpp"
#include "unistoch/types.hpp"

namespace unistoch {

// Entrywise phases theta_ij for one target time.
class PhaseMatrix {
public:
  explicit PhaseMatrix(rmat phases);

  Eigen::Index dim() const { return phases_.rows(); }
  const rmat& phases() const { return phases_; }
  // Entries reduced to [0, 2*pi), for reporting only.
  rmat reduced() const;

private:
  rmat phases_;
};

// Local-in-time unitary V(t); validated unitary at every query.
class FWTransform {
public:
  using Evaluator = std::function<cmat(double)>;

  FWTransform(Eigen::Index dim, Evaluator evaluator, double tol = Tolerance{}.alg);
  // Constant V.
  explicit FWTransform(const cmat& constant, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  cmat at(double t) const;

private:
  Eigen::Index dim_;
  Evaluator evaluator_;
  double tol_;
};

// Everything a Foldy-Wouthuysen transformation acts on at one target time,
// plus the co-transformed PVMs needed to re-evaluate the dictionary: the
// target-time slot rides with V(t), the anchor-time slot with V(0).
//
// theta holds V(t) Theta V^dag(0) as a plain matrix: for non-unitary Theta
// the transformed operator satisfies the summation condition only relative
// to the co-transformed anchor PVM, not entrywise in the configuration
// basis, so it cannot in general be wrapped as an EvolutionOperator.
struct FWBundle {
  cmat theta;
  double target_time = 0.0;
  double anchor_time = 0.0;
  DensityMatrix rho;
  std::vector<Emergeable> observables;
  PVM pvm_target;
  PVM pvm_anchor;
};

// Theta -> Theta (.) exp(i phases); leaves the transition matrix unchanged.
EvolutionOperator sh_gauge(const EvolutionOperator& theta, const PhaseMatrix& phases,
                           double tol = Tolerance{}.alg);

// Simultaneous transformation of operator, state, and observables:
//   Theta -> V(t) Theta V^dag(0),  rho(t) -> V(t) rho V^dag(t),
//   A -> V(t) A V^dag(t),          P_i -> V(t) P_i V^dag(t) (target slot),
//                                  P_j -> V(0) P_j V^dag(0) (anchor slot).
FWBundle fw_gauge(const EvolutionOperator& theta, const DensityMatrix& rho,
                  const std::vector<cmat>& observables, const FWTransform& v, double t,
                  double tol = Tolerance{}.alg);

// H_V(t) = V H V^dag - i hbar V dV^dag/dt with the derivative taken by
// central differences; self-adjoint up to the finite-difference error.
cmat transform_hamiltonian(const Hamiltonian& h, const FWTransform& v, double t,
                           double h_step = 1e-5, double hbar = 1.0);

// Residual of V [d/dt + (i/hbar)H] psi = [d/dt + (i/hbar)H_V] (V psi) applied
// to a constant test vector psi.
double check_covariant_derivative(const Hamiltonian& h, const FWTransform& v,
                                  const StateVector& psi, double t, double h_step = 1e-5,
                                  double hbar = 1.0);

}  // namespace unistoch

#endif
