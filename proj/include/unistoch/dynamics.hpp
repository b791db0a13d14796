#ifndef UNISTOCH_DYNAMICS_HPP
#define UNISTOCH_DYNAMICS_HPP

#include <functional>

#include "unistoch/correspondence.hpp"
#include "unistoch/types.hpp"

namespace unistoch {

// Time-indexed family of unitaries U(t <- 0). The evaluator must be a pure
// function of t; every query is validated against the unitarity invariant,
// and U(0) = identity is checked at construction.
class UnitaryFamily {
public:
  using Evaluator = std::function<cmat(double)>;

  UnitaryFamily(Eigen::Index dim, Evaluator evaluator, double hbar = 1.0,
                double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  double hbar() const { return hbar_; }

  // U(t), validated unitary to the construction tolerance.
  cmat at(double t) const;

  // U(t) wrapped as an evolution operator with target time t.
  EvolutionOperator evolution(double t) const;

private:
  Eigen::Index dim_;
  Evaluator evaluator_;
  double hbar_;
  double tol_;
};

// Time-dependent self-adjoint generator H(t); validated at every query.
class Hamiltonian {
public:
  using Evaluator = std::function<cmat(double)>;

  Hamiltonian(Eigen::Index dim, Evaluator evaluator, double tol = Tolerance{}.alg);
  // Constant Hamiltonian.
  explicit Hamiltonian(const cmat& constant, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  cmat at(double t) const;

private:
  Eigen::Index dim_;
  Evaluator evaluator_;
  double tol_;
};

// Random variable whose per-configuration values may depend explicitly on
// time; generalizes Beable for the equation-of-motion checks.
class BeableFamily {
public:
  using Evaluator = std::function<rvec(double)>;

  BeableFamily(Eigen::Index dim, Evaluator values);
  BeableFamily(const Beable& constant);  // NOLINT: implicit by design

  Eigen::Index dim() const { return dim_; }
  rvec values(double t) const;
  cmat matrix(double t) const;

private:
  Eigen::Index dim_;
  Evaluator values_;
};

struct SchrodingerResult {
  StateVector psi;
  double norm_drift = 0.0;  // |norm - 1| before renormalization
};

struct VonNeumannResult {
  DensityMatrix rho;
  double trace_drift = 0.0;
  double hermiticity_drift = 0.0;
};

// U(t) = exp(-i H t / hbar) for a constant self-adjoint H, via
// eigendecomposition.
UnitaryFamily family_from_constant_h(const cmat& h, double hbar = 1.0,
                                     double tol = Tolerance{}.alg);

// H(t) = i hbar (dU/dt) U^dag by central differences, symmetrized to exact
// self-adjointness.
cmat extract_hamiltonian(const UnitaryFamily& fam, double t, double h_step = 1e-5);

// Fixed-step RK4 for i hbar dPsi/dt = H(t) Psi over [0, t_end]. The returned
// state is renormalized; the pre-renormalization drift is reported and must
// stay within tol.integ.
SchrodingerResult integrate_schrodinger(const Hamiltonian& h, const StateVector& psi0,
                                        double t_end, double dt, double hbar = 1.0,
                                        Tolerance tol = Tolerance{});

// Fixed-step RK4 for i hbar dRho/dt = [H(t), Rho]. Output is re-symmetrized
// and trace-normalized; drifts are reported and must stay within tol.integ.
VonNeumannResult integrate_von_neumann(const Hamiltonian& h, const DensityMatrix& rho0,
                                       double t_end, double dt, double hbar = 1.0,
                                       Tolerance tol = Tolerance{});

// |d<A>/dt - <(i/hbar)[H,A]> - <dA/dt>| at time t, with the state advanced to
// t by RK4 and the derivative taken by central differences of step h_step.
double check_ehrenfest(const Hamiltonian& h, const BeableFamily& a, const DensityMatrix& rho0,
                       double t, double h_step = 1e-5, double dt = 1e-3, double hbar = 1.0);

// Matrix-norm residual of dA^H/dt = (i/hbar)[H^H, A^H] + (dA/dt)^H at time t,
// with U supplied exactly by the family.
double check_heisenberg_eom(const Hamiltonian& h, const BeableFamily& a,
                            const UnitaryFamily& fam, double t, double h_step = 1e-5);

}  // namespace unistoch

#endif
