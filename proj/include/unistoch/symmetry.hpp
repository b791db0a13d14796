#ifndef UNISTOCH_SYMMETRY_HPP
#define UNISTOCH_SYMMETRY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "unistoch/correspondence.hpp"
#include "unistoch/dynamics.hpp"
#include "unistoch/gauge.hpp"
#include "unistoch/types.hpp"

namespace unistoch {

enum class SymmetryKind { Unknown, Unitary, AntiUnitary };

// Unitary candidate for a dynamical symmetry.
class SymmetryCandidate {
public:
  explicit SymmetryCandidate(cmat v, SymmetryKind hint = SymmetryKind::Unknown,
                             double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return v_.rows(); }
  const cmat& v() const { return v_; }
  SymmetryKind hint() const { return hint_; }

private:
  cmat v_;
  SymmetryKind hint_;
};

enum class SymmetryClass { None, Unitary, AntiUnitary, PhaseGeneral };

struct SymmetryVerdict {
  bool holds = false;
  SymmetryClass classification = SymmetryClass::None;
  double max_violation = 0.0;  // worst | |VThetaV^dag|^2 - |Theta|^2 | entry
  // Phases theta_ij with V Theta V^dag = Theta (.) exp(i theta); only present
  // when the symmetry holds. Entries where |Theta_ij| <= tol carry no phase
  // information and are flagged in `unconstrained`.
  std::optional<PhaseMatrix> recovered_phases;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> unconstrained;
};

struct WignerVerdict {
  bool holds = false;
  int trials = 0;
  double max_violation = 0.0;
  // First basis in which the modulus-square condition failed, if any.
  std::optional<Basis> counterexample;
  int counterexample_trial = -1;
};

struct NoetherReport {
  bool precondition_holds = false;  // [G, U(t)] = 0 at every queried time
  double max_commutator_norm = 0.0;
  double max_drift = 0.0;  // max |<G(t)> - <G(0)>|
};

// Entrywise-phase criterion: V Theta V^dag must agree with Theta in
// modulus-square. Classifies Unitary / AntiUnitary / PhaseGeneral when it
// holds and recovers the phase matrix.
SymmetryVerdict check_dynamical_symmetry(const SymmetryCandidate& v,
                                         const EvolutionOperator& theta,
                                         double tol = Tolerance{}.alg);

// Conjugation form V conj(Theta) V^dag = Theta.
Verdict check_antiunitary_form(const SymmetryCandidate& v, const EvolutionOperator& theta,
                               double tol = Tolerance{}.alg);

// Modulus-square condition re-tested in `trials` random orthonormal bases.
WignerVerdict check_wigner(const SymmetryCandidate& v, const EvolutionOperator& theta,
                           int trials = 64, std::uint64_t seed = 0,
                           double tol = Tolerance{}.alg);

// Conservation of <G(t)> = tr(G U rho0 U^dag) over a time grid, with the
// commutation precondition [G, U(t)] = 0 checked and reported.
NoetherReport noether_check(const cmat& g, const UnitaryFamily& fam, const DensityMatrix& rho0,
                            const std::vector<double>& times, double tol = Tolerance{}.alg);

// For an involution (V^2 = 1) the candidate is itself the self-adjoint
// conserved observable.
cmat involution_generator(const SymmetryCandidate& v, double tol = Tolerance{}.alg);

}  // namespace unistoch

#endif
