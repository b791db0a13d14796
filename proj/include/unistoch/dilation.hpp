#ifndef UNISTOCH_DILATION_HPP
#define UNISTOCH_DILATION_HPP

#include <cstdint>
#include <vector>

#include "unistoch/correspondence.hpp"
#include "unistoch/pvm.hpp"
#include "unistoch/types.hpp"

namespace unistoch {

// Operators K_1..K_M on the system space satisfying the Kraus identity
// sum_b K_b^dag K_b = 1.
class KrausSet {
public:
  explicit KrausSet(std::vector<cmat> operators, double target_time = 0.0,
                    double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(operators_.size()); }
  const std::vector<cmat>& operators() const { return operators_; }
  const cmat& op(Eigen::Index b) const;
  double target_time() const { return target_time_; }

private:
  Eigen::Index dim_ = 0;
  std::vector<cmat> operators_;
  double target_time_;
};

// Evolution on an enlarged space system (x) internal, with the internal PVM
// and gamma slot needed to read the transition matrix back out through the
// dilated dictionary. Validity means the reconstruction is column-stochastic.
class DilatedSystem {
public:
  DilatedSystem(Eigen::Index system_dim, Eigen::Index internal_dim, PVM internal_pvm,
                Eigen::Index gamma_index, cmat evolution, double target_time = 0.0,
                double tol = Tolerance{}.alg);

  Eigen::Index system_dim() const { return system_dim_; }
  Eigen::Index internal_dim() const { return internal_dim_; }
  const PVM& internal_pvm() const { return internal_pvm_; }
  Eigen::Index gamma_index() const { return gamma_index_; }
  const cmat& evolution() const { return evolution_; }
  double target_time() const { return target_time_; }

private:
  Eigen::Index system_dim_;
  Eigen::Index internal_dim_;
  PVM internal_pvm_;
  Eigen::Index gamma_index_;
  cmat evolution_;
  double target_time_;
};

// K_b = Theta P_b: the b-th column of Theta placed in column b.
KrausSet kraus_from_theta(const EvolutionOperator& theta, double tol = Tolerance{}.alg);

// Gamma_ij = sum_b tr(K_b^dag P_i K_b P_j).
TransitionMatrix gamma_from_kraus(const KrausSet& ks, const PVM& pvm,
                                  double tol = Tolerance{}.alg);

// rho -> sum_b K_b rho K_b^dag.
DensityMatrix evolve_density_kraus(const DensityMatrix& rho0, const KrausSet& ks,
                                   double tol = Tolerance{}.alg);

// Theta -> Theta (x) 1 on system (x) internal; an identity at the level of
// the reconstructed transition matrix.
DilatedSystem dilate_trivial(const EvolutionOperator& theta, Eigen::Index d,
                             const PVM& internal_pvm, Eigen::Index gamma = 0,
                             double tol = Tolerance{}.alg);
// Same with the internal configuration PVM.
DilatedSystem dilate_trivial(const EvolutionOperator& theta, Eigen::Index d,
                             Eigen::Index gamma = 0, double tol = Tolerance{}.alg);

// Gamma_ij = tr(tr_I(Evo^dag [P_i (x) 1] Evo [P_j (x) P_gamma])).
TransitionMatrix reconstruct_gamma(const DilatedSystem& ds, double tol = Tolerance{}.alg);

// Left-multiplies each DxD block (i,j) of the dilated evolution by its own
// unitary; blocks are indexed i * N + j. Leaves the reconstruction invariant
// but generically destroys the tensor factorization.
DilatedSystem blockwise_gauge(const DilatedSystem& ds, const std::vector<cmat>& blocks,
                              double tol = Tolerance{}.alg);

// Unitary dilation of a Kraus set: internal dimension D = number of Kraus
// operators; the gamma-slot columns hold the stacked Kraus action and the
// remaining columns are a seeded orthonormal completion.
DilatedSystem stinespring_unitary(const KrausSet& ks, std::uint64_t seed = 0,
                                  double tol = Tolerance{}.alg);

// Frobenius distance from the best Kronecker factorization A (x) B with
// A n x n and B d x d (Van Loan rearrangement + leading singular value).
double kron_factor_error(const cmat& m, Eigen::Index n, Eigen::Index d);

// Real 2N x 2N representation: each entry a+bi becomes the 2x2 block
// [[a, -b], [b, a]]; a *-homomorphism taking unitaries to orthogonals.
rmat realify(const cmat& m);

// Conjugation by the block-diagonal matrix of [[0,1],[1,0]] blocks; equals
// realify of the entrywise conjugate.
rmat apply_conjugation_real(const rmat& m2n);

}  // namespace unistoch

#endif
