#ifndef UNISTOCH_PVM_HPP
#define UNISTOCH_PVM_HPP

#include <vector>

#include "unistoch/types.hpp"

namespace unistoch {

// Orthonormal basis of C^dim, stored as the columns of a unitary matrix.
class Basis {
public:
  Basis(cmat vectors, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return vectors_.rows(); }
  const cmat& vectors() const { return vectors_; }
  cvec vector(Eigen::Index i) const { return vectors_.col(i); }

private:
  cmat vectors_;
};

// Projection-valued measure: mutually exclusive self-adjoint projectors
// summing to the identity. Invalid families cannot be constructed.
class PVM {
public:
  explicit PVM(std::vector<cmat> projectors, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(projectors_.size()); }
  const cmat& projector(Eigen::Index i) const;
  const std::vector<cmat>& projectors() const { return projectors_; }

private:
  Eigen::Index dim_ = 0;
  std::vector<cmat> projectors_;
};

// The n diagonal rank-one projectors diag(0,...,1,...,0).
PVM configuration_pvm(Eigen::Index n);

// Similarity transform of a PVM by a unitary: P_i -> V^dag P_i V.
PVM pvm_from_unitary(const cmat& v, const PVM& base, double tol = Tolerance{}.alg);

// Rank-one projectors e_i e_i^dag onto the basis columns.
PVM pvm_from_basis(const Basis& basis, double tol = Tolerance{}.alg);

}  // namespace unistoch

#endif
