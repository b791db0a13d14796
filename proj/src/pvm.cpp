#include "unistoch/pvm.hpp"

#include "unistoch/linalg.hpp"

namespace unistoch {

Basis::Basis(cmat vectors, double tol) : vectors_(std::move(vectors)) {
  require_finite(vectors_, "Basis");
  if (vectors_.rows() < 1 || vectors_.rows() != vectors_.cols()) {
    throw DimensionError("Basis: need dim x dim matrix of column vectors");
  }
  const Verdict v = is_unitary(vectors_, tol);
  if (!v) {
    throw ValidationError("Basis: columns not orthonormal, deviation " +
                          std::to_string(v.max_deviation));
  }
}

PVM::PVM(std::vector<cmat> projectors, double tol) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw DimensionError("PVM: no projectors");
  dim_ = projectors_[0].rows();
  if (dim_ < 1) throw DimensionError("PVM: dimension must be >= 1");
  for (const cmat& p : projectors_) {
    if (p.rows() != dim_ || p.cols() != dim_) {
      throw DimensionError("PVM: projector shape mismatch");
    }
    require_finite(p, "PVM");
    const Verdict v = is_projector(p, tol);
    if (!v) {
      throw ValidationError("PVM: member not a projector, deviation " +
                            std::to_string(v.max_deviation));
    }
  }
  // Mutual exclusivity: P_i P_j = 0 for i != j.
  for (size_t i = 0; i < projectors_.size(); ++i) {
    for (size_t j = i + 1; j < projectors_.size(); ++j) {
      const double dev = max_abs(projectors_[i] * projectors_[j]);
      if (dev > tol) {
        throw ValidationError("PVM: projectors " + std::to_string(i) + " and " +
                              std::to_string(j) + " not mutually exclusive, deviation " +
                              std::to_string(dev));
      }
    }
  }
  cmat sum = cmat::Zero(dim_, dim_);
  for (const cmat& p : projectors_) sum += p;
  const double dev = max_abs_diff(sum, cmat::Identity(dim_, dim_));
  if (dev > tol) {
    throw ValidationError("PVM: completeness fails, deviation " + std::to_string(dev));
  }
}

const cmat& PVM::projector(Eigen::Index i) const {
  if (i < 0 || i >= size()) {
    throw DimensionError("PVM: projector index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(size()) + ")");
  }
  return projectors_[static_cast<size_t>(i)];
}

PVM configuration_pvm(Eigen::Index n) {
  if (n < 1) throw DimensionError("configuration_pvm: dimension must be >= 1");
  std::vector<cmat> projs;
  projs.reserve(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    cmat p = cmat::Zero(n, n);
    p(i, i) = 1.0;
    projs.push_back(std::move(p));
  }
  return PVM(std::move(projs));
}

PVM pvm_from_unitary(const cmat& v, const PVM& base, double tol) {
  if (v.rows() != base.dim()) {
    throw DimensionError("pvm_from_unitary: unitary dim does not match PVM dim");
  }
  const Verdict u = is_unitary(v, tol);
  if (!u) {
    throw ValidationError("pvm_from_unitary: matrix not unitary, deviation " +
                          std::to_string(u.max_deviation));
  }
  std::vector<cmat> projs;
  projs.reserve(static_cast<size_t>(base.size()));
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    projs.push_back(v.adjoint() * base.projector(i) * v);
  }
  return PVM(std::move(projs), tol);
}

PVM pvm_from_basis(const Basis& basis, double tol) {
  std::vector<cmat> projs;
  projs.reserve(static_cast<size_t>(basis.dim()));
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    const cvec e = basis.vector(i);
    projs.push_back(e * e.adjoint());
  }
  return PVM(std::move(projs), tol);
}

}  // namespace unistoch
