#include "unistoch/dilation.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "unistoch/linalg.hpp"
#include "unistoch/rng.hpp"

namespace unistoch {

namespace {

void check_kraus_identity(const std::vector<cmat>& ops, Eigen::Index n, double tol,
                          const std::string& who) {
  cmat sum = cmat::Zero(n, n);
  for (const cmat& k : ops) sum += k.adjoint() * k;
  const double dev = max_abs_diff(sum, cmat::Identity(n, n));
  if (dev > tol) {
    throw ValidationError(who + ": Kraus identity violated by " + std::to_string(dev));
  }
}

rmat reconstruct_gamma_raw(const cmat& evolution, const PVM& internal_pvm,
                           Eigen::Index system_dim, Eigen::Index internal_dim,
                           Eigen::Index gamma_index) {
  const Eigen::Index n = system_dim;
  const Eigen::Index d = internal_dim;
  const cmat id_internal = cmat::Identity(d, d);
  const cmat& p_gamma = internal_pvm.projector(gamma_index);
  rmat gamma(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cmat pj = cmat::Zero(n, n);
    pj(j, j) = 1.0;
    const cmat rhs = evolution * tensor(pj, p_gamma);
    for (Eigen::Index i = 0; i < n; ++i) {
      cmat pi = cmat::Zero(n, n);
      pi(i, i) = 1.0;
      const cmat inner = evolution.adjoint() * tensor(pi, id_internal) * rhs;
      gamma(i, j) = partial_trace_internal(inner, n, d).trace().real();
    }
  }
  return gamma;
}

}  // namespace

KrausSet::KrausSet(std::vector<cmat> operators, double target_time, double tol)
    : operators_(std::move(operators)), target_time_(target_time) {
  if (operators_.empty()) throw DimensionError("KrausSet: no operators");
  dim_ = operators_[0].rows();
  if (dim_ < 1) throw DimensionError("KrausSet: dimension must be >= 1");
  for (const cmat& k : operators_) {
    require_finite(k, "KrausSet");
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw DimensionError("KrausSet: operator shape mismatch");
    }
  }
  check_kraus_identity(operators_, dim_, tol, "KrausSet");
}

const cmat& KrausSet::op(Eigen::Index b) const {
  if (b < 0 || b >= size()) {
    throw DimensionError("KrausSet: operator index out of range");
  }
  return operators_[static_cast<size_t>(b)];
}

DilatedSystem::DilatedSystem(Eigen::Index system_dim, Eigen::Index internal_dim,
                             PVM internal_pvm, Eigen::Index gamma_index, cmat evolution,
                             double target_time, double tol)
    : system_dim_(system_dim), internal_dim_(internal_dim),
      internal_pvm_(std::move(internal_pvm)), gamma_index_(gamma_index),
      evolution_(std::move(evolution)), target_time_(target_time) {
  if (system_dim_ < 1 || internal_dim_ < 1) {
    throw DimensionError("DilatedSystem: dimensions must be >= 1");
  }
  if (internal_pvm_.dim() != internal_dim_) {
    throw DimensionError("DilatedSystem: internal PVM dim mismatch");
  }
  if (gamma_index_ < 0 || gamma_index_ >= internal_pvm_.size()) {
    throw DimensionError("DilatedSystem: gamma index out of range");
  }
  require_finite(evolution_, "DilatedSystem");
  if (evolution_.rows() != system_dim_ * internal_dim_ ||
      evolution_.cols() != system_dim_ * internal_dim_) {
    throw DimensionError("DilatedSystem: evolution must be (N*D) x (N*D)");
  }
  // Generalized summation condition, in its operational form: the dictionary
  // must read back a column-stochastic matrix.
  const rmat gamma = reconstruct_gamma_raw(evolution_, internal_pvm_, system_dim_,
                                           internal_dim_, gamma_index_);
  const StochasticCheck chk = column_stochastic_check(gamma);
  if (!chk.ok(tol)) {
    throw ValidationError("DilatedSystem: reconstruction not column-stochastic (min entry " +
                          std::to_string(chk.min_entry) + ", worst column-sum error " +
                          std::to_string(chk.max_column_sum_error) + ")");
  }
}

KrausSet kraus_from_theta(const EvolutionOperator& theta, double tol) {
  const Eigen::Index n = theta.dim();
  std::vector<cmat> ops;
  ops.reserve(static_cast<size_t>(n));
  for (Eigen::Index b = 0; b < n; ++b) {
    cmat k = cmat::Zero(n, n);
    k.col(b) = theta.theta().col(b);
    ops.push_back(std::move(k));
  }
  return KrausSet(std::move(ops), theta.target_time(), tol);
}

TransitionMatrix gamma_from_kraus(const KrausSet& ks, const PVM& pvm, double tol) {
  if (pvm.dim() != ks.dim()) throw DimensionError("gamma_from_kraus: PVM dim mismatch");
  rmat gamma = rmat::Zero(pvm.size(), pvm.size());
  for (const cmat& k : ks.operators()) {
    for (Eigen::Index i = 0; i < pvm.size(); ++i) {
      const cmat left = k.adjoint() * pvm.projector(i) * k;
      for (Eigen::Index j = 0; j < pvm.size(); ++j) {
        gamma(i, j) += (left * pvm.projector(j)).trace().real();
      }
    }
  }
  return TransitionMatrix(std::move(gamma), ks.target_time(), 0.0, tol);
}

DensityMatrix evolve_density_kraus(const DensityMatrix& rho0, const KrausSet& ks, double tol) {
  if (rho0.dim() != ks.dim()) {
    throw DimensionError("evolve_density_kraus: dimension mismatch");
  }
  cmat out = cmat::Zero(rho0.dim(), rho0.dim());
  for (const cmat& k : ks.operators()) out += k * rho0.rho() * k.adjoint();
  return DensityMatrix(std::move(out), tol);
}

DilatedSystem dilate_trivial(const EvolutionOperator& theta, Eigen::Index d,
                             const PVM& internal_pvm, Eigen::Index gamma, double tol) {
  if (d < 1) throw DimensionError("dilate_trivial: internal dimension must be >= 1");
  if (internal_pvm.dim() != d) {
    throw DimensionError("dilate_trivial: internal PVM dim mismatch");
  }
  const cmat evolution = tensor(theta.theta(), cmat::Identity(d, d));
  return DilatedSystem(theta.dim(), d, internal_pvm, gamma, evolution, theta.target_time(),
                       tol);
}

DilatedSystem dilate_trivial(const EvolutionOperator& theta, Eigen::Index d,
                             Eigen::Index gamma, double tol) {
  return dilate_trivial(theta, d, configuration_pvm(d), gamma, tol);
}

TransitionMatrix reconstruct_gamma(const DilatedSystem& ds, double tol) {
  const rmat gamma = reconstruct_gamma_raw(ds.evolution(), ds.internal_pvm(), ds.system_dim(),
                                           ds.internal_dim(), ds.gamma_index());
  const StochasticCheck chk = column_stochastic_check(gamma);
  if (!chk.ok(tol)) {
    Eigen::Index worst = 0;
    double worst_err = -1.0;
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
      const double err = std::max(std::abs(gamma.col(j).sum() - 1.0), -gamma.col(j).minCoeff());
      if (err > worst_err) {
        worst_err = err;
        worst = j;
      }
    }
    throw ValidationError("reconstruct_gamma: column " + std::to_string(worst) +
                          " fails stochasticity by " + std::to_string(worst_err));
  }
  return TransitionMatrix(gamma, ds.target_time(), 0.0, tol);
}

DilatedSystem blockwise_gauge(const DilatedSystem& ds, const std::vector<cmat>& blocks,
                              double tol) {
  const Eigen::Index n = ds.system_dim();
  const Eigen::Index d = ds.internal_dim();
  if (static_cast<Eigen::Index>(blocks.size()) != n * n) {
    throw DimensionError("blockwise_gauge: need N^2 block unitaries, got " +
                         std::to_string(blocks.size()));
  }
  cmat evolution = ds.evolution();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cmat& v = blocks[static_cast<size_t>(i * n + j)];
      if (v.rows() != d || v.cols() != d) {
        throw DimensionError("blockwise_gauge: block (" + std::to_string(i) + "," +
                             std::to_string(j) + ") must be DxD");
      }
      const Verdict u = is_unitary(v, tol);
      if (!u) {
        throw ValidationError("blockwise_gauge: block (" + std::to_string(i) + "," +
                              std::to_string(j) + ") not unitary, deviation " +
                              std::to_string(u.max_deviation));
      }
      evolution.block(i * d, j * d, d, d) = v * evolution.block(i * d, j * d, d, d);
    }
  }
  return DilatedSystem(n, d, ds.internal_pvm(), ds.gamma_index(), std::move(evolution),
                       ds.target_time(), tol);
}

DilatedSystem stinespring_unitary(const KrausSet& ks, std::uint64_t seed, double tol) {
  const Eigen::Index n = ks.dim();
  const Eigen::Index d = ks.size();
  const Eigen::Index nd = n * d;
  const Eigen::Index gamma_slot = 0;

  // Isometry on the gamma slice: psi (x) e_gamma -> sum_b (K_b psi) (x) e_b.
  // Column (j, gamma) of the dilated unitary gets entry (K_b)_ij at row (i, b).
  cmat u = cmat::Zero(nd, nd);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (Eigen::Index i = 0; i < n; ++i) {
        u(i * d + b, j * d + gamma_slot) = ks.op(b)(i, j);
      }
    }
  }

  // Orthonormal completion of the remaining columns from seeded candidates.
  std::vector<Eigen::Index> fixed_cols;
  fixed_cols.reserve(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) fixed_cols.push_back(j * d + gamma_slot);

  Rng rng = Rng(seed).split("stinespring-completion");
  std::vector<cvec> ortho;  // all columns placed so far
  ortho.reserve(static_cast<size_t>(nd));
  for (const Eigen::Index c : fixed_cols) ortho.push_back(u.col(c));

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index g = 0; g < d; ++g) {
      if (g == gamma_slot) continue;
      cvec candidate;
      double norm = 0.0;
      do {
        candidate = random_complex(nd, 1, rng);
        // Two Gram-Schmidt sweeps; the second mops up rounding.
        for (int sweep = 0; sweep < 2; ++sweep) {
          for (const cvec& q : ortho) candidate -= q * (q.dot(candidate));
        }
        norm = candidate.norm();
      } while (norm < 1e-6);
      candidate /= norm;
      u.col(j * d + g) = candidate;
      ortho.push_back(std::move(candidate));
    }
  }

  const Verdict unit = is_unitary(u, tol);
  if (!unit) {
    throw ValidationError("stinespring_unitary: completion failed, unitarity deviation " +
                          std::to_string(unit.max_deviation));
  }
  return DilatedSystem(n, d, configuration_pvm(d), gamma_slot, std::move(u),
                       ks.target_time(), tol);
}

double kron_factor_error(const cmat& m, Eigen::Index n, Eigen::Index d) {
  require_square(m, "kron_factor_error");
  if (m.rows() != n * d) {
    throw DimensionError("kron_factor_error: matrix dim is not n*d");
  }
  // Van Loan rearrangement: row (i1, j1) over system indices, column (i2, j2)
  // over internal indices; a Kronecker product becomes a rank-one matrix.
  cmat r(n * n, d * d);
  for (Eigen::Index i1 = 0; i1 < n; ++i1) {
    for (Eigen::Index j1 = 0; j1 < n; ++j1) {
      const cmat block = m.block(i1 * d, j1 * d, d, d);
      for (Eigen::Index i2 = 0; i2 < d; ++i2) {
        for (Eigen::Index j2 = 0; j2 < d; ++j2) {
          r(i1 * n + j1, i2 * d + j2) = block(i2, j2);
        }
      }
    }
  }
  Eigen::JacobiSVD<cmat> svd(r);
  const rvec s = svd.singularValues();
  double tail = 0.0;
  for (Eigen::Index k = 1; k < s.size(); ++k) tail += s(k) * s(k);
  return std::sqrt(tail);
}

rmat realify(const cmat& m) {
  rmat out(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      out(2 * i, 2 * j) = a;
      out(2 * i, 2 * j + 1) = -b;
      out(2 * i + 1, 2 * j) = b;
      out(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return out;
}

rmat apply_conjugation_real(const rmat& m2n) {
  if (m2n.rows() % 2 != 0 || m2n.cols() % 2 != 0) {
    throw DimensionError("apply_conjugation_real: dimensions must be even");
  }
  rmat k = rmat::Zero(m2n.rows(), m2n.rows());
  for (Eigen::Index i = 0; i < m2n.rows() / 2; ++i) {
    k(2 * i, 2 * i + 1) = 1.0;
    k(2 * i + 1, 2 * i) = 1.0;
  }
  rmat kc = rmat::Zero(m2n.cols(), m2n.cols());
  for (Eigen::Index j = 0; j < m2n.cols() / 2; ++j) {
    kc(2 * j, 2 * j + 1) = 1.0;
    kc(2 * j + 1, 2 * j) = 1.0;
  }
  return k * m2n * kc;
}

}  // namespace unistoch
