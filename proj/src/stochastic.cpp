#include "unistoch/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "unistoch/linalg.hpp"

namespace unistoch {

namespace {

constexpr double kTimeMatchTol = 1e-9;

void require_column_stochastic(const rmat& m, double tol, const std::string& who) {
  require_finite(m, who);
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError(who + ": transition matrix must be square, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const StochasticCheck chk = column_stochastic_check(m);
  if (!chk.ok(tol)) {
    throw ValidationError(who + ": not column-stochastic (min entry " +
                          std::to_string(chk.min_entry) + ", worst column-sum error " +
                          std::to_string(chk.max_column_sum_error) + ")");
  }
}

}  // namespace

ProbVector::ProbVector(rvec p, double tol) : p_(std::move(p)) {
  require_finite(rmat(p_), "ProbVector");
  if (p_.size() < 1) throw DimensionError("ProbVector: dimension must be >= 1");
  if (p_.minCoeff() < -tol || p_.maxCoeff() > 1.0 + tol) {
    throw ValidationError("ProbVector: entry outside [0, 1]");
  }
  if (std::abs(p_.sum() - 1.0) > tol) {
    throw ValidationError("ProbVector: entries sum to " + std::to_string(p_.sum()));
  }
}

TransitionMatrix::TransitionMatrix(rmat gamma, double target_time, double anchor_time,
                                   double tol)
    : gamma_(std::move(gamma)), target_time_(target_time), anchor_time_(anchor_time) {
  require_column_stochastic(gamma_, tol, "TransitionMatrix");
  if (!std::isfinite(target_time_) || !std::isfinite(anchor_time_)) {
    throw ValidationError("TransitionMatrix: non-finite time");
  }
  // Continuity at the anchor, checked only when the caller supplies it.
  if (target_time_ == anchor_time_) {
    const double dev = max_abs_diff(gamma_, rmat::Identity(gamma_.rows(), gamma_.cols()));
    if (dev > tol) {
      throw ValidationError("TransitionMatrix: sample at the anchor must be the identity, "
                            "deviation " + std::to_string(dev));
    }
  }
}

Process::Process(Eigen::Index dim, double anchor_time, ProbVector initial,
                 std::vector<TransitionMatrix> samples, double tol)
    : dim_(dim), anchor_time_(anchor_time), initial_(std::move(initial)),
      samples_(std::move(samples)) {
  if (dim_ < 1) throw DimensionError("Process: dimension must be >= 1");
  if (initial_.dim() != dim_) {
    throw DimensionError("Process: initial distribution dim mismatch");
  }
  std::sort(samples_.begin(), samples_.end(),
            [](const TransitionMatrix& a, const TransitionMatrix& b) {
              return a.target_time() < b.target_time();
            });
  for (size_t k = 0; k < samples_.size(); ++k) {
    const TransitionMatrix& s = samples_[k];
    if (s.dim() != dim_) throw DimensionError("Process: sample dim mismatch");
    if (s.anchor_time() != anchor_time_) {
      throw ValidationError("Process: sample anchored at " + std::to_string(s.anchor_time()) +
                            ", process anchor is " + std::to_string(anchor_time_));
    }
    if (k > 0 && !(samples_[k - 1].target_time() < s.target_time())) {
      throw ValidationError("Process: sample times must be strictly increasing");
    }
    if (s.target_time() == anchor_time_) {
      const double dev = max_abs_diff(s.gamma(), rmat::Identity(dim_, dim_));
      if (dev > tol) {
        throw ValidationError("Process: sample at the anchor must be the identity");
      }
    }
  }
}

const TransitionMatrix& Process::sample_at(double t) const {
  for (const TransitionMatrix& s : samples_) {
    if (std::abs(s.target_time() - t) <= kTimeMatchTol) return s;
  }
  throw ValidationError("Process: no sample at target time " + std::to_string(t));
}

ProbVector propagate(const TransitionMatrix& gamma, const ProbVector& p0, double tol) {
  if (gamma.dim() != p0.dim()) {
    throw DimensionError("propagate: transition matrix dim " + std::to_string(gamma.dim()) +
                         " vs distribution dim " + std::to_string(p0.dim()));
  }
  return ProbVector(gamma.gamma() * p0.values(), tol);
}

rmat markov_power(const rmat& gamma, Eigen::Index n, double tol) {
  require_column_stochastic(gamma, tol, "markov_power");
  if (n < 0) throw DimensionError("markov_power: negative power");
  rmat out = rmat::Identity(gamma.rows(), gamma.cols());
  for (Eigen::Index k = 0; k < n; ++k) out = gamma * out;
  return out;
}

DivisibilityReport candidate_intermediate(const TransitionMatrix& gamma_t,
                                          const TransitionMatrix& gamma_tprime,
                                          double tol, double sigma_min_threshold) {
  if (gamma_t.dim() != gamma_tprime.dim()) {
    throw DimensionError("candidate_intermediate: dimension mismatch");
  }
  if (gamma_t.anchor_time() != gamma_tprime.anchor_time()) {
    throw ValidationError("candidate_intermediate: samples anchored at different division "
                          "events (" + std::to_string(gamma_t.anchor_time()) + " vs " +
                          std::to_string(gamma_tprime.anchor_time()) + ")");
  }
  const rmat& a = gamma_tprime.gamma();
  Eigen::JacobiSVD<rmat> svd(a);
  const double sigma_min = svd.singularValues().minCoeff();
  if (sigma_min < sigma_min_threshold) {
    throw SingularityError("candidate_intermediate: Gamma(t') is singular to working "
                           "precision, smallest singular value " + std::to_string(sigma_min),
                           sigma_min);
  }
  DivisibilityReport rep;
  rep.split_time = gamma_tprime.target_time();
  rep.candidate = gamma_t.gamma() * a.inverse();
  const StochasticCheck chk = column_stochastic_check(rep.candidate);
  rep.min_entry = chk.min_entry;
  rep.max_column_sum_error = chk.max_column_sum_error;
  rep.is_stochastic = chk.ok(tol);
  return rep;
}

DivisibilityReport is_divisible_at(const Process& proc, double t, double t_prime,
                                   double tol, double sigma_min_threshold) {
  return candidate_intermediate(proc.sample_at(t), proc.sample_at(t_prime), tol,
                                sigma_min_threshold);
}

InverseClassification stochastic_inverse_classify(const rmat& gamma, double tol,
                                                  double sigma_min_threshold) {
  require_column_stochastic(gamma, tol, "stochastic_inverse_classify");
  const Eigen::Index n = gamma.rows();
  Eigen::JacobiSVD<rmat> svd(gamma);
  const double sigma_min = svd.singularValues().minCoeff();
  if (sigma_min < sigma_min_threshold) {
    throw SingularityError("stochastic_inverse_classify: matrix is singular to working "
                           "precision, smallest singular value " + std::to_string(sigma_min),
                           sigma_min);
  }
  InverseClassification out{InverseClass::InversePseudoStochastic, gamma.inverse(), 0.0};
  out.min_inverse_entry = out.inverse.minCoeff();

  // Permutation test: every entry 0 or 1, one 1 per row and column.
  bool permutation = true;
  for (Eigen::Index i = 0; i < n && permutation; ++i) {
    Eigen::Index row_ones = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = gamma(i, j);
      if (std::abs(x) <= tol) continue;
      if (std::abs(x - 1.0) <= tol) {
        ++row_ones;
      } else {
        permutation = false;
        break;
      }
    }
    if (row_ones != 1) permutation = false;
  }
  if (permutation) out.kind = InverseClass::PermutationBothStochastic;
  return out;
}

double expectation(const rvec& values, const ProbVector& p) {
  if (values.size() != p.dim()) {
    throw DimensionError("expectation: value list dim " + std::to_string(values.size()) +
                         " vs distribution dim " + std::to_string(p.dim()));
  }
  return values.dot(p.values());
}

}  // namespace unistoch
