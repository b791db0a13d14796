#ifndef UNISTOCH_STOCHASTIC_HPP
#define UNISTOCH_STOCHASTIC_HPP

#include <optional>
#include <vector>

#include "unistoch/types.hpp"

namespace unistoch {

// Normalized probability distribution over N configurations.
class ProbVector {
public:
  explicit ProbVector(rvec p, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return p_.size(); }
  const rvec& values() const { return p_; }
  double operator[](Eigen::Index i) const { return p_(i); }

private:
  rvec p_;
};

// Column-stochastic matrix of conditional probabilities p(i,t | j,anchor),
// carrying its target time and the division event it is anchored at.
class TransitionMatrix {
public:
  TransitionMatrix(rmat gamma, double target_time, double anchor_time = 0.0,
                   double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return gamma_.rows(); }
  const rmat& gamma() const { return gamma_; }
  double target_time() const { return target_time_; }
  double anchor_time() const { return anchor_time_; }

private:
  rmat gamma_;
  double target_time_;
  double anchor_time_;
};

// Configuration-space size, an anchor division event, an initial
// distribution, and transition matrices sampled at discrete target times.
// Samples are independent data; nothing is interpolated between them.
class Process {
public:
  Process(Eigen::Index dim, double anchor_time, ProbVector initial,
          std::vector<TransitionMatrix> samples, double tol = Tolerance{}.alg);

  Eigen::Index dim() const { return dim_; }
  double anchor_time() const { return anchor_time_; }
  const ProbVector& initial() const { return initial_; }
  const std::vector<TransitionMatrix>& samples() const { return samples_; }

  // Sample whose target time matches t to within 1e-9; throws if absent.
  const TransitionMatrix& sample_at(double t) const;

private:
  Eigen::Index dim_;
  double anchor_time_;
  ProbVector initial_;
  std::vector<TransitionMatrix> samples_;
};

// Result of testing whether an intermediate transition matrix built through
// the inverse construction is a genuine stochastic matrix.
struct DivisibilityReport {
  double split_time = 0.0;
  rmat candidate;                    // Gamma(t <- t') = Gamma(t) Gamma(t')^-1
  bool is_stochastic = false;
  double min_entry = 0.0;
  double max_column_sum_error = 0.0;
};

enum class InverseClass {
  PermutationBothStochastic,   // matrix is a permutation; inverse stochastic too
  InversePseudoStochastic,     // inverse has negative entries
};

struct InverseClassification {
  InverseClass kind;
  rmat inverse;
  double min_inverse_entry = 0.0;
};

// Law of total probability: p(t) = Gamma p(t0).
ProbVector propagate(const TransitionMatrix& gamma, const ProbVector& p0,
                     double tol = Tolerance{}.alg);

// n-th power of a constant column-stochastic matrix (discrete Markov chain).
rmat markov_power(const rmat& gamma, Eigen::Index n, double tol = Tolerance{}.alg);

// Builds the candidate intermediate Gamma(t) Gamma(t')^-1 and reports whether
// it is stochastic. Both inputs must share an anchor; Gamma(t') must be
// invertible (smallest singular value >= sigma_min_threshold).
DivisibilityReport candidate_intermediate(const TransitionMatrix& gamma_t,
                                          const TransitionMatrix& gamma_tprime,
                                          double tol = Tolerance{}.alg,
                                          double sigma_min_threshold = 1e-8);

// candidate_intermediate on the process samples at target times t and t'.
DivisibilityReport is_divisible_at(const Process& proc, double t, double t_prime,
                                   double tol = Tolerance{}.alg,
                                   double sigma_min_threshold = 1e-8);

// The inverse of an invertible stochastic matrix is stochastic only when the
// matrix is a permutation; classify which side of that dichotomy gamma is on.
InverseClassification stochastic_inverse_classify(const rmat& gamma,
                                                  double tol = Tolerance{}.alg,
                                                  double sigma_min_threshold = 1e-8);

// Probability-weighted sum of random-variable values.
double expectation(const rvec& values, const ProbVector& p);

}  // namespace unistoch

#endif
