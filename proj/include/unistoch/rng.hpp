#ifndef UNISTOCH_RNG_HPP
#define UNISTOCH_RNG_HPP

#include <cstdint>
#include <string_view>

#include "unistoch/types.hpp"

namespace unistoch {

// Deterministic random source. All randomness in a run flows from one root
// seed; independent consumers take named child streams via split(), so adding
// a new consumer never perturbs existing streams.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  // Child generator keyed by (this seed, name).
  Rng split(std::string_view name) const;

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gaussian();                      // standard normal, Box-Muller
  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Haar-distributed unitary via QR of a complex Gaussian matrix with the
// R-diagonal phase fix.
cmat random_unitary(Eigen::Index n, Rng& rng);

// Self-adjoint matrix with Gaussian entries, rescaled so the spectral radius
// is at most `norm_bound` (and equal to it when rescaling kicks in).
cmat random_self_adjoint(Eigen::Index n, Rng& rng, double norm_bound = 0.0);

// Column-stochastic matrix with Dirichlet(1,...,1) columns.
rmat random_stochastic(Eigen::Index n, Rng& rng);

rvec random_prob_vector(Eigen::Index n, Rng& rng);

// Phases uniform in [0, 2*pi).
rmat random_phases(Eigen::Index n, Rng& rng);

// Unit-norm complex vector.
cvec random_state(Eigen::Index n, Rng& rng);

// Generic complex Gaussian matrix.
cmat random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace unistoch

#endif
