#include "unistoch/rng.hpp"

#include <cmath>

#include <Eigen/QR>

namespace unistoch {

namespace {

// splitmix64; the usual stateless mixer.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive(std::uint64_t root, std::string_view name) {
  // FNV-1a over the name, folded into the root seed.
  std::uint64_t h = 1469598103934665603ULL ^ root;
  for (const char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return mix(h);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(mix(seed)) {}

Rng Rng::split(std::string_view name) const { return Rng(derive(seed_, name)); }

std::uint64_t Rng::next_u64() {
  state_ = mix(state_);
  return state_;
}

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

cmat random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  cmat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = complex(rng.gaussian(), rng.gaussian());
    }
  }
  return m;
}

cmat random_unitary(Eigen::Index n, Rng& rng) {
  const cmat g = random_complex(n, n, rng);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  const cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : complex(1.0, 0.0);
  }
  return q;
}

cmat random_self_adjoint(Eigen::Index n, Rng& rng, double norm_bound) {
  cmat g = random_complex(n, n, rng);
  cmat h = 0.5 * (g + g.adjoint());
  if (norm_bound > 0.0) {
    const double norm = h.operatorNorm();
    if (norm > 0.0) h *= norm_bound / norm;
  }
  return h;
}

rmat random_stochastic(Eigen::Index n, Rng& rng) {
  rmat m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      m(i, j) = -std::log(u);  // Exp(1) draws normalize to Dirichlet(1,...,1)
      sum += m(i, j);
    }
    m.col(j) /= sum;
  }
  return m;
}

rvec random_prob_vector(Eigen::Index n, Rng& rng) {
  rvec p(n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    p(i) = -std::log(u);
    sum += p(i);
  }
  return p / sum;
}

rmat random_phases(Eigen::Index n, Rng& rng) {
  rmat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = rng.uniform(0.0, 2.0 * M_PI);
    }
  }
  return m;
}

cvec random_state(Eigen::Index n, Rng& rng) {
  cvec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex(rng.gaussian(), rng.gaussian());
  const double norm = v.norm();
  if (norm == 0.0) {
    cvec e = cvec::Zero(n);
    e(0) = 1.0;
    return e;
  }
  return v / norm;
}

}  // namespace unistoch
