#include <doctest.h>

#include <cmath>

#include "unistoch/gauge.hpp"
#include "unistoch/linalg.hpp"
#include "unistoch/rng.hpp"

using namespace unistoch;

namespace {

cmat hadamard_unitary() {
  cmat h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

EvolutionOperator random_theta(Eigen::Index n, Rng& rng, bool unitary) {
  if (unitary) return EvolutionOperator(random_unitary(n, rng), 1.0);
  const TransitionMatrix g(random_stochastic(n, rng), 1.0);
  return theta_from_gamma(g, random_phases(n, rng));
}

// Time-dependent unitary W exp(-i G t) with nontrivial V(0) = W.
FWTransform random_fw(Eigen::Index n, Rng& rng) {
  const cmat w = random_unitary(n, rng);
  const UnitaryFamily rot = family_from_constant_h(random_self_adjoint(n, rng, 2.0));
  return FWTransform(n, [w, rot](double t) { return cmat(w * rot.at(t)); });
}

}  // namespace

TEST_CASE("sh_gauge") {
  SUBCASE("zero phases change nothing") {
    const EvolutionOperator th(hadamard_unitary(), 1.0);
    const EvolutionOperator out = sh_gauge(th, PhaseMatrix(rmat::Zero(2, 2)));
    CHECK(max_abs_diff(out.theta(), th.theta()) == 0.0);
  }

  SUBCASE("uniform pi phases negate Theta but leave Gamma") {
    const EvolutionOperator th(hadamard_unitary(), 1.0);
    const EvolutionOperator out = sh_gauge(th, PhaseMatrix(rmat(M_PI * rmat::Ones(2, 2))));
    CHECK(max_abs_diff(out.theta(), cmat(-th.theta())) < 1e-14);
    CHECK(max_abs_diff(gamma_from_theta(out).gamma(), gamma_from_theta(th).gamma()) < 1e-14);
  }

  SUBCASE("Gamma is invariant for random phases on random operators") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
      const EvolutionOperator th = random_theta(n, rng, trial % 2 == 0);
      const EvolutionOperator out = sh_gauge(th, PhaseMatrix(random_phases(n, rng)));
      CHECK(max_abs_diff(gamma_from_theta(out).gamma(), gamma_from_theta(th).gamma()) < 1e-12);
    }
  }

  SUBCASE("phases compose additively") {
    Rng rng(7);
    const EvolutionOperator th = random_theta(3, rng, true);
    const rmat p1 = random_phases(3, rng);
    const rmat p2 = random_phases(3, rng);
    const EvolutionOperator chained = sh_gauge(sh_gauge(th, PhaseMatrix(p1)), PhaseMatrix(p2));
    const EvolutionOperator summed = sh_gauge(th, PhaseMatrix(rmat(p1 + p2)));
    CHECK(max_abs_diff(chained.theta(), summed.theta()) < 1e-13);
  }

  SUBCASE("a unitary Theta generically loses unitarity under random phases") {
    Rng rng(11);
    bool found_nonunitary = false;
    for (int trial = 0; trial < 8 && !found_nonunitary; ++trial) {
      const EvolutionOperator th(random_unitary(3, rng), 1.0);
      const EvolutionOperator out = sh_gauge(th, PhaseMatrix(random_phases(3, rng)));
      const cmat gram = out.theta().adjoint() * out.theta();
      if (max_abs_diff(gram, cmat(cmat::Identity(3, 3))) > 100.0 * Tolerance{}.alg) {
        found_nonunitary = true;
      }
    }
    CHECK(found_nonunitary);
  }
}

TEST_CASE("fw_gauge") {
  Rng rng(13);
  const EvolutionOperator th(hadamard_unitary(), 1.0);
  rvec p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho_t = evolve_density(initial_density(ProbVector(p)), th);
  const std::vector<cmat> obs = {pauli_x(), pauli_z()};
  const PVM config = configuration_pvm(2);

  SUBCASE("identity transform is a no-op") {
    const FWTransform id(cmat(cmat::Identity(2, 2)));
    const FWBundle bundle = fw_gauge(th, rho_t, obs, id, 1.0);
    CHECK(max_abs_diff(bundle.theta, th.theta()) == 0.0);
    CHECK(max_abs_diff(bundle.rho.rho(), rho_t.rho()) == 0.0);
  }

  SUBCASE("constant unitary is a change of basis preserving predictions") {
    const FWTransform v(random_unitary(2, rng));
    const FWBundle bundle = fw_gauge(th, rho_t, obs, v, 1.0);
    for (Eigen::Index i = 0; i < 2; ++i) {
      CHECK(born_rule(bundle.rho, bundle.pvm_target, i) ==
            doctest::Approx(born_rule(rho_t, config, i)).epsilon(1e-12));
    }
    for (size_t k = 0; k < obs.size(); ++k) {
      CHECK(expect_obs(bundle.observables[k], bundle.rho) ==
            doctest::Approx(expect_obs(obs[k], rho_t)).epsilon(1e-12));
    }
  }

  SUBCASE("adjoint-of-evolution gauge freezes the operator") {
    // V(t) = U^dag(t <- 0) maps Theta to the identity: the Heisenberg gauge.
    const UnitaryFamily fam = family_from_constant_h(pauli_x());
    const double t = 1.2;
    const EvolutionOperator u_t = fam.evolution(t);
    const FWTransform v(2, [fam](double s) { return cmat(fam.at(s).adjoint()); });
    rvec start(2);
    start << 1.0, 0.0;
    const DensityMatrix rho = evolve_density(initial_density(ProbVector(start)), u_t);
    const FWBundle bundle = fw_gauge(u_t, rho, obs, v, t);
    CHECK(max_abs_diff(bundle.theta, cmat(cmat::Identity(2, 2))) < 1e-12);
    for (size_t k = 0; k < obs.size(); ++k) {
      CHECK(expect_obs(bundle.observables[k], bundle.rho) ==
            doctest::Approx(expect_obs(obs[k], rho)).epsilon(1e-11));
    }
  }

  SUBCASE("full invariance for random time-dependent transforms") {
    for (int trial = 0; trial < 15; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
      const EvolutionOperator theta = random_theta(n, rng, trial % 2 == 0);
      const ProbVector p0(random_prob_vector(n, rng));
      const DensityMatrix rho(evolve_density(initial_density(p0), theta));
      const std::vector<cmat> observables = {random_self_adjoint(n, rng, 1.5)};
      const FWTransform v = random_fw(n, rng);
      const double t = theta.target_time();
      const FWBundle bundle = fw_gauge(theta, rho, observables, v, t);
      const PVM base = configuration_pvm(n);

      for (Eigen::Index i = 0; i < n; ++i) {
        CHECK(born_rule(bundle.rho, bundle.pvm_target, i) ==
              doctest::Approx(born_rule(rho, base, i)).epsilon(1e-10));
      }
      CHECK(expect_obs(bundle.observables[0], bundle.rho) ==
            doctest::Approx(expect_obs(observables[0], rho)).epsilon(1e-10));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          CHECK(dictionary_rhs(bundle.theta, bundle.pvm_target, bundle.pvm_anchor, i, j) ==
                doctest::Approx(dictionary_rhs(theta, base, i, j)).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("transform_hamiltonian") {
  SUBCASE("constant V reduces to conjugation") {
    Rng rng(17);
    const cmat w = random_unitary(3, rng);
    const cmat h = random_self_adjoint(3, rng, 2.0);
    const cmat hv = transform_hamiltonian(Hamiltonian(h), FWTransform(w), 0.6);
    CHECK(max_abs_diff(hv, cmat(w * h * w.adjoint())) < 1e-9);
  }

  SUBCASE("Heisenberg gauge kills the Hamiltonian") {
    const UnitaryFamily fam = family_from_constant_h(pauli_x());
    const FWTransform v(2, [fam](double t) { return cmat(fam.at(t).adjoint()); });
    const cmat hv = transform_hamiltonian(Hamiltonian(pauli_x()), v, 0.9, 1e-5);
    CHECK(max_abs(hv) < 1e-6);
  }

  SUBCASE("scalar phase shifts the Hamiltonian by -hbar omega") {
    // V(t) = e^{i w t} I: dV^dag/dt = -i w V^dag, so the inhomogeneous term
    // -i hbar V dV^dag/dt equals -hbar w I. Cross-check: Psi_V = e^{i w t} Psi
    // obeys i d(Psi_V)/dt = (H - w) Psi_V.
    const double omega = 0.7;
    const FWTransform v(2, [omega](double t) {
      return cmat(std::polar(1.0, omega * t) * cmat::Identity(2, 2));
    });
    const cmat hv = transform_hamiltonian(Hamiltonian(pauli_x()), v, 0.4, 1e-5);
    CHECK(max_abs_diff(hv, cmat(pauli_x() - omega * cmat::Identity(2, 2))) < 1e-8);
  }

  SUBCASE("output is self-adjoint within the finite-difference bound") {
    Rng rng(23);
    const FWTransform v = random_fw(3, rng);
    const cmat h = random_self_adjoint(3, rng, 2.0);
    const double h_step = 1e-5;
    const cmat hv = transform_hamiltonian(Hamiltonian(h), v, 0.8, h_step);
    CHECK(is_self_adjoint(hv, 10.0 * h_step * h_step).ok);
  }
}

TEST_CASE("check_covariant_derivative") {
  Rng rng(29);
  cvec e0(2);
  e0 << 1, 0;
  const StateVector psi(e0);
  const double h_step = 1e-5;
  const double bound = 10.0 * h_step * h_step + Tolerance{}.integ;

  SUBCASE("identity transform") {
    const FWTransform id(cmat(cmat::Identity(2, 2)));
    CHECK(check_covariant_derivative(Hamiltonian(pauli_z()), id, psi, 0.5, h_step) < 1e-12);
  }

  SUBCASE("constant unitary") {
    const FWTransform v(random_unitary(2, rng));
    CHECK(check_covariant_derivative(Hamiltonian(pauli_z()), v, psi, 0.5, h_step) < bound);
  }

  SUBCASE("rotating transform on random states") {
    const UnitaryFamily rot = family_from_constant_h(pauli_x());
    const FWTransform v(2, [rot](double t) { return rot.at(t); });
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector random(random_state(2, rng));
      CHECK(check_covariant_derivative(Hamiltonian(pauli_z()), v, random, 0.3, h_step) < bound);
    }
  }
}

TEST_CASE("PhaseMatrix reporting") {
  rmat raw(2, 2);
  raw << 7.0, -1.0, 0.5, 13.0;
  const PhaseMatrix ph(raw);
  const rmat reduced = ph.reduced();
  CHECK(reduced.minCoeff() >= 0.0);
  CHECK(reduced.maxCoeff() < 2.0 * M_PI);
  CHECK(reduced(0, 0) == doctest::Approx(7.0 - 2.0 * M_PI));
  CHECK(reduced(0, 1) == doctest::Approx(2.0 * M_PI - 1.0));
  // Raw storage is untouched.
  CHECK(ph.phases()(1, 1) == 13.0);
}
