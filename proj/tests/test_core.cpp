#include <doctest.h>

#include "unistoch/linalg.hpp"
#include "unistoch/pvm.hpp"
#include "unistoch/rng.hpp"

using namespace unistoch;

namespace {

// Independent partial-trace oracle: quadruple loop over full composite
// indices, keeping only equal internal labels.
cmat partial_trace_oracle(const cmat& m, Eigen::Index n, Eigen::Index d) {
  cmat out = cmat::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index g1 = 0; g1 < d; ++g1) {
        for (Eigen::Index g2 = 0; g2 < d; ++g2) {
          if (g1 == g2) out(a, b) += m(a * d + g1, b * d + g2);
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("schur_hadamard entrywise products") {
  cmat x(2, 2), id_mask(2, 2), ones(2, 2);
  x << 1, 2, 3, 4;
  id_mask << 1, 0, 0, 1;
  ones.setOnes();

  cmat masked = schur_hadamard(x, id_mask);
  CHECK(masked(0, 0) == complex(1, 0));
  CHECK(masked(0, 1) == complex(0, 0));
  CHECK(masked(1, 1) == complex(4, 0));

  CHECK(max_abs_diff(schur_hadamard(x, ones), x) == 0.0);

  cmat z(2, 2), zbar(2, 2);
  z << complex(0, 1), 1, 1, complex(0, -1);
  zbar << complex(0, -1), 1, 1, complex(0, 1);
  cmat abs2 = schur_hadamard(z, zbar);
  CHECK(max_abs_diff(abs2, cmat::Ones(2, 2)) < 1e-15);

  CHECK_THROWS_AS(schur_hadamard(x, cmat::Ones(3, 3)), DimensionError);
}

TEST_CASE("schur_hadamard algebra on random triples") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const cmat a = random_complex(4, 4, rng);
    const cmat b = random_complex(4, 4, rng);
    const cmat c = random_complex(4, 4, rng);
    CHECK(max_abs_diff(schur_hadamard(a, b), schur_hadamard(b, a)) < 1e-10);
    CHECK(max_abs_diff(schur_hadamard(schur_hadamard(a, b), c),
                       schur_hadamard(a, schur_hadamard(b, c))) < 1e-10);
    CHECK(max_abs_diff(schur_hadamard(a, b + c),
                       schur_hadamard(a, b) + schur_hadamard(a, c)) < 1e-10);
  }
}

TEST_CASE("configuration_pvm") {
  const PVM one = configuration_pvm(1);
  CHECK(one.size() == 1);
  CHECK(one.projector(0)(0, 0) == complex(1, 0));

  const PVM two = configuration_pvm(2);
  CHECK(two.projector(0)(0, 0) == complex(1, 0));
  CHECK(two.projector(0)(1, 1) == complex(0, 0));
  CHECK(two.projector(1)(1, 1) == complex(1, 0));

  const PVM three = configuration_pvm(3);
  cmat sum = cmat::Zero(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) sum += three.projector(i);
  CHECK(max_abs_diff(sum, cmat::Identity(3, 3)) == 0.0);

  CHECK_THROWS_AS(configuration_pvm(0), DimensionError);
}

TEST_CASE("pvm_from_unitary") {
  const PVM base = configuration_pvm(2);

  SUBCASE("identity leaves the PVM unchanged") {
    const PVM same = pvm_from_unitary(cmat::Identity(2, 2), base);
    CHECK(max_abs_diff(same.projector(0), base.projector(0)) == 0.0);
  }

  SUBCASE("swap permutes the projectors") {
    const PVM swapped = pvm_from_unitary(pauli_x(), base);
    CHECK(max_abs_diff(swapped.projector(0), base.projector(1)) < 1e-15);
    CHECK(max_abs_diff(swapped.projector(1), base.projector(0)) < 1e-15);
  }

  SUBCASE("Hadamard rotates to the +/- projectors") {
    cmat h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    const PVM rotated = pvm_from_unitary(h, base);
    cmat plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs_diff(rotated.projector(0), plus) < 1e-12);
    CHECK(max_abs_diff(rotated.projector(1), minus) < 1e-12);
  }

  SUBCASE("non-unitary input is rejected") {
    cmat bad(2, 2);
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(pvm_from_unitary(bad, base), ValidationError);
  }

  SUBCASE("random unitaries always give valid PVMs") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 5);
      CHECK_NOTHROW(pvm_from_unitary(random_unitary(n, rng), configuration_pvm(n)));
    }
  }
}

TEST_CASE("partial_trace_internal") {
  Rng rng(23);

  SUBCASE("tensor identities") {
    const cmat a = random_complex(3, 3, rng);
    CHECK(max_abs_diff(partial_trace_internal(tensor(a, cmat::Identity(4, 4)), 3, 4), 4.0 * a) <
          1e-12);
    const cmat b = random_complex(2, 2, rng);
    CHECK(max_abs_diff(partial_trace_internal(tensor(a, b), 3, 2), b.trace() * a) < 1e-12);
  }

  SUBCASE("matches the quadruple-loop oracle on random Hermitian input") {
    for (int trial = 0; trial < 10; ++trial) {
      const cmat g = random_complex(4, 4, rng);
      const cmat herm = 0.5 * (g + g.adjoint());
      CHECK(max_abs_diff(partial_trace_internal(herm, 2, 2), partial_trace_oracle(herm, 2, 2)) <
            1e-14);
    }
  }

  SUBCASE("preserves the full trace") {
    const cmat m = random_complex(6, 6, rng);
    CHECK(std::abs(partial_trace_internal(m, 2, 3).trace() - m.trace()) < 1e-13);
    CHECK(std::abs(partial_trace_internal(m, 3, 2).trace() - m.trace()) < 1e-13);
  }

  SUBCASE("shape errors") {
    CHECK_THROWS_AS(partial_trace_internal(cmat::Identity(6, 6), 2, 2), DimensionError);
    CHECK_THROWS_AS(partial_trace_internal(random_complex(2, 3, rng), 1, 2), DimensionError);
  }
}

TEST_CASE("predicates") {
  SUBCASE("is_unitary") {
    const Verdict id = is_unitary(cmat::Identity(3, 3));
    CHECK(id.ok);
    CHECK(id.max_deviation == 0.0);

    cmat h(2, 2);
    h << 1, 1, 1, -1;
    CHECK(is_unitary(h / std::sqrt(2.0)).ok);
    CHECK_FALSE(is_unitary(h).ok);
  }

  SUBCASE("is_psd catches a negative eigenvalue") {
    // [[1,2],[2,1]] has characteristic polynomial (1-x)^2 - 4, roots 3 and -1.
    cmat m(2, 2);
    m << 1, 2, 2, 1;
    const Verdict v = is_psd(m);
    CHECK_FALSE(v.ok);
    CHECK(v.max_deviation == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("is_self_adjoint / is_projector") {
    CHECK(is_self_adjoint(pauli_y()).ok);
    cmat p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    CHECK(is_projector(p).ok);
    p(0, 1) = 0.6;
    CHECK_FALSE(is_projector(p).ok);
  }

  SUBCASE("non-square input is a dimension error") {
    Rng rng(3);
    CHECK_THROWS_AS(is_unitary(random_complex(2, 3, rng)), DimensionError);
  }
}

TEST_CASE("tensor product") {
  Rng rng(29);

  SUBCASE("scalar and identity cases") {
    const cmat a = random_complex(3, 3, rng);
    cmat one(1, 1);
    one << 1;
    CHECK(max_abs_diff(tensor(a, one), a) == 0.0);
    CHECK(max_abs_diff(tensor(cmat::Identity(2, 2), cmat::Identity(2, 2)),
                       cmat::Identity(4, 4)) == 0.0);
  }

  SUBCASE("sigma_x (x) I is the hand-expanded block swap") {
    cmat expected(4, 4);
    expected << 0, 0, 1, 0,
                0, 0, 0, 1,
                1, 0, 0, 0,
                0, 1, 0, 0;
    CHECK(max_abs_diff(tensor(pauli_x(), cmat::Identity(2, 2)), expected) == 0.0);
  }

  SUBCASE("associativity under the fixed layout") {
    const cmat a = random_complex(2, 2, rng);
    const cmat b = random_complex(3, 3, rng);
    const cmat c = random_complex(2, 2, rng);
    CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-12);
  }
}

TEST_CASE("PVM validation rejects bad families") {
  // Incomplete family.
  std::vector<cmat> only_one = {configuration_pvm(2).projector(0)};
  CHECK_THROWS_AS((void)PVM(only_one), ValidationError);

  // Overlapping projectors.
  cmat p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  std::vector<cmat> overlapping = {p, cmat(configuration_pvm(2).projector(0))};
  CHECK_THROWS_AS((void)PVM(overlapping), ValidationError);
}

TEST_CASE("Tolerance validation") {
  Tolerance t;
  CHECK_NOTHROW(t.validate());
  t.alg = 0.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t.alg = 2.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}
