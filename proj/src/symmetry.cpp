#include "unistoch/symmetry.hpp"

#include <cmath>

#include "unistoch/linalg.hpp"
#include "unistoch/rng.hpp"

namespace unistoch {

SymmetryCandidate::SymmetryCandidate(cmat v, SymmetryKind hint, double tol)
    : v_(std::move(v)), hint_(hint) {
  require_finite(v_, "SymmetryCandidate");
  require_square(v_, "SymmetryCandidate");
  const Verdict u = is_unitary(v_, tol);
  if (!u) {
    throw ValidationError("SymmetryCandidate: not unitary, deviation " +
                          std::to_string(u.max_deviation));
  }
}

SymmetryVerdict check_dynamical_symmetry(const SymmetryCandidate& v,
                                         const EvolutionOperator& theta, double tol) {
  if (v.dim() != theta.dim()) {
    throw DimensionError("check_dynamical_symmetry: dimension mismatch");
  }
  const cmat& th = theta.theta();
  const cmat transformed = v.v() * th * v.v().adjoint();

  SymmetryVerdict verdict;
  verdict.max_violation = max_abs_diff(rmat(transformed.cwiseAbs2()), rmat(th.cwiseAbs2()));
  verdict.holds = verdict.max_violation <= tol;
  if (!verdict.holds) return verdict;

  if (max_abs_diff(transformed, th) <= tol) {
    verdict.classification = SymmetryClass::Unitary;
  } else if (max_abs_diff(transformed, th.conjugate().eval()) <= tol) {
    verdict.classification = SymmetryClass::AntiUnitary;
  } else {
    verdict.classification = SymmetryClass::PhaseGeneral;
  }

  const Eigen::Index n = theta.dim();
  rmat phases = rmat::Zero(n, n);
  verdict.unconstrained.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(th(i, j)) > tol) {
        phases(i, j) = std::arg(transformed(i, j)) - std::arg(th(i, j));
        verdict.unconstrained(i, j) = false;
      } else {
        verdict.unconstrained(i, j) = true;
      }
    }
  }
  verdict.recovered_phases = PhaseMatrix(std::move(phases));
  return verdict;
}

Verdict check_antiunitary_form(const SymmetryCandidate& v, const EvolutionOperator& theta,
                               double tol) {
  if (v.dim() != theta.dim()) {
    throw DimensionError("check_antiunitary_form: dimension mismatch");
  }
  const cmat& th = theta.theta();
  const double dev = max_abs_diff(v.v() * th.conjugate() * v.v().adjoint(), th);
  return {dev <= tol, dev};
}

WignerVerdict check_wigner(const SymmetryCandidate& v, const EvolutionOperator& theta,
                           int trials, std::uint64_t seed, double tol) {
  if (v.dim() != theta.dim()) {
    throw DimensionError("check_wigner: dimension mismatch");
  }
  if (trials < 1) throw ValidationError("check_wigner: trials must be >= 1");

  const cmat& th = theta.theta();
  const cmat transformed = v.v() * th * v.v().adjoint();
  Rng rng = Rng(seed).split("wigner-bases");

  WignerVerdict verdict;
  verdict.holds = true;
  verdict.trials = trials;
  for (int k = 0; k < trials; ++k) {
    const cmat b = random_unitary(theta.dim(), rng);
    const rmat lhs = cmat(b.adjoint() * transformed * b).cwiseAbs2();
    const rmat rhs_sq = cmat(b.adjoint() * th * b).cwiseAbs2();
    const double dev = max_abs_diff(lhs, rhs_sq);
    verdict.max_violation = std::max(verdict.max_violation, dev);
    if (dev > tol && verdict.holds) {
      verdict.holds = false;
      verdict.counterexample = Basis(b, tol);
      verdict.counterexample_trial = k;
    }
  }
  return verdict;
}

NoetherReport noether_check(const cmat& g, const UnitaryFamily& fam, const DensityMatrix& rho0,
                            const std::vector<double>& times, double tol) {
  require_square(g, "noether_check");
  if (g.rows() != fam.dim() || g.rows() != rho0.dim()) {
    throw DimensionError("noether_check: dimension mismatch");
  }
  const Verdict herm = is_self_adjoint(g, tol);
  if (!herm) {
    throw ValidationError("noether_check: generator not self-adjoint, deviation " +
                          std::to_string(herm.max_deviation));
  }
  NoetherReport report;
  report.precondition_holds = true;
  const double g0 = (g * rho0.rho()).trace().real();
  for (const double t : times) {
    const cmat u = fam.at(t);
    report.max_commutator_norm =
        std::max(report.max_commutator_norm, max_abs(cmat(g * u - u * g)));
    const double gt = (g * u * rho0.rho() * u.adjoint()).trace().real();
    report.max_drift = std::max(report.max_drift, std::abs(gt - g0));
  }
  report.precondition_holds = report.max_commutator_norm <= tol;
  return report;
}

cmat involution_generator(const SymmetryCandidate& v, double tol) {
  const cmat& m = v.v();
  const double dev = max_abs_diff(cmat(m * m), cmat(cmat::Identity(m.rows(), m.cols())));
  if (dev > tol) {
    throw ValidationError("involution_generator: V^2 deviates from identity by " +
                          std::to_string(dev));
  }
  return m;
}

}  // namespace unistoch
