#include "unistoch/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace unistoch {

double max_abs_diff(const cmat& a, const cmat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const rmat& a, const rmat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs(const cmat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

void require_finite(const cmat& m, const std::string& who) {
  if (!m.allFinite()) throw ValidationError(who + ": non-finite entry");
}

void require_finite(const rmat& m, const std::string& who) {
  if (!m.allFinite()) throw ValidationError(who + ": non-finite entry");
}

void require_square(const cmat& m, const std::string& who) {
  if (m.rows() != m.cols()) {
    throw DimensionError(who + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

cmat schur_hadamard(const cmat& x, const cmat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("schur_hadamard: shapes " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " and " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()) + " differ");
  }
  return x.cwiseProduct(y);
}

cmat tensor(const cmat& a, const cmat& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  cmat out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

cmat partial_trace_internal(const cmat& m, Eigen::Index n, Eigen::Index d) {
  require_square(m, "partial_trace_internal");
  if (n < 1 || d < 1 || m.rows() != n * d) {
    throw DimensionError("partial_trace_internal: matrix dim " + std::to_string(m.rows()) +
                         " is not system dim " + std::to_string(n) + " times internal dim " +
                         std::to_string(d));
  }
  cmat out = cmat::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      complex sum = 0.0;
      for (Eigen::Index g = 0; g < d; ++g) {
        sum += m(a * d + g, b * d + g);
      }
      out(a, b) = sum;
    }
  }
  return out;
}

Verdict is_unitary(const cmat& m, double tol) {
  require_square(m, "is_unitary");
  const cmat gram = m.adjoint() * m;
  const double dev = max_abs_diff(gram, cmat::Identity(m.rows(), m.cols()));
  return {dev <= tol, dev};
}

Verdict is_self_adjoint(const cmat& m, double tol) {
  require_square(m, "is_self_adjoint");
  const double dev = max_abs_diff(m, m.adjoint().eval());
  return {dev <= tol, dev};
}

Verdict is_psd(const cmat& m, double tol) {
  require_square(m, "is_psd");
  const Verdict herm = is_self_adjoint(m, tol);
  // Eigenvalues of the symmetrized matrix; a matrix that is not even
  // self-adjoint cannot be PSD, and its hermiticity gap joins the diagnostic.
  const cmat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(sym, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  const double dev = std::max(herm.max_deviation, std::max(0.0, -lambda_min));
  return {dev <= tol, dev};
}

Verdict is_projector(const cmat& m, double tol) {
  require_square(m, "is_projector");
  const double herm = max_abs_diff(m, m.adjoint().eval());
  const double idem = max_abs_diff(m * m, m);
  const double dev = std::max(herm, idem);
  return {dev <= tol, dev};
}

StochasticCheck column_stochastic_check(const rmat& m) {
  StochasticCheck chk;
  chk.min_entry = m.size() == 0 ? 0.0 : m.minCoeff();
  chk.max_column_sum_error = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    chk.max_column_sum_error =
        std::max(chk.max_column_sum_error, std::abs(m.col(j).sum() - 1.0));
  }
  return chk;
}

cmat pauli_x() {
  cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

cmat pauli_y() {
  cmat m(2, 2);
  m << complex(0, 0), complex(0, -1), complex(0, 1), complex(0, 0);
  return m;
}

cmat pauli_z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace unistoch
