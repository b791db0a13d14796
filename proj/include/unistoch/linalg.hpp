#ifndef UNISTOCH_LINALG_HPP
#define UNISTOCH_LINALG_HPP

#include "unistoch/types.hpp"

namespace unistoch {

// Largest entrywise |a_ij - b_ij|; shapes must match.
double max_abs_diff(const cmat& a, const cmat& b);
double max_abs_diff(const rmat& a, const rmat& b);

// Largest entrywise |m_ij|.
double max_abs(const cmat& m);

void require_finite(const cmat& m, const std::string& who);
void require_finite(const rmat& m, const std::string& who);
void require_square(const cmat& m, const std::string& who);

// Entrywise product (X (.) Y)_ij = X_ij Y_ij. Shapes must match.
cmat schur_hadamard(const cmat& x, const cmat& y);

// Kronecker product with system-major block layout:
//   result_{(a1*db+b1),(a2*db+b2)} = a(a1,a2) * b(b1,b2).
// Every dilation operation in this library assumes this layout.
cmat tensor(const cmat& a, const cmat& b);

// Partial trace over the minor (internal) factor of an (n*d)x(n*d) matrix:
//   result_ab = sum_g m_{(a*d+g),(b*d+g)}.
cmat partial_trace_internal(const cmat& m, Eigen::Index n, Eigen::Index d);

// Validation predicates. Each returns a verdict carrying the worst deviation
// from the property, so callers can report diagnostics instead of a bare bool.
Verdict is_unitary(const cmat& m, double tol = Tolerance{}.alg);
Verdict is_self_adjoint(const cmat& m, double tol = Tolerance{}.alg);
Verdict is_psd(const cmat& m, double tol = Tolerance{}.alg);
Verdict is_projector(const cmat& m, double tol = Tolerance{}.alg);

// Column-stochasticity diagnostics for a real matrix.
struct StochasticCheck {
  double min_entry = 0.0;
  double max_column_sum_error = 0.0;
  bool ok(double tol) const {
    return min_entry >= -tol && max_column_sum_error <= tol;
  }
};
StochasticCheck column_stochastic_check(const rmat& m);

// Pauli matrices (2x2).
cmat pauli_x();
cmat pauli_y();
cmat pauli_z();

}  // namespace unistoch

#endif
