#pragma once

#include "etk/types.hpp"

namespace etk {

enum class Side { A, B };

// Largest entrywise deviation of a from its conjugate transpose.
double hermiticity_defect(const Mat& a);

bool is_hermitian(const Mat& a, double tol = default_tols().hermiticity);

// Throws InvalidInput with the offending defect if a is not square hermitian.
void require_hermitian(const Mat& a, double tol = default_tols().hermiticity,
                       const char* what = "operator");

struct Spectrum {
  RVec eigenvalues;  // descending
  Mat eigenvectors;  // orthonormal columns, column i pairs with eigenvalues[i]
};

// Cyclic Jacobi diagonalization of a hermitian matrix.
Spectrum eig_hermitian(const Mat& a, const Tolerances& tols = default_tols());

double min_eigenvalue(const Mat& a, const Tolerances& tols = default_tols());

// Sum of absolute eigenvalues of a hermitian operator.
double trace_norm(const Mat& a, const Tolerances& tols = default_tols());

// Largest absolute eigenvalue of a hermitian operator.
double operator_norm(const Mat& a, const Tolerances& tols = default_tols());

// Trace over one tensor factor of an operator on C^da (x) C^db.
Mat partial_trace(const Mat& a, int dim_a, int dim_b, Side traced_out);

// Transpose of one tensor factor.
Mat partial_transpose(const Mat& a, int dim_a, int dim_b, Side side);

// Kronecker product.
template <typename DA, typename DB>
Mat tensor(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Complex(a(i, j)) * b.template cast<Complex>();
  return out;
}

inline Mat dag(const Mat& a) { return a.adjoint(); }

inline Mat projector(const Vec& psi) { return psi * psi.adjoint(); }

// Composite index helpers for row-major (a,b) -> a*db + b layouts.
inline Eigen::Index fuse(Eigen::Index ia, Eigen::Index ib, Eigen::Index db) {
  return ia * db + ib;
}

}  // namespace etk
