#include "etk/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace etk {

double hermiticity_defect(const Mat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && a.size() > 0 && hermiticity_defect(a) <= tol;
}

void require_hermitian(const Mat& a, double tol, const char* what) {
  if (a.rows() != a.cols() || a.size() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a nonempty square matrix, got " << a.rows()
        << "x" << a.cols();
    throw InvalidInput(msg.str());
  }
  const double defect = hermiticity_defect(a);
  if (!(defect <= tol)) {
    std::ostringstream msg;
    msg << what << ": not hermitian, max |A - A^dag| entry is " << defect
        << " (tolerance " << tol << ")";
    throw InvalidInput(msg.str());
  }
}

namespace {

double offdiag_norm(const Mat& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

Spectrum eig_hermitian(const Mat& a, const Tolerances& tols) {
  require_hermitian(a, tols.hermiticity);
  const Eigen::Index n = a.rows();

  Mat h = (a + a.adjoint()) / 2.0;
  Mat v = Mat::Identity(n, n);
  const double scale = std::max(h.norm(), 1e-300);
  const double target = tols.jacobi_offdiag * scale;
  const double skip = target / (10.0 * static_cast<double>(n));

  const int max_sweeps = 64;
  int sweep = 0;
  while (offdiag_norm(h) > target) {
    if (++sweep > max_sweeps)
      throw SolverFailure("eig_hermitian: jacobi sweeps failed to converge");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex gamma = h(p, q);
        const double g = std::abs(gamma);
        if (g <= skip) continue;
        const double alpha = h(p, p).real();
        const double beta = h(q, q).real();
        const Complex phase = gamma / g;  // e^{i phi}
        const double tau = (beta - alpha) / (2.0 * g);
        const double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(tau, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        const Complex ephm = std::conj(phase);  // e^{-i phi}

        // A <- U^dag A U with U the identity outside the (p,q) plane and
        // U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}.
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex hp = h(r, p), hq = h(r, q);
          h(r, p) = c * hp - s * ephm * hq;
          h(r, q) = s * hp + c * ephm * hq;
        }
        for (Eigen::Index col = 0; col < n; ++col) {
          const Complex hp = h(p, col), hq = h(q, col);
          h(p, col) = c * hp - s * phase * hq;
          h(q, col) = s * hp + c * phase * hq;
        }
        h(p, q) = Complex(0, 0);
        h(q, p) = Complex(0, 0);
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex vp = v(r, p), vq = v(r, q);
          v(r, p) = c * vp - s * ephm * vq;
          v(r, q) = s * vp + c * ephm * vq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return h(i, i).real() > h(j, j).real();
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[i] = h(order[i], order[i]).real();
    out.eigenvectors.col(i) = v.col(order[i]);
  }
  return out;
}

double min_eigenvalue(const Mat& a, const Tolerances& tols) {
  return eig_hermitian(a, tols).eigenvalues.minCoeff();
}

double trace_norm(const Mat& a, const Tolerances& tols) {
  return eig_hermitian(a, tols).eigenvalues.cwiseAbs().sum();
}

double operator_norm(const Mat& a, const Tolerances& tols) {
  return eig_hermitian(a, tols).eigenvalues.cwiseAbs().maxCoeff();
}

namespace {

void check_bipartite_dims(const Mat& a, int da, int db) {
  if (da <= 0 || db <= 0)
    throw InvalidInput("bipartite operator: dimensions must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(da) * db;
  if (a.rows() != n || a.cols() != n) {
    std::ostringstream msg;
    msg << "bipartite operator: matrix is " << a.rows() << "x" << a.cols()
        << " but dims give " << da << "*" << db << " = " << n;
    throw InvalidInput(msg.str());
  }
}

}  // namespace

Mat partial_trace(const Mat& a, int dim_a, int dim_b, Side traced_out) {
  check_bipartite_dims(a, dim_a, dim_b);
  if (traced_out == Side::B) {
    Mat out = Mat::Zero(dim_a, dim_a);
    for (int ia = 0; ia < dim_a; ++ia)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int b = 0; b < dim_b; ++b)
          out(ia, ja) += a(fuse(ia, b, dim_b), fuse(ja, b, dim_b));
    return out;
  }
  Mat out = Mat::Zero(dim_b, dim_b);
  for (int ib = 0; ib < dim_b; ++ib)
    for (int jb = 0; jb < dim_b; ++jb)
      for (int x = 0; x < dim_a; ++x)
        out(ib, jb) += a(fuse(x, ib, dim_b), fuse(x, jb, dim_b));
  return out;
}

Mat partial_transpose(const Mat& a, int dim_a, int dim_b, Side side) {
  check_bipartite_dims(a, dim_a, dim_b);
  Mat out(a.rows(), a.cols());
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb) {
          if (side == Side::B)
            out(fuse(ia, ib, dim_b), fuse(ja, jb, dim_b)) =
                a(fuse(ia, jb, dim_b), fuse(ja, ib, dim_b));
          else
            out(fuse(ia, ib, dim_b), fuse(ja, jb, dim_b)) =
                a(fuse(ja, ib, dim_b), fuse(ia, jb, dim_b));
        }
  return out;
}

}  // namespace etk
