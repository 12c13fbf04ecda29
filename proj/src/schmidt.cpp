#include "etk/schmidt.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "etk/parallel.hpp"

namespace etk {

SchmidtDecomposition schmidt_decompose(const Vec& psi, int dim_a, int dim_b,
                                       const Tolerances& tols) {
  if (dim_a <= 0 || dim_b <= 0)
    throw InvalidInput("schmidt_decompose: dimensions must be positive");
  if (psi.size() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw InvalidInput("schmidt_decompose: vector length does not match dims");
  const double nrm = psi.norm();
  if (std::abs(nrm - 1.0) > tols.comparison) {
    std::ostringstream msg;
    msg << "schmidt_decompose: vector norm is " << nrm << ", expected 1";
    throw InvalidInput(msg.str());
  }
  Mat m(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) m(a, b) = psi[fuse(a, b, dim_b)];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tols.rank_floor * sv[0]) ++rank;
  SchmidtDecomposition out;
  out.rank = rank;
  out.coefficients = sv.head(rank);
  out.left_basis = svd.matrixU().leftCols(rank);
  out.right_basis = svd.matrixV().conjugate().leftCols(rank);
  return out;
}

Vec schmidt_reconstruct(const SchmidtDecomposition& sd) {
  const int da = static_cast<int>(sd.left_basis.rows());
  const int db = static_cast<int>(sd.right_basis.rows());
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(da) * db);
  for (int i = 0; i < sd.rank; ++i)
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b)
        psi[fuse(a, b, db)] +=
            sd.coefficients[i] * sd.left_basis(a, i) * sd.right_basis(b, i);
  return psi;
}

ReductionFamilyMap reduction_family(int d, double t, const Tolerances& tols) {
  if (d < 2 || d > 64)
    throw InvalidInput("reduction_family: dimension out of range");
  if (!(t > 0.0) || !(t < double(d)))
    throw InvalidInput("reduction_family: t must lie in (0, d)");
  ReductionFamilyMap fam;
  fam.d = d;
  fam.t = t;
  auto action = [d, t](const Mat& x) {
    return ((x.trace() * Mat::Identity(d, d)) - t * x) / (double(d) - t);
  };
  fam.channel = choi_of_map(action, d, d, tols);
  fam.choi_min_eig_by_level.resize(d);
  for (int m = 1; m <= d; ++m) {
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(m) * d);
    const double amp = 1.0 / std::sqrt(double(m));
    for (int i = 0; i < m; ++i) psi[fuse(i, i, d)] = Complex(amp, 0);
    const Mat out = apply_partial_op(fam.channel, projector(psi), m);
    fam.choi_min_eig_by_level[m - 1] = min_eigenvalue(out, tols);
  }
  fam.positivity_level = 0;
  for (int m = 1; m <= d; ++m) {
    if (fam.choi_min_eig_by_level[m - 1] >= -tols.psd_floor)
      fam.positivity_level = m;
    else
      break;
  }
  return fam;
}

namespace {

struct RunSpec {
  int rank = 1;
  int kind = 0;  // 0 eigvec, 1 warm, 2 random
  int warm_index = 0;
  uint64_t salt = 0;
};

Mat to_matrix(const Vec& psi, int da, int db) {
  Mat m(da, db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) m(a, b) = psi[fuse(a, b, db)];
  return m;
}

Vec to_vector(const Mat& m) {
  const int da = static_cast<int>(m.rows());
  const int db = static_cast<int>(m.cols());
  Vec psi(static_cast<Eigen::Index>(da) * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) psi[fuse(a, b, db)] = m(a, b);
  return psi;
}

// Nearest unit-Frobenius matrix of rank <= r.
Mat project_rank(const Mat& m, int r) {
  const int full = static_cast<int>(std::min(m.rows(), m.cols()));
  if (r >= full) {
    const double nrm = m.norm();
    return nrm > 1e-300 ? Mat(m / nrm) : m;
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RVec sv = svd.singularValues();
  sv.tail(full - r).setZero();
  Mat out = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
  const double nrm = out.norm();
  if (nrm > 1e-300) out /= nrm;
  return out;
}

struct RunResult {
  double value = std::numeric_limits<double>::infinity();
  Vec psi;
  int rank = 0;
  bool done = false;
};

}  // namespace

SchmidtMinResult min_schmidt_k_expectation(const Mat& w, int dim_a, int dim_b,
                                           int k, const SchmidtMinOptions& opts,
                                           const Tolerances& tols) {
  require_hermitian(w, tols.hermiticity, "schmidt minimizer input");
  if (w.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw InvalidInput("min_schmidt_k_expectation: matrix does not match dims");
  if (k < 1) throw InvalidInput("min_schmidt_k_expectation: k must be >= 1");
  const int kmax = std::min({k, dim_a, dim_b});

  const Spectrum spec = eig_hermitian(w, tols);
  const Vec ground = spec.eigenvectors.col(spec.eigenvalues.size() - 1);
  const double wnorm =
      std::max(spec.eigenvalues.cwiseAbs().maxCoeff(), 1e-12);
  const double eta0 = 1.0 / wnorm;

  std::vector<RunSpec> runs;
  for (int kk = 1; kk <= kmax; ++kk) {
    runs.push_back(RunSpec{kk, 0, 0, 0});
    for (int wi = 0; wi < static_cast<int>(opts.warm_starts.size()); ++wi)
      runs.push_back(RunSpec{kk, 1, wi, 0});
    for (int r = 0; r < opts.restarts; ++r)
      runs.push_back(
          RunSpec{kk, 2, 0, mix_seed(opts.seed, uint64_t(kk) * 100003 + r)});
  }
  const int nruns = static_cast<int>(runs.size());
  std::vector<RunResult> results(nruns);

  auto run_one = [&](int idx) {
    const RunSpec& rs = runs[idx];
    Mat m;
    switch (rs.kind) {
      case 0:
        m = project_rank(to_matrix(ground, dim_a, dim_b), rs.rank);
        break;
      case 1: {
        const Vec& ws = opts.warm_starts[rs.warm_index];
        if (ws.size() != static_cast<Eigen::Index>(dim_a) * dim_b)
          throw InvalidInput("min_schmidt_k_expectation: bad warm start size");
        m = project_rank(to_matrix(ws, dim_a, dim_b), rs.rank);
        break;
      }
      default: {
        Rng rng(rs.salt);
        Mat left(dim_a, rs.rank), right(rs.rank, dim_b);
        for (int i = 0; i < dim_a; ++i)
          for (int j = 0; j < rs.rank; ++j) left(i, j) = rng.cgauss();
        for (int i = 0; i < rs.rank; ++i)
          for (int j = 0; j < dim_b; ++j) right(i, j) = rng.cgauss();
        m = project_rank(left * right, rs.rank);
        break;
      }
    }

    Vec psi = to_vector(m);
    Vec wpsi = w * psi;
    double f = psi.dot(wpsi).real();
    double eta = eta0;
    int flat = 0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Mat grad = to_matrix(wpsi, dim_a, dim_b);
      bool accepted = false;
      double fc = f;
      Mat cand;
      Vec cpsi, cwpsi;
      while (eta > 1e-13 * eta0) {
        cand = project_rank(m - (2.0 * eta) * grad, rs.rank);
        cpsi = to_vector(cand);
        cwpsi = w * cpsi;
        fc = cpsi.dot(cwpsi).real();
        if (fc < f - 1e-14 * (1.0 + std::abs(f))) {
          accepted = true;
          break;
        }
        eta /= 2.0;
      }
      if (!accepted) break;
      const double improvement = f - fc;
      m = cand;
      psi = cpsi;
      wpsi = cwpsi;
      f = fc;
      eta = std::min(eta * 1.5, 1e3 * eta0);
      if (improvement < 1e-15 * (1.0 + std::abs(f))) {
        if (++flat >= 2) break;
      } else {
        flat = 0;
      }
    }
    results[idx] = RunResult{f, psi, rs.rank, true};
  };

  const bool early = std::isfinite(opts.stop_below);
  int completed = 0;
  if (!early) {
    parallel_for(nruns, run_one);
    completed = nruns;
  } else {
    const int batch = 8;
    while (completed < nruns) {
      const int hi = std::min(nruns, completed + batch);
      parallel_for(hi - completed, [&](int i) { run_one(completed + i); });
      completed = hi;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < completed; ++i)
        best = std::min(best, results[i].value);
      if (best < opts.stop_below) break;
    }
  }

  SchmidtMinResult out;
  out.runs = completed;
  int best_idx = -1;
  for (int i = 0; i < completed; ++i) {
    if (!results[i].done) continue;
    if (best_idx < 0 || results[i].value < results[best_idx].value)
      best_idx = i;
  }
  if (best_idx < 0)
    throw SolverFailure("min_schmidt_k_expectation: no run completed");
  out.value = results[best_idx].value;
  out.argmin = results[best_idx].psi;
  out.rank_used = results[best_idx].rank;

  if (opts.keep_violators > 0) {
    std::vector<int> order;
    for (int i = 0; i < completed; ++i)
      if (results[i].done && results[i].value < opts.violator_threshold)
        order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (results[a].value != results[b].value)
        return results[a].value < results[b].value;
      return a < b;
    });
    for (int idx : order) {
      if (static_cast<int>(out.violators.size()) >= opts.keep_violators) break;
      bool fresh = true;
      for (const auto& [val, v] : out.violators)
        if (std::abs(v.dot(results[idx].psi)) > 0.999) {
          fresh = false;
          break;
        }
      if (fresh) out.violators.emplace_back(results[idx].value, results[idx].psi);
    }
  }
  return out;
}

WitnessVerdict sn_witness_lower_bound(const BipartiteState& rho, int k,
                                      const Mat& w,
                                      const SchmidtMinOptions& opts,
                                      const Tolerances& tols) {
  if (w.rows() != rho.rho.rows())
    throw InvalidInput("sn_witness_lower_bound: witness does not match state");
  const SchmidtMinResult oracle =
      min_schmidt_k_expectation(w, rho.dim_a, rho.dim_b, k, opts, tols);
  if (oracle.value < -tols.oracle_eps) {
    std::ostringstream msg;
    msg << "witness not certified: oracle found expectation " << oracle.value
        << " below -" << tols.oracle_eps << " on the rank-" << k << " set";
    throw CertificationFailure(msg.str());
  }
  WitnessVerdict v;
  v.value = (w * rho.rho).trace().real();
  v.oracle_value = oracle.value;
  v.detected = v.value < 0.0;
  v.margin = v.detected ? -v.value : 0.0;
  return v;
}

}  // namespace etk
