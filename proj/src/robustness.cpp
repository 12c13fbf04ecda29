#include "etk/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace etk {

namespace {

Mat hermitian_from_coords(int n, const RVec& y) {
  Mat h = Mat::Zero(n, n);
  int alpha = 0;
  for (int a = 0; a < n; ++a) h(a, a) = y[alpha++];
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      const double re = y[alpha++];
      const double im = y[alpha++];
      h(r, c) = Complex(re, im);
      h(c, r) = Complex(re, -im);
    }
  return h;
}

bool near_duplicate(const std::vector<Vec>& cols, const Vec& v) {
  for (const Vec& c : cols)
    if (std::abs(c.dot(v)) > 0.9999) return true;
  return false;
}

Vec truncate_to_rank(const Vec& v, int da, int db, int k,
                     const Tolerances& tols) {
  Vec u = v / v.norm();
  SchmidtDecomposition sd = schmidt_decompose(u, da, db, tols);
  if (sd.rank <= k) return u;
  sd.rank = k;
  sd.coefficients = sd.coefficients.head(k).eval();
  Vec out = schmidt_reconstruct(sd);
  return out / out.norm();
}

std::vector<Vec> initial_columns(const Mat& rho, int da, int db, int k,
                                 const std::vector<Vec>& extra,
                                 const Tolerances& tols) {
  const int n = da * db;
  std::vector<Vec> cols;
  cols.reserve(n + 32);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) {
      Vec v = Vec::Zero(n);
      v[fuse(i, j, db)] = Complex(1, 0);
      cols.push_back(std::move(v));
    }
  const int dmin = std::min(da, db);
  const WeylOperators wy = weyl(db);
  for (int j = 2; j <= k; ++j) {
    std::vector<int> subset(j);
    for (int i = 0; i < j; ++i) subset[i] = i;
    while (true) {
      Vec psi = Vec::Zero(n);
      const double amp = 1.0 / std::sqrt(double(j));
      for (int i : subset) psi[fuse(i, i, db)] = Complex(amp, 0);
      for (int a = 0; a < db; ++a)
        for (int b = 0; b < db; ++b) {
          const Mat u = weyl_op(wy, a, b);
          Vec shifted = Vec::Zero(n);
          for (int x = 0; x < da; ++x)
            for (int r = 0; r < db; ++r)
              for (int c = 0; c < db; ++c)
                shifted[fuse(x, r, db)] += u(r, c) * psi[fuse(x, c, db)];
          if (!near_duplicate(cols, shifted)) cols.push_back(std::move(shifted));
        }
      int pos = j - 1;
      while (pos >= 0 && subset[pos] == dmin - j + pos) --pos;
      if (pos < 0) break;
      ++subset[pos];
      for (int i = pos + 1; i < j; ++i) subset[i] = subset[i - 1] + 1;
    }
  }
  // Eigenvectors of rho that already sit inside the rank-k set let the
  // master cover rho exactly whenever its spectral decomposition qualifies.
  const Spectrum spec = eig_hermitian(rho, tols);
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues[i] <= tols.psd_floor) continue;
    Vec v = spec.eigenvectors.col(i);
    if (schmidt_decompose(v, da, db, tols).rank > k) continue;
    if (!near_duplicate(cols, v)) cols.push_back(std::move(v));
  }
  for (const Vec& v : extra) {
    if (v.size() != n)
      throw InvalidInput("robustness_bounds: extra column has wrong dimension");
    Vec u = truncate_to_rank(v, da, db, k, tols);
    if (!near_duplicate(cols, u)) cols.push_back(std::move(u));
  }
  return cols;
}

struct MasterResult {
  RVec lambda;
  Mat y_op;
  double sum_lambda = 0;
  double dual_value = 0;
};

MasterResult solve_master(const Mat& rho, const std::vector<Vec>& cols,
                          double tol) {
  const int n = static_cast<int>(rho.rows());
  const int ncols = static_cast<int>(cols.size());
  const int m = n * n;

  SdpProblem prob;
  prob.sense = SdpSense::Minimize;
  prob.block_dims.assign(ncols, 1);
  prob.block_dims.push_back(n);
  prob.objective.assign(ncols, Mat::Ones(1, 1));
  prob.objective.push_back(Mat::Zero(n, n));

  std::vector<RVec> col_coords(ncols);
  for (int i = 0; i < ncols; ++i)
    col_coords[i] = hermitian_coords(projector(cols[i]));
  const RVec rho_coords = hermitian_coords(rho);

  prob.constraints.resize(m);
  for (int alpha = 0; alpha < m; ++alpha) {
    SdpConstraint& con = prob.constraints[alpha];
    con.coeff.resize(ncols + 1);
    for (int i = 0; i < ncols; ++i) {
      Mat c(1, 1);
      c(0, 0) = col_coords[i][alpha];
      con.coeff[i] = std::move(c);
    }
    con.coeff[ncols] = -hermitian_basis_element(n, alpha);
    con.rhs = rho_coords[alpha];
  }

  SdpOptions sopts;
  sopts.tol = tol;
  const SdpSolution sol = solve(prob, sopts);
  if (sol.status != SdpStatus::Optimal) {
    std::ostringstream msg;
    msg << "robustness master SDP ended with status " << to_string(sol.status)
        << " after " << sol.iterations << " iterations";
    throw SolverFailure(msg.str());
  }

  MasterResult out;
  out.lambda.resize(ncols);
  for (int i = 0; i < ncols; ++i) out.lambda[i] = sol.primal[i](0, 0).real();
  out.y_op = hermitian_from_coords(n, sol.dual);
  out.sum_lambda = sol.primal_value;
  out.dual_value = sol.dual_value;
  return out;
}

}  // namespace

RobustnessCertificate robustness_bounds(const BipartiteState& rho, int k,
                                        const RobustnessOptions& opts,
                                        const Tolerances& tols) {
  const BipartiteState state = make_state(rho.rho, rho.dim_a, rho.dim_b, tols);
  const int da = state.dim_a, db = state.dim_b;
  if (k < 1 || k > std::min(da, db))
    throw InvalidInput("robustness_bounds: k must lie in [1, min(dims)]");
  const int n = da * db;
  const int protected_count = n;
  const WeylOperators wy = weyl(db);

  std::vector<Vec> cols =
      initial_columns(state.rho, da, db, k, opts.extra_columns, tols);

  RobustnessCertificate cert;
  cert.k = k;
  cert.dim_a = da;
  cert.dim_b = db;

  MasterResult master;
  // Snapshot of the columns the latest master actually priced; the live list
  // mutates before the next solve.
  std::vector<Vec> solved_cols;
  Mat w;
  const int max_rounds = std::max(1, opts.max_rounds);
  for (int round = 1; round <= max_rounds; ++round) {
    master = solve_master(state.rho, cols, opts.sdp_tol);
    solved_cols = cols;
    cert.rounds = round;
    w = Mat::Identity(n, n) - master.y_op;

    SchmidtMinOptions oracle_opts;
    oracle_opts.restarts = opts.round_restarts;
    oracle_opts.seed = mix_seed(opts.seed, round);
    oracle_opts.max_iterations = opts.round_iterations;
    oracle_opts.keep_violators = opts.cuts_per_round;
    oracle_opts.violator_threshold = -tols.oracle_eps;
    const SchmidtMinResult oracle =
        min_schmidt_k_expectation(w, da, db, k, oracle_opts, tols);
    if (oracle.value >= -tols.oracle_eps) break;

    bool added = false;
    for (const auto& [val, v] : oracle.violators) {
      if (!near_duplicate(cols, v)) {
        cols.push_back(v);
        added = true;
      }
    }
    // The shifted orbit of the deepest violator speeds up highly symmetric
    // states, whose optimal decompositions are orbit mixtures.
    const Vec& best = oracle.argmin;
    for (int a = 0; a < db; ++a)
      for (int b = 0; b < db; ++b) {
        const Mat u = weyl_op(wy, a, b);
        Vec shifted = Vec::Zero(n);
        for (int x = 0; x < da; ++x)
          for (int r = 0; r < db; ++r)
            for (int c = 0; c < db; ++c)
              shifted[fuse(x, r, db)] += u(r, c) * best[fuse(x, c, db)];
        if (!near_duplicate(cols, shifted)) {
          cols.push_back(std::move(shifted));
          added = true;
        }
      }
    if (!added) break;

    if (static_cast<int>(cols.size()) > 150) {
      const double weight_floor = 1e-10 * std::max(1.0, master.sum_lambda);
      const int solved = static_cast<int>(master.lambda.size());
      std::vector<Vec> kept(cols.begin(), cols.begin() + protected_count);
      for (int i = protected_count; i < solved; ++i)
        if (master.lambda[i] > weight_floor) kept.push_back(cols[i]);
      for (int i = solved; i < static_cast<int>(cols.size()); ++i)
        kept.push_back(cols[i]);
      cols.swap(kept);
    }
  }

  // Certification pass; an identity shift restores feasibility when the
  // deeper oracle still finds a violation.
  double witness_value = (w * state.rho).trace().real();
  double oracle_value = 0;
  bool certified = false;
  bool repaired = false;
  for (int attempt = 0; attempt < 3 && !certified; ++attempt) {
    SchmidtMinOptions cert_opts;
    cert_opts.restarts = opts.final_restarts;
    cert_opts.seed = mix_seed(opts.seed, 1000 + attempt);
    cert_opts.max_iterations = std::max(500, opts.round_iterations);
    cert_opts.keep_violators = 0;
    const SchmidtMinResult res =
        min_schmidt_k_expectation(w, da, db, k, cert_opts, tols);
    oracle_value = res.value;
    if (res.value >= -tols.oracle_eps) {
      certified = true;
    } else {
      const double s = -res.value;
      w = (w + s * Mat::Identity(n, n)) / (1.0 + s);
      repaired = true;
    }
  }
  witness_value = (w * state.rho).trace().real();

  cert.witness.op = w;
  cert.witness.k = k;
  cert.witness.dim_a = da;
  cert.witness.dim_b = db;
  cert.witness.value = witness_value;
  cert.witness.oracle_value = oracle_value;
  cert.witness.oracle_restarts = opts.final_restarts;
  cert.witness.oracle_seed = opts.seed;
  cert.witness.repaired = repaired;
  cert.oracle_certified = certified;
  cert.lower = certified ? std::max(0.0, -witness_value) : 0.0;

  // Exactness repair on the decomposition: spreading the residual deficit
  // over the basis product columns keeps sum lambda_i P_i >= rho.
  RVec lambda = master.lambda;
  Mat y_dec = Mat::Zero(n, n);
  for (int i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 0) y_dec += lambda[i] * projector(solved_cols[i]);
  const double resid = min_eigenvalue(y_dec - state.rho, tols);
  if (resid < 0)
    for (int i = 0; i < protected_count; ++i) lambda[i] += -resid;
  cert.upper = lambda.sum() - 1.0;

  cert.decomposition.clear();
  cert.active_columns = 0;
  const double active_floor = 1e-9 * std::max(1.0, lambda.sum());
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 1e-14)
      cert.decomposition.push_back(RobustnessColumn{solved_cols[i], lambda[i]});
    if (lambda[i] > active_floor) ++cert.active_columns;
  }

  if (k == 1 && opts.compute_ppt) {
    SdpOptions popts;
    popts.tol = opts.sdp_tol;
    cert.ppt_value = ppt_robustness(state, popts);
    cert.has_ppt = true;
  }
  return cert;
}

double ppt_robustness(const BipartiteState& rho, const SdpOptions& opts) {
  const int da = rho.dim_a, db = rho.dim_b;
  const int n = da * db;
  SdpProblem prob;
  prob.sense = SdpSense::Minimize;
  prob.block_dims = {n, n};
  prob.objective = {Mat::Identity(n, n), Mat::Zero(n, n)};
  const RVec rhs =
      hermitian_coords(partial_transpose(rho.rho, da, db, Side::B));
  prob.constraints.resize(n * n);
  for (int alpha = 0; alpha < n * n; ++alpha) {
    const Mat e = hermitian_basis_element(n, alpha);
    SdpConstraint& con = prob.constraints[alpha];
    con.coeff = {-partial_transpose(e, da, db, Side::B), e};
    con.rhs = rhs[alpha];
  }
  const SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::Optimal)
    throw SolverFailure("ppt_robustness: SDP did not reach optimality");
  return sol.primal_value + rho.rho.trace().real() - 1.0;
}

EmbeddedWitness embed_witness(const Mat& w, const BipartiteState& rho,
                              const Tolerances& tols) {
  require_hermitian(w, tols.hermiticity, "witness");
  if (w.rows() != rho.rho.rows())
    throw InvalidInput("embed_witness: witness does not match state dims");
  const auto support = [&](const Mat& marginal, int d) {
    const Spectrum spec = eig_hermitian(marginal, tols);
    const double top = std::max(spec.eigenvalues[0], 1e-300);
    int r = 0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
      if (spec.eigenvalues[i] > tols.rank_floor * top) ++r;
    if (r == d) return Mat(Mat::Identity(d, d));
    return Mat(spec.eigenvectors.leftCols(r));
  };
  const Mat va =
      support(partial_trace(rho.rho, rho.dim_a, rho.dim_b, Side::B), rho.dim_a);
  const Mat vb =
      support(partial_trace(rho.rho, rho.dim_a, rho.dim_b, Side::A), rho.dim_b);
  const Mat iso = tensor(va, vb);
  Mat compressed_rho = iso.adjoint() * rho.rho * iso;
  compressed_rho /= compressed_rho.trace().real();
  EmbeddedWitness out;
  out.w = iso.adjoint() * w * iso;
  out.isometry_a = va;
  out.isometry_b = vb;
  out.rho = make_state(compressed_rho, static_cast<int>(va.cols()),
                       static_cast<int>(vb.cols()), tols);
  return out;
}

PaddedWitness pad_witness(const Mat& w_tilde, int dim_a, int dim_b,
                          const Tolerances& tols) {
  require_hermitian(w_tilde, tols.hermiticity, "witness");
  if (w_tilde.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw InvalidInput("pad_witness: operator does not match dims");
  const Spectrum full = eig_hermitian(w_tilde, tols);
  if (full.eigenvalues[0] > 1.0 + tols.comparison)
    throw InvalidInput("pad_witness: witness exceeds the identity cap");

  const Mat wb = partial_trace(w_tilde, dim_a, dim_b, Side::A);
  const double mean = wb.trace().real() / dim_b;
  const double defect =
      operator_norm(wb - mean * Mat::Identity(dim_b, dim_b), tols);
  if (defect <= 1e-9 * std::max(1.0, std::abs(mean)))
    return PaddedWitness{w_tilde, dim_a, 0, mean};

  const Spectrum mspec = eig_hermitian(wb, tols);
  const double top = mspec.eigenvalues[0];
  const double bottom = mspec.eigenvalues[mspec.eigenvalues.size() - 1];
  if (bottom < -1e3 * tols.psd_floor)
    throw InvalidInput("pad_witness: marginal must be positive semidefinite");

  const int added = std::max(
      1, static_cast<int>(std::ceil(top - std::min(0.0, bottom) - 1e-12)));
  const Mat d =
      (top * Mat::Identity(dim_b, dim_b) - wb) / static_cast<double>(added);
  const int n_old = dim_a * dim_b;
  const int n_new = (dim_a + added) * dim_b;
  Mat w = Mat::Zero(n_new, n_new);
  w.topLeftCorner(n_old, n_old) = w_tilde;
  w.bottomRightCorner(n_new - n_old, n_new - n_old) =
      tensor(Mat::Identity(added, added), d);
  return PaddedWitness{w, dim_a + added, added, top};
}

}  // namespace etk
