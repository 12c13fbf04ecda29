#include "etk/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace etk {

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Unbounded: return "unbounded";
    case SdpStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

Mat hermitian_basis_element(int n, int alpha) {
  if (n <= 0 || alpha < 0 || alpha >= n * n)
    throw InvalidInput("hermitian_basis_element: index out of range");
  Mat e = Mat::Zero(n, n);
  if (alpha < n) {
    e(alpha, alpha) = Complex(1, 0);
    return e;
  }
  const int idx = alpha - n;
  const int p = idx / 2;
  const int kind = idx % 2;
  int r = 0, c = 1, count = 0;
  for (r = 0; r < n; ++r) {
    const int row_pairs = n - r - 1;
    if (count + row_pairs > p) {
      c = r + 1 + (p - count);
      break;
    }
    count += row_pairs;
  }
  if (kind == 0) {
    e(r, c) = Complex(1, 0);
    e(c, r) = Complex(1, 0);
  } else {
    e(r, c) = Complex(0, 1);
    e(c, r) = Complex(0, -1);
  }
  return e;
}

RVec hermitian_coords(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  RVec out(static_cast<Eigen::Index>(n) * n);
  for (int a = 0; a < n; ++a) out[a] = h(a, a).real();
  int idx = n;
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      out[idx++] = 2.0 * h(r, c).real();
      out[idx++] = 2.0 * h(r, c).imag();
    }
  return out;
}

namespace {

RMat emb(const Mat& h) {
  const Eigen::Index n = h.rows();
  RMat out(2 * n, 2 * n);
  const RMat re = h.real();
  const RMat im = h.imag();
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

Mat unemb(const RMat& y) {
  const Eigen::Index n = y.rows() / 2;
  const RMat re = (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n)) / 2.0;
  const RMat im = (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n)) / 2.0;
  Mat h(n, n);
  h.real() = re;
  h.imag() = im;
  return (h + h.adjoint()) / 2.0;
}

RMat sym(const RMat& m) { return (m + m.transpose()) / 2.0; }

constexpr double kBigStep = 1e30;

// Largest alpha with s + alpha ds >= 0, for s > 0.
double max_step(const RMat& s, const RMat& ds) {
  Eigen::LLT<RMat> llt(s);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<RMat> es(s, Eigen::EigenvaluesOnly);
    const double bump = std::max(0.0, -es.eigenvalues().minCoeff()) + 1e-12;
    llt.compute(s + bump * RMat::Identity(s.rows(), s.cols()));
    if (llt.info() != Eigen::Success)
      throw SolverFailure("sdp: iterate lost positive definiteness");
  }
  const RMat l = llt.matrixL();
  const RMat tmp = l.triangularView<Eigen::Lower>().solve(ds);
  RMat w = l.triangularView<Eigen::Lower>()
               .solve(RMat(tmp.transpose()))
               .transpose();
  w = sym(w);
  Eigen::SelfAdjointEigenSolver<RMat> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return kBigStep;
  return -1.0 / lmin;
}

double max_step_scalar(const RVec& s, const RVec& ds) {
  double best = kBigStep;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double w = ds[i] / std::max(s[i], 1e-300);
    if (w < -1e-14) best = std::min(best, -1.0 / w);
  }
  return best;
}

struct Trip {
  int r = 0, c = 0;
  double v = 0;
};

// Dense or sparse-triplet embedded coefficient of one constraint on one block.
struct Entry {
  int con = 0;
  RMat dense;
  std::vector<Trip> trips;
};

double entry_dot_tr(const Entry& e, const RMat& t) {
  // tr(A t) for the stored coefficient A.
  if (e.trips.empty())
    return e.dense.cwiseProduct(t.transpose()).sum();
  double s = 0;
  for (const Trip& tr : e.trips) s += tr.v * t(tr.c, tr.r);
  return s;
}

double entry_dot_sym(const Entry& e, const RMat& x) {
  // <A, X> for symmetric X (entrywise dot).
  if (e.trips.empty()) return e.dense.cwiseProduct(x).sum();
  double s = 0;
  for (const Trip& tr : e.trips) s += tr.v * x(tr.r, tr.c);
  return s;
}

void entry_axpy(const Entry& e, double coef, RMat& acc) {
  if (e.trips.empty()) {
    acc.noalias() += coef * e.dense;
    return;
  }
  for (const Trip& t : e.trips) acc(t.r, t.c) += coef * t.v;
}

// Dimension-1 complex blocks collapse to nonnegative scalars; their
// constraint coefficients live in one scatter matrix for BLAS-style updates.
struct Internal {
  int nblocks = 0;
  int m = 0;
  std::vector<int> mat_orig;             // matrix-block -> original index
  std::vector<int> dims;                 // embedded dims, matrix blocks
  std::vector<RMat> c;                   // embedded objectives, matrix blocks
  std::vector<std::vector<Entry>> by_block;
  std::vector<int> scal_orig;            // scalar-block -> original index
  RVec c_s;                              // scalar objectives
  RMat u;                                // m x n_scalar coefficient scatter
  RVec b;                                // doubled rhs
  double binf = 0, cinf = 0;
  double total_dim = 0;
};

Internal build_internal(const SdpProblem& prob) {
  const int nb = static_cast<int>(prob.block_dims.size());
  if (nb == 0) throw InvalidInput("sdp: no blocks");
  if (static_cast<int>(prob.objective.size()) != nb)
    throw InvalidInput("sdp: objective must have one matrix per block");
  Internal in;
  in.nblocks = nb;
  in.m = static_cast<int>(prob.constraints.size());
  std::vector<int> slot(nb, 0);  // index within its kind
  std::vector<bool> scalar(nb, false);
  std::vector<double> cs_tmp;
  double real_dof = 0;
  for (int bkl = 0; bkl < nb; ++bkl) {
    const int d = prob.block_dims[bkl];
    if (d <= 0) throw InvalidInput("sdp: block dimensions must be positive");
    const Mat& cb = prob.objective[bkl];
    require_hermitian(cb, default_tols().hermiticity, "sdp objective block");
    if (cb.rows() != d)
      throw InvalidInput("sdp: objective block size mismatch");
    if (d == 1) {
      scalar[bkl] = true;
      slot[bkl] = static_cast<int>(in.scal_orig.size());
      in.scal_orig.push_back(bkl);
      cs_tmp.push_back(cb(0, 0).real());
      in.cinf = std::max(in.cinf, std::sqrt(2.0) * std::abs(cb(0, 0).real()));
    } else {
      slot[bkl] = static_cast<int>(in.mat_orig.size());
      in.mat_orig.push_back(bkl);
      in.dims.push_back(2 * d);
      in.c.push_back(emb(cb));
      in.cinf = std::max(in.cinf, in.c.back().norm());
    }
    real_dof += static_cast<double>(d) * d;
    in.total_dim += 2.0 * d;
  }
  if (in.m > real_dof)
    throw InvalidInput("sdp: more constraints than total real dimension");
  in.by_block.resize(in.mat_orig.size());
  in.c_s.resize(static_cast<Eigen::Index>(cs_tmp.size()));
  for (size_t s = 0; s < cs_tmp.size(); ++s)
    in.c_s[static_cast<Eigen::Index>(s)] = cs_tmp[s];
  in.u = RMat::Zero(in.m, static_cast<Eigen::Index>(in.scal_orig.size()));
  in.b.resize(in.m);
  for (int i = 0; i < in.m; ++i) {
    const SdpConstraint& con = prob.constraints[i];
    if (static_cast<int>(con.coeff.size()) != nb)
      throw InvalidInput("sdp: constraint must carry one matrix per block");
    if (!std::isfinite(con.rhs))
      throw InvalidInput("sdp: constraint rhs must be finite");
    bool touched = false;
    for (int bkl = 0; bkl < nb; ++bkl) {
      const Mat& a = con.coeff[bkl];
      if (a.size() == 0) continue;
      require_hermitian(a, default_tols().hermiticity, "sdp constraint block");
      if (a.rows() != prob.block_dims[bkl])
        throw InvalidInput("sdp: constraint block size mismatch");
      touched = true;
      if (scalar[bkl]) {
        in.u(i, slot[bkl]) = a(0, 0).real();
        continue;
      }
      Entry e;
      e.con = i;
      RMat ea = emb(a);
      int nnz = 0;
      for (Eigen::Index r = 0; r < ea.rows(); ++r)
        for (Eigen::Index cidx = 0; cidx < ea.cols(); ++cidx)
          if (ea(r, cidx) != 0.0) ++nnz;
      if (nnz == 0) continue;  // zero coefficient: contributes nothing
      if (nnz <= 16) {
        e.trips.reserve(nnz);
        for (Eigen::Index r = 0; r < ea.rows(); ++r)
          for (Eigen::Index cidx = 0; cidx < ea.cols(); ++cidx)
            if (ea(r, cidx) != 0.0)
              e.trips.push_back(Trip{static_cast<int>(r),
                                     static_cast<int>(cidx), ea(r, cidx)});
      } else {
        e.dense = std::move(ea);
      }
      in.by_block[slot[bkl]].push_back(std::move(e));
    }
    if (!touched) throw InvalidInput("sdp: constraint touches no block");
    in.b[i] = 2.0 * con.rhs;
    in.binf = std::max(in.binf, std::abs(in.b[i]));
  }
  return in;
}

SdpSolution solve_min(const SdpProblem& prob, const SdpOptions& opts) {
  Internal in = build_internal(prob);
  const int nmat = static_cast<int>(in.mat_orig.size());
  const int ns = static_cast<int>(in.scal_orig.size());
  const int m = in.m;

  std::vector<RMat> x(nmat), z(nmat);
  const double xi_p = std::max(10.0, 2.0 * in.binf);
  const double xi_d = std::max(10.0, 2.0 * in.cinf);
  for (int t = 0; t < nmat; ++t) {
    x[t] = xi_p * RMat::Identity(in.dims[t], in.dims[t]);
    z[t] = xi_d * RMat::Identity(in.dims[t], in.dims[t]);
  }
  RVec xs = RVec::Constant(ns, xi_p);
  RVec zs = RVec::Constant(ns, xi_d);
  RVec y = RVec::Zero(m);

  SdpSolution sol;
  const double big = 1e10 * (1.0 + in.binf + in.cinf);
  int stalls = 0;

  auto finish = [&](SdpStatus status) {
    sol.status = status;
    sol.primal.resize(in.nblocks);
    sol.dual_slack.resize(in.nblocks);
    for (int t = 0; t < nmat; ++t) {
      sol.primal[in.mat_orig[t]] = unemb(x[t]);
      sol.dual_slack[in.mat_orig[t]] = unemb(z[t]);
    }
    for (int s = 0; s < ns; ++s) {
      sol.primal[in.scal_orig[s]] = Mat::Constant(1, 1, xs[s]);
      sol.dual_slack[in.scal_orig[s]] = Mat::Constant(1, 1, zs[s]);
    }
    sol.dual = y;
    return sol;
  };

  for (int it = 1; it <= opts.max_iterations; ++it) {
    sol.iterations = it;
    // residuals
    double pobj = 2.0 * in.c_s.dot(xs);
    for (int t = 0; t < nmat; ++t) pobj += in.c[t].cwiseProduct(x[t]).sum();
    const double dobj = in.b.dot(y);

    RVec rp = in.b;
    for (int t = 0; t < nmat; ++t)
      for (const Entry& e : in.by_block[t])
        rp[e.con] -= entry_dot_sym(e, x[t]);
    if (ns > 0) rp.noalias() -= 2.0 * (in.u * xs);

    std::vector<RMat> rd(nmat);
    double rd_norm = 0;
    for (int t = 0; t < nmat; ++t) {
      rd[t] = in.c[t] - z[t];
      for (const Entry& e : in.by_block[t]) entry_axpy(e, -y[e.con], rd[t]);
      rd_norm = std::max(rd_norm, rd[t].cwiseAbs().maxCoeff());
    }
    RVec rd_s = in.c_s - zs - in.u.transpose() * y;
    if (ns > 0) rd_norm = std::max(rd_norm, rd_s.cwiseAbs().maxCoeff());

    double mu = 2.0 * xs.dot(zs);
    for (int t = 0; t < nmat; ++t) mu += x[t].cwiseProduct(z[t]).sum();
    mu /= in.total_dim;

    const double err_p =
        (m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + in.binf);
    const double err_d = rd_norm / (1.0 + in.cinf);

    sol.primal_value = pobj / 2.0;
    sol.dual_value = dobj / 2.0;
    sol.primal_residual = err_p;
    sol.dual_residual = err_d;
    if (opts.record_trace)
      sol.trace.push_back(SdpIterate{it, pobj / 2.0, dobj / 2.0, mu, err_p,
                                     err_d, 0.0, 0.0});

    if (err_p <= opts.tol && err_d <= opts.tol &&
        std::abs(pobj - dobj) <= opts.tol * (1.0 + std::abs(pobj)))
      return finish(SdpStatus::Optimal);

    if (dobj > big && err_d <= 1e-6) {
      sol.certificate_heuristic = true;
      return finish(SdpStatus::Infeasible);
    }
    if (pobj < -big && err_p <= 1e-6) {
      sol.certificate_heuristic = true;
      return finish(SdpStatus::Unbounded);
    }
    if (!std::isfinite(mu) || mu > 1e16)
      return finish(SdpStatus::MaxIterations);

    // factorizations
    std::vector<RMat> zinv(nmat);
    for (int t = 0; t < nmat; ++t) {
      Eigen::LLT<RMat> llt(z[t]);
      if (llt.info() != Eigen::Success) {
        const double bump = 1e-12 * (1.0 + z[t].norm());
        llt.compute(z[t] + bump * RMat::Identity(in.dims[t], in.dims[t]));
        if (llt.info() != Eigen::Success)
          throw SolverFailure("sdp: dual slack lost positive definiteness");
      }
      zinv[t] = llt.solve(RMat::Identity(in.dims[t], in.dims[t]));
    }
    RVec zinv_s(ns);
    for (int s = 0; s < ns; ++s) {
      double v = zs[s];
      if (v <= 0) v += 1e-12 * (1.0 + std::abs(zs[s]));
      if (v <= 0)
        throw SolverFailure("sdp: dual slack lost positive definiteness");
      zinv_s[s] = 1.0 / v;
    }

    // Schur complement M_ij = <A_i, (Zinv A_j X + X A_j Zinv)/2>
    RMat g = RMat::Zero(m, m);
    for (int t = 0; t < nmat; ++t) {
      const auto& list = in.by_block[t];
      for (const Entry& ej : list) {
        RMat tm;
        if (ej.trips.empty()) {
          tm = zinv[t] * ej.dense * x[t];
        } else {
          tm = RMat::Zero(in.dims[t], in.dims[t]);
          for (const Trip& tr : ej.trips)
            tm.noalias() += tr.v * (zinv[t].col(tr.r) * x[t].row(tr.c));
        }
        for (const Entry& ei : list) g(ei.con, ej.con) += entry_dot_tr(ei, tm);
      }
    }
    RMat schur = sym(g);
    if (ns > 0) {
      const RVec ts = 2.0 * xs.cwiseProduct(zinv_s);
      const RMat ud = in.u * ts.asDiagonal();
      schur.noalias() += ud * in.u.transpose();
    }

    Eigen::LDLT<RMat> ldlt;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
      RMat mtry = schur;
      if (ridge > 0) mtry += ridge * RMat::Identity(m, m);
      ldlt.compute(mtry);
      if (m == 0 || ldlt.info() == Eigen::Success) break;
      ridge = ridge == 0.0
                  ? 1e-13 * (1.0 + schur.trace() / std::max(1, m))
                  : ridge * 100;
    }

    auto solve_newton = [&](const std::vector<RMat>& kmat, const RVec& km_s,
                            const std::vector<RMat>& hd, const RVec& hd_s,
                            RVec& dy, std::vector<RMat>& dz, RVec& dzs,
                            std::vector<RMat>& dx, RVec& dxs) {
      RVec rhs = rp;
      for (int t = 0; t < nmat; ++t) {
        const RMat diff = hd[t] - kmat[t];
        for (const Entry& e : in.by_block[t])
          rhs[e.con] += entry_dot_sym(e, diff);
      }
      if (ns > 0) rhs.noalias() += 2.0 * (in.u * (hd_s - km_s));
      dy = m > 0 ? RVec(ldlt.solve(rhs)) : RVec::Zero(0);
      dz.resize(nmat);
      dx.resize(nmat);
      for (int t = 0; t < nmat; ++t) {
        dz[t] = rd[t];
        for (const Entry& e : in.by_block[t]) entry_axpy(e, -dy[e.con], dz[t]);
        dx[t] = kmat[t] - sym(zinv[t] * dz[t] * x[t]);
      }
      dzs = rd_s - in.u.transpose() * dy;
      dxs = km_s - dzs.cwiseProduct(xs).cwiseProduct(zinv_s);
    };

    // predictor
    std::vector<RMat> kmat(nmat), hd(nmat);
    for (int t = 0; t < nmat; ++t) {
      kmat[t] = -x[t];
      hd[t] = sym(zinv[t] * rd[t] * x[t]);
    }
    RVec km_s = -xs;
    const RVec hd_s = rd_s.cwiseProduct(xs).cwiseProduct(zinv_s);
    RVec dy_aff, dzs_aff, dxs_aff;
    std::vector<RMat> dz_aff, dx_aff;
    solve_newton(kmat, km_s, hd, hd_s, dy_aff, dz_aff, dzs_aff, dx_aff,
                 dxs_aff);

    double ap_aff = 1.0, ad_aff = 1.0;
    for (int t = 0; t < nmat; ++t) {
      ap_aff = std::min(ap_aff, max_step(x[t], dx_aff[t]));
      ad_aff = std::min(ad_aff, max_step(z[t], dz_aff[t]));
    }
    ap_aff = std::min(ap_aff, max_step_scalar(xs, dxs_aff));
    ad_aff = std::min(ad_aff, max_step_scalar(zs, dzs_aff));
    double mu_aff =
        2.0 * (xs + ap_aff * dxs_aff).dot(zs + ad_aff * dzs_aff);
    for (int t = 0; t < nmat; ++t)
      mu_aff += (x[t] + ap_aff * dx_aff[t])
                    .cwiseProduct(z[t] + ad_aff * dz_aff[t])
                    .sum();
    mu_aff = std::max(0.0, mu_aff / in.total_dim);
    const double sigma =
        std::clamp(std::pow(mu_aff / std::max(mu, 1e-300), 3.0), 1e-8, 1.0);

    // corrector
    for (int t = 0; t < nmat; ++t)
      kmat[t] = sigma * mu * zinv[t] - x[t] -
                sym(dx_aff[t] * dz_aff[t] * zinv[t]);
    km_s = sigma * mu * zinv_s - xs -
           dxs_aff.cwiseProduct(dzs_aff).cwiseProduct(zinv_s);
    RVec dy, dzs, dxs;
    std::vector<RMat> dz, dx;
    solve_newton(kmat, km_s, hd, hd_s, dy, dz, dzs, dx, dxs);

    double maxp = kBigStep, maxd = kBigStep;
    for (int t = 0; t < nmat; ++t) {
      maxp = std::min(maxp, max_step(x[t], dx[t]));
      maxd = std::min(maxd, max_step(z[t], dz[t]));
    }
    maxp = std::min(maxp, max_step_scalar(xs, dxs));
    maxd = std::min(maxd, max_step_scalar(zs, dzs));
    const double gamma =
        std::min(0.99, 0.9 + 0.09 * std::min({maxp, maxd, 1.0}));
    const double ap = std::min(1.0, gamma * maxp);
    const double ad = std::min(1.0, gamma * maxd);
    if (opts.record_trace && !sol.trace.empty()) {
      sol.trace.back().step_primal = ap;
      sol.trace.back().step_dual = ad;
    }

    for (int t = 0; t < nmat; ++t) {
      x[t] = sym(x[t] + ap * dx[t]);
      z[t] = sym(z[t] + ad * dz[t]);
    }
    xs += ap * dxs;
    zs += ad * dzs;
    if (m > 0) y += ad * dy;

    stalls = (ap < 1e-10 && ad < 1e-10) ? stalls + 1 : 0;
    if (stalls >= 5) return finish(SdpStatus::MaxIterations);
  }
  return finish(SdpStatus::MaxIterations);
}

}  // namespace

SdpSolution solve(const SdpProblem& prob, const SdpOptions& opts) {
  if (prob.sense == SdpSense::Minimize) return solve_min(prob, opts);
  SdpProblem flipped = prob;
  flipped.sense = SdpSense::Minimize;
  for (auto& c : flipped.objective) c = -c;
  SdpSolution sol = solve_min(flipped, opts);
  sol.primal_value = -sol.primal_value;
  sol.dual_value = -sol.dual_value;
  sol.dual = -sol.dual;
  for (auto& it : sol.trace) {
    it.primal_value = -it.primal_value;
    it.dual_value = -it.dual_value;
  }
  return sol;
}

LmiSolution solve_lmi(const LmiProblem& prob, const SdpOptions& opts) {
  const int m = static_cast<int>(prob.objective.size());
  const int nb = static_cast<int>(prob.block_dims.size());
  if (static_cast<int>(prob.constant.size()) != nb)
    throw InvalidInput("lmi: constant must have one matrix per block");
  if (static_cast<int>(prob.coeff.size()) != m)
    throw InvalidInput("lmi: coeff must have one row per variable");
  SdpProblem sdp;
  sdp.block_dims = prob.block_dims;
  sdp.objective = prob.constant;
  sdp.constraints.resize(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(prob.coeff[i].size()) != nb)
      throw InvalidInput("lmi: coeff row must have one matrix per block");
    sdp.constraints[i].coeff = prob.coeff[i];
    sdp.constraints[i].rhs = prob.objective[i];
  }
  SdpSolution inner = solve(sdp, opts);
  LmiSolution out;
  out.y = inner.dual;
  out.value = inner.dual_value;
  out.slack = inner.dual_slack;
  out.multipliers = inner.primal;
  out.iterations = inner.iterations;
  out.certificate_heuristic = inner.certificate_heuristic;
  switch (inner.status) {
    case SdpStatus::Optimal: out.status = SdpStatus::Optimal; break;
    case SdpStatus::Infeasible: out.status = SdpStatus::Unbounded; break;
    case SdpStatus::Unbounded: out.status = SdpStatus::Infeasible; break;
    case SdpStatus::MaxIterations: out.status = SdpStatus::MaxIterations; break;
  }
  return out;
}

GuessingResult guessing_probability_sdp(const std::vector<Mat>& weighted_states,
                                        const SdpOptions& opts) {
  const int n = static_cast<int>(weighted_states.size());
  if (n == 0) throw InvalidInput("guessing: needs at least one state");
  const int d = static_cast<int>(weighted_states.front().rows());
  for (const Mat& s : weighted_states) {
    require_hermitian(s, default_tols().hermiticity, "guessing state");
    if (s.rows() != d)
      throw InvalidInput("guessing: states must share one dimension");
  }
  SdpProblem prob;
  prob.sense = SdpSense::Maximize;
  prob.block_dims.assign(n, d);
  prob.objective = weighted_states;
  prob.constraints.reserve(static_cast<size_t>(d) * d);
  for (int alpha = 0; alpha < d * d; ++alpha) {
    SdpConstraint con;
    const Mat e = hermitian_basis_element(d, alpha);
    con.coeff.assign(n, e);
    con.rhs = alpha < d ? 1.0 : 0.0;  // coordinates of the identity
    prob.constraints.push_back(std::move(con));
  }
  SdpSolution sol = solve(prob, opts);
  GuessingResult out;
  out.status = sol.status;
  out.value = sol.primal_value;
  out.povm = sol.primal;
  return out;
}

double trace_norm_sdp(const Mat& h, const SdpOptions& opts) {
  require_hermitian(h, default_tols().hermiticity, "trace_norm_sdp input");
  const int d = static_cast<int>(h.rows());
  SdpProblem prob;
  prob.block_dims = {d, d};
  prob.objective = {Mat::Identity(d, d), Mat::Identity(d, d)};
  const RVec target = hermitian_coords(h);
  for (int alpha = 0; alpha < d * d; ++alpha) {
    SdpConstraint con;
    con.coeff = {hermitian_basis_element(d, alpha),
                 -hermitian_basis_element(d, alpha)};
    con.rhs = target[alpha];
    prob.constraints.push_back(std::move(con));
  }
  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::Optimal)
    throw SolverFailure("trace_norm_sdp: solver did not reach optimality");
  return sol.primal_value;
}

}  // namespace etk
