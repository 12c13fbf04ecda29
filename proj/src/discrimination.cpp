#include "etk/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace etk {

double helstrom(const Mat& weighted_r1, const Mat& weighted_r2,
                const Tolerances& tols) {
  require_hermitian(weighted_r1, tols.hermiticity, "first weighted state");
  require_hermitian(weighted_r2, tols.hermiticity, "second weighted state");
  if (weighted_r1.rows() != weighted_r2.rows())
    throw InvalidInput("helstrom: dimension mismatch");
  if (min_eigenvalue(weighted_r1, tols) < -tols.psd_floor ||
      min_eigenvalue(weighted_r2, tols) < -tols.psd_floor)
    throw InvalidInput("helstrom: inputs must be positive semidefinite");
  const double total =
      weighted_r1.trace().real() + weighted_r2.trace().real();
  if (std::abs(total - 1.0) > tols.comparison) {
    std::ostringstream msg;
    msg << "helstrom: weights sum to " << total << ", expected 1";
    throw InvalidInput(msg.str());
  }
  return 0.5 * (1.0 + trace_norm(weighted_r1 - weighted_r2, tols));
}

ChannelRep ta_from_ktp(const ChannelRep& tp_map, const Tolerances& tols) {
  const CheckResult tp = is_tp(tp_map, tols);
  if (!tp.ok) {
    std::ostringstream msg;
    msg << "ta_from_ktp: map is not trace preserving (residual " << tp.residual
        << ")";
    throw InvalidInput(msg.str());
  }
  const int din = tp_map.d_in, dout = tp_map.d_out;
  const int dext = dout + 1;
  auto action = [&](const Mat& x) {
    Mat out = Mat::Zero(dext, dext);
    out.topLeftCorner(dout, dout) = apply_channel(tp_map, x);
    out(dout, dout) -= x.trace();
    return out;
  };
  return choi_of_map(action, din, dext, tols);
}

BinaryTask channel_pair_from_ta(const ChannelRep& ta_map,
                                const Tolerances& tols) {
  const int din = ta_map.d_in, dout = ta_map.d_out;
  const Spectrum spec = eig_hermitian(ta_map.choi, tols);
  const int n = static_cast<int>(spec.eigenvalues.size());
  Mat choi_pos = Mat::Zero(n, n), choi_neg = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double ev = spec.eigenvalues[i];
    const Mat p = projector(spec.eigenvectors.col(i));
    if (ev > 0)
      choi_pos += ev * p;
    else
      choi_neg += -ev * p;
  }
  const ChannelRep pos = make_channel(choi_pos, din, dout, tols);
  const ChannelRep neg = make_channel(choi_neg, din, dout, tols);

  const Mat unit_pos = apply_adjoint(pos, Mat::Identity(dout, dout));
  const Mat unit_neg = apply_adjoint(neg, Mat::Identity(dout, dout));
  if (operator_norm(unit_pos - unit_neg, tols) > 1e-8)
    throw InvalidInput("channel_pair_from_ta: map is not trace annihilating");
  const Mat a_op = 0.5 * (unit_pos + unit_neg);
  const double a = operator_norm(a_op, tols);
  if (a < tols.comparison)
    throw InvalidInput("channel_pair_from_ta: zero map rejected");

  const Mat deficit = a * Mat::Identity(din, din) - a_op;
  const Mat mixed = Mat::Identity(dout, dout) / dout;
  const auto completed = [&](const ChannelRep& part) {
    auto action = [&](const Mat& x) {
      return Mat(
          (apply_channel(part, x) + (deficit * x).trace() * mixed) / a);
    };
    return choi_of_map(action, din, dout, tols);
  };
  BinaryTask task;
  task.phi1 = completed(pos);
  task.phi2 = completed(neg);
  task.c = 1.0 / a;
  return task;
}

namespace {

// Difference map evaluated through id (x) theta on a rank-limited pure input.
double output_trace_norm(const ChannelRep& theta, const Vec& psi, int anc,
                         const Tolerances& tols) {
  return trace_norm(apply_partial_op(theta, projector(psi), anc), tols);
}

}  // namespace

KnormEstimate knorm_estimate(const ChannelRep& theta, int k, int restarts,
                             uint64_t seed, const Tolerances& tols) {
  const int din = theta.d_in;
  const int dout_ch = theta.d_out;
  if (k < 1) throw InvalidInput("knorm_estimate: k must be >= 1");
  const int anc = std::min(k, din);
  const int n = anc * din;

  KnormEstimate best;
  best.value = -1;
  auto consider = [&](double value, const Vec& psi, int rank) {
    if (value > best.value) {
      best.value = value;
      best.best_input = psi;
      best.rank_used = rank;
    }
  };

  for (int rank = 1; rank <= anc; ++rank) {
    for (int r = 0; r <= restarts; ++r) {
      Vec psi;
      if (r == 0 && best.best_input.size() == n) {
        psi = best.best_input;
      } else {
        Rng rng(mix_seed(seed, uint64_t(rank) * 1009 + r));
        psi = random_pure_sr(rng, anc, din, rank);
      }
      double value = output_trace_norm(theta, psi, anc, tols);
      for (int it = 0; it < 60; ++it) {
        const Mat out = apply_partial_op(theta, projector(psi), anc);
        const Spectrum ospec = eig_hermitian(out, tols);
        Mat sign_op = Mat::Zero(out.rows(), out.cols());
        for (Eigen::Index i = 0; i < ospec.eigenvalues.size(); ++i)
          sign_op += (ospec.eigenvalues[i] >= 0 ? 1.0 : -1.0) *
                     projector(ospec.eigenvectors.col(i));
        // M = (id (x) theta)^dag(sign_op), so <psi|M|psi> is the payoff of
        // the current observable; the adjoint acts blockwise on the ancilla.
        Mat m(n, n);
        for (int x = 0; x < anc; ++x)
          for (int y = 0; y < anc; ++y)
            m.block(x * din, y * din, din, din) = apply_adjoint(
                theta, sign_op.block(x * dout_ch, y * dout_ch, dout_ch,
                                     dout_ch));
        SchmidtMinOptions sopts;
        sopts.restarts = 0;
        sopts.seed = mix_seed(seed, uint64_t(rank) * 7919 + r);
        sopts.max_iterations = 200;
        sopts.keep_violators = 0;
        sopts.warm_starts = {psi};
        const SchmidtMinResult step =
            min_schmidt_k_expectation(-m, anc, din, rank, sopts, tols);
        const double refreshed =
            output_trace_norm(theta, step.argmin, anc, tols);
        if (refreshed > value + 1e-12) {
          value = refreshed;
          psi = step.argmin;
        } else {
          break;
        }
      }
      consider(value, psi, rank);
    }
  }
  return best;
}

double diamond_norm(const ChannelRep& theta, const SdpOptions& opts) {
  const int din = theta.d_in, dout = theta.d_out;
  const int n = din * dout;
  const Mat j = double(din) * theta.choi;

  LmiProblem prob;
  const int nvars = 2 * n * n + 2;
  prob.objective = RVec::Zero(nvars);
  prob.objective[nvars - 2] = -0.5;
  prob.objective[nvars - 1] = -0.5;
  prob.block_dims = {2 * n, din, din};

  Mat big = Mat::Zero(2 * n, 2 * n);
  big.topRightCorner(n, n) = -j;
  big.bottomLeftCorner(n, n) = -j.adjoint();
  prob.constant = {big, Mat::Zero(din, din), Mat::Zero(din, din)};

  prob.coeff.assign(nvars, std::vector<Mat>(3));
  for (int side = 0; side < 2; ++side) {
    for (int alpha = 0; alpha < n * n; ++alpha) {
      const int v = side * n * n + alpha;
      const Mat e = hermitian_basis_element(n, alpha);
      Mat emb = Mat::Zero(2 * n, 2 * n);
      if (side == 0)
        emb.topLeftCorner(n, n) = -e;
      else
        emb.bottomRightCorner(n, n) = -e;
      prob.coeff[v][0] = emb;
      const Mat traced = partial_trace(e, din, dout, Side::B);
      prob.coeff[v][1] = side == 0 ? traced : Mat(Mat::Zero(din, din));
      prob.coeff[v][2] = side == 1 ? traced : Mat(Mat::Zero(din, din));
    }
    const int mu = nvars - 2 + side;
    prob.coeff[mu][0] = Mat::Zero(2 * n, 2 * n);
    prob.coeff[mu][1] =
        side == 0 ? Mat(-Mat::Identity(din, din)) : Mat(Mat::Zero(din, din));
    prob.coeff[mu][2] =
        side == 1 ? Mat(-Mat::Identity(din, din)) : Mat(Mat::Zero(din, din));
  }

  const LmiSolution sol = solve_lmi(prob, opts);
  if (sol.status != SdpStatus::Optimal) {
    std::ostringstream msg;
    msg << "diamond_norm: SDP ended with status " << to_string(sol.status);
    throw SolverFailure(msg.str());
  }
  return -sol.value;
}

namespace {

AdvantageReport advantage_impl(const BipartiteState& rho,
                               const ChannelRep& ktp_map,
                               const Tolerances& tols) {
  if (rho.dim_b != ktp_map.d_in)
    throw InvalidInput("binary_advantage: state B factor must match map input");
  const ChannelRep ta = ta_from_ktp(ktp_map, tols);
  BinaryTask task = channel_pair_from_ta(ta, tols);
  const double c = task.c;

  const Mat mapped = apply_partial_op(ktp_map, rho.rho, rho.dim_a);
  const double norm_tp = trace_norm(mapped, tols);
  AdvantageReport rep;
  rep.task = std::move(task);
  rep.c = c;
  rep.value_with_rho = c * (norm_tp + 1.0);
  rep.bound_sk = 2.0 * c;
  rep.margin = std::max(0.0, rep.value_with_rho - rep.bound_sk);
  rep.p_guess_rho = 0.5 + rep.value_with_rho / 4.0;
  rep.p_guess_sk = 0.5 + rep.bound_sk / 4.0;
  return rep;
}

}  // namespace

AdvantageReport binary_advantage(const BipartiteState& rho, int k,
                                 const ReductionFamilyMap& fam,
                                 const Tolerances& tols) {
  if (k < 1 || k > fam.d)
    throw InvalidInput("binary_advantage: k out of range");
  if (fam.positivity_level < k) {
    std::ostringstream msg;
    msg << "binary_advantage: map is only " << fam.positivity_level
        << "-positive, needs " << k;
    throw CertificationFailure(msg.str());
  }
  return advantage_impl(rho, fam.channel, tols);
}

AdvantageReport binary_advantage(const BipartiteState& rho, int k,
                                 const ChannelRep& ktp_map,
                                 const Tolerances& tols) {
  if (k < 1 || k > ktp_map.d_in)
    throw InvalidInput("binary_advantage: k out of range");
  SchmidtMinOptions sopts;
  sopts.restarts = 48;
  sopts.seed = 17;
  sopts.keep_violators = 0;
  const SchmidtMinResult pos = min_schmidt_k_expectation(
      ktp_map.choi, ktp_map.d_in, ktp_map.d_out, k, sopts, tols);
  if (pos.value < -tols.oracle_eps) {
    std::ostringstream msg;
    msg << "binary_advantage: map failed the " << k
        << "-positivity check (witnessed value " << pos.value << ")";
    throw CertificationFailure(msg.str());
  }
  return advantage_impl(rho, ktp_map, tols);
}

}  // namespace etk
