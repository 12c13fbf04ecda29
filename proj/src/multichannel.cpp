#include "etk/multichannel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "etk/parallel.hpp"

namespace etk {

WitnessChannel witness_to_channel(const Mat& w, int dim_a, int dim_b,
                                  const Tolerances& tols) {
  require_hermitian(w, tols.hermiticity, "witness");
  const int n = dim_a * dim_b;
  if (w.rows() != n) throw InvalidInput("witness_to_channel: dims mismatch");

  const Mat f = Mat::Identity(n, n) - w;
  if (min_eigenvalue(f, tols) < -tols.psd_floor)
    throw InvalidInput("witness_to_channel: witness exceeds the identity cap");

  const Mat wb = partial_trace(w, dim_a, dim_b, Side::A);
  const double mean = wb.trace().real() / dim_b;
  const double defect =
      operator_norm(wb - mean * Mat::Identity(dim_b, dim_b), tols);
  if (defect > 1e-8 * std::max(1.0, std::abs(mean)))
    throw InvalidInput(
        "witness_to_channel: marginal is not proportional to the identity; "
        "pad the witness first");
  if (dim_a - mean < 1e-9)
    throw InvalidInput("witness_to_channel: trivial witness rejected");

  const double c = dim_a * (dim_a - mean);
  const ChannelRep dual = make_channel(f / c, dim_a, dim_b, tols);
  const ChannelRep lambda = choi_of_map(
      [&](const Mat& x) { return apply_adjoint(dual, x); }, dim_b, dim_a,
      tols);
  const CheckResult cp = is_cp(lambda, tols);
  const CheckResult tp = is_tp(lambda, tols);
  if (!cp.ok || !tp.ok) {
    std::ostringstream msg;
    msg << "witness_to_channel: constructed map failed validation (cp "
        << cp.residual << ", tp " << tp.residual << ")";
    throw SolverFailure(msg.str());
  }
  return WitnessChannel{lambda, c, f};
}

MultichannelTask build_task(const WitnessChannel& wc, const Tolerances& tols) {
  const int da = wc.lambda.d_out, db = wc.lambda.d_in;
  MultichannelTask task;
  task.base = wc.lambda;
  task.c = wc.c;
  task.dim_a = da;
  task.dim_b = db;
  const WeylOperators wy = weyl(da);
  task.channels.reserve(static_cast<size_t>(da) * da);
  for (int k = 0; k < da; ++k)
    for (int l = 0; l < da; ++l) {
      const Mat u = tensor(Mat::Identity(db, db), weyl_op(wy, k, l));
      task.channels.push_back(
          make_channel(u * wc.lambda.choi * u.adjoint(), db, da, tols));
    }
  return task;
}

double guess_with_bell(const MultichannelTask& task, const BipartiteState& rho,
                       const Tolerances& tols) {
  (void)tols;
  if (rho.dim_a != task.dim_a || rho.dim_b != task.dim_b)
    throw InvalidInput("guess_with_bell: state dims do not match the task");
  const std::vector<Mat> povm = bell_povm(task.dim_a);
  double p = 0;
  for (size_t i = 0; i < task.channels.size(); ++i) {
    const Mat out = apply_partial_op(task.channels[i], rho.rho, rho.dim_a);
    p += (povm[i] * out).trace().real();
  }
  return p / static_cast<double>(task.channels.size());
}

SkCeiling bound_S_k(const MultichannelTask& task, int k, int samples,
                    uint64_t seed, const Tolerances& tols) {
  const int da = task.dim_a, db = task.dim_b;
  if (k < 1 || k > std::min(da, db))
    throw InvalidInput("bound_S_k: k must lie in [1, min(dims)]");
  if (samples < 1) throw InvalidInput("bound_S_k: need at least one sample");

  std::vector<Vec> inputs;
  inputs.reserve(samples);
  for (int i = 0; i < da && static_cast<int>(inputs.size()) < samples; ++i)
    for (int j = 0; j < db && static_cast<int>(inputs.size()) < samples; ++j) {
      Vec v = Vec::Zero(static_cast<Eigen::Index>(da) * db);
      v[fuse(i, j, db)] = Complex(1, 0);
      inputs.push_back(std::move(v));
    }
  while (static_cast<int>(inputs.size()) < samples) {
    Rng rng(mix_seed(seed, inputs.size()));
    inputs.push_back(random_pure_sr(rng, da, db, k));
  }

  const double inv_priors = 1.0 / static_cast<double>(task.channels.size());
  std::vector<double> values(inputs.size(), 0.0);
  parallel_for(static_cast<int>(inputs.size()), [&](int s) {
    const Mat sigma = projector(inputs[s]);
    std::vector<Mat> weighted;
    weighted.reserve(task.channels.size());
    for (const ChannelRep& ch : task.channels)
      weighted.push_back(inv_priors * apply_partial_op(ch, sigma, da));
    const GuessingResult g = guessing_probability_sdp(weighted);
    if (g.status != SdpStatus::Optimal)
      throw SolverFailure("bound_S_k: guessing SDP did not converge");
    values[s] = g.value;
  });

  SkCeiling out;
  out.bound = 1.0 / task.c;
  out.samples = static_cast<int>(inputs.size());
  out.empirical_max = *std::max_element(values.begin(), values.end());
  if (out.empirical_max > out.bound + tols.oracle_eps) {
    std::ostringstream msg;
    msg << "bound_S_k: sampled rank-" << k << " input reaches "
        << out.empirical_max << ", above the ceiling " << out.bound;
    throw CertificationFailure(msg.str());
  }
  return out;
}

RatioCertificate advantage_ratio(const BipartiteState& rho, int k,
                                 const RobustnessOptions& opts,
                                 const Tolerances& tols) {
  RatioCertificate out;
  out.cert = robustness_bounds(rho, k, opts, tols);
  const int da = out.cert.dim_a, db = out.cert.dim_b;

  const bool detecting =
      out.cert.oracle_certified && out.cert.witness.value < 0;
  WitnessChannel wc;
  BipartiteState input = rho;
  if (detecting) {
    const PaddedWitness padded =
        pad_witness(out.cert.witness.op, da, db, tols);
    wc = witness_to_channel(padded.w, padded.dim_a, db, tols);
    if (padded.added > 0)
      input = make_state(embed_dim_a(rho.rho, da, db, padded.dim_a),
                         padded.dim_a, db, tols);
  } else {
    // A non-detecting certificate degrades gracefully to the flat witness,
    // whose task gives ratio 1 for every input state.
    wc = witness_to_channel(Mat::Zero(da * db, da * db), da, db, tols);
  }

  out.task = build_task(wc, tols);
  out.p_guess = guess_with_bell(out.task, input, tols);
  out.c = wc.c;
  out.bound = 1.0 / wc.c;
  out.ratio = out.p_guess * wc.c;
  out.task_dim_a = out.task.dim_a;

  if (out.ratio < 1.0 + out.cert.lower - 1e-6 ||
      out.ratio > 1.0 + out.cert.upper + 1e-6) {
    std::ostringstream msg;
    msg << "advantage_ratio: ratio " << out.ratio
        << " escapes the certified interval [" << 1.0 + out.cert.lower << ", "
        << 1.0 + out.cert.upper << "]";
    throw CertificationFailure(msg.str());
  }
  return out;
}

}  // namespace etk
