#pragma once

#include "etk/discrimination.hpp"
#include "etk/robustness.hpp"

namespace etk {

struct WitnessChannel {
  ChannelRep lambda;  // completely positive trace-preserving, H(d_B) -> H(d_A)
  double c = 0;       // tr(f tau) = c tr(phi+ (id (x) lambda)(tau)) for all tau
  Mat f;              // 1 - w
};

// Converts an equal-marginal witness (tr_A w = marginal * 1_B, w <= 1) into
// the channel whose adjoint has Choi operator f / c. Rejects infeasible inputs.
WitnessChannel witness_to_channel(const Mat& w, int dim_a, int dim_b,
                                  const Tolerances& tols = default_tols());

struct MultichannelTask {
  std::vector<ChannelRep> channels;  // shifted copies (1 (x) X^k Z^l) lambda
  ChannelRep base;
  double c = 0;
  int dim_a = 0, dim_b = 0;
};

MultichannelTask build_task(const WitnessChannel& wc,
                            const Tolerances& tols = default_tols());

// Equal-prior guessing probability of the shifted-channel ensemble using the
// generalized Bell measurement on ancilla (x) output.
double guess_with_bell(const MultichannelTask& task, const BipartiteState& rho,
                       const Tolerances& tols = default_tols());

struct SkCeiling {
  double bound = 0;  // 1 / c
  double empirical_max = 0;
  int samples = 0;
};

// Checks the 1/c ceiling over sampled rank-<=k inputs with the optimal-POVM
// guessing SDP for each sampled input.
SkCeiling bound_S_k(const MultichannelTask& task, int k, int samples,
                    uint64_t seed, const Tolerances& tols = default_tols());

struct RatioCertificate {
  double ratio = 0;    // guess_with_bell / (1/c)
  double p_guess = 0;
  double bound = 0;    // 1 / c
  double c = 0;
  int task_dim_a = 0;
  RobustnessCertificate cert;
  MultichannelTask task;
};

// End-to-end: robustness certificate -> padded witness -> channel task ->
// Bell-measurement ratio, with ratio - 1 tracking the certified lower bound.
RatioCertificate advantage_ratio(const BipartiteState& rho, int k,
                                 const RobustnessOptions& opts = {},
                                 const Tolerances& tols = default_tols());

}  // namespace etk
