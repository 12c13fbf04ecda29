#pragma once

#include "etk/schmidt.hpp"
#include "etk/sdp.hpp"

namespace etk {

// Optimal guessing probability for the weighted pair (p1 r1, p2 r2):
// (1 + || p1 r1 - p2 r2 ||_1) / 2. Inputs are the pre-weighted operators.
double helstrom(const Mat& weighted_r1, const Mat& weighted_r2,
                const Tolerances& tols = default_tols());

struct BinaryTask {
  ChannelRep phi1, phi2;
  double c = 0;  // c * (annihilating map) = phi1 - phi2
};

// Extends the output by a flag direction and subtracts tr(X) on it, turning a
// trace-preserving map into a trace-annihilating one of the same positivity.
ChannelRep ta_from_ktp(const ChannelRep& tp_map,
                       const Tolerances& tols = default_tols());

// Jordan split of a trace-annihilating hermitian map into a CPTP difference
// c^{-1} (phi1 - phi2); the completion funnels missing weight into the
// maximally mixed state on the extended output.
BinaryTask channel_pair_from_ta(const ChannelRep& ta_map,
                                const Tolerances& tols = default_tols());

struct KnormEstimate {
  double value = 0;  // lower bound on sup over rank-<=k inputs
  Vec best_input;
  int rank_used = 0;
};

// See-saw between the optimal discrimination observable and a rank-<=k input;
// randomized restarts, deterministic for fixed (k, restarts, seed).
KnormEstimate knorm_estimate(const ChannelRep& theta, int k, int restarts = 16,
                             uint64_t seed = 11,
                             const Tolerances& tols = default_tols());

// Completely bounded trace norm of a hermitian map via its semidefinite
// program; agrees with knorm_estimate at k = d_in on well-converged instances.
double diamond_norm(const ChannelRep& theta, const SdpOptions& opts = {});

struct AdvantageReport {
  double value_with_rho = 0;  // ||(id (x) (phi1 - phi2))(rho)||_1
  double bound_sk = 0;        // the same functional maximized over rank-<=k inputs
  double margin = 0;          // max(0, value - bound)
  double p_guess_rho = 0;
  double p_guess_sk = 0;
  double c = 0;
  BinaryTask task;
};

// Full pipeline for a k-positive trace-preserving map: certifies positivity,
// builds the channel pair, and evaluates the discrimination gap for rho.
AdvantageReport binary_advantage(const BipartiteState& rho, int k,
                                 const ReductionFamilyMap& fam,
                                 const Tolerances& tols = default_tols());
AdvantageReport binary_advantage(const BipartiteState& rho, int k,
                                 const ChannelRep& ktp_map,
                                 const Tolerances& tols = default_tols());

}  // namespace etk
