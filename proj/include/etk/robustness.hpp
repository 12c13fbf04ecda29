#pragma once

#include "etk/schmidt.hpp"
#include "etk/sdp.hpp"

namespace etk {

struct SchmidtWitness {
  Mat op;  // w <= 1, tr(w sigma) >= 0 on the rank-<=k set (oracle-certified)
  int k = 1;
  int dim_a = 0, dim_b = 0;
  double value = 0;         // tr(w rho)
  double oracle_value = 0;  // certified min over the rank-<=k set
  int oracle_restarts = 0;
  uint64_t oracle_seed = 0;
  bool repaired = false;  // identity-shifted to restore feasibility at the cap
};

struct RobustnessColumn {
  Vec state;  // unit vector, schmidt rank <= k
  double weight = 0;
};

struct RobustnessCertificate {
  int k = 1;
  int dim_a = 0, dim_b = 0;
  double lower = 0;  // max(0, -tr(w rho)) from the certified witness
  double upper = 0;  // tr(Y) - 1 for the explicit decomposition Y >= rho
  SchmidtWitness witness;
  std::vector<RobustnessColumn> decomposition;
  double ppt_value = 0;  // k = 1 only: PPT-relaxed value (lower-type, exact at 2x2/2x3)
  bool has_ppt = false;
  int rounds = 0;
  int active_columns = 0;
  bool oracle_certified = false;
  double gap() const { return upper - lower; }
};

struct RobustnessOptions {
  int max_rounds = 60;
  int round_restarts = 16;   // oracle restarts while cutting
  int final_restarts = 128;  // certification pass
  int round_iterations = 200;
  uint64_t seed = 7;
  double sdp_tol = 1e-8;
  int cuts_per_round = 12;
  bool compute_ppt = true;  // k = 1 only
  std::vector<Vec> extra_columns;
};

// Column-generation bounds on the generalized robustness against the
// schmidt-number-k set, with an oracle-certified witness for the lower bound
// and an explicit conic decomposition for the upper bound.
RobustnessCertificate robustness_bounds(const BipartiteState& rho, int k,
                                        const RobustnessOptions& opts = {},
                                        const Tolerances& tols = default_tols());

// min tr(Y) - 1 over Y >= rho with PSD partial transpose.
double ppt_robustness(const BipartiteState& rho, const SdpOptions& opts = {});

struct EmbeddedWitness {
  Mat w;  // compressed operator on ra (x) rb
  Mat isometry_a, isometry_b;
  BipartiteState rho;  // compressed state
};

// Restriction of a witness to the local supports of rho; feasibility and
// tr(w rho) carry over to the compressed space.
EmbeddedWitness embed_witness(const Mat& w, const BipartiteState& rho,
                              const Tolerances& tols = default_tols());

struct PaddedWitness {
  Mat w;          // on (dim_a + added) (x) dim_b
  int dim_a = 0;  // padded A dimension
  int added = 0;
  double marginal = 0;  // tr_A w = marginal * 1_B exactly
};

// Extends the A side so the witness marginal becomes proportional to the
// identity, preserving feasibility and values on the original block.
PaddedWitness pad_witness(const Mat& w_tilde, int dim_a, int dim_b,
                          const Tolerances& tols = default_tols());

}  // namespace etk
