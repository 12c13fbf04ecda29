#pragma once

#include <limits>

#include "etk/quantum.hpp"

namespace etk {

struct SchmidtDecomposition {
  RVec coefficients;  // descending, squares sum to 1 for unit input
  Mat left_basis;     // dim_a x r orthonormal columns
  Mat right_basis;    // dim_b x r orthonormal columns
  int rank = 0;
};

// psi must be a unit vector on C^dim_a (x) C^dim_b (row-major fused index).
SchmidtDecomposition schmidt_decompose(const Vec& psi, int dim_a, int dim_b,
                                       const Tolerances& tols = default_tols());

Vec schmidt_reconstruct(const SchmidtDecomposition& sd);

// L_t(X) = (tr(X) 1 - t X) / (d - t) together with its Choi data and the
// largest m for which id_m (x) L_t stays positive on the embedded family.
struct ReductionFamilyMap {
  int d = 0;
  double t = 0;
  ChannelRep channel;
  RVec choi_min_eig_by_level;  // entry m-1: min eig of (id_m (x) L_t)(phi+_m)
  int positivity_level = 0;
};

ReductionFamilyMap reduction_family(int d, double t,
                                    const Tolerances& tols = default_tols());

struct SchmidtMinOptions {
  int restarts = 32;
  uint64_t seed = 1;
  int max_iterations = 500;
  // Stop scheduling further restart batches once a run dips below this.
  double stop_below = -std::numeric_limits<double>::infinity();
  // Collect up to this many distinct minimizers strictly below violator_threshold.
  int keep_violators = 1;
  double violator_threshold = 0.0;
  std::vector<Vec> warm_starts;
};

struct SchmidtMinResult {
  double value = 0;
  Vec argmin;
  int rank_used = 0;
  int runs = 0;
  std::vector<std::pair<double, Vec>> violators;
};

// Projected-gradient minimization of <psi| w |psi> over unit vectors of
// schmidt rank <= k. Heuristic upper bound on the true minimum; deterministic
// for fixed (options, seed) and any ETK_THREADS value.
SchmidtMinResult min_schmidt_k_expectation(const Mat& w, int dim_a, int dim_b,
                                           int k,
                                           const SchmidtMinOptions& opts = {},
                                           const Tolerances& tols = default_tols());

struct WitnessVerdict {
  bool detected = false;
  double value = 0;         // tr(w rho)
  double margin = 0;        // |value| when detected, else 0
  double oracle_value = 0;  // certified min over the rank-<=k set
};

// Certifies w against the rank-<=k set with the minimizer, then evaluates it
// on rho. Throws CertificationFailure when the oracle finds a violation.
WitnessVerdict sn_witness_lower_bound(const BipartiteState& rho, int k,
                                      const Mat& w,
                                      const SchmidtMinOptions& opts = {},
                                      const Tolerances& tols = default_tols());

}  // namespace etk
