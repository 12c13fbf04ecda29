#pragma once

#include <vector>

#include "etk/operator_core.hpp"

namespace etk {

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIterations };
const char* to_string(SdpStatus s);

enum class SdpSense { Minimize, Maximize };

// sum_b <coeff[b], X_b> = rhs; an empty (0x0) coeff entry means the block
// does not appear in the constraint.
struct SdpConstraint {
  std::vector<Mat> coeff;
  double rhs = 0.0;
};

// optimize sum_b <objective[b], X_b> over hermitian PSD blocks X_b subject
// to the listed equality constraints.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<Mat> objective;
  std::vector<SdpConstraint> constraints;
  SdpSense sense = SdpSense::Minimize;
};

struct SdpIterate {
  int iteration = 0;
  double primal_value = 0, dual_value = 0, mu = 0;
  double primal_residual = 0, dual_residual = 0;
  double step_primal = 0, step_dual = 0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIterations;
  std::vector<Mat> primal;      // X blocks
  std::vector<Mat> dual_slack;  // Z blocks
  RVec dual;                    // y
  double primal_value = 0, dual_value = 0;
  double primal_residual = 0, dual_residual = 0;
  int iterations = 0;
  bool certificate_heuristic = false;  // Infeasible/Unbounded are heuristic calls
  std::vector<SdpIterate> trace;
};

struct SdpOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  bool record_trace = false;
};

// Mehrotra predictor-corrector interior point with HKM directions; complex
// hermitian data runs on an embedded real-symmetric form internally.
SdpSolution solve(const SdpProblem& prob, const SdpOptions& opts = {});

// max objective.y subject to constant[blk] - sum_i y_i coeff[i][blk] >= 0.
// An Infeasible/Unbounded status refers to this max problem.
struct LmiProblem {
  RVec objective;
  std::vector<int> block_dims;
  std::vector<Mat> constant;
  std::vector<std::vector<Mat>> coeff;
};

struct LmiSolution {
  SdpStatus status = SdpStatus::MaxIterations;
  RVec y;
  double value = 0;
  std::vector<Mat> slack;
  std::vector<Mat> multipliers;
  int iterations = 0;
  bool certificate_heuristic = false;
};

LmiSolution solve_lmi(const LmiProblem& prob, const SdpOptions& opts = {});

// Optimal discrimination of pre-weighted states: max sum_i <M_i, s_i> over
// POVMs {M_i}. Pass p_i rho_i, not the bare states.
struct GuessingResult {
  SdpStatus status = SdpStatus::MaxIterations;
  double value = 0;
  std::vector<Mat> povm;
};
GuessingResult guessing_probability_sdp(const std::vector<Mat>& weighted_states,
                                        const SdpOptions& opts = {});

// Trace norm as an SDP; spectral-free route used for cross-checks.
double trace_norm_sdp(const Mat& h, const SdpOptions& opts = {});

// Hermitian basis element of an n x n space, index alpha in [0, n^2).
// Ordering: diagonals first, then (re, im) pairs for each r < c.
Mat hermitian_basis_element(int n, int alpha);
// Coordinates <E_alpha, H> for every alpha.
RVec hermitian_coords(const Mat& h);

}  // namespace etk
