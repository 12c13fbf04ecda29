#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "etk/operator_core.hpp"

namespace etk {

struct BipartiteState {
  Mat rho;
  int dim_a = 0;
  int dim_b = 0;
};

// Validating factory: hermitian, unit trace, PSD within the floor.
BipartiteState make_state(const Mat& rho, int dim_a, int dim_b,
                          const Tolerances& tols = default_tols());

Vec basis_vec(int d, int i);
Vec max_entangled_vec(int d);
BipartiteState max_entangled(int d);

// Zero-pad the A factor of a bipartite operator to a larger dimension.
Mat embed_dim_a(const Mat& op, int dim_a, int dim_b, int new_dim_a);

// Linear map H(d_in) -> H(d_out) stored through its Choi operator on
// in (x) out with the trace-one convention choi = (id (x) L)(phi+_{d_in}).
struct ChannelRep {
  Mat choi;
  int d_in = 0;
  int d_out = 0;
};

// Validates dimensions and hermiticity of the Choi operator.
ChannelRep make_channel(const Mat& choi, int d_in, int d_out,
                        const Tolerances& tols = default_tols());

ChannelRep choi_of_map(const std::function<Mat(const Mat&)>& action, int d_in,
                       int d_out, const Tolerances& tols = default_tols());

// L(x)
Mat apply_channel(const ChannelRep& ch, const Mat& x);

// Hilbert-Schmidt adjoint L^dag(m), assuming a hermiticity-preserving map.
Mat apply_adjoint(const ChannelRep& ch, const Mat& m);

// (id (x) L) acting on an operator over C^dim_anc (x) C^{d_in}.
Mat apply_partial_op(const ChannelRep& ch, const Mat& op, int dim_anc);
BipartiteState apply_partial(const ChannelRep& ch, const BipartiteState& rho,
                             const Tolerances& tols = default_tols());

struct CheckResult {
  bool ok = false;
  double residual = 0.0;
};

CheckResult is_tp(const ChannelRep& ch, const Tolerances& tols = default_tols());
CheckResult is_unital(const ChannelRep& ch, const Tolerances& tols = default_tols());
CheckResult is_cp(const ChannelRep& ch, const Tolerances& tols = default_tols());
CheckResult is_trace_nonincreasing(const ChannelRep& ch,
                                   const Tolerances& tols = default_tols());

struct Instrument {
  std::vector<ChannelRep> subchannels;  // CP pieces p_i L_i summing to a TP map
};
CheckResult validate_instrument(const Instrument& ins,
                                const Tolerances& tols = default_tols());

ChannelRep identity_channel(int d);
ChannelRep depolarizing_channel(int d);

struct WeylOperators {
  int d = 0;
  Complex omega;
  Mat shift;  // X |n> = |n+1 mod d>
  Mat phase;  // Z |n> = omega^n |n>
};
WeylOperators weyl(int d);
Mat weyl_op(const WeylOperators& w, int k, int l);  // X^k Z^l

// d^2 projectors (1 (x) X^k Z^l) phi+ (1 (x) X^k Z^l)^dag, index k*d + l.
std::vector<Mat> bell_povm(int d);

// Reproducible sampling: mt19937_64 plus an explicit Box-Muller transform so
// streams are identical across standard libraries.
struct Rng {
  std::mt19937_64 gen;
  double spare = 0.0;
  bool have_spare = false;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform();  // [0, 1)
  double gauss();
  Complex cgauss();
};

uint64_t mix_seed(uint64_t seed, uint64_t salt);

Mat random_unitary(Rng& rng, int d);
Mat random_density(Rng& rng, int d);
BipartiteState random_state(Rng& rng, int dim_a, int dim_b, int dim_env = 0);
// Unit vector on C^da (x) C^db with schmidt rank exactly min(k, da, db).
Vec random_pure_sr(Rng& rng, int dim_a, int dim_b, int k);
ChannelRep random_channel(Rng& rng, int d_in, int d_out, int d_env = 0);

}  // namespace etk
