// End-to-end acceptance gate: one line per criterion, nonzero exit on any
// failure. Each criterion is independent and reports its first violation.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "etk/discrimination.hpp"
#include "etk/multichannel.hpp"

using namespace etk;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

// Robustness of the maximally entangled state pinned to d/k - 1.
std::string criterion1() {
  const std::pair<int, int> cases[] = {{2, 1}, {3, 1}, {3, 2},
                                       {4, 1}, {4, 2}, {4, 3}};
  for (const auto& [d, k] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const RobustnessCertificate cert =
        robustness_bounds(max_entangled(d), k, RobustnessOptions{});
    const double secs = seconds_since(t0);
    const double target = static_cast<double>(d) / k - 1.0;
    std::ostringstream tag;
    tag << "(d=" << d << ",k=" << k << ") ";
    if (cert.lower > target || target > cert.upper)
      return tag.str() + "interval [" + fmt(cert.lower) + "," +
             fmt(cert.upper) + "] misses " + fmt(target);
    if (cert.gap() > 1e-4)
      return tag.str() + "width " + fmt(cert.gap()) + " exceeds 1e-4";
    if (!cert.oracle_certified) return tag.str() + "witness not certified";
    if (secs > 60.0) return tag.str() + "took " + fmt(secs) + " s";
  }
  return "";
}

// Binary pipeline for the qubit family plus the isotropic margin formula.
std::string criterion2() {
  const ReductionFamilyMap fam = reduction_family(2, 1.0);
  const AdvantageReport rep = binary_advantage(max_entangled(2), 1, fam);
  if (std::abs(rep.c - 2.0 / 3.0) > 1e-9)
    return "c = " + fmt(rep.c) + ", expected 2/3";

  const auto task_norm = [&](const Mat& sigma) {
    return trace_norm(apply_partial_op(rep.task.phi1, sigma, 2) -
                      apply_partial_op(rep.task.phi2, sigma, 2));
  };
  const double at_mes = task_norm(max_entangled(2).rho);
  if (std::abs(at_mes - 2.0) > 1e-7)
    return "norm at the entangled input = " + fmt(at_mes) + ", expected 2";

  Rng rng(515);
  double best = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec v = random_pure_sr(rng, 2, 2, 1);
    best = std::max(best, task_norm(v * v.adjoint()));
  }
  if (std::abs(best - 4.0 / 3.0) > 1e-7)
    return "max over 200 product inputs = " + fmt(best) + ", expected 4/3";

  for (int d = 2; d <= 4; ++d)
    for (int k = 1; k < d; ++k) {
      const AdvantageReport iso =
          binary_advantage(max_entangled(d), k, reduction_family(d, 1.0 / k));
      const double formula =
          iso.c * 2.0 * (d - k) / (static_cast<double>(d) * (d * k - 1));
      if (std::abs(iso.margin - formula) > 1e-6)
        return "margin(d=" + std::to_string(d) + ",k=" + std::to_string(k) +
               ") = " + fmt(iso.margin) + ", formula " + fmt(formula);
    }
  return "";
}

// Identity-channel multichannel task at (2,1): perfect score, tight ceiling.
std::string criterion3() {
  const Mat w = Mat::Identity(4, 4) - 2.0 * max_entangled(2).rho;
  const MultichannelTask task = build_task(witness_to_channel(w, 2, 2));
  const double p = guess_with_bell(task, max_entangled(2));
  if (std::abs(p - 1.0) > 1e-8)
    return "p_guess = " + fmt(p) + ", expected 1";
  const SkCeiling ceiling = bound_S_k(task, 1, 100, 31);
  if (std::abs(ceiling.bound - 0.5) > 1e-12)
    return "ceiling bound = " + fmt(ceiling.bound) + ", expected 1/2";
  if (std::abs(ceiling.empirical_max - 0.5) > 1e-7)
    return "sampled ceiling = " + fmt(ceiling.empirical_max) +
           ", expected 1/2";
  const RatioCertificate rc = advantage_ratio(max_entangled(2), 1);
  if (std::abs(rc.ratio - 2.0) > 1e-5)
    return "ratio = " + fmt(rc.ratio) + ", expected 2";
  if (rc.ratio - 1.0 < rc.cert.lower - 1e-5 ||
      rc.ratio - 1.0 > rc.cert.upper + 1e-5)
    return "ratio - 1 = " + fmt(rc.ratio - 1.0) + " outside [" +
           fmt(rc.cert.lower) + "," + fmt(rc.cert.upper) + "]";
  return "";
}

// Ratio-vs-robustness sandwich on random two-qutrit states.
std::string criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(909);
  RobustnessOptions opts;
  opts.max_rounds = 40;
  opts.compute_ppt = false;
  for (int i = 0; i < 20; ++i) {
    const BipartiteState st = random_state(rng, 3, 3);
    for (int k = 1; k <= 2; ++k) {
      const RatioCertificate rc = advantage_ratio(st, k, opts);
      std::ostringstream tag;
      tag << "(state " << i << ", k=" << k << ") ";
      if (rc.ratio - 1.0 < rc.cert.lower - 1e-5)
        return tag.str() + "ratio - 1 = " + fmt(rc.ratio - 1.0) +
               " below lower bound " + fmt(rc.cert.lower);
      if (rc.ratio - 1.0 > rc.cert.upper + 1e-5)
        return tag.str() + "ratio - 1 = " + fmt(rc.ratio - 1.0) +
               " above upper bound " + fmt(rc.cert.upper);
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 300.0) return "took " + fmt(secs) + " s, budget 300 s";
  return "";
}

// Structural suites: representation round trips, measurement completeness,
// padding postconditions, discrimination agreement, hierarchy monotonicity.
std::string criterion5() {
  Rng rng(1202);
  for (int i = 0; i < 100; ++i) {
    const int din = 2 + i % 3;
    const int dout = 2 + (i / 3) % 3;
    const ChannelRep ch = random_channel(rng, din, dout);
    const ChannelRep back = choi_of_map(
        [&](const Mat& x) { return apply_channel(ch, x); }, din, dout);
    const double err = (back.choi - ch.choi).cwiseAbs().maxCoeff();
    if (err > 1e-9)
      return "choi round trip " + std::to_string(i) + " off by " + fmt(err);
  }

  for (int d = 2; d <= 5; ++d) {
    const std::vector<Mat> povm = bell_povm(d);
    Mat sum = Mat::Zero(d * d, d * d);
    for (const Mat& e : povm) sum += e;
    const double err = (sum - Mat::Identity(d * d, d * d)).cwiseAbs().maxCoeff();
    if (err > 1e-11)
      return "bell povm d=" + std::to_string(d) + " completeness off by " +
             fmt(err);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const int da = 2 + trial % 2;
    const int db = 2 + (trial / 2) % 2;
    Mat g = Mat::NullaryExpr(da * db, da * db, [&](Eigen::Index, Eigen::Index) {
      return rng.cgauss();
    });
    g = Mat(g * g.adjoint());
    const Mat gb = partial_trace(g, da, db, Side::A);
    g *= (0.3 + 0.6 * rng.uniform()) * da / operator_norm(gb);
    const Mat w = Mat::Identity(da * db, da * db) - g;
    const PaddedWitness pw = pad_witness(w, da, db);
    const Mat marg = partial_trace(pw.w, pw.dim_a, db, Side::A);
    if ((marg - pw.marginal * Mat::Identity(db, db)).cwiseAbs().maxCoeff() >
        1e-12)
      return "padding trial " + std::to_string(trial) + ": skewed marginal";
    double block = 0.0;
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b)
          for (int bp = 0; bp < db; ++bp)
            block = std::max(block,
                             std::abs(pw.w(fuse(i, b, db), fuse(j, bp, db)) -
                                      w(fuse(i, b, db), fuse(j, bp, db))));
    if (block > 1e-12)
      return "padding trial " + std::to_string(trial) + ": block moved by " +
             fmt(block);
    if (eig_hermitian(pw.w).eigenvalues.maxCoeff() > 1.0 + 1e-10)
      return "padding trial " + std::to_string(trial) + ": exceeds identity";
  }

  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 3;
    const double q = 0.2 + 0.6 * rng.uniform();
    const Mat a = q * random_density(rng, d);
    const Mat b = (1.0 - q) * random_density(rng, d);
    const double closed = helstrom(a, b);
    const GuessingResult sdp = guessing_probability_sdp({a, b});
    if (sdp.status != SdpStatus::Optimal)
      return "guessing program " + std::to_string(i) + " did not converge";
    if (std::abs(closed - sdp.value) > 1e-7)
      return "helstrom vs program pair " + std::to_string(i) + ": " +
             fmt(closed) + " vs " + fmt(sdp.value);
  }

  for (int i = 0; i < 20; ++i) {
    const ChannelRep c1 = random_channel(rng, 2, 2);
    const ChannelRep c2 = random_channel(rng, 2, 2);
    const ChannelRep theta = make_channel(Mat(c1.choi - c2.choi), 2, 2);
    const double dn = diamond_norm(theta);
    const KnormEstimate est = knorm_estimate(theta, 2, 32, 100 + i);
    if (std::abs(dn - est.value) > 1e-5)
      return "diamond pair " + std::to_string(i) + ": program " + fmt(dn) +
             " vs see-saw " + fmt(est.value);
  }

  RobustnessOptions light;
  light.max_rounds = 15;
  light.final_restarts = 48;
  light.compute_ppt = false;
  for (int i = 0; i < 10; ++i) {
    const BipartiteState st = random_state(rng, 3, 3);
    const RobustnessCertificate c1 = robustness_bounds(st, 1, light);
    const RobustnessCertificate c2 = robustness_bounds(st, 2, light);
    if (c2.lower > c1.upper + 1e-7)
      return "robustness hierarchy state " + std::to_string(i) +
             ": k=2 lower " + fmt(c2.lower) + " above k=1 upper " +
             fmt(c1.upper);
  }
  for (int i = 0; i < 10; ++i) {
    const ChannelRep c1 = random_channel(rng, 3, 3);
    const ChannelRep c2 = random_channel(rng, 3, 3);
    const ChannelRep theta = make_channel(Mat(c1.choi - c2.choi), 3, 3);
    double prev = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const KnormEstimate est = knorm_estimate(theta, k, 16, 300 + i);
      if (est.value < prev - 1e-7)
        return "distinguishability hierarchy map " + std::to_string(i) +
               ": k=" + std::to_string(k) + " value " + fmt(est.value) +
               " below k=" + std::to_string(k - 1) + " value " + fmt(prev);
      prev = est.value;
    }
  }
  return "";
}

// Positivity-level detection across the family grid.
std::string criterion6() {
  const double ts[] = {1.0, 0.5, 1.0 / 3.0};
  for (int d = 2; d <= 4; ++d)
    for (const double t : ts) {
      const ReductionFamilyMap fam = reduction_family(d, t);
      const int expected =
          std::min(d, static_cast<int>(std::floor(1.0 / t + 1e-12)));
      std::ostringstream tag;
      tag << "(d=" << d << ",t=" << t << ") ";
      if (fam.positivity_level != expected)
        return tag.str() + "level " + std::to_string(fam.positivity_level) +
               ", expected " + std::to_string(expected);
      for (int m = 1; m <= d; ++m) {
        const double formula = (1.0 / m - t) / (d - t);
        const double got = fam.choi_min_eig_by_level[m - 1];
        if (std::abs(got - formula) > 1e-10)
          return tag.str() + "eigenvalue at level " + std::to_string(m) +
                 " = " + fmt(got) + ", formula " + fmt(formula);
        if (m <= expected && got < -1e-10)
          return tag.str() + "negative eigenvalue inside the certified level";
        if (m > expected && got >= -1e-10)
          return tag.str() + "nonnegative eigenvalue beyond the level";
      }
    }
  return "";
}

}  // namespace

int main() {
  const std::function<std::string()> criteria[] = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6};
  int failures = 0;
  for (int i = 0; i < 6; ++i) {
    std::string detail;
    try {
      detail = criteria[i]();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      std::printf("[criterion %d] PASS\n", i + 1);
    } else {
      std::printf("[criterion %d] FAIL (%s)\n", i + 1, detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
