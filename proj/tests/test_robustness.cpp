#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etk/robustness.hpp"
#include "oracles.hpp"

using namespace etk;

namespace {

BipartiteState pure_state(const Vec& psi, int da, int db) {
  return make_state(projector(psi), da, db);
}

RobustnessOptions light(int rounds = 25) {
  RobustnessOptions o;
  o.max_rounds = rounds;
  o.final_restarts = 48;
  o.compute_ppt = false;
  return o;
}

}  // namespace

TEST_CASE("pure-state robustness matches the schmidt-coefficient formula") {
  Rng rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 2 + trial % 2;
    Vec psi(d * d);
    for (int i = 0; i < psi.size(); ++i) psi[i] = rng.cgauss();
    psi.normalize();
    const SchmidtDecomposition sd = schmidt_decompose(psi, d, d);
    const RVec q = sd.coefficients.array().square();
    const double expect = oracle::pure_state_robustness(q);

    const RobustnessCertificate cert =
        robustness_bounds(pure_state(psi, d, d), 1, light(d == 2 ? 40 : 120));
    CHECK(cert.lower <= expect + 1e-6);
    CHECK(cert.upper >= expect - 1e-6);
    CHECK(cert.gap() < 1e-4);
  }
}

TEST_CASE("maximally entangled robustness pins d/k - 1") {
  struct Case {
    int d, k;
  };
  for (const Case c : {Case{2, 1}, Case{3, 2}}) {
    const RobustnessCertificate cert =
        robustness_bounds(max_entangled(c.d), c.k, light(30));
    const double expect = double(c.d) / c.k - 1.0;
    CHECK(cert.lower <= expect + 1e-7);
    CHECK(cert.upper >= expect - 1e-7);
    CHECK(cert.gap() < 1e-5);
    CHECK(cert.oracle_certified);
  }
}

TEST_CASE("certificate internals are mutually consistent") {
  const BipartiteState mes = max_entangled(2);
  RobustnessOptions opts = light(30);
  opts.seed = 3;
  const RobustnessCertificate cert = robustness_bounds(mes, 1, opts);

  // Witness side: feasibility, consistency of the reported values.
  const Mat& w = cert.witness.op;
  CHECK(operator_norm(w) <= 1.0 + 1e-8);
  Spectrum sp = eig_hermitian(w);
  CHECK(sp.eigenvalues.maxCoeff() <= 1.0 + 1e-9);
  CHECK(cert.witness.value ==
        doctest::Approx((w * mes.rho).trace().real()).epsilon(1e-10));
  CHECK(cert.lower ==
        doctest::Approx(std::max(0.0, -cert.witness.value)).epsilon(1e-12));
  CHECK(cert.witness.oracle_value >= -default_tols().oracle_eps);

  // Decomposition side: nonnegative weights on feasible columns covering rho.
  Mat y = Mat::Zero(4, 4);
  double total = 0;
  for (const RobustnessColumn& col : cert.decomposition) {
    CHECK(col.weight >= -1e-12);
    CHECK(col.state.norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(oracle::best_rank_k_overlap(col.state, 2, 2, 1) ==
          doctest::Approx(1.0).epsilon(1e-8));
    y += col.weight * projector(col.state);
    total += col.weight;
  }
  CHECK(min_eigenvalue(Mat(y - mes.rho)) > -1e-6);
  CHECK(cert.upper == doctest::Approx(total - 1.0).epsilon(1e-8));
  CHECK(cert.active_columns >= 1);
  CHECK(cert.active_columns <= static_cast<int>(cert.decomposition.size()));
}

TEST_CASE("bounds are monotone in the schmidt number") {
  Rng rng(5);
  const BipartiteState st = random_state(rng, 3, 3);
  RobustnessOptions opts = light(20);
  const RobustnessCertificate c1 = robustness_bounds(st, 1, opts);
  const RobustnessCertificate c2 = robustness_bounds(st, 2, opts);
  const RobustnessCertificate c3 = robustness_bounds(st, 3, opts);
  CHECK(c2.lower <= c1.upper + 1e-6);
  CHECK(c3.lower <= c2.upper + 1e-6);
  CHECK(c1.lower >= 0.0);
  CHECK(c3.upper < 1e-7);  // k = min(da, db) admits every state
}

TEST_CASE("ppt relaxation is exact on small pure states") {
  Rng rng(8);
  for (const auto& [da, db] : {std::pair{2, 2}, std::pair{2, 3}}) {
    Vec psi(da * db);
    for (int i = 0; i < psi.size(); ++i) psi[i] = rng.cgauss();
    psi.normalize();
    const SchmidtDecomposition sd = schmidt_decompose(psi, da, db);
    const double expect =
        oracle::pure_state_robustness(RVec(sd.coefficients.array().square()));
    const double ppt = ppt_robustness(pure_state(psi, da, db));
    CHECK(ppt == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(ppt_robustness(max_entangled(2)) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("ppt value slots between the certified bounds at k = 1") {
  Rng rng(12);
  const BipartiteState st = random_state(rng, 2, 2);
  RobustnessOptions opts = light(30);
  opts.compute_ppt = true;
  const RobustnessCertificate cert = robustness_bounds(st, 1, opts);
  CHECK(cert.has_ppt);
  CHECK(cert.lower <= cert.ppt_value + 1e-6);
  CHECK(cert.ppt_value <= cert.upper + 1e-6);
}

TEST_CASE("embed_witness compresses onto local supports faithfully") {
  Rng rng(14);
  const BipartiteState small = random_state(rng, 2, 3);
  const Mat big_rho = embed_dim_a(small.rho, 2, 3, 4);
  const BipartiteState st = make_state(big_rho, 4, 3);

  Mat w = Mat::NullaryExpr(12, 12, [&](Eigen::Index, Eigen::Index) {
    return rng.cgauss();
  });
  w = Mat((w + w.adjoint()) / 2.0);
  w /= operator_norm(w);

  const EmbeddedWitness ew = embed_witness(w, st);
  CHECK(ew.rho.dim_a == 2);
  CHECK(ew.rho.dim_b == 3);
  CHECK((ew.isometry_a.adjoint() * ew.isometry_a - Mat::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((ew.isometry_b.adjoint() * ew.isometry_b - Mat::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  const double orig = (w * st.rho).trace().real();
  const double comp = (ew.w * ew.rho.rho).trace().real();
  CHECK(orig == doctest::Approx(comp).epsilon(1e-9));
}

TEST_CASE("pad_witness equalizes the marginal without touching the block") {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int da = 2 + trial % 2;
    const int db = 2 + (trial / 2) % 2;
    // Witnesses of the shape 1 - Y with Y >= 0 scaled to keep the marginal
    // positive, matching what the certificate pipeline produces.
    Mat g = Mat::NullaryExpr(da * db, da * db,
                             [&](Eigen::Index, Eigen::Index) {
                               return rng.cgauss();
                             });
    g = Mat(g * g.adjoint());
    const Mat gb = partial_trace(g, da, db, Side::A);
    g *= (0.3 + 0.6 * rng.uniform()) * da / operator_norm(gb);
    const Mat w = Mat::Identity(da * db, da * db) - g;

    const PaddedWitness pw = pad_witness(w, da, db);
    REQUIRE(pw.dim_a == da + pw.added);
    const Mat marg = partial_trace(pw.w, pw.dim_a, db, Side::A);
    CHECK((marg - pw.marginal * Mat::Identity(db, db)).cwiseAbs().maxCoeff() <
          1e-12);
    Spectrum sp = eig_hermitian(pw.w);
    CHECK(sp.eigenvalues.maxCoeff() <= 1.0 + 1e-10);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b)
          for (int bp = 0; bp < db; ++bp)
            CHECK(std::abs(pw.w(fuse(i, b, db), fuse(j, bp, db)) -
                           w(fuse(i, b, db), fuse(j, bp, db))) < 1e-12);
  }
}

TEST_CASE("extra columns seed the master without changing validity") {
  const BipartiteState mes = max_entangled(2);
  RobustnessOptions opts = light(10);
  opts.extra_columns.push_back(max_entangled_vec(2));
  const RobustnessCertificate cert = robustness_bounds(mes, 1, opts);
  CHECK(cert.lower <= 1.0 + 1e-7);
  CHECK(cert.upper >= 1.0 - 1e-7);
}

TEST_CASE("input validation rejects malformed requests") {
  const BipartiteState mes = max_entangled(2);
  CHECK_THROWS_AS(robustness_bounds(mes, 0), InvalidInput);
  CHECK_THROWS_AS(robustness_bounds(mes, 3), InvalidInput);
}
