#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etk/quantum.hpp"
#include "oracles.hpp"

using namespace etk;

TEST_CASE("make_state validates its inputs") {
  const Mat ok = max_entangled(2).rho;
  CHECK_NOTHROW(make_state(ok, 2, 2));
  CHECK_THROWS_AS(make_state(ok, 2, 3), InvalidInput);
  CHECK_THROWS_AS(make_state(2.0 * ok, 2, 2), InvalidInput);

  Mat nh = ok;
  nh(0, 1) += Complex(0, 1e-3);
  CHECK_THROWS_AS(make_state(nh, 2, 2), InvalidInput);

  Mat neg = Mat::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(make_state(neg, 2, 2), InvalidInput);
}

TEST_CASE("maximally entangled state has flat schmidt spectrum") {
  for (int d = 2; d <= 4; ++d) {
    const Vec psi = max_entangled_vec(d);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::JacobiSVD<Mat> svd(oracle::unfold(psi, d, d));
    for (int i = 0; i < d; ++i)
      CHECK(svd.singularValues()[i] ==
            doctest::Approx(1.0 / std::sqrt(double(d))).epsilon(1e-12));
    const BipartiteState st = max_entangled(d);
    CHECK((st.rho - projector(psi)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("embed_dim_a preserves the original block and adds zeros") {
  Rng rng(5);
  const BipartiteState st = random_state(rng, 2, 3);
  const Mat big = embed_dim_a(st.rho, 2, 3, 4);
  REQUIRE(big.rows() == 12);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int b = 0; b < 3; ++b)
        for (int bp = 0; bp < 3; ++bp) {
          const Complex v = big(fuse(i, b, 3), fuse(j, bp, 3));
          if (i < 2 && j < 2)
            CHECK(std::abs(v - st.rho(fuse(i, b, 3), fuse(j, bp, 3))) < 1e-15);
          else
            CHECK(std::abs(v) == 0.0);
        }
  CHECK(big.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("choi of the identity map is the maximally entangled state") {
  for (int d = 2; d <= 3; ++d) {
    const ChannelRep id = identity_channel(d);
    CHECK((id.choi - max_entangled(d).rho).cwiseAbs().maxCoeff() < 1e-14);
    Rng rng(7);
    const Mat x = random_density(rng, d);
    CHECK((apply_channel(id, x) - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("choi_of_map and apply_channel are mutually inverse") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int din = 2 + trial % 3;
    const int dout = 2 + (trial / 3) % 3;
    const ChannelRep ch = random_channel(rng, din, dout);
    const ChannelRep back = choi_of_map(
        [&](const Mat& x) { return apply_channel(ch, x); }, din, dout);
    CHECK((back.choi - ch.choi).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("unitary conjugation goes through the choi representation") {
  Rng rng(13);
  const int d = 3;
  const Mat u = random_unitary(rng, d);
  const ChannelRep ch = choi_of_map(
      [&](const Mat& x) { return Mat(u * x * u.adjoint()); }, d, d);
  const Mat x = random_density(rng, d);
  CHECK((apply_channel(ch, x) - u * x * u.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(is_cp(ch).ok);
  CHECK(is_tp(ch).ok);
  CHECK(is_unital(ch).ok);
}

TEST_CASE("adjoint satisfies the hilbert-schmidt pairing") {
  Rng rng(17);
  const ChannelRep ch = random_channel(rng, 3, 2);
  for (int trial = 0; trial < 5; ++trial) {
    Mat x = Mat::NullaryExpr(3, 3, [&](Eigen::Index, Eigen::Index) {
      return rng.cgauss();
    });
    x = Mat((x + x.adjoint()) / 2.0);
    Mat m = Mat::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) {
      return rng.cgauss();
    });
    m = Mat((m + m.adjoint()) / 2.0);
    const Complex lhs = (apply_adjoint(ch, m).adjoint() * x).trace();
    const Complex rhs = (m.adjoint() * apply_channel(ch, x)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("partial application acts only on the second factor") {
  Rng rng(19);
  const ChannelRep ch = random_channel(rng, 2, 2);
  const Mat sa = random_density(rng, 3);
  const Mat sb = random_density(rng, 2);
  const Mat out = apply_partial_op(ch, tensor(sa, sb), 3);
  CHECK((out - tensor(sa, apply_channel(ch, sb))).cwiseAbs().maxCoeff() <
        1e-11);

  const BipartiteState st = random_state(rng, 2, 2);
  const BipartiteState mapped = apply_partial(identity_channel(2), st);
  CHECK((mapped.rho - st.rho).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("channel predicates classify the standard maps") {
  const ChannelRep dep = depolarizing_channel(3);
  CHECK(is_tp(dep).ok);
  CHECK(is_cp(dep).ok);
  CHECK(is_unital(dep).ok);
  CHECK(is_trace_nonincreasing(dep).ok);

  Rng rng(23);
  const ChannelRep ch = random_channel(rng, 2, 3);
  CHECK(is_tp(ch).ok);
  CHECK(is_cp(ch).ok);

  // Transpose is positive but not completely positive.
  const ChannelRep tr = choi_of_map(
      [](const Mat& x) { return Mat(x.transpose()); }, 2, 2);
  CHECK(is_tp(tr).ok);
  CHECK_FALSE(is_cp(tr).ok);
  CHECK(is_cp(tr).residual > 0.1);
}

TEST_CASE("instrument validation checks CP pieces summing to a channel") {
  const ChannelRep dep = depolarizing_channel(2);
  Instrument ins;
  for (double p : {0.25, 0.75}) {
    ChannelRep piece = dep;
    piece.choi *= p;
    ins.subchannels.push_back(piece);
  }
  CHECK(validate_instrument(ins).ok);

  ins.subchannels[0].choi *= 1.5;
  CHECK_FALSE(validate_instrument(ins).ok);
}

TEST_CASE("weyl operators obey the commutation algebra") {
  for (int d = 2; d <= 5; ++d) {
    const WeylOperators w = weyl(d);
    const Mat id = Mat::Identity(d, d);
    Mat xp = id, zp = id;
    for (int i = 0; i < d; ++i) {
      xp = Mat(w.shift * xp);
      zp = Mat(w.phase * zp);
    }
    CHECK((xp - id).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((zp - id).cwiseAbs().maxCoeff() < 1e-12);
    const Mat lhs = w.phase * w.shift;
    const Mat rhs = w.omega * w.shift * w.phase;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((weyl_op(w, 1, 1) - w.shift * w.phase).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("bell povm is a complete orthogonal family of projectors") {
  for (int d = 2; d <= 5; ++d) {
    const std::vector<Mat> povm = bell_povm(d);
    REQUIRE(static_cast<int>(povm.size()) == d * d);
    Mat sum = Mat::Zero(d * d, d * d);
    for (const Mat& p : povm) sum += p;
    CHECK((sum - Mat::Identity(d * d, d * d)).cwiseAbs().maxCoeff() < 1e-10);
    for (size_t i = 0; i < povm.size(); ++i) {
      CHECK((povm[i] * povm[i] - povm[i]).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(povm[i].trace().real() == doctest::Approx(1.0).epsilon(1e-10));
      for (size_t j = i + 1; j < povm.size(); ++j)
        CHECK(std::abs((povm[i] * povm[j]).trace()) < 1e-10);
    }
  }
}

TEST_CASE("rng streams are reproducible and seed mixing separates them") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const double va = a.gauss();
    all_equal = all_equal && va == b.gauss();
    any_diff = any_diff || va != c.gauss();
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}

TEST_CASE("random ensembles produce valid objects") {
  Rng rng(29);
  const Mat u = random_unitary(rng, 4);
  CHECK((u * u.adjoint() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  const Mat rho = random_density(rng, 3);
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(rho) > -1e-12);

  const BipartiteState st = random_state(rng, 2, 3);
  CHECK(st.dim_a == 2);
  CHECK(st.dim_b == 3);
  CHECK(st.rho.rows() == 6);

  // Environment dimension 1 collapses the wishart factor to a pure state.
  const BipartiteState pure = random_state(rng, 2, 2, 1);
  const Spectrum sp = eig_hermitian(pure.rho);
  CHECK(sp.eigenvalues.maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random_pure_sr hits the requested schmidt rank exactly") {
  Rng rng(31);
  for (int k = 1; k <= 4; ++k) {
    const Vec psi = random_pure_sr(rng, 3, 3, k);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::JacobiSVD<Mat> svd(oracle::unfold(psi, 3, 3));
    const RVec sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-8) ++rank;
    CHECK(rank == std::min(k, 3));
  }
}
