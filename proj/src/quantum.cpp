#include "etk/quantum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace etk {

BipartiteState make_state(const Mat& rho, int dim_a, int dim_b,
                          const Tolerances& tols) {
  if (dim_a <= 0 || dim_b <= 0)
    throw InvalidInput("state: dimensions must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (rho.rows() != n || rho.cols() != n) {
    std::ostringstream msg;
    msg << "state: matrix is " << rho.rows() << "x" << rho.cols()
        << " but dims [" << dim_a << "," << dim_b << "] require " << n;
    throw InvalidInput(msg.str());
  }
  require_hermitian(rho, tols.hermiticity, "state");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tols.comparison) {
    std::ostringstream msg;
    msg << "state: trace is " << tr << ", expected 1";
    throw InvalidInput(msg.str());
  }
  const double lmin = min_eigenvalue(rho, tols);
  if (lmin < -tols.psd_floor) {
    std::ostringstream msg;
    msg << "state: minimum eigenvalue " << lmin << " below PSD floor";
    throw InvalidInput(msg.str());
  }
  return BipartiteState{rho, dim_a, dim_b};
}

Vec basis_vec(int d, int i) {
  Vec v = Vec::Zero(d);
  v[i] = Complex(1, 0);
  return v;
}

Vec max_entangled_vec(int d) {
  if (d < 1) throw InvalidInput("max_entangled: dimension must be positive");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v[fuse(i, i, d)] = Complex(amp, 0);
  return v;
}

BipartiteState max_entangled(int d) {
  const Vec v = max_entangled_vec(d);
  return BipartiteState{projector(v), d, d};
}

Mat embed_dim_a(const Mat& op, int dim_a, int dim_b, int new_dim_a) {
  if (new_dim_a < dim_a)
    throw InvalidInput("embed_dim_a: target dimension smaller than source");
  const Eigen::Index n = static_cast<Eigen::Index>(new_dim_a) * dim_b;
  Mat out = Mat::Zero(n, n);
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb)
          out(fuse(ia, ib, dim_b), fuse(ja, jb, dim_b)) =
              op(fuse(ia, ib, dim_b), fuse(ja, jb, dim_b));
  return out;
}

ChannelRep make_channel(const Mat& choi, int d_in, int d_out,
                        const Tolerances& tols) {
  if (d_in <= 0 || d_out <= 0)
    throw InvalidInput("channel: dimensions must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(d_in) * d_out;
  if (choi.rows() != n || choi.cols() != n) {
    std::ostringstream msg;
    msg << "channel: Choi matrix is " << choi.rows() << "x" << choi.cols()
        << " but dims in=" << d_in << " out=" << d_out << " require " << n;
    throw InvalidInput(msg.str());
  }
  require_hermitian(choi, tols.hermiticity, "channel Choi operator");
  return ChannelRep{(choi + choi.adjoint()) / 2.0, d_in, d_out};
}

ChannelRep choi_of_map(const std::function<Mat(const Mat&)>& action, int d_in,
                       int d_out, const Tolerances& tols) {
  if (d_in <= 0 || d_out <= 0)
    throw InvalidInput("choi_of_map: dimensions must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(d_in) * d_out;
  Mat choi = Mat::Zero(n, n);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      Mat e = Mat::Zero(d_in, d_in);
      e(i, j) = Complex(1, 0);
      const Mat img = action(e);
      if (img.rows() != d_out || img.cols() != d_out)
        throw InvalidInput("choi_of_map: action output has wrong dimensions");
      for (int o = 0; o < d_out; ++o)
        for (int p = 0; p < d_out; ++p)
          choi(fuse(i, o, d_out), fuse(j, p, d_out)) = img(o, p) / double(d_in);
    }
  return make_channel(choi, d_in, d_out, tols);
}

Mat apply_channel(const ChannelRep& ch, const Mat& x) {
  if (x.rows() != ch.d_in || x.cols() != ch.d_in)
    throw InvalidInput("apply_channel: input has wrong dimensions");
  Mat out = Mat::Zero(ch.d_out, ch.d_out);
  for (int o = 0; o < ch.d_out; ++o)
    for (int p = 0; p < ch.d_out; ++p) {
      Complex acc(0, 0);
      for (int i = 0; i < ch.d_in; ++i)
        for (int j = 0; j < ch.d_in; ++j)
          acc += x(i, j) * ch.choi(fuse(i, o, ch.d_out), fuse(j, p, ch.d_out));
      out(o, p) = acc * double(ch.d_in);
    }
  return out;
}

Mat apply_adjoint(const ChannelRep& ch, const Mat& m) {
  if (m.rows() != ch.d_out || m.cols() != ch.d_out)
    throw InvalidInput("apply_adjoint: input has wrong dimensions");
  Mat out = Mat::Zero(ch.d_in, ch.d_in);
  for (int i = 0; i < ch.d_in; ++i)
    for (int j = 0; j < ch.d_in; ++j) {
      Complex acc(0, 0);
      for (int o = 0; o < ch.d_out; ++o)
        for (int p = 0; p < ch.d_out; ++p)
          acc += ch.choi(fuse(j, o, ch.d_out), fuse(i, p, ch.d_out)) * m(p, o);
      out(i, j) = acc * double(ch.d_in);
    }
  return out;
}

Mat apply_partial_op(const ChannelRep& ch, const Mat& op, int dim_anc) {
  const Eigen::Index nin = static_cast<Eigen::Index>(dim_anc) * ch.d_in;
  if (op.rows() != nin || op.cols() != nin)
    throw InvalidInput("apply_partial: operator has wrong dimensions");
  const Eigen::Index nout = static_cast<Eigen::Index>(dim_anc) * ch.d_out;
  Mat out = Mat::Zero(nout, nout);
  const double scale = double(ch.d_in);
  for (int a = 0; a < dim_anc; ++a)
    for (int b = 0; b < dim_anc; ++b)
      for (int o = 0; o < ch.d_out; ++o)
        for (int p = 0; p < ch.d_out; ++p) {
          Complex acc(0, 0);
          for (int i = 0; i < ch.d_in; ++i)
            for (int j = 0; j < ch.d_in; ++j)
              acc += op(fuse(a, i, ch.d_in), fuse(b, j, ch.d_in)) *
                     ch.choi(fuse(i, o, ch.d_out), fuse(j, p, ch.d_out));
          out(fuse(a, o, ch.d_out), fuse(b, p, ch.d_out)) = acc * scale;
        }
  return out;
}

BipartiteState apply_partial(const ChannelRep& ch, const BipartiteState& rho,
                             const Tolerances& tols) {
  if (rho.dim_b != ch.d_in)
    throw InvalidInput("apply_partial: state B dimension does not match d_in");
  Mat out = apply_partial_op(ch, rho.rho, rho.dim_a);
  (void)tols;
  return BipartiteState{std::move(out), rho.dim_a, ch.d_out};
}

CheckResult is_tp(const ChannelRep& ch, const Tolerances& tols) {
  const Mat marg = partial_trace(ch.choi, ch.d_in, ch.d_out, Side::B);
  const double r =
      (marg - Mat::Identity(ch.d_in, ch.d_in) / double(ch.d_in)).cwiseAbs().maxCoeff();
  return CheckResult{r <= tols.comparison, r};
}

CheckResult is_unital(const ChannelRep& ch, const Tolerances& tols) {
  const Mat marg = partial_trace(ch.choi, ch.d_in, ch.d_out, Side::A);
  const double r =
      (marg - Mat::Identity(ch.d_out, ch.d_out) / double(ch.d_in)).cwiseAbs().maxCoeff();
  return CheckResult{r <= tols.comparison, r};
}

CheckResult is_cp(const ChannelRep& ch, const Tolerances& tols) {
  const double lmin = min_eigenvalue(ch.choi, tols);
  const double r = std::max(0.0, -lmin);
  return CheckResult{r <= tols.psd_floor, r};
}

CheckResult is_trace_nonincreasing(const ChannelRep& ch, const Tolerances& tols) {
  const Mat marg = partial_trace(ch.choi, ch.d_in, ch.d_out, Side::B);
  const Mat gap = Mat::Identity(ch.d_in, ch.d_in) / double(ch.d_in) - marg;
  const double lmin = min_eigenvalue(gap, tols);
  const double r = std::max(0.0, -lmin);
  return CheckResult{r <= tols.psd_floor, r};
}

CheckResult validate_instrument(const Instrument& ins, const Tolerances& tols) {
  if (ins.subchannels.empty())
    throw InvalidInput("instrument: needs at least one subchannel");
  const int d_in = ins.subchannels.front().d_in;
  double worst = 0.0;
  Mat total = Mat::Zero(d_in, d_in);
  for (const auto& sub : ins.subchannels) {
    if (sub.d_in != d_in)
      throw InvalidInput("instrument: subchannels disagree on input dimension");
    worst = std::max(worst, is_cp(sub, tols).residual);
    total += partial_trace(sub.choi, sub.d_in, sub.d_out, Side::B);
  }
  const double tp =
      (total - Mat::Identity(d_in, d_in) / double(d_in)).cwiseAbs().maxCoeff();
  worst = std::max(worst, tp);
  return CheckResult{worst <= tols.comparison, worst};
}

ChannelRep identity_channel(int d) {
  return ChannelRep{projector(max_entangled_vec(d)), d, d};
}

ChannelRep depolarizing_channel(int d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  return ChannelRep{Mat::Identity(n, n) / double(n), d, d};
}

WeylOperators weyl(int d) {
  if (d < 2) throw InvalidInput("weyl: dimension must be at least 2");
  WeylOperators w;
  w.d = d;
  const double arg = 2.0 * std::numbers::pi / double(d);
  w.omega = std::polar(1.0, arg);
  w.shift = Mat::Zero(d, d);
  w.phase = Mat::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    w.shift((n + 1) % d, n) = Complex(1, 0);
    w.phase(n, n) = std::polar(1.0, arg * n);
  }
  return w;
}

Mat weyl_op(const WeylOperators& w, int k, int l) {
  const int d = w.d;
  const int kk = ((k % d) + d) % d;
  const int ll = ((l % d) + d) % d;
  Mat out = Mat::Zero(d, d);
  const double arg = 2.0 * std::numbers::pi / double(d);
  for (int n = 0; n < d; ++n)
    out((n + kk) % d, n) = std::polar(1.0, arg * double(ll) * double(n));
  return out;
}

std::vector<Mat> bell_povm(int d) {
  const WeylOperators w = weyl(d);
  const Vec phi = max_entangled_vec(d);
  std::vector<Mat> povm;
  povm.reserve(static_cast<size_t>(d) * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      const Mat u = tensor(Mat::Identity(d, d), weyl_op(w, k, l));
      povm.push_back(u * projector(phi) * u.adjoint());
    }
  return povm;
}

double Rng::uniform() {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
  if (have_spare) {
    have_spare = false;
    return spare;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare = r * std::sin(a);
  have_spare = true;
  return r * std::cos(a);
}

Complex Rng::cgauss() {
  const double re = gauss();
  const double im = gauss();
  return Complex(re, im) / std::sqrt(2.0);
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

Mat random_unitary(Rng& rng, int d) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex piv = r(j, j);
    const double mag = std::abs(piv);
    if (mag > 1e-300) q.col(j) *= piv / mag;
  }
  return q;
}

Mat random_density(Rng& rng, int d) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

BipartiteState random_state(Rng& rng, int dim_a, int dim_b, int dim_env) {
  const int n = dim_a * dim_b;
  const int env = dim_env > 0 ? dim_env : n;
  Mat g(n, env);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < env; ++j) g(i, j) = rng.cgauss();
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) / 2.0;
  return BipartiteState{std::move(rho), dim_a, dim_b};
}

Vec random_pure_sr(Rng& rng, int dim_a, int dim_b, int k) {
  const int r = std::min({k, dim_a, dim_b});
  if (r < 1) throw InvalidInput("random_pure_sr: rank must be positive");
  Mat left(dim_a, r), right(r, dim_b);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < r; ++j) left(i, j) = rng.cgauss();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < dim_b; ++j) right(i, j) = rng.cgauss();
  const Mat m = left * right;
  Vec psi(static_cast<Eigen::Index>(dim_a) * dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) psi[fuse(a, b, dim_b)] = m(a, b);
  psi /= psi.norm();
  return psi;
}

ChannelRep random_channel(Rng& rng, int d_in, int d_out, int d_env) {
  const int env = d_env > 0 ? d_env : d_in * d_out;
  const int big = d_out * env;
  Mat g(big, d_in);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < d_in; ++j) g(i, j) = rng.cgauss();
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat v = qr.householderQ() * Mat::Identity(big, d_in);  // isometry
  auto action = [&](const Mat& x) {
    const Mat lifted = v * x * v.adjoint();  // on out (x) env
    return partial_trace(lifted, d_out, env, Side::B);
  };
  return choi_of_map(action, d_in, d_out);
}

}  // namespace etk
