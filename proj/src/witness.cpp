#include "isogeo/witness.hpp"

#include "isogeo/algebra.hpp"
#include "isogeo/errors.hpp"

#include <cmath>
#include <random>

namespace isogeo {

namespace {

// F-scalars as real d-vectors; F-vectors as blocks of d reals.
struct Alg {
  int d;

  Vec mul(const Vec& a, const Vec& b) const {
    auto r = cd::mul<double>(std::span<const double>(a.data(), d), std::span<const double>(b.data(), d));
    return Eigen::Map<Vec>(r.data(), d);
  }
  Vec conj(const Vec& a) const {
    Vec r = -a;
    r[0] = a[0];
    return r;
  }
  Vec one() const { return Vec::Unit(d, 0); }
  Vec inv(const Vec& a) const { return conj(a) / a.squaredNorm(); }

  // Principal square root of a unit-free scalar q = |q|(cos phi + v sin phi).
  Vec sqrt(const Vec& q) const {
    double r = q.norm();
    Vec out = Vec::Zero(d);
    if (r == 0.0) return out;
    Vec im = q;
    im[0] = 0;
    double s = im.norm();
    double phi = std::atan2(s, q[0]);
    Vec unit;
    if (s > 1e-15 * r) {
      unit = im / s;
    } else {
      unit = Vec::Zero(d);
      if (d > 1) unit[1] = 1;
    }
    out = std::sin(phi / 2) * unit;
    out[0] = std::cos(phi / 2);
    if (d == 1 && q[0] < 0) throw NoWitness("no real square root");
    return std::sqrt(r) * out;
  }

  int rows(const Vec& x) const { return static_cast<int>(x.size()) / d; }
  Vec comp(const Vec& x, int i) const { return x.segment(i * d, d); }

  Vec inner(const Vec& x, const Vec& y) const {
    Vec s = Vec::Zero(d);
    for (int i = 0; i < rows(x); ++i) s += mul(conj(comp(x, i)), comp(y, i));
    return s;
  }
  // x q with q acting on the right componentwise.
  Vec rscale(const Vec& x, const Vec& q) const {
    Vec r(x.size());
    for (int i = 0; i < rows(x); ++i) r.segment(i * d, d) = mul(comp(x, i), q);
    return r;
  }

  // F-orthonormal completion of `start` (assumed F-orthonormal).
  std::vector<Vec> complete(std::vector<Vec> basis, int len) const {
    const int N = len / d;
    for (int j = 0; j < N && static_cast<int>(basis.size()) < N; ++j) {
      Vec w = Vec::Unit(len, j * d);
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& b : basis) w -= rscale(b, inner(b, w));
      double nw = w.norm();
      if (nw > 1e-8) basis.push_back(w / nw);
    }
    if (static_cast<int>(basis.size()) != N) throw NumericalFailure("F-basis completion failed");
    return basis;
  }

  // Real matrix of z -> sum_k to_k <from_k, z>_F.
  Mat map(const std::vector<Vec>& from, const std::vector<Vec>& to) const {
    const int len = static_cast<int>(from[0].size());
    Mat M = Mat::Zero(len, len);
    for (int c = 0; c < len; ++c) {
      Vec z = Vec::Unit(len, c);
      Vec img = Vec::Zero(len);
      for (std::size_t k = 0; k < from.size(); ++k) img += rscale(to[k], inner(from[k], z));
      M.col(c) = img;
    }
    return M;
  }
};

} // namespace

Vec field_inner(Field f, const Vec& x, const Vec& y) { return Alg{field_dim(f)}.inner(x, y); }

ProductPoint apply_witness(Field f, const GroupWitness& g, const ProductPoint& p) {
  Alg F{field_dim(f)};
  Vec x = F.rscale(g.A * p.x.coords, g.a);
  Vec y = F.rscale(g.A * p.y.coords, F.conj(g.a));
  return {make_factor(x, 1), make_factor(y, 1)};
}

GroupWitness mtf_witness(Field f, const ProductPoint& p, const ProductPoint& q) {
  Alg F{field_dim(f)};
  const int len = static_cast<int>(p.x.coords.size());
  if (len % F.d != 0 || q.x.coords.size() != len || p.y.coords.size() != len || q.y.coords.size() != len)
    throw UsageError("mtf_witness: dimension mismatch");
  Vec l1 = F.inner(p.x.coords, p.y.coords);
  Vec l2 = F.inner(q.x.coords, q.y.coords);
  if (std::abs(l1.squaredNorm() - l2.squaredNorm()) > 1e-10)
    throw UsageError("mtf_witness: points lie on different levels");
  if (l1.norm() < 1e-12) throw UsageError("mtf_witness: focal level |<x,y>_F| = 0");
  if (F.d == 1 && l1[0] * l2[0] < 0)
    throw NoWitness("mtf_witness: real field points on different components");

  const Vec& x = p.x.coords;
  const Vec& xp = q.x.coords;
  // Step 1: A1 x = x'.
  Mat A1 = F.map(F.complete({x}, len), F.complete({xp}, len));
  Vec yt = A1 * p.y.coords;

  // Step 2: b l1 b = l2 with b = a*; among the two roots s of s^2 = l2 l1,
  // take the one nearest l1 so that p = q yields b = 1.
  Vec s = F.sqrt(F.mul(l2, l1));
  if ((s - l1).norm() > (s + l1).norm()) s = -s;
  Vec b = F.mul(s, F.inv(l1));
  b /= b.norm();
  Vec a = F.conj(b);

  // Step 3: A2 x' = x' a*, and A2 v1 = v2 a on the complement of F x'.
  Vec v1 = yt - F.rscale(xp, F.inner(xp, yt));
  Vec v2 = q.y.coords - F.rscale(xp, F.inner(xp, q.y.coords));
  std::vector<Vec> from{xp}, to{F.rscale(xp, b)};
  if (v1.norm() > 1e-12) {
    from.push_back(v1 / v1.norm());
    to.push_back(F.rscale(v2, a) / v2.norm());
  }
  from = F.complete(from, len);
  // Complement of the image basis, built the same way.
  std::vector<Vec> to_start{xp};
  if (to.size() > 1) to_start.push_back(to[1]);
  auto to_full = F.complete(to_start, len);
  to_full[0] = to[0];
  Mat A2 = F.map(from, to_full);

  GroupWitness g{A2 * A1, a, 0.0};
  ProductPoint img = apply_witness(f, g, p);
  g.residual = std::max((img.x.coords - q.x.coords).norm(), (img.y.coords - q.y.coords).norm());
  return g;
}

Vec graph_boost(const LightVec& u, double s, const Vec& y) {
  const Vec w = u.u.tail(u.u.size() - 1);
  Vec e(u.u.size());
  e[0] = 0;
  e.tail(w.size()) = w;
  double y0 = y[0], yw = y.tail(w.size()).dot(w);
  double c = std::cosh(s), sh = std::sinh(s);
  Vec out = y;
  out -= yw * e;
  out[0] = c * y0 - sh * yw;
  out += (-sh * y0 + c * yw) * e;
  return out;
}

Vec null_rotation(const LightVec& u, const Vec& b, const Vec& y) {
  double yu = lorentz_inner(y, u.u), yb = lorentz_inner(y, b), bb = lorentz_inner(b, b);
  return y + yu * b - yb * u.u - 0.5 * bb * yu * u.u;
}

double graph_symmetry_check(double a, const LightVec& u, const ProductPoint& p, double theta,
                            std::uint64_t seed) {
  if (a == 0.0) throw UsageError("graph_symmetry_check: a must be nonzero");
  const int m = p.m();
  auto fam = make_graph(m, a, u, 0.0);
  const double F0 = evaluate_F(fam, p);

  // K2: rotate S^1 by theta, boost H^m by theta/a.
  Vec x = p.x.coords;
  Vec xr(2);
  xr << std::cos(theta) * x[0] - std::sin(theta) * x[1], std::sin(theta) * x[0] + std::cos(theta) * x[1];
  Vec y = graph_boost(u, theta / a, p.y.coords);

  // K1: rotation of w-perp followed by a null rotation, both fixing u.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const Vec w = u.u.tail(m);
  FactorPoint wp{w, 1};
  auto perp = factor_complement(wp, {});
  const int k = static_cast<int>(perp.size());
  if (k > 0) {
    Mat G(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) G(i, j) = gauss(rng);
    Mat O = Eigen::HouseholderQR<Mat>(G).householderQ();
    Mat W(m, k);
    for (int i = 0; i < k; ++i) W.col(i) = perp[i];
    Mat R = W * O * W.transpose() + w * w.transpose();
    y.tail(m) = (R * y.tail(m)).eval();

    Vec bp = Vec::Zero(m);
    for (int i = 0; i < k; ++i) bp += gauss(rng) * perp[i];
    Vec bvec = Vec::Zero(m + 1);
    bvec.tail(m) = bp;
    y = null_rotation(u, bvec, y);
  }
  ProductPoint g{make_factor(xr, 1), make_factor(y, -1)};
  return std::abs(evaluate_F(fam, g) - F0);
}

} // namespace isogeo
