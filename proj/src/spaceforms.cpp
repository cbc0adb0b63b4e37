#include "isogeo/spaceforms.hpp"

#include "isogeo/errors.hpp"

#include <cmath>
#include <random>

namespace isogeo {

double lorentz_inner(const Vec& u, const Vec& v) {
  if (u.size() != v.size() || u.size() < 2)
    throw UsageError("lorentz_inner: vectors must have equal length >= 2");
  return -u[0] * v[0] + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

double factor_inner(int c, const Vec& u, const Vec& v) {
  return c > 0 ? u.dot(v) : lorentz_inner(u, v);
}

double inner(const ProductPoint& p, const TangentVec& a, const TangentVec& b) {
  return factor_inner(p.x.c, a.v1, b.v1) + factor_inner(p.y.c, a.v2, b.v2);
}

double norm(const ProductPoint& p, const TangentVec& a) {
  return std::sqrt(std::max(0.0, inner(p, a, a)));
}

LightVec LightVec::from_direction(const Vec& w) {
  double len = w.norm();
  if (len == 0.0)
    throw UsageError("lightlike direction must be nonzero");
  Vec u(w.size() + 1);
  u[0] = 1.0;
  u.tail(w.size()) = w / len;
  return {u};
}

FactorPoint make_factor(Vec coords, int c) {
  if (c != 1 && c != -1)
    throw UsageError("factor curvature must be +1 or -1");
  return renormalize({std::move(coords), c});
}

FactorPoint renormalize(const FactorPoint& p) {
  FactorPoint q = p;
  if (p.c > 0) {
    q.coords /= p.coords.norm();
  } else {
    // Back onto the upper sheet by recomputing the time coordinate.
    auto sp = p.coords.tail(p.coords.size() - 1);
    q.coords[0] = std::sqrt(1.0 + sp.squaredNorm());
  }
  return q;
}

FactorPoint factor_exp(const FactorPoint& p, const Vec& v, double t) {
  double len = std::sqrt(std::max(0.0, factor_inner(p.c, v, v)));
  if (len == 0.0)
    return p;
  double s = len * t;
  FactorPoint q = p;
  if (p.c > 0)
    q.coords = std::cos(s) * p.coords + (std::sin(s) / len) * v;
  else
    q.coords = std::cosh(s) * p.coords + (std::sinh(s) / len) * v;
  return renormalize(q);
}

Vec factor_exp_velocity(const FactorPoint& p, const Vec& v, double t) {
  double len = std::sqrt(std::max(0.0, factor_inner(p.c, v, v)));
  if (len == 0.0)
    return Vec::Zero(v.size());
  double s = len * t;
  if (p.c > 0)
    return -len * std::sin(s) * p.coords + std::cos(s) * v;
  return len * std::sinh(s) * p.coords + std::cosh(s) * v;
}

ProductPoint product_exp(const ProductPoint& p, const TangentVec& v, double t) {
  return {factor_exp(p.x, v.v1, t), factor_exp(p.y, v.v2, t)};
}

TangentVec product_structure(const TangentVec& v) { return {v.v1, -v.v2}; }

Vec factor_project(const FactorPoint& p, const Vec& a) {
  if (p.c > 0)
    return a - a.dot(p.coords) * p.coords;
  return a + lorentz_inner(a, p.coords) * p.coords;
}

TangentVec tangent_project(const ProductPoint& p, const Vec& a1, const Vec& a2) {
  return {factor_project(p.x, a1), factor_project(p.y, a2)};
}

std::vector<Vec> factor_complement(const FactorPoint& p, const std::vector<Vec>& also) {
  const int N = static_cast<int>(p.coords.size());
  auto ip = [&](const Vec& a, const Vec& b) { return factor_inner(p.c, a, b); };

  std::vector<Vec> basis;
  for (const Vec& a : also) {
    Vec w = factor_project(p, a);
    for (const Vec& b : basis) w -= ip(w, b) * b;
    double len = std::sqrt(std::max(0.0, ip(w, w)));
    if (len > 1e-12) basis.push_back(w / len);
  }
  const std::size_t fixed = basis.size();

  std::vector<Vec> cand;
  for (int i = 0; i < N; ++i) cand.push_back(factor_project(p, Vec::Unit(N, i)));

  // Greedy Gram-Schmidt: always take the candidate with the largest residual.
  const std::size_t want = static_cast<std::size_t>(N - 1);
  while (basis.size() < want) {
    int best = -1;
    double bestLen = 0.0;
    Vec bestVec;
    for (int i = 0; i < N; ++i) {
      Vec w = cand[i];
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& b : basis) w -= ip(w, b) * b;
      double len = std::sqrt(std::max(0.0, ip(w, w)));
      if (len > bestLen) {
        bestLen = len;
        best = i;
        bestVec = w;
      }
    }
    if (best < 0 || bestLen < 1e-10)
      throw NumericalFailure("factor_complement: rank deficiency");
    basis.push_back(bestVec / bestLen);
  }
  return {basis.begin() + static_cast<std::ptrdiff_t>(fixed), basis.end()};
}

std::vector<TangentVec> tangent_frame(const ProductPoint& p) {
  std::vector<TangentVec> frame;
  const Vec z1 = Vec::Zero(p.x.coords.size());
  const Vec z2 = Vec::Zero(p.y.coords.size());
  for (Vec& h : factor_complement(p.x, {})) frame.push_back({h, z2});
  for (Vec& v : factor_complement(p.y, {})) frame.push_back({z1, v});
  return frame;
}

std::vector<TangentVec> complement_frame(const ProductPoint& p, const TangentVec& nrm) {
  auto frame = tangent_frame(p);
  const int d = static_cast<int>(frame.size());
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = inner(p, nrm, frame[i]);
  Eigen::HouseholderQR<Mat> qr(c);
  Mat Q = qr.householderQ() * Mat::Identity(d, d);
  std::vector<TangentVec> out;
  for (int j = 1; j < d; ++j) {
    TangentVec e{Vec::Zero(p.x.coords.size()), Vec::Zero(p.y.coords.size())};
    for (int i = 0; i < d; ++i) e = e + frame[i] * Q(i, j);
    out.push_back(e);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

FactorPoint sample_factor(int dim, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (c > 0) {
    Vec v(dim + 1);
    do {
      for (int i = 0; i <= dim; ++i) v[i] = gauss(rng);
    } while (v.norm() < 1e-8);
    return make_factor(v, 1);
  }
  Vec w(dim);
  do {
    for (int i = 0; i < dim; ++i) w[i] = gauss(rng);
  } while (w.norm() < 1e-8);
  Vec dir = Vec::Zero(dim + 1);
  dir.tail(dim) = w / w.norm();
  FactorPoint o{Vec::Unit(dim + 1, 0), -1};
  return factor_exp(o, dir, gauss(rng));
}

} // namespace

ProductPoint sample_point(const AmbientSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.m < 1)
    throw UsageError("sample_point: dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  FactorPoint x = sample_factor(spec.n, spec.c1, rng);
  FactorPoint y = sample_factor(spec.m, spec.c2, rng);
  return {x, y};
}

} // namespace isogeo
