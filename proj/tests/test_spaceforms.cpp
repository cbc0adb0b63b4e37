#include <doctest.h>

#include "isogeo/errors.hpp"
#include "isogeo/spaceforms.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace isogeo;

namespace {

Vec randvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

} // namespace

TEST_CASE("lorentz inner product") {
  CHECK(lorentz_inner(Vec::Unit(3, 0), Vec::Unit(3, 0)) == -1.0);
  Vec l(3);
  l << 1, 1, 0;
  CHECK(lorentz_inner(l, l) == 0.0);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Vec u = randvec(rng, 5), v = randvec(rng, 5);
    double brute = -u[0] * v[0];
    for (int i = 1; i < 5; ++i) brute += u[i] * v[i];
    CHECK(std::abs(lorentz_inner(u, v) - brute) < 1e-15);
  }
  CHECK_THROWS_AS(lorentz_inner(Vec::Zero(3), Vec::Zero(4)), UsageError);
}

TEST_CASE("sphere exponential") {
  FactorPoint p{Vec::Unit(3, 0), 1};
  auto q = factor_exp(p, Vec::Unit(3, 1), std::numbers::pi / 2);
  CHECK((q.coords - Vec::Unit(3, 1)).norm() < 1e-15);
  CHECK((factor_exp(p, Vec::Unit(3, 1), 0.0).coords - p.coords).norm() == 0.0);
  CHECK((factor_exp(p, Vec::Zero(3), 3.0).coords - p.coords).norm() == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    FactorPoint x = make_factor(randvec(rng, 4), 1);
    Vec v = factor_project(x, randvec(rng, 4));
    double period = 2 * std::numbers::pi / v.norm();
    double t = std::uniform_real_distribution<double>(-10, 10)(rng);
    auto a = factor_exp(x, v, t);
    auto b = factor_exp(x, v, t + period);
    CHECK((a.coords - b.coords).norm() < 1e-10);
    CHECK(std::abs(a.coords.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("hyperboloid exponential") {
  FactorPoint o{Vec::Unit(4, 0), -1};
  auto q = factor_exp(o, Vec::Unit(4, 1), 1.0);
  CHECK(std::abs(q.coords[0] - std::cosh(1.0)) < 1e-15);
  CHECK(std::abs(q.coords[1] - std::sinh(1.0)) < 1e-15);
  CHECK(std::abs(lorentz_inner(q.coords, q.coords) + 1.0) < 1e-12);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto y = sample_point({2, 1, 3, -1}, rng()).y;
    Vec v = factor_project(y, randvec(rng, 4));
    double t = std::uniform_real_distribution<double>(-10, 10)(rng) / std::max(1.0, std::sqrt(lorentz_inner(v, v)));
    auto z = factor_exp(y, v, t);
    CHECK(std::abs(lorentz_inner(z.coords, z.coords) + 1.0) < 1e-13 * z.coords[0] * z.coords[0]);
    CHECK(z.coords[0] >= 1.0);
  }
}

TEST_CASE("exponential velocity matches difference quotient") {
  std::mt19937_64 rng(5);
  for (int c : {1, -1}) {
    auto p = sample_point({3, 1, 3, c}, rng());
    Vec v = factor_project(p.y, randvec(rng, 4));
    double t = 0.7, h = 1e-6;
    Vec fd = (factor_exp(p.y, v, t + h).coords - factor_exp(p.y, v, t - h).coords) / (2 * h);
    CHECK((fd - factor_exp_velocity(p.y, v, t)).norm() < 1e-7 * (1 + fd.norm()));
  }
}

TEST_CASE("product structure is an involutive isometry") {
  std::mt19937_64 rng(9);
  auto p = sample_point({3, 1, 2, -1}, 1234);
  TangentVec h{factor_project(p.x, randvec(rng, 4)), Vec::Zero(3)};
  auto Ph = product_structure(h);
  CHECK((Ph.v1 - h.v1).norm() == 0.0);
  CHECK(Ph.v2.norm() == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    auto a = tangent_project(p, randvec(rng, 4), randvec(rng, 3));
    auto b = tangent_project(p, randvec(rng, 4), randvec(rng, 3));
    auto PPa = product_structure(product_structure(a));
    CHECK(PPa.v1 == a.v1);
    CHECK(PPa.v2 == a.v2);
    auto Pb = product_structure(b);
    auto Pa = product_structure(a);
    CHECK(std::abs(inner(p, Pa, Pb) - inner(p, a, b)) < 1e-15 * (1 + std::abs(inner(p, a, b))) * 10);
  }
}

TEST_CASE("tangent projection") {
  std::mt19937_64 rng(13);
  for (int c : {1, -1}) {
    auto p = sample_point({3, 1, 3, c}, rng());
    auto a = tangent_project(p, randvec(rng, 4), randvec(rng, 4));
    auto aa = tangent_project(p, a.v1, a.v2);
    CHECK((aa.v1 - a.v1).norm() < 1e-15 * 10 * (1 + a.v1.norm()));
    CHECK((aa.v2 - a.v2).norm() < 1e-14 * (1 + p.y.coords.norm() * a.v2.norm()));
    CHECK(std::abs(a.v1.dot(p.x.coords)) < 1e-10);
    CHECK(std::abs(factor_inner(c, a.v2, p.y.coords)) < 1e-10);
  }
  auto p = sample_point({2, 1, 2, 1}, 99);
  auto r = tangent_project(p, p.x.coords, Vec::Zero(3));
  CHECK(r.v1.norm() < 1e-15);
  CHECK(r.v2.norm() == 0.0);
}

TEST_CASE("frames are orthonormal") {
  for (int c : {1, -1}) {
    auto p = sample_point({3, 1, 4, c}, 77);
    auto F = tangent_frame(p);
    REQUIRE(F.size() == 7);
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = 0; j < F.size(); ++j)
        CHECK(std::abs(inner(p, F[i], F[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    TangentVec nrm = F[2] * 0.6 + F[5] * 0.8;
    auto G = complement_frame(p, nrm);
    REQUIRE(G.size() == 6);
    for (auto& g : G) CHECK(std::abs(inner(p, g, nrm)) < 1e-12);
  }
}

TEST_CASE("sampling is deterministic and on the factors") {
  AmbientSpec s{3, 1, 2, -1};
  auto a = sample_point(s, 42), b = sample_point(s, 42);
  CHECK(a.x.coords == b.x.coords);
  CHECK(a.y.coords == b.y.coords);
  CHECK(std::abs(a.x.coords.squaredNorm() - 1.0) < 1e-12);
  CHECK(std::abs(lorentz_inner(a.y.coords, a.y.coords) + 1.0) < 1e-12);
  CHECK(a.y.coords[0] >= 1.0);

  Vec mean = Vec::Zero(4);
  const int N = 10000;
  for (int i = 0; i < N; ++i) mean += sample_point({3, 1, 1, 1}, derive_seed(42, i)).x.coords;
  mean /= N;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
}
