#include <doctest.h>

#include "isogeo/errors.hpp"
#include "isogeo/flows.hpp"

#include <cmath>
#include <numbers>

using namespace isogeo;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

double point_dist(const ProductPoint& a, const ProductPoint& b) {
  return std::max((a.x.coords - b.x.coords).norm(), (a.y.coords - b.y.coords).norm());
}

// Poles t = theta/sqrt2 mod sqrt2 pi of every nonzero principal curvature.
std::vector<double> riccati_poles(const std::vector<Cluster>& cs) {
  std::vector<double> out;
  for (const auto& c : cs)
    if (std::abs(c.value) > 1e-6) out.push_back(std::fmod(riccati_angle(c.value) / kSqrt2, kSqrt2 * kPi));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("normal flow basics") {
  auto f = make_mhat(gen_system(2, 2), 0.3);
  auto p = sample_on_level(f, 1);
  auto s0 = normal_flow(f, p, 0.0);
  CHECK(point_dist(s0.point, p) == 0.0);
  CHECK(norm(p, s0.normal - unit_normal(f, p)) < 1e-15);

  // C = 0 on S^n x S^n: each factor moves at speed 1/sqrt 2.
  auto sT = normal_flow(f, p, 2 * kSqrt2 * kPi);
  CHECK(point_dist(sT.point, p) < 1e-8);

  for (double t : {-10.0, -3.3, 0.7, 4.1, 10.0}) {
    auto s = normal_flow(f, p, t);
    CHECK(std::abs(s.point.x.coords.norm() - 1) < 1e-9);
    CHECK(std::abs(norm(s.point, s.normal) - 1) < 1e-9);
  }

  // Parallel hypersurfaces are level sets: all samples share F after flowing.
  double F0 = evaluate_F(f, normal_flow(f, sample_on_level(f, 0), 0.25).point);
  for (std::uint64_t i = 1; i < 20; ++i)
    CHECK(std::abs(evaluate_F(f, normal_flow(f, sample_on_level(f, i), 0.25).point) - F0) < 1e-8);

  auto g = make_graph(2, 0.7, LightVec::from_direction(Vec::Unit(2, 1)), 0.1);
  auto q = sample_on_level(g, 2);
  for (double t : {-10.0, 10.0}) {
    auto s = normal_flow(g, q, t);
    CHECK(std::abs(lorentz_inner(s.point.y.coords, s.point.y.coords) + 1) < 1e-9 * s.point.y.coords.squaredNorm());
    CHECK(std::abs(norm(s.point, s.normal) - 1) < 1e-9);
  }
}

TEST_CASE("riccati law") {
  CHECK(std::abs(riccati_predict(1 / kSqrt2, 0.0) - 1 / kSqrt2) < 1e-15);
  CHECK(std::isinf(riccati_predict(1 / kSqrt2, kPi / (2 * kSqrt2))));
  // Semigroup property away from poles.
  for (double l : {-2.0, -0.3, 0.4, 1.7})
    for (double t1 : {0.1, 0.35})
      for (double t2 : {-0.2, 0.15})
        CHECK(std::abs(riccati_predict(riccati_predict(l, t1), t2) - riccati_predict(l, t1 + t2)) < 1e-9);

  auto mt = make_mt(3, 0.2);
  CHECK(riccati_residual(mt, sample_on_level(mt, 4), 0.3) < 1e-5);
  auto mh = make_mhat(gen_system(3, 2), 0.5);
  CHECK(riccati_residual(mh, sample_on_level(mh, 4), -0.2) < 1e-5);
}

TEST_CASE("generalized trigonometric functions") {
  for (double tau : {-2.0, 0.0, 0.5})
    for (double r : {0.0, 0.4, 1.3}) {
      const double h = 1e-5;
      CHECK(std::abs((gen_sin(tau, r + h) - gen_sin(tau, r - h)) / (2 * h) - gen_cos(tau, r)) < 1e-8);
      CHECK(std::abs((gen_cos(tau, r + h) - gen_cos(tau, r - h)) / (2 * h) - tau * gen_sin(tau, r)) < 1e-8);
    }
  CHECK(gen_sin(-1.0, 0.0) == 0.0);
  CHECK(gen_cos(3.0, 0.0) == 1.0);
}

TEST_CASE("focal distances") {
  auto mt = make_mt(3, 0.0);
  auto p = sample_on_level(mt, 0);
  auto fd = focal_distances(mt, p, 3.0, 0.02);
  REQUIRE(!fd.empty());
  CHECK(std::abs(fd.front() - kPi / (2 * kSqrt2)) < 1e-6);

  auto g = make_graph(3, 2.0, LightVec::from_direction(Vec::Unit(3, 0)), 0.3);
  auto q = sample_on_level(g, 0);
  CHECK(focal_distances(g, q, 10.0, 0.02).empty());
  CHECK(focal_distances(g, q, 10.0, 0.02, -1).empty());

  // Focal distances within one period are the riccati poles of all clusters,
  // spaced sqrt2 pi/(2g) apart.
  for (const auto& f : {make_mhat(gen_system(2, 2), 0.3), make_mt(4, 0.4), make_mtf(Field::H, 1, 0.6)}) {
    CAPTURE(f.describe());
    auto x = sample_on_level(f, 5);
    auto sp = principal_spectrum(f, x);
    auto poles = riccati_poles(sp.clusters);
    auto found = focal_distances(f, x, kSqrt2 * kPi - 1e-3, 0.02);
    REQUIRE(found.size() == poles.size());
    for (std::size_t i = 0; i < poles.size(); ++i) CHECK(std::abs(found[i] - poles[i]) < 1e-6);
    const double g_slices = poles.size() / 2.0;
    for (std::size_t i = 1; i < poles.size(); ++i)
      CHECK(std::abs(poles[i] - poles[i - 1] - kSqrt2 * kPi / (2 * g_slices)) < 1e-6);
    // First focal distance along +N plus along -N is one spacing.
    auto back = focal_distances(f, x, 5.0, 0.02, -1);
    CHECK(std::abs(found.front() + back.front() - kSqrt2 * kPi / (2 * g_slices)) < 1e-6);
  }
}

TEST_CASE("V-flow preserves slice spectra") {
  for (const auto& f : {make_mt(3, 0.3), make_mhat(gen_system(2, 3), 0.6),
                        make_graph(3, 0.5, LightVec::from_direction(Vec::Unit(3, 2)), -0.4)}) {
    CAPTURE(f.describe());
    auto p = sample_on_level(f, 3);
    CHECK(v_flow_isometry_check(f, p, 0.0).residual == 0.0);
    auto r = v_flow_isometry_check(f, p, 0.5);
    CHECK(r.residual < 1e-6);
    CHECK(r.on_level < 1e-10);
  }
}

TEST_CASE("jacobi determinant identity") {
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.9 * i / 49);
  for (const auto& f : {make_mt(3, 0.0), make_graph(3, 2.0, LightVec::from_direction(Vec::Unit(3, 0)), 0.2),
                        make_graph(2, -1.0, LightVec::from_direction(Vec::Unit(2, 1)), 0.0, -1)}) {
    CAPTURE(f.describe());
    auto p = sample_on_level(f, 7);
    auto rep = jacobi_determinant_check(f, p, grid);
    CHECK(rep.D0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.residual < 1e-5);
    CHECK(rep.points == 50);
    CHECK_FALSE(rep.truncated);
  }

  // The MHat grid runs past the first focal distance and is cut there.
  auto mh = make_mhat(gen_system(2, 2), 0.3);
  auto rep = jacobi_determinant_check(mh, sample_on_level(mh, 3), grid);
  CHECK(rep.truncated);
  CHECK(rep.first_focal > 0.0);
  CHECK(rep.residual < 1e-5);

  // The frame follows the appendix ordering: vertical, V, horizontal.
  auto mt = make_mt(3, 0.1);
  auto q = sample_on_level(mt, 2);
  auto M = jacobi_model(mt, q);
  REQUIRE(M.tau.size() == 5);
  CHECK(M.tau[2] == 0.0);
  CHECK(M.frame[0].v1.norm() == 0.0);
  CHECK(M.frame[4].v2.norm() == 0.0);
  CHECK((M.shape(0.0) - M.A).norm() < 1e-12);
}
