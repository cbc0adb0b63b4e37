#include <doctest.h>

#include "isogeo/errors.hpp"
#include "isogeo/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace isogeo;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Bernoulli numbers B_0..B_n from sum_{k<m+1} C(m+1,k) B_k = 0.
std::vector<Rational> bernoulli(int n) {
  std::vector<Rational> B(n + 1);
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rational s = 0;
    mpz_class binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      s += Rational(binom) * B[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    B[m] = -s / Rational(m + 1);
  }
  return B;
}

// cot x = sum_n (-1)^n 2^{2n} B_{2n} x^{2n-1} / (2n)!, returned by exponent.
std::map<int, Rational> cot_series(int terms) {
  auto B = bernoulli(2 * terms);
  std::map<int, Rational> out;
  mpz_class fact = 1;
  for (int n = 0; n < terms; ++n) {
    if (n > 0) fact *= (2 * n - 1) * (2 * n);
    Rational c = B[2 * n] * Rational(mpz_class(1) << (2 * n)) / Rational(fact);
    if (n % 2 == 1) c = -c;
    out[2 * n - 1] = c;
  }
  return out;
}

} // namespace

TEST_CASE("laurent arithmetic") {
  LaurentPoly a(4), b(3);
  a.set(-2, q(1));
  a.set(0, q(1, 3));
  a.set(5, q(9));  // beyond truncation, dropped
  b.set(0, q(2));
  b.set(2, q(-1));
  CHECK(a.terms().size() == 2);
  auto c = a + b;
  CHECK(c.order() == 3);
  CHECK(c.coeff(0) == q(7, 3));
  CHECK_THROWS_AS(c.coeff(3), UsageError);
  auto p = a * b;  // order min(4 + 0, 3 - 2) = 1
  CHECK(p.order() == 1);
  CHECK(p.coeff(-2) == q(2));
  CHECK(p.coeff(0) == q(2, 3) - 1);
}

TEST_CASE("expansions") {
  auto c = expand(SeriesFn::csc2, q(1), 5);
  CHECK(c.coeff(-2) == q(1));
  CHECK(c.coeff(0) == q(1, 3));
  CHECK(c.coeff(2) == q(1, 15));
  CHECK(c.coeff(4) == q(2, 189));
  CHECK(expand(SeriesFn::tan2, q(1), 4).coeff(0) == 0);
  CHECK(expand(SeriesFn::cot2_shift_quarter_plus_tan2, q(1), 2).coeff(0) == 2);
  CHECK_THROWS_AS(expand(SeriesFn::csc2, q(1), 9), UsageError);
  CHECK_THROWS_AS(parse_series_fn("sec2"), UsageError);

  // Second derivation from Bernoulli numbers: csc^2 = -(cot)', tan = cot - 2 cot(2x).
  auto cot = cot_series(6);
  auto full = expand(SeriesFn::csc2, q(1), 8);
  for (const auto& [e, v] : cot)
    if (e - 1 < 8) CHECK(full.coeff(e - 1) == -v * Rational(e));
  std::map<int, Rational> tan;
  for (const auto& [e, v] : cot) {
    Rational t = v * (1 - Rational(mpz_class(1) << (e + 1)));  // cot x - 2 cot 2x
    if (t != 0) tan[e] = t;
  }
  // tan^2 = sec^2 - 1 = tan' - 1.
  auto t2 = expand(SeriesFn::tan2, q(1), 8);
  for (const auto& [e, v] : tan)
    if (e - 1 < 8 && e - 1 > 0) CHECK(t2.coeff(e - 1) == v * Rational(e));

  // cot^2 x + tan^2 x = 4 csc^2(2x) - 2.
  auto lhs = expand(SeriesFn::cot2, q(1), 8) + expand(SeriesFn::tan2, q(1), 8);
  auto rhs = expand(SeriesFn::csc2, q(1, 2), 8) * q(4) + q(-2);
  CHECK(lhs.terms() == rhs.terms());

  // Numeric agreement with direct evaluation, including a scaled argument.
  for (auto fn : {SeriesFn::csc2, SeriesFn::cot2, SeriesFn::tan2, SeriesFn::cot2_shift_quarter_plus_tan2})
    for (double s : {0.01, -0.007, 0.003}) {
      double d1 = direct_eval(fn, s), d2 = direct_eval(fn, s * 1.5);
      CHECK(std::abs(expand(fn, q(1), 8).eval(s) - d1) < 1e-12 * std::max(1.0, std::abs(d1)));
      CHECK(std::abs(expand(fn, q(2, 3), 8).eval(s) - d2) < 1e-12 * std::max(1.0, std::abs(d2)));
    }
}

TEST_CASE("cot sum identity") {
  CHECK(cot_sum_identity_check(1, {0.3, 1.1}) < 1e-14);
  CHECK(cot_sum_identity_check(2, {std::numbers::pi / 6}) < 1e-13);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.05, 0.45);
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(u(rng));
  for (int g : {1, 2, 3, 4, 6}) CHECK(cot_sum_identity_check(g, xs) < 1e-10);
}

TEST_CASE("kappa cubics") {
  auto a = kappa_roots(KappaCase::g2_case4);
  CHECK(a.roots == std::set<Rational>{q(1), q(4), q(-4, 5)});
  CHECK(a.factorization_exact);
  CHECK(a.derived_from_system);
  // (k-1)(k-4)(5k+4)
  CHECK(poly_mul(poly_mul({q(-1), q(1)}, {q(-4), q(1)}), {q(4), q(5)}) == a.cubic);

  auto b = kappa_roots(KappaCase::g4_case5);
  CHECK(b.roots == std::set<Rational>{q(4), q(16), q(-16, 5)});
  CHECK(b.factorization_exact);
  CHECK(rational_roots({q(2), q(0), q(1)}).empty());
}

TEST_CASE("rigidity series") {
  auto sym = rigidity_series_residual({3, 7, {2}}, {3, 7, {2}}, q(0));
  CHECK(sym.vanishes);
  CHECK(sym.commensurable);
  CHECK(sym.dims_consistent);
  CHECK(rigidity_series_residual({4, 9, {1, 3}}, {4, 9, {1, 3}}, q(0)).vanishes);

  // Asymmetric sets that balance the identity exactly.
  const int l = 5;
  auto ii = rigidity_series_residual({1, l + 1, {l}}, {2, 2 * l + 1, {l, l}}, q(-3, 5));
  CHECK(ii.vanishes);
  CHECK(ii.commensurable);
  CHECK(ii.dims_consistent);
  CHECK(rigidity_series_residual({1, 6, {5}}, {4, 21, {5, 5}}, q(-15, 17)).vanishes);
  CHECK(rigidity_series_residual({2, 7, {2, 4}}, {4, 13, {2, 4}}, q(-3, 5)).vanishes);

  // Perturbing C breaks the constant term.
  auto pert = rigidity_series_residual({1, l + 1, {l}}, {2, 2 * l + 1, {l, l}}, q(-3, 5) + q(1, 100));
  CHECK_FALSE(pert.vanishes);
  CHECK_FALSE(pert.commensurable);
  auto c0 = std::find_if(pert.diffs.begin(), pert.diffs.end(), [](const auto& d) { return d.first == 0; });
  REQUIRE(c0 != pert.diffs.end());
  CHECK(c0->second != 0);

  // m = 2l - 3 leaves a constant-order mismatch.
  auto lit = rigidity_series_residual({1, l + 1, {l}}, {2, 2 * l - 3, {l, l - 4}}, q(-3, 5));
  CHECK(lit.dims_consistent);
  CHECK_FALSE(lit.vanishes);
  CHECK_THROWS_AS(rigidity_series_residual({5, 3, {1}}, {1, 3, {2}}, q(0)), UsageError);
  CHECK_THROWS_AS(rigidity_series_residual({1, 3, {2}}, {1, 3, {2}}, q(1)), UsageError);
}

TEST_CASE("OT-FKM multiplicities") {
  auto all = enumerate_otfkm_multiplicities(64);
  for (int k = 3; k <= 64; ++k) {
    bool found = std::any_of(all.begin(), all.end(),
                             [&](const OtfkmEntry& e) { return e.p == 1 && e.m1 == 1 && e.m2 == k - 2; });
    CHECK(found);
  }
  std::set<std::pair<int, int>> diff4;
  for (const auto& e : all)
    if (std::abs(e.m1 - e.m2) == 4) diff4.insert({std::min(e.m1, e.m2), std::max(e.m1, e.m2)});
  CHECK(diff4 == std::set<std::pair<int, int>>{{1, 5}});

  // Each (p, k) entry reappears at p + 8 with l scaled by 16.
  auto big = enumerate_otfkm_multiplicities(4096);
  for (const auto& e : big) {
    if (e.p > 8 || 16 * e.l > 4096) continue;
    CHECK(std::any_of(big.begin(), big.end(),
                      [&](const OtfkmEntry& f) { return f.p == e.p + 8 && f.k == e.k && f.l == 16 * e.l; }));
  }
  for (const auto& e : all) CHECK(e.m2 >= 1);
}
