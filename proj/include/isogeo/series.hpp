#pragma once

#include "isogeo/bipoly.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace isogeo {

// Truncated Laurent series in s; coefficients at exponents >= order are
// unknown and never reported.
class LaurentPoly {
public:
  explicit LaurentPoly(int order = 0) : order_(order) {}

  int order() const { return order_; }
  Rational coeff(int e) const;
  void set(int e, const Rational& c);
  const std::map<int, Rational>& terms() const { return terms_; }
  int min_exponent() const;  // order() when zero

  double eval(double s) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Rational& c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const Rational& c) { return a *= c; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator+(LaurentPoly a, const Rational& c);

private:
  int order_;
  std::map<int, Rational> terms_;
};

enum class SeriesFn { csc2, cot2, tan2, cot2_shift_quarter_plus_tan2 };
SeriesFn parse_series_fn(const std::string& name);

constexpr int kMaxSeriesOrder = 8;

// fn(s / scale) about s = 0 through exponent order - 1. All supported
// functions are even, so only scale^2 enters; expand_sq takes it directly.
LaurentPoly expand(SeriesFn fn, const Rational& scale, int order);
LaurentPoly expand_sq(SeriesFn fn, const Rational& scale_sq, int order);
double direct_eval(SeriesFn fn, double x);

// sum_j cot^2(x + j pi/g) against g^2 csc^2(g x) - g.
double cot_sum_identity_check(int g, const std::vector<double>& xs);

enum class KappaCase { g2_case4, g4_case5 };
struct KappaReport {
  std::vector<Rational> cubic;  // ascending coefficients
  std::set<Rational> roots;
  bool derived_from_system = false;  // cubic follows from the stated ratio
  bool factorization_exact = false;
};
KappaReport kappa_roots(KappaCase c);
// Rational roots of an integer-coefficient polynomial (ascending).
std::set<Rational> rational_roots(const std::vector<Rational>& poly);
std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b);

// Slice data for one factor: g distinct curvatures on S^dim with
// multiplicities {m} (g in 1, 3, 6) or {m1, m2} alternating (g in 2, 4).
struct SliceData {
  int g = 1;
  int dim = 2;
  std::vector<int> mult;
};

struct RigidityReport {
  std::vector<std::pair<int, Rational>> diffs;  // (exponent, LHS - RHS)
  LaurentPoly lhs, rhs;
  bool commensurable = false;  // pole sets (C1 pi/g1) Z and (C2 pi/g2) Z agree
  bool dims_consistent = false;
  bool vanishes = false;
};

// Both sides of the rigidity identity with slice curvatures cot(s/C_i + j pi/g_i)
// and C1^2 = (1+C)/2, C2^2 = (1-C)/2.
RigidityReport rigidity_series_residual(const SliceData& a, const SliceData& b, const Rational& C, int order = 6);

struct OtfkmEntry {
  int p, k, l, m1, m2;
};
std::vector<OtfkmEntry> enumerate_otfkm_multiplicities(int bound_l);

} // namespace isogeo
