#include "isogeo/series.hpp"

#include "isogeo/clifford.hpp"
#include "isogeo/errors.hpp"

#include <cmath>
#include <numbers>

namespace isogeo {

namespace {

Rational R(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// x^2 csc^2 x = sum c_k x^{2k}; tan^2 x = sum t_k x^{2k}.
const std::vector<Rational>& csc2_table() {
  static const std::vector<Rational> t{R(1), R(1, 3), R(1, 15), R(2, 189), R(1, 675), R(2, 10395)};
  return t;
}

const std::vector<Rational>& tan2_table() {
  static const std::vector<Rational> t{R(0), R(1), R(2, 3), R(17, 45), R(62, 315)};
  return t;
}

Rational rpow(const Rational& x, int k) {
  Rational r = 1;
  if (k >= 0) {
    for (int i = 0; i < k; ++i) r *= x;
  } else {
    for (int i = 0; i < -k; ++i) r /= x;
  }
  return r;
}

// g^2 csc^2(g x) - g  (uniform) or the alternating sums, as series in x with
// x = s / C, given C^2.
LaurentPoly slice_sum(const SliceData& d, const Rational& c_sq, int order) {
  const Rational g(d.g);
  if (d.g == 1 || d.g == 3 || d.g == 6) {
    if (d.mult.size() != 1) throw UsageError("uniform slices take one multiplicity");
    LaurentPoly s = expand_sq(SeriesFn::csc2, c_sq / (g * g), order) * (g * g);
    return (s + Rational(-d.g)) * Rational(d.mult[0]);
  }
  if (d.mult.size() != 2) throw UsageError("g = 2, 4 slices take two multiplicities");
  const Rational m1(d.mult[0]), m2(d.mult[1]);
  if (d.g == 2) return expand_sq(SeriesFn::cot2, c_sq, order) * m1 + expand_sq(SeriesFn::tan2, c_sq, order) * m2;
  if (d.g == 4)
    return (expand_sq(SeriesFn::cot2, c_sq, order) + expand_sq(SeriesFn::tan2, c_sq, order)) * m1 +
           expand_sq(SeriesFn::cot2_shift_quarter_plus_tan2, c_sq, order) * m2;
  throw UsageError("g must be one of 1, 2, 3, 4, 6");
}

int slice_dim_from_mult(const SliceData& d) {
  if (d.mult.size() == 1) return d.g * d.mult[0] + 1;
  return (d.g / 2) * (d.mult[0] + d.mult[1]) + 1;
}

} // namespace

Rational LaurentPoly::coeff(int e) const {
  if (e >= order_) throw UsageError("coefficient beyond truncation order");
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::set(int e, const Rational& c) {
  if (e >= order_) return;
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

int LaurentPoly::min_exponent() const { return terms_.empty() ? order_ : terms_.begin()->first; }

double LaurentPoly::eval(double s) const {
  double acc = 0;
  for (const auto& [e, c] : terms_) acc += c.get_d() * std::pow(s, e);
  return acc;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  order_ = std::min(order_, o.order_);
  std::map<int, Rational> out;
  for (const auto& [e, c] : terms_)
    if (e < order_) out[e] += c;
  for (const auto& [e, c] : o.terms_)
    if (e < order_) out[e] += c;
  terms_.clear();
  for (auto& [e, c] : out)
    if (c != 0) terms_[e] = c;
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += o * Rational(-1); }

LaurentPoly& LaurentPoly::operator*=(const Rational& c) {
  if (c == 0) terms_.clear();
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

LaurentPoly operator+(LaurentPoly a, const Rational& c) {
  LaurentPoly k(a.order());
  k.set(0, c);
  return a += k;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r(std::min(a.order() + b.min_exponent(), b.order() + a.min_exponent()));
  std::map<int, Rational> acc;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      if (ea + eb < r.order()) acc[ea + eb] += ca * cb;
  for (auto& [e, c] : acc) r.set(e, c);
  return r;
}

SeriesFn parse_series_fn(const std::string& name) {
  if (name == "csc2") return SeriesFn::csc2;
  if (name == "cot2") return SeriesFn::cot2;
  if (name == "tan2") return SeriesFn::tan2;
  if (name == "cot2_shift_quarter_plus_tan2") return SeriesFn::cot2_shift_quarter_plus_tan2;
  throw UsageError("unsupported series function '" + name + "'");
}

LaurentPoly expand_sq(SeriesFn fn, const Rational& scale_sq, int order) {
  if (order > kMaxSeriesOrder) throw UsageError("series order must be <= 8");
  if (scale_sq <= 0) throw UsageError("series scale must be nonzero");
  LaurentPoly out(order);
  // Coefficient of x^e becomes coefficient of s^e divided by scale^e.
  auto put = [&](int e, const Rational& c) { out.set(e, c * rpow(scale_sq, -e / 2)); };
  const auto& cs = csc2_table();
  const auto& ts = tan2_table();
  switch (fn) {
  case SeriesFn::csc2:
  case SeriesFn::cot2:
    for (std::size_t k = 0; k < cs.size(); ++k) {
      Rational c = cs[k];
      if (k == 1 && fn == SeriesFn::cot2) c -= 1;
      put(2 * static_cast<int>(k) - 2, c);
    }
    break;
  case SeriesFn::tan2:
    for (std::size_t k = 0; k < ts.size(); ++k) put(2 * static_cast<int>(k), ts[k]);
    break;
  case SeriesFn::cot2_shift_quarter_plus_tan2:
    // cot^2(x + pi/4) + tan^2(x + pi/4) = 2 + 4 tan^2(2x)
    for (std::size_t k = 0; k < ts.size(); ++k) {
      Rational c = ts[k] * Rational(4) * rpow(Rational(4), static_cast<int>(k));
      if (k == 0) c += 2;
      put(2 * static_cast<int>(k), c);
    }
    break;
  }
  return out;
}

LaurentPoly expand(SeriesFn fn, const Rational& scale, int order) {
  if (scale == 0) throw UsageError("series scale must be nonzero");
  return expand_sq(fn, scale * scale, order);
}

double direct_eval(SeriesFn fn, double x) {
  switch (fn) {
  case SeriesFn::csc2:
    return 1 / (std::sin(x) * std::sin(x));
  case SeriesFn::cot2:
    return 1 / (std::tan(x) * std::tan(x));
  case SeriesFn::tan2:
    return std::tan(x) * std::tan(x);
  case SeriesFn::cot2_shift_quarter_plus_tan2: {
    double y = x + std::numbers::pi / 4;
    return 1 / (std::tan(y) * std::tan(y)) + std::tan(y) * std::tan(y);
  }
  }
  return 0;
}

double cot_sum_identity_check(int g, const std::vector<double>& xs) {
  if (g < 1) throw UsageError("g must be >= 1");
  double worst = 0;
  for (double x : xs) {
    double lhs = 0;
    for (int j = 0; j < g; ++j) {
      double c = 1 / std::tan(x + j * std::numbers::pi / g);
      lhs += c * c;
    }
    double s = std::sin(g * x);
    double rhs = g * g / (s * s) - g;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::set<Rational> rational_roots(const std::vector<Rational>& poly) {
  std::vector<Rational> p = poly;
  while (!p.empty() && p.back() == 0) p.pop_back();
  std::set<Rational> out;
  if (p.size() < 2) return out;
  for (const auto& c : p)
    if (c.get_den() != 1) throw UsageError("rational_roots expects integer coefficients");
  std::size_t shift = 0;
  while (p[shift] == 0) ++shift;
  if (shift > 0) out.insert(Rational(0));
  auto divisors = [](mpz_class v) {
    v = abs(v);
    std::vector<mpz_class> d;
    for (mpz_class i = 1; i * i <= v; ++i)
      if (v % i == 0) {
        d.push_back(i);
        if (i * i != v) d.push_back(v / i);
      }
    return d;
  };
  auto num = divisors(p[shift].get_num()), den = divisors(p.back().get_num());
  for (const auto& a : num)
    for (const auto& b : den)
      for (int sg : {1, -1}) {
        Rational x(sg * a, b);
        x.canonicalize();
        Rational v = 0;
        for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
        if (v == 0) out.insert(x);
      }
  return out;
}

KappaReport kappa_roots(KappaCase c) {
  KappaReport rep;
  if (c == KappaCase::g2_case4) {
    rep.cubic = {R(16), R(0), R(-21), R(5)};
    // (kappa^3 + 62)/(kappa^2 + 14) = 63/15, i.e. 15(kappa^3 + 62) - 63(kappa^2 + 14) = 0.
    std::vector<Rational> derived{R(15 * 62 - 63 * 14), R(0), R(-63), R(15)};
    Rational g = 3;
    for (auto& v : derived) v /= g;
    rep.derived_from_system = derived == rep.cubic;
  } else {
    rep.cubic = {R(1024), R(0), R(-84), R(5)};
    rep.derived_from_system = false;  // the reduction is not reproducible from the stated system
  }
  rep.roots = rational_roots(rep.cubic);
  if (rep.roots.size() == 3) {
    std::vector<Rational> prod{rep.cubic.back()};
    for (const auto& r : rep.roots) prod = poly_mul(prod, {-r, R(1)});
    rep.factorization_exact = prod == rep.cubic;
  }
  return rep;
}

RigidityReport rigidity_series_residual(const SliceData& a, const SliceData& b, const Rational& C, int order) {
  if (!(C > -1 && C < 1)) throw UsageError("C must lie in (-1, 1)");
  const Rational c1sq = (1 + C) / 2, c2sq = (1 - C) / 2;
  RigidityReport rep;
  rep.dims_consistent = slice_dim_from_mult(a) == a.dim && slice_dim_from_mult(b) == b.dim;
  // Pole sets coincide iff C1/g1 = C2/g2.
  rep.commensurable = c1sq * Rational(b.g * b.g) == c2sq * Rational(a.g * a.g);
  const Rational wl = (1 - C) * (1 - C) * c1sq, wr = (1 + C) * (1 + C) * c2sq;
  rep.lhs = (slice_sum(a, c1sq, order) + Rational(a.dim - 1)) * wl;
  rep.rhs = (slice_sum(b, c2sq, order) + Rational(b.dim - 1)) * wr;
  LaurentPoly d = rep.lhs - rep.rhs;
  rep.vanishes = true;
  for (int e = -2; e < d.order(); e += 2) {
    Rational v = d.coeff(e);
    rep.diffs.emplace_back(e, v);
    if (v != 0) rep.vanishes = false;
  }
  return rep;
}

std::vector<OtfkmEntry> enumerate_otfkm_multiplicities(int bound_l) {
  if (bound_l < 2) throw UsageError("bound_l must be >= 2");
  std::vector<OtfkmEntry> out;
  for (int p = 1;; ++p) {
    const int d = delta(p);
    if (d > bound_l) break;
    for (int k = 1; k * d <= bound_l; ++k) {
      const int l = k * d, m2 = l - p - 1;
      if (m2 >= 1) out.push_back({p, k, l, p, m2});
    }
  }
  return out;
}

} // namespace isogeo
