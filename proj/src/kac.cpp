#include "isogeo/kac.hpp"

#include "isogeo/errors.hpp"
#include "isogeo/spaceforms.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace isogeo {

namespace {

BiPoly tau_var(int which) {
  if (which == 1) return BiPoly::var1();
  if (which == 2) return BiPoly::var2();
  throw UsageError("which_tau must be 1 or 2");
}

std::string mn_instance(int m, int n) { return "m=" + std::to_string(m) + ",n=" + std::to_string(n); }

Rational factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(f);
}

Rational rpow(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// One vector spanning the null space; throws unless the nullity is one.
std::vector<Rational> null_vector(RatMatrix M) {
  const int R = M.rows, Cn = M.cols;
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < Cn && r < R; ++c) {
    int piv = -1;
    for (int i = r; i < R; ++i)
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < Cn; ++j) std::swap(M(r, j), M(piv, j));
    Rational inv = 1 / M(r, c);
    for (int j = 0; j < Cn; ++j) M(r, j) *= inv;
    for (int i = 0; i < R; ++i) {
      if (i == r || M(i, c) == 0) continue;
      Rational f = M(i, c);
      for (int j = 0; j < Cn; ++j) M(i, j) -= f * M(r, j);
    }
    pivcol.push_back(c);
    ++r;
  }
  if (Cn - r != 1) throw NumericalFailure("expected a one-dimensional null space");
  int free_col = 0;
  while (std::find(pivcol.begin(), pivcol.end(), free_col) != pivcol.end()) ++free_col;
  std::vector<Rational> v(static_cast<std::size_t>(Cn), Rational(0));
  v[free_col] = 1;
  for (int i = 0; i < r; ++i) v[pivcol[i]] = -M(i, free_col);
  return v;
}

RatMatrix rows_to_matrix(const std::vector<std::vector<Rational>>& rows) {
  RatMatrix M(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) M(i, j) = rows[i][j];
  return M;
}

RatMatrix select_columns(const RatMatrix& M, const std::vector<int>& cols) {
  RatMatrix out(M.rows, static_cast<int>(cols.size()));
  for (int i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, static_cast<int>(j)) = M(i, cols[j]);
  return out;
}

Rational random_rational(std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

Rational random_nonzero(std::mt19937_64& rng) {
  Rational r;
  do r = random_rational(rng);
  while (r == 0);
  return r;
}

// a sqrt(t_a) == b sqrt(t_b) for integers a, b and rational t (sqrt of a
// negative number taken on the positive imaginary axis).
bool scaled_roots_equal(long a, const Rational& ta, long b, const Rational& tb) {
  const bool lhs_zero = a == 0 || ta == 0, rhs_zero = b == 0 || tb == 0;
  if (lhs_zero || rhs_zero) return lhs_zero && rhs_zero;
  if (sgn(ta) != sgn(tb)) return false;
  if ((a > 0) != (b > 0)) return false;
  return Rational(a * a) * abs(ta) == Rational(b * b) * abs(tb);
}

} // namespace

PolyMatrix kac_matrix(int d, int which_tau) {
  if (d < 1) throw UsageError("kac_matrix: d must be >= 1");
  BiPoly t = tau_var(which_tau);
  PolyMatrix K(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    K(i, i + 1) = BiPoly(i + 1);
    K(i + 1, i) = t * Rational(d - 1 - i);
  }
  return K;
}

bool kac_charpoly_check(int d) {
  // Matrix in tau (slot 2); the characteristic variable x takes slot 1.
  auto c = charpoly(kac_matrix(d, 2));
  BiPoly lhs;
  for (int i = 0; i <= d; ++i)
    for (const auto& [key, v] : c[i].terms()) lhs += BiPoly::monomial(v, d - i + key.first, key.second);
  BiPoly rhs(1);
  const BiPoly x = BiPoly::var1(), tau = BiPoly::var2();
  for (int l = 0; 2 * l < d - 1; ++l) rhs *= x * x - tau * Rational((d - 1 - 2 * l) * (d - 1 - 2 * l));
  if (d % 2 == 1) rhs *= x;
  return lhs == rhs;
}

PolyMatrix kronecker_sum(int m, int n) {
  if (m < 1 || n < 1) throw UsageError("kronecker_sum: m, n must be >= 1");
  return kron(PolyMatrix::identity(m), kac_matrix(n, 1)) + kron(kac_matrix(m, 2), PolyMatrix::identity(n));
}

PolyMatrix build_Q(int m, int n) {
  PolyMatrix K = kronecker_sum(m, n);
  const int d = K.rows;
  PolyMatrix Q(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Q(i, j) = K(i, j);
      Q(d + i, d + j) = K(i, j);
    }
    Q(i, d + i) = BiPoly(1);
  }
  return Q;
}

CoeffTable CoeffTable::zeros(int m, int n, int kmax) {
  if (m < 1 || n < 1 || kmax < 0) throw UsageError("coefficient table: bad dimensions");
  CoeffTable t;
  t.m = m;
  t.n = n;
  t.kmax = kmax;
  const auto size = static_cast<std::size_t>(kmax + 1) * m * n;
  t.first.assign(size, BiPoly());
  t.second.assign(size, BiPoly());
  return t;
}

std::vector<BiPoly> CoeffTable::row(int k) const {
  std::vector<BiPoly> r;
  r.reserve(static_cast<std::size_t>(2 * m * n));
  for (int l = 0; l < m; ++l)
    for (int v = 0; v < n; ++v) r.push_back(a(l, v, k));
  for (int l = 0; l < m; ++l)
    for (int v = 0; v < n; ++v) r.push_back(b(l, v, k));
  return r;
}

CoeffTable run_recurrence_ab(int m, int n, int kmax, const CoeffTable& init) {
  if (init.m != m || init.n != n) throw UsageError("initial table has the wrong shape");
  CoeffTable t = CoeffTable::zeros(m, n, kmax);
  for (int l = 0; l < m; ++l)
    for (int v = 0; v < n; ++v) {
      t.a(l, v, 0) = init.a(l, v, 0);
      t.b(l, v, 0) = init.b(l, v, 0);
    }
  const BiPoly t1 = BiPoly::var1(), t2 = BiPoly::var2();
  auto step = [&](auto get, int l, int v, int k) {
    BiPoly s;
    if (l + 1 < m) s += get(l + 1, v, k) * Rational(l + 1);
    if (l >= 1) s += t2 * get(l - 1, v, k) * Rational(m - l);
    if (v + 1 < n) s += get(l, v + 1, k) * Rational(v + 1);
    if (v >= 1) s += t1 * get(l, v - 1, k) * Rational(n - v);
    return s;
  };
  auto A = [&](int l, int v, int k) -> const BiPoly& { return t.a(l, v, k); };
  auto B = [&](int l, int v, int k) -> const BiPoly& { return t.b(l, v, k); };
  for (int k = 0; k < kmax; ++k)
    for (int l = 0; l < m; ++l)
      for (int v = 0; v < n; ++v) {
        t.a(l, v, k + 1) = t.b(l, v, k) + step(A, l, v, k);
        t.b(l, v, k + 1) = step(B, l, v, k);
      }
  return t;
}

CoeffTable run_recurrence_pq(int m, int n, int kmax, PQMutation mut) {
  CoeffTable t = CoeffTable::zeros(m, n, kmax);
  t.a(0, 0, 0) = BiPoly(1);
  const BiPoly t1 = BiPoly::var1(), t2 = BiPoly::var2();
  auto step = [&](auto get, int l, int v, int k) {
    BiPoly s;
    if (l >= 1) s += get(l - 1, v, k) * Rational(l);
    if (mut == PQMutation::shift_index) {
      s += t2 * get(l, v, k) * Rational(m - l - 1);
    } else if (l + 1 < m) {
      s += t2 * get(l + 1, v, k) * Rational(m - l - 1);
    }
    if (v >= 1) s += get(l, v - 1, k) * Rational(v);
    if (v + 1 < n && mut != PQMutation::drop_tau1_term) s += t1 * get(l, v + 1, k) * Rational(n - v - 1);
    return s;
  };
  auto P = [&](int l, int v, int k) -> const BiPoly& { return t.a(l, v, k); };
  auto Qf = [&](int l, int v, int k) -> const BiPoly& { return t.b(l, v, k); };
  for (int k = 0; k < kmax; ++k)
    for (int l = 0; l < m; ++l)
      for (int v = 0; v < n; ++v) {
        t.a(l, v, k + 1) = step(P, l, v, k);
        t.b(l, v, k + 1) = t.a(l, v, k) + step(Qf, l, v, k);
      }
  return t;
}

std::vector<std::vector<BiPoly>> q_power_rows(int m, int n, int kmax) {
  PolyMatrix Q = build_Q(m, n);
  std::vector<BiPoly> row(static_cast<std::size_t>(Q.rows));
  row[0] = BiPoly(1);
  std::vector<std::vector<BiPoly>> out{row};
  for (int k = 1; k <= kmax; ++k) out.push_back(row = row_times(row, Q));
  return out;
}

std::vector<Rational> interpolate_1d(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const int G = static_cast<int>(xs.size());
  if (G == 0 || ys.size() != xs.size()) throw UsageError("interpolation needs matching, nonempty samples");
  // Vandermonde solve by Gauss-Jordan; G is tiny.
  RatMatrix V(G, G + 1);
  for (int i = 0; i < G; ++i) {
    Rational p = 1;
    for (int j = 0; j < G; ++j) {
      V(i, j) = p;
      p *= xs[i];
    }
    V(i, G) = ys[i];
  }
  for (int c = 0; c < G; ++c) {
    int piv = c;
    while (piv < G && V(piv, c) == 0) ++piv;
    if (piv == G) throw UsageError("interpolation nodes must be distinct");
    for (int j = 0; j <= G; ++j) std::swap(V(c, j), V(piv, j));
    Rational inv = 1 / V(c, c);
    for (int j = 0; j <= G; ++j) V(c, j) *= inv;
    for (int i = 0; i < G; ++i) {
      if (i == c || V(i, c) == 0) continue;
      Rational f = V(i, c);
      for (int j = 0; j <= G; ++j) V(i, j) -= f * V(c, j);
    }
  }
  std::vector<Rational> out(static_cast<std::size_t>(G));
  for (int i = 0; i < G; ++i) out[i] = V(i, G);
  return out;
}

std::vector<ExactCheck> verify_prop62(int m, int n, int kmax, int kdeg_max, PQMutation mut) {
  if (m < 1 || n < 1 || kmax < 0) throw UsageError("verify_prop62: bad dimensions");
  const std::string inst = mn_instance(m, n) + ",kmax=" + std::to_string(kmax);
  CoeffTable t = run_recurrence_pq(m, n, kmax, mut);

  ExactCheck parity{"kac.pq_parity", inst, true, ""};
  ExactCheck fact{"kac.pq_factorial", inst, true, ""};
  auto cell = [](const char* w, int l, int v, int k) {
    std::ostringstream os;
    os << w << "(" << l << "," << v << "," << k << ")";
    return os.str();
  };
  for (int k = 0; k <= kmax && parity.pass; ++k)
    for (int l = 0; l < m && parity.pass; ++l)
      for (int v = 0; v < n && parity.pass; ++v)
        for (int i = 1; i <= 2 && parity.pass; ++i) {
          const BiPoly& x = i == 1 ? t.a(l, v, k) : t.b(l, v, k);
          const int twice_s = k - l - v - i + 1;
          bool ok = (twice_s < 0 || twice_s % 2 != 0) ? x.is_zero() : x.homogeneous(twice_s / 2);
          if (!ok) {
            parity.pass = false;
            parity.witness = cell(i == 1 ? "p" : "q", l, v, k) + " = " + x.str();
          }
        }
  for (int l = 0; l < m && fact.pass; ++l)
    for (int v = 0; v < n && fact.pass; ++v) {
      if (l + v <= kmax && t.a(l, v, l + v) != BiPoly(factorial(l + v))) {
        fact.pass = false;
        fact.witness = cell("p", l, v, l + v) + " = " + t.a(l, v, l + v).str();
      }
      if (fact.pass && l + v + 1 <= kmax && t.b(l, v, l + v + 1) != BiPoly(factorial(l + v + 1))) {
        fact.pass = false;
        fact.witness = cell("q", l, v, l + v + 1) + " = " + t.b(l, v, l + v + 1).str();
      }
    }
  if (parity.pass) parity.witness = "all entries vanish or are homogeneous of degree s_i";
  if (fact.pass) fact.witness = "sigma = k! wherever s_i = 0";

  // Leading term of sigma(n, m): total degree s with positive coefficient on
  // n^iota m^(s - iota). The per-variable reading (degree >= s in both n and
  // m) is tallied in the witness.
  const int kd = std::min(kmax, kdeg_max);
  const int smax = std::max(0, kd / 2);
  const int G = smax + 2;
  ExactCheck lead{"kac.pq_leading_term", inst + ",k<=" + std::to_string(kd) + ",grid=" + std::to_string(G) + "x" +
                                             std::to_string(G),
                  true, ""};
  std::vector<Rational> ns, ms;
  for (int g = 0; g < G; ++g) {
    ns.emplace_back(n + g);
    ms.emplace_back(m + g);
  }
  std::vector<CoeffTable> grid;  // index gn * G + gm
  for (int gn = 0; gn < G; ++gn)
    for (int gm = 0; gm < G; ++gm)
      grid.push_back(run_recurrence_pq(m + gm, n + gn, std::max(kd, 0), mut));

  int checked = 0, literal_fail = 0;
  std::string literal_example;
  for (int k = 2; k <= kd && lead.pass; ++k)
    for (int l = 0; l < m && lead.pass; ++l)
      for (int v = 0; v < n && lead.pass; ++v)
        for (int i = 1; i <= 2 && lead.pass; ++i) {
          const int twice_s = k - l - v - i + 1;
          if (twice_s <= 0 || twice_s % 2 != 0) continue;
          const int s = twice_s / 2;
          for (int iota = 0; iota <= s && lead.pass; ++iota) {
            // c[a][b]: coefficient of n^a m^b.
            std::vector<std::vector<Rational>> W(G);
            for (int gn = 0; gn < G; ++gn) {
              std::vector<Rational> ys;
              for (int gm = 0; gm < G; ++gm) {
                const CoeffTable& T = grid[gn * G + gm];
                ys.push_back((i == 1 ? T.a(l, v, k) : T.b(l, v, k)).coeff(iota, s - iota));
              }
              W[gn] = interpolate_1d(ms, ys);
            }
            std::vector<std::vector<Rational>> c(G, std::vector<Rational>(G));
            for (int bdeg = 0; bdeg < G; ++bdeg) {
              std::vector<Rational> ys;
              for (int gn = 0; gn < G; ++gn) ys.push_back(W[gn][bdeg]);
              auto col = interpolate_1d(ns, ys);
              for (int adeg = 0; adeg < G; ++adeg) c[adeg][bdeg] = col[adeg];
            }
            int total = -1, dn = -1, dm = -1;
            bool top_clear = true;
            for (int a = 0; a < G; ++a)
              for (int b = 0; b < G; ++b) {
                if (c[a][b] == 0) continue;
                total = std::max(total, a + b);
                dn = std::max(dn, a);
                dm = std::max(dm, b);
                if (a == G - 1 || b == G - 1) top_clear = false;
              }
            ++checked;
            std::ostringstream where;
            where << (i == 1 ? "sigma1" : "sigma2") << "(l=" << l << ",nu=" << v << ",k=" << k << ",iota=" << iota
                  << ")";
            if (!top_clear) {
              lead.pass = false;
              lead.witness = where.str() + ": grid too small to certify the degree";
            } else if (total != s || c[iota][s - iota] <= 0) {
              lead.pass = false;
              lead.witness = where.str() + ": total degree " + std::to_string(total) + ", coefficient of n^" +
                             std::to_string(iota) + " m^" + std::to_string(s - iota) + " = " +
                             to_string(c[iota][s - iota]);
            }
            if (dn < s || dm < s) {
              if (literal_fail == 0) {
                literal_example = where.str() + " has degree " + std::to_string(dn) + " in n, " +
                                  std::to_string(dm) + " in m, s=" + std::to_string(s);
              }
              ++literal_fail;
            }
          }
        }
  if (lead.pass) {
    std::ostringstream os;
    os << checked << " coefficient polynomials have total degree s with positive n^iota m^(s-iota) term";
    if (literal_fail > 0)
      os << "; per-variable bound deg >= s in both n and m fails for " << literal_fail << " of them, e.g. "
         << literal_example;
    else if (checked > 0)
      os << "; per-variable bound holds for all";
    lead.witness = os.str();
  }
  return {parity, fact, lead};
}

AngleSets exceptional_angles(int m, int n) {
  if (m < 1 || n < 1) throw UsageError("exceptional_angles: m, n must be >= 1");
  AngleSets out;
  auto add = [](std::set<Rational>& s, long num, long den) {
    if (den == 0) return;
    Rational c(num, den);
    c.canonicalize();
    if (abs(c) < 1) s.insert(c);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      long r = m - 1 - 2 * i, s = n - 1 - 2 * j;
      add(out.singular, r * r - s * s, r * r + s * s);
    }
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          long di = i - k, dj = j - l;
          add(out.nonsimple, di * di - dj * dj, di * di + dj * dj);
        }
  return out;
}

AngleSets exceptional_angles_printed(int m, int n) {
  AngleSets c = exceptional_angles(m, n);
  AngleSets out;
  for (const auto& v : c.singular) out.singular.insert(-v);
  for (const auto& v : c.nonsimple) out.nonsimple.insert(-v);
  return out;
}

Rational angle_tau1(const Rational& c1, const Rational& C) {
  Rational t = -c1 * (1 + C) / 2;
  t.canonicalize();
  return t;
}

Rational angle_tau2(const Rational& c2, const Rational& C) {
  Rational t = -c2 * (1 - C) / 2;
  t.canonicalize();
  return t;
}

ExactCheck singular_angle_grid_check(int m, int n, int c1, int c2, int grid) {
  if (grid < 2) throw UsageError("grid must be >= 2");
  ExactCheck chk{"kac.singular_angles",
                 mn_instance(m, n) + ",c1=" + std::to_string(c1) + ",c2=" + std::to_string(c2), true, ""};
  const bool both_odd = m % 2 == 1 && n % 2 == 1;
  AngleSets sets = exceptional_angles(m, n);
  std::set<Rational> Cs(sets.singular.begin(), sets.singular.end());
  for (int a = -grid + 1; a < grid; ++a) {
    Rational C(a, grid);
    C.canonicalize();
    Cs.insert(C);
  }
  PolyMatrix Q = build_Q(m, n);
  int hits = 0;
  for (const auto& C : Cs) {
    Rational d = determinant(evaluate(Q, angle_tau1(c1, C), angle_tau2(c2, C)));
    bool singular = d == 0;
    bool predicted = both_odd || (c1 * c2 > 0 && sets.singular.count(C) > 0);
    hits += singular;
    if (singular != predicted) {
      chk.pass = false;
      chk.witness = "C=" + to_string(C) + ": det Q " + (singular ? "vanishes" : "is nonzero") +
                    " but the angle set predicts the opposite";
      return chk;
    }
  }
  chk.witness = std::to_string(Cs.size()) + " angles tested, " + std::to_string(hits) + " singular";
  return chk;
}

std::optional<std::string> genericity_violation(int m, int n, const Rational& tau1, const Rational& tau2) {
  const bool both_odd = m % 2 == 1 && n % 2 == 1;
  // lambda = r sqrt(tau2) + s sqrt(tau1)
  std::vector<std::pair<long, long>> rs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) rs.emplace_back(m - 1 - 2 * i, n - 1 - 2 * j);
  for (std::size_t a = 0; a < rs.size(); ++a) {
    auto [r, s] = rs[a];
    bool zero = scaled_roots_equal(r, tau2, -s, tau1);
    bool centre = r == 0 && s == 0;
    if (zero && !(both_odd && centre)) {
      return "eigenvalue (" + std::to_string(r) + ")sqrt(tau2) + (" + std::to_string(s) + ")sqrt(tau1) vanishes";
    }
    for (std::size_t b = a + 1; b < rs.size(); ++b) {
      auto [r2, s2] = rs[b];
      if (scaled_roots_equal(r - r2, tau2, s2 - s, tau1))
        return "eigenvalues for (r,s)=(" + std::to_string(r) + "," + std::to_string(s) + ") and (" +
               std::to_string(r2) + "," + std::to_string(s2) + ") coincide";
    }
  }
  return std::nullopt;
}

std::vector<Rational> kac_kernel(int d, const Rational& tau) {
  if (d < 1 || d % 2 == 0) throw UsageError("kac_kernel: d must be odd");
  // (i+1) x[i+1] + (d-i) tau x[i-1] = 0
  std::vector<Rational> x(static_cast<std::size_t>(d), Rational(0));
  x[0] = 1;
  for (int i = 1; i + 1 < d; ++i) {
    x[i + 1] = -Rational(d - i) * tau * x[i - 1] / Rational(i + 1);
    x[i + 1].canonicalize();
  }
  return x;
}

ExactCheck jordan_action_check(int m, int n, const Rational& a, const Rational& b, int kmax) {
  ExactCheck chk{"kac.jordan_action", mn_instance(m, n) + ",tau1=" + to_string(a * a) + ",tau2=" + to_string(b * b),
                 true, ""};
  const Rational t1 = a * a, t2 = b * b;
  RatMatrix Kn = evaluate(kac_matrix(n, 1), t1, t2), Km = evaluate(kac_matrix(m, 2), t1, t2);
  RatMatrix Q = evaluate(build_Q(m, n), t1, t2);
  // Left eigenvectors: null vectors of K^T - lambda I.
  auto left = [](const RatMatrix& K, const Rational& lam) {
    RatMatrix T(K.rows, K.cols);
    for (int i = 0; i < K.rows; ++i)
      for (int j = 0; j < K.cols; ++j) T(i, j) = K(j, i) - (i == j ? lam : Rational(0));
    return null_vector(T);
  };
  const int d = m * n;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      Rational li = Rational(m - 1 - 2 * i) * b, lj = Rational(n - 1 - 2 * j) * a;
      auto y = left(Km, li), x = left(Kn, lj);
      Rational lam = li + lj;
      std::vector<Rational> w(static_cast<std::size_t>(2 * d), Rational(0));
      for (int l = 0; l < m; ++l)
        for (int v = 0; v < n; ++v) w[l * n + v] = y[l] * x[v];
      std::vector<Rational> row = w;
      for (int k = 0; k <= kmax; ++k) {
        Rational c0 = rpow(lam, k), c1 = k == 0 ? Rational(0) : Rational(k) * rpow(lam, k - 1);
        for (int e = 0; e < d; ++e) {
          if (row[e] != c0 * w[e] || row[d + e] != c1 * w[e]) {
            chk.pass = false;
            chk.witness = "pair (" + std::to_string(i) + "," + std::to_string(j) + ") fails at k=" + std::to_string(k);
            return chk;
          }
        }
        row = row_times(row, Q);
      }
    }
  chk.witness = "all " + std::to_string(d) + " eigenpairs follow the Jordan action for k<=" + std::to_string(kmax);
  return chk;
}

ExactCheck chessboard_check(int m, int n, int lmax) {
  ExactCheck chk{"kac.chessboard", mn_instance(m, n) + ",l<=" + std::to_string(lmax), true, ""};
  PolyMatrix K = kronecker_sum(m, n);
  std::vector<BiPoly> row(static_cast<std::size_t>(m * n));
  row[0] = BiPoly(1);
  int zeros = 0;
  for (int l = 0; l <= lmax; ++l) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if ((i + j + l) % 2 == 1) {
          if (!row[i * n + j].is_zero()) {
            chk.pass = false;
            chk.witness = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") of e1 K^" + std::to_string(l) +
                          " is " + row[i * n + j].str();
            return chk;
          }
          ++zeros;
        }
    row = row_times(row, K);
  }
  chk.witness = std::to_string(zeros) + " odd-parity entries vanish";
  return chk;
}

ExactCheck detq_symbolic_check(int m, int n) {
  ExactCheck chk{"kac.detQ_symbolic", mn_instance(m, n), true, ""};
  BiPoly dk = determinant(kronecker_sum(m, n));
  BiPoly dq = determinant(build_Q(m, n));
  chk.pass = dq == dk * dk;
  chk.witness = "det K = " + dk.str();
  return chk;
}

ExactCheck detq_sampled_check(int m, int n, std::uint64_t seed, int samples) {
  ExactCheck chk{"kac.detQ_sampled", mn_instance(m, n) + ",samples=" + std::to_string(samples), true, ""};
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(m * 1000 + n)));
  PolyMatrix K = kronecker_sum(m, n), Q = build_Q(m, n);
  for (int s = 0; s < samples; ++s) {
    Rational t1 = random_rational(rng), t2 = random_rational(rng);
    Rational dk = determinant(evaluate(K, t1, t2)), dq = determinant(evaluate(Q, t1, t2));
    if (dq != dk * dk) {
      chk.pass = false;
      chk.witness = "det Q != (det K)^2 at tau1=" + to_string(t1) + ", tau2=" + to_string(t2);
      return chk;
    }
    // Product of eigenvalues at square arguments.
    Rational a = random_nonzero(rng), b = random_nonzero(rng);
    Rational prod = 1;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) prod *= Rational(m - 1 - 2 * i) * b + Rational(n - 1 - 2 * j) * a;
    Rational dsq = determinant(evaluate(K, a * a, b * b));
    if (dsq != prod) {
      chk.pass = false;
      chk.witness = "det K != prod lambda_ij at a=" + to_string(a) + ", b=" + to_string(b);
      return chk;
    }
  }
  chk.witness = "det Q = (det K)^2 and det K = prod lambda_ij at all samples";
  return chk;
}

ExactCheck pq_matrix_power_check(int m, int n, int kmax) {
  ExactCheck chk{"kac.pq_matrix_power", mn_instance(m, n) + ",k<=" + std::to_string(kmax), true, ""};
  CoeffTable t = run_recurrence_pq(m, n, kmax);
  auto rows = q_power_rows(m, n, kmax);
  for (int k = 0; k <= kmax; ++k)
    if (t.row(k) != rows[k]) {
      chk.pass = false;
      chk.witness = "(p,q) at step " + std::to_string(k) + " differs from e1 Q^" + std::to_string(k);
      return chk;
    }
  chk.witness = "(p,q) at step k equals e1 Q^k for every k<=" + std::to_string(kmax);
  return chk;
}

ExactCheck ab_pq_equivalence_check(int m, int n, int kmax, std::uint64_t seed) {
  ExactCheck chk{"kac.ab_pq_equivalence", mn_instance(m, n) + ",k<=" + std::to_string(kmax), true, ""};
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(m * 1000 + n)));
  CoeffTable init = CoeffTable::zeros(m, n, 0);
  for (auto& v : init.first) v = BiPoly(random_rational(rng));
  for (auto& v : init.second) v = BiPoly(random_rational(rng));
  CoeffTable ab = run_recurrence_ab(m, n, kmax, init);
  CoeffTable pq = run_recurrence_pq(m, n, kmax);
  for (int k = 0; k <= kmax; ++k) {
    BiPoly s;
    for (int l = 0; l < m; ++l)
      for (int v = 0; v < n; ++v) s += pq.a(l, v, k) * init.a(l, v, 0) + pq.b(l, v, k) * init.b(l, v, 0);
    if (s != ab.a(0, 0, k)) {
      chk.pass = false;
      chk.witness = "alpha_{0,0," + std::to_string(k) + "} disagrees with the (p,q) combination";
      return chk;
    }
  }
  chk.witness = "alpha_{0,0,k} matches for every k<=" + std::to_string(kmax);
  return chk;
}

std::vector<ExactCheck> kac_rank_checks(int m, int n, int s, const Rational& tau1, const Rational& tau2) {
  if (m < 1 || n < 1) throw UsageError("rank checks: m, n must be >= 1");
  if (s < 0) throw UsageError("rank checks: s must be >= 0");
  if (auto why = genericity_violation(m, n, tau1, tau2)) throw UsageError("non-generic (tau1, tau2): " + *why);
  const bool both_odd = m % 2 == 1 && n % 2 == 1;
  const int d = m * n, D = 2 * d;
  if (both_odd && s < D) throw UsageError("rank checks: s must be >= 2mn when m and n are odd");

  const std::string inst = mn_instance(m, n) + ",s=" + std::to_string(s) + ",tau1=" + to_string(tau1) +
                           ",tau2=" + to_string(tau2);
  RatMatrix Q = evaluate(build_Q(m, n), tau1, tau2);
  const int kmax = both_odd ? s : s + D - 1;
  std::vector<std::vector<Rational>> pw;
  std::vector<Rational> row(static_cast<std::size_t>(D), Rational(0));
  row[0] = 1;
  for (int k = 0; k <= kmax; ++k) {
    pw.push_back(row);
    row = row_times(row, Q);
  }

  std::vector<ExactCheck> out;
  auto rank_check = [&](const std::string& name, const std::vector<int>& ks, int expect) {
    std::vector<std::vector<Rational>> rows;
    for (int k : ks) rows.push_back(pw[k]);
    int r = rank(rows_to_matrix(rows));
    out.push_back({name, inst, r == expect,
                   "rank " + std::to_string(r) + " of " + std::to_string(ks.size()) + " rows, expected " +
                       std::to_string(expect)});
  };

  if (!both_odd) {
    std::vector<int> ks;
    for (int k = s; k < s + D; ++k) ks.push_back(k);
    rank_check("kac.rank_even", ks, D);
  } else {
    std::vector<int> lam;
    for (int k = 2; k < D; ++k) lam.push_back(k);
    rank_check("kac.rank_lambda", lam, D - 2);
    std::vector<int> lam_s = lam;
    lam_s.push_back(s);
    rank_check("kac.rank_lambda_s", lam_s, D - 2);

    // Columns of the matrix with rows Lambda_s; 1-based column alpha is
    // 0-based index alpha - 1, and cell (l, nu) sits at l*n + nu.
    std::vector<std::vector<Rational>> rows;
    for (int k : lam_s) rows.push_back(pw[k]);
    RatMatrix Ms = rows_to_matrix(rows);
    auto xb = kac_kernel(n, tau1), yb = kac_kernel(m, tau2);
    std::vector<Rational> u(static_cast<std::size_t>(d));
    for (int l = 0; l < m; ++l)
      for (int v = 0; v < n; ++v) u[l * n + v] = yb[l] * xb[v];
    RatMatrix K = evaluate(kronecker_sum(m, n), tau1, tau2);
    bool kernel_ok = u[0] != 0;
    for (int i = 0; i < d && kernel_ok; ++i) {
      Rational acc = 0;
      for (int j = 0; j < d; ++j) acc += K(i, j) * u[j];
      kernel_ok = acc == 0;
    }
    for (int q = 0; q <= 1; ++q) {
      bool cu_zero = true;
      for (int i = 0; i < Ms.rows && cu_zero; ++i) {
        Rational acc = 0;
        for (int j = 0; j < d; ++j) acc += Ms(i, q * d + j) * u[j];
        cu_zero = acc == 0;
      }
      std::vector<int> odd;
      for (int alpha = 3; alpha <= d; alpha += 2) odd.push_back(q * d + alpha - 1);
      std::vector<int> with_first = odd;
      with_first.push_back(q * d);
      int r_odd = odd.empty() ? 0 : rank(select_columns(Ms, odd));
      int r_all = rank(select_columns(Ms, with_first));
      bool in_span = r_odd == r_all;
      out.push_back({"kac.column_relation_q" + std::to_string(q), inst, kernel_ok && cu_zero && in_span,
                     std::string("kernel vector ") + (kernel_ok ? "ok" : "invalid") + ", C u " +
                         (cu_zero ? "= 0" : "!= 0") + ", first column " + (in_span ? "in" : "outside") +
                         " span of odd columns (rank " + std::to_string(r_odd) + " vs " + std::to_string(r_all) +
                         ")"});
    }
  }
  out.push_back(chessboard_check(m, n, D));
  out.back().instance = inst;
  return out;
}

} // namespace isogeo
