#include "isogeo/bipoly.hpp"

#include "isogeo/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace isogeo {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw UsageError("empty rational");
  for (char ch : s)
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-' || ch == '+'))
      throw UsageError("malformed rational '" + s + "'");
  Rational r;
  std::string t = s[0] == '+' ? s.substr(1) : s;
  if (r.set_str(t, 10) != 0) throw UsageError("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw UsageError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

BiPoly::BiPoly(const Rational& c) {
  if (c != 0) terms_[{0, 0}] = c;
}

BiPoly BiPoly::var1() { return monomial(1, 1, 0); }
BiPoly BiPoly::var2() { return monomial(1, 0, 1); }

BiPoly BiPoly::monomial(const Rational& c, int i, int j) {
  BiPoly p;
  if (c != 0) p.terms_[{i, j}] = c;
  return p;
}

Rational BiPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

int BiPoly::total_degree() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

int BiPoly::degree1() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.first);
  return d;
}

int BiPoly::degree2() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.second);
  return d;
}

bool BiPoly::homogeneous(int d) const {
  for (const auto& [k, v] : terms_)
    if (k.first + k.second != d) return false;
  return true;
}

Rational BiPoly::eval(const Rational& t1, const Rational& t2) const {
  Rational s = 0;
  for (const auto& [k, v] : terms_) {
    Rational term = v;
    for (int i = 0; i < k.first; ++i) term *= t1;
    for (int j = 0; j < k.second; ++j) term *= t2;
    s += term;
  }
  return s;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  for (const auto& [k, v] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
  for (const auto& [k, v] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(k, -v);
    if (!inserted) {
      it->second -= v;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  for (const auto& [ka, va] : a.terms_)
    for (const auto& [kb, vb] : b.terms_) {
      BiPoly::Key k{ka.first + kb.first, ka.second + kb.second};
      Rational prod = va * vb;
      auto [it, inserted] = r.terms_.try_emplace(k, prod);
      if (!inserted) it->second += prod;
    }
  for (auto it = r.terms_.begin(); it != r.terms_.end();)
    it = it->second == 0 ? r.terms_.erase(it) : std::next(it);
  return r;
}

BiPoly& BiPoly::operator*=(const BiPoly& o) { return *this = *this * o; }

BiPoly& BiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

std::string BiPoly::str(const char* v1, const char* v2) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first for readability.
  std::vector<std::pair<Key, Rational>> items(terms_.begin(), terms_.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
    return da != db ? da > db : a.first.first > b.first.first;
  });
  for (const auto& [k, v] : items) {
    Rational c = v;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    bool unit = (c == 1) && (k.first + k.second > 0);
    if (!unit) os << c.get_str();
    auto pw = [&](const char* name, int e, bool needs_star) {
      if (e == 0) return;
      if (needs_star) os << "*";
      os << name;
      if (e > 1) os << "^" << e;
    };
    pw(v1, k.first, !unit);
    pw(v2, k.second, !unit || k.first > 0);
    first = false;
  }
  return os.str();
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols != b.rows) throw UsageError("matrix shape mismatch");
  PolyMatrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols; ++j)
        if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols != b.rows) throw UsageError("matrix shape mismatch");
  RatMatrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols; ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw UsageError("matrix shape mismatch");
  PolyMatrix r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix r(a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      if (a(i, j).is_zero()) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l)
          if (!b(k, l).is_zero()) r(i * b.rows + k, j * b.cols + l) = a(i, j) * b(k, l);
    }
  return r;
}

std::vector<BiPoly> row_times(const std::vector<BiPoly>& v, const PolyMatrix& M) {
  std::vector<BiPoly> r(static_cast<std::size_t>(M.cols));
  for (int i = 0; i < M.rows; ++i) {
    if (v[i].is_zero()) continue;
    for (int j = 0; j < M.cols; ++j)
      if (!M(i, j).is_zero()) r[j] += v[i] * M(i, j);
  }
  return r;
}

std::vector<Rational> row_times(const std::vector<Rational>& v, const RatMatrix& M) {
  std::vector<Rational> r(static_cast<std::size_t>(M.cols), Rational(0));
  for (int i = 0; i < M.rows; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < M.cols; ++j) r[j] += v[i] * M(i, j);
  }
  return r;
}

RatMatrix evaluate(const PolyMatrix& M, const Rational& t1, const Rational& t2) {
  RatMatrix r(M.rows, M.cols);
  for (std::size_t i = 0; i < M.data.size(); ++i) r.data[i] = M.data[i].eval(t1, t2);
  return r;
}

std::vector<BiPoly> charpoly(const PolyMatrix& M) {
  if (M.rows != M.cols) throw UsageError("charpoly needs a square matrix");
  const int n = M.rows;
  // Berkowitz: C_r = T_r C_{r-1}, T_r lower-triangular Toeplitz with first
  // column (1, -a, -R S, -R A S, ..., -R A^{r-2} S).
  std::vector<BiPoly> c{BiPoly(1)};
  for (int r = 0; r < n; ++r) {
    // Leading block is rows/cols 0..r-1, new index r.
    std::vector<BiPoly> col{BiPoly(1), -M(r, r)};
    std::vector<BiPoly> S(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) S[i] = M(i, r);
    for (int p = 0; p < r; ++p) {
      BiPoly dot;
      for (int i = 0; i < r; ++i)
        if (!M(r, i).is_zero() && !S[i].is_zero()) dot += M(r, i) * S[i];
      col.push_back(-dot);
      if (p + 1 < r) {
        std::vector<BiPoly> next(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j)
            if (!M(i, j).is_zero() && !S[j].is_zero()) next[i] += M(i, j) * S[j];
        S = std::move(next);
      }
    }
    std::vector<BiPoly> nc(static_cast<std::size_t>(r + 2));
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j)
        if (!col[i - j].is_zero() && !c[j].is_zero()) nc[i] += col[i - j] * c[j];
    c = std::move(nc);
  }
  return c;
}

BiPoly determinant(const PolyMatrix& M) {
  auto c = charpoly(M);
  BiPoly d = c.back();
  if (M.rows % 2 == 1) d = -d;
  return d;
}

namespace {

std::vector<std::vector<mpz_class>> integer_rows(const RatMatrix& M) {
  std::vector<std::vector<mpz_class>> A(static_cast<std::size_t>(M.rows));
  for (int i = 0; i < M.rows; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < M.cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(i, j).get_den_mpz_t());
    A[i].resize(static_cast<std::size_t>(M.cols));
    for (int j = 0; j < M.cols; ++j) {
      Rational v = M(i, j) * Rational(l);
      A[i][j] = v.get_num();
    }
  }
  return A;
}

// Bareiss elimination; returns the rank and (for square input) the
// determinant of the integer matrix.
int bareiss(std::vector<std::vector<mpz_class>>& A, int cols, mpz_class* det) {
  const int rows = static_cast<int>(A.size());
  mpz_class prev = 1;
  int r = 0;
  int sign = 1;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (A[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      std::swap(A[piv], A[r]);
      sign = -sign;
    }
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        A[i][j] = A[r][c] * A[i][j] - A[i][c] * A[r][j];
        mpz_divexact(A[i][j].get_mpz_t(), A[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      A[i][c] = 0;
    }
    prev = A[r][c];
    ++r;
  }
  if (det) *det = (r == rows && rows == cols) ? mpz_class(sign * prev) : mpz_class(0);
  return r;
}

} // namespace

int rank(const RatMatrix& M) {
  auto A = integer_rows(M);
  return bareiss(A, M.cols, nullptr);
}

Rational determinant(const RatMatrix& M) {
  if (M.rows != M.cols) throw UsageError("determinant needs a square matrix");
  if (M.rows == 0) return 1;
  Rational scale = 1;
  for (int i = 0; i < M.rows; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < M.cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(i, j).get_den_mpz_t());
    scale *= Rational(l);
  }
  auto A = integer_rows(M);
  mpz_class d;
  bareiss(A, M.cols, &d);
  Rational out(d);
  out /= scale;
  out.canonicalize();
  return out;
}

} // namespace isogeo
