#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace isogeo {

using Rational = mpq_class;

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);

// Polynomial in two commuting variables (tau1, tau2) with rational
// coefficients; zero coefficients are never stored.
class BiPoly {
public:
  using Key = std::pair<int, int>;

  BiPoly() = default;
  BiPoly(const Rational& c);  // NOLINT: constants convert implicitly
  BiPoly(long c) : BiPoly(Rational(c)) {}
  BiPoly(int c) : BiPoly(Rational(c)) {}

  static BiPoly var1();
  static BiPoly var2();
  static BiPoly monomial(const Rational& c, int i, int j);

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(int i, int j) const;
  // -1 for the zero polynomial.
  int total_degree() const;
  int degree1() const;
  int degree2() const;
  // Every term has total degree d (vacuously true for zero).
  bool homogeneous(int d) const;

  Rational eval(const Rational& t1, const Rational& t2) const;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  BiPoly& operator*=(const BiPoly& o);
  BiPoly& operator*=(const Rational& c);

  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(BiPoly a, const Rational& c) { return a *= c; }
  friend BiPoly operator-(BiPoly a) { return a *= Rational(-1); }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  std::string str(const char* v1 = "t1", const char* v2 = "t2") const;

private:
  std::map<Key, Rational> terms_;
};

template <class T>
struct ExactMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  ExactMatrix() = default;
  ExactMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, T(0)) {}

  static ExactMatrix identity(int n) {
    ExactMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = T(1);
    return I;
  }

  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }
};

using PolyMatrix = ExactMatrix<BiPoly>;
using RatMatrix = ExactMatrix<Rational>;

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);

// Row vector times matrix.
std::vector<BiPoly> row_times(const std::vector<BiPoly>& v, const PolyMatrix& M);
std::vector<Rational> row_times(const std::vector<Rational>& v, const RatMatrix& M);

RatMatrix evaluate(const PolyMatrix& M, const Rational& t1, const Rational& t2);

// Division-free characteristic polynomial: c[0] = 1, det(xI - M) = sum c[i] x^{n-i}.
std::vector<BiPoly> charpoly(const PolyMatrix& M);
BiPoly determinant(const PolyMatrix& M);

// Fraction-free (Bareiss) elimination on integer-scaled rows.
int rank(const RatMatrix& M);
Rational determinant(const RatMatrix& M);

} // namespace isogeo
