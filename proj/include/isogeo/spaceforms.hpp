#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace isogeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Point on S^dim (c = +1, unit sphere in R^{dim+1}) or H^dim (c = -1,
// upper sheet of <y,y>_L = -1 in Lorentz space R^{1,dim}).
struct FactorPoint {
  Vec coords;
  int c = 1;

  int dim() const { return static_cast<int>(coords.size()) - 1; }
};

struct ProductPoint {
  FactorPoint x;
  FactorPoint y;

  int n() const { return x.dim(); }
  int m() const { return y.dim(); }
};

// Tangent vector split into horizontal (first factor) and vertical parts,
// both in ambient coordinates.
struct TangentVec {
  Vec v1;
  Vec v2;

  TangentVec operator+(const TangentVec& o) const { return {v1 + o.v1, v2 + o.v2}; }
  TangentVec operator-(const TangentVec& o) const { return {v1 - o.v1, v2 - o.v2}; }
  TangentVec operator*(double s) const { return {v1 * s, v2 * s}; }
};

// Lightlike u = (1, w) with |w| = 1.
struct LightVec {
  Vec u;

  static LightVec from_direction(const Vec& w);
};

struct AmbientSpec {
  int n = 1;
  int c1 = 1;
  int m = 1;
  int c2 = 1;
};

double lorentz_inner(const Vec& u, const Vec& v);
double factor_inner(int c, const Vec& u, const Vec& v);

// Metric of the product on T_p, Euclidean or Lorentz per factor.
double inner(const ProductPoint& p, const TangentVec& a, const TangentVec& b);
double norm(const ProductPoint& p, const TangentVec& a);

FactorPoint make_factor(Vec coords, int c);
FactorPoint renormalize(const FactorPoint& p);

FactorPoint factor_exp(const FactorPoint& p, const Vec& v, double t);
// d/dt of factor_exp(p, v, t).
Vec factor_exp_velocity(const FactorPoint& p, const Vec& v, double t);

ProductPoint product_exp(const ProductPoint& p, const TangentVec& v, double t);

TangentVec product_structure(const TangentVec& v);

Vec factor_project(const FactorPoint& p, const Vec& a);
TangentVec tangent_project(const ProductPoint& p, const Vec& a1, const Vec& a2);

// Orthonormal basis (factor metric) of the tangent space at p orthogonal to
// every vector in `also`; `also` must itself be tangent.
std::vector<Vec> factor_complement(const FactorPoint& p, const std::vector<Vec>& also);

// Orthonormal frame of T_p(M1 x M2): horizontal vectors first.
std::vector<TangentVec> tangent_frame(const ProductPoint& p);

// Orthonormal frame of the orthogonal complement of unit `nrm` in T_p.
std::vector<TangentVec> complement_frame(const ProductPoint& p, const TangentVec& nrm);

ProductPoint sample_point(const AmbientSpec& spec, std::uint64_t seed);

// Per-sample seed derived from (master, index); independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace isogeo
