#pragma once

#include "isogeo/catalog.hpp"
#include "isogeo/spaceforms.hpp"

#include <cstdint>

namespace isogeo {

// (A, a) acting by (x, y) -> (A x a, A y a*), A an F-linear isometry of
// F^{n+1} (acting on the left) in its real form.
struct GroupWitness {
  Mat A;
  Vec a;
  double residual = 0.0;
};

ProductPoint apply_witness(Field f, const GroupWitness& g, const ProductPoint& p);

// <x, y>_F = sum conj(x_i) y_i as a real d-vector.
Vec field_inner(Field f, const Vec& x, const Vec& y);

// Moves p to p' on the same level of |<x,y>_F|^2; throws NoWitness for
// field R when the two points sit on different components.
GroupWitness mtf_witness(Field f, const ProductPoint& p, const ProductPoint& q);

// Boost in the plane of e_0 and (0, w) with h_s u = e^{-s} u for u = (1, w).
Vec graph_boost(const LightVec& u, double s, const Vec& y);
// Null rotation about u: y + <y,u>b - <y,b>u - <b,b><y,u>u/2, with b = (0, b'),
// b' orthogonal to w.
Vec null_rotation(const LightVec& u, const Vec& b, const Vec& y);

// |F(g p) - F(p)| for g = (rotation by theta, h_{theta/a}) composed with a
// random element of the stabilizer of u drawn from seed.
double graph_symmetry_check(double a, const LightVec& u, const ProductPoint& p, double theta,
                            std::uint64_t seed);

} // namespace isogeo
