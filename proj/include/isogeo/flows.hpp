#pragma once

#include "isogeo/catalog.hpp"

#include <vector>

namespace isogeo {

struct FlowState {
  ProductPoint point;
  TangentVec normal;
  double t = 0.0;
};

// Geodesic flow along the unit normal; the transported normal is the
// geodesic velocity.
FlowState normal_flow(const HypersurfaceFamily& fam, const ProductPoint& p, double t);

// Principal curvatures of the parallel hypersurface at distance t, with
// respect to the transported normal, from finite differences at the flowed
// point.
std::vector<double> flowed_spectrum(const HypersurfaceFamily& fam, const ProductPoint& p, double t);

// (1/sqrt 2) cot(theta/2 - t/sqrt 2) with lambda = (1/sqrt 2) cot(theta/2);
// +infinity exactly at the pole.
double riccati_predict(double lambda, double t);
double riccati_angle(double lambda);

// Largest |predicted - flowed| over the sorted spectra; zero eigenvalues are
// carried along unchanged.
double riccati_residual(const HypersurfaceFamily& fam, const ProductPoint& p, double t);

// Generalized sine and cosine: S' = C, C' = tau S, S(0) = 0, C(0) = 1.
double gen_sin(double tau, double r);
double gen_cos(double tau, double r);

struct JacobiModel {
  Mat A;                    // shape operator in the frame below
  std::vector<double> tau;  // per frame direction
  std::vector<TangentVec> frame;
  double C = 0.0;

  Mat J(double r) const;
  Mat Jprime(double r) const;
  // Shape operator of the parallel hypersurface at distance r.
  Mat shape(double r) const;
  double det(double r) const { return J(r).determinant(); }
};

// Frame (0, Y_1..Y_{m-1}), V/|V|, (X_1..X_{n-1}, 0) with
// tau_1 = -c1 (1+C)/2 on horizontal and tau_2 = -c2 (1-C)/2 on vertical.
JacobiModel jacobi_model(const HypersurfaceFamily& fam, const ProductPoint& p);

// Distances in (0, t_max] along sign * N where the parallel hypersurface
// degenerates.
std::vector<double> focal_distances(const HypersurfaceFamily& fam, const ProductPoint& p, double t_max,
                                    double step = 0.02, int sign = 1);

struct VFlowReport {
  double residual = 0.0;
  double on_level = 0.0;
};

// Flows along V by (exp_x((1-C) t N^h), exp_y(-(1+C) t N^v)) and compares slice
// block spectra before and after.
VFlowReport v_flow_isometry_check(const HypersurfaceFamily& fam, const ProductPoint& p, double t);

struct JacobiReport {
  double residual = 0.0;
  double D0 = 1.0;
  int points = 0;
  bool truncated = false;
  double first_focal = 0.0;  // 0 when none was found in the grid
};

constexpr double kStencilStep = 1e-3;

// max |D'(r) + H(r) D(r)| with D = det J, D' by a five-point stencil of step
// kStencilStep and H the trace of the finite-difference shape operator at the
// flowed point. Grid points within three grid steps of the first focal
// distance, or past it, are dropped.
JacobiReport jacobi_determinant_check(const HypersurfaceFamily& fam, const ProductPoint& p,
                                      const std::vector<double>& r_grid);

} // namespace isogeo
