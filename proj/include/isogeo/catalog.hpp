#pragma once

#include "isogeo/clifford.hpp"
#include "isogeo/spaceforms.hpp"

#include <json.hpp>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace isogeo {

enum class Field { R, C, H };

int field_dim(Field f);
Field parse_field(const std::string& s);
std::string field_name(Field f);

// <x,y> = t on S^n x S^n.
struct MTParams {
  int n = 2;
  double t = 0.0;
};

// <x,y>^2 + sum_a <E_a x, y>^2 = t on S^{l-1} x S^{l-1}.
struct MHatParams {
  CliffordSystem sys;
  double t = 0.5;
};

// sin(theta(x) - a ln(-<y,u>_L)) = t on S^1 x H^m. branch picks the sign of
// cos(Theta) used when sampling.
struct GraphSHParams {
  int m = 2;
  double a = 1.0;
  LightVec u;
  double t = 0.0;
  int branch = 1;
};

// |<x,y>_F|^2 = t on S^{(n+1)d-1} x S^{(n+1)d-1}.
struct MTFParams {
  Field field = Field::R;
  int n = 1;
  double t = 0.5;
};

struct HypersurfaceFamily {
  std::variant<MTParams, MHatParams, GraphSHParams, MTFParams> params;
  // Matrices M_0 = I, M_1, ... of the quadratic form sum <M_a x, y>^2
  // (MHat and MTF only).
  std::vector<Mat> forms;

  std::string tag() const;
  std::string describe() const;
  AmbientSpec ambient() const;
  double level() const;
  // Dimension of the hypersurface.
  int dim() const;
  // Whether the ambient is S^n x S^n.
  bool spherical_product() const;
};

HypersurfaceFamily make_mt(int n, double t);
HypersurfaceFamily make_mhat(CliffordSystem sys, double t);
HypersurfaceFamily make_graph(int m, double a, const LightVec& u, double t, int branch = 1);
HypersurfaceFamily make_mtf(Field f, int n, double t);

// Right multiplication by the units 1, e_1, .., e_{d-1} of F acting
// componentwise on F^{n+1} = R^{(n+1)d}.
std::vector<Mat> field_right_units(Field f, int n);

nlohmann::json family_to_json(const HypersurfaceFamily& fam);
// Accepts {tag, params...}. MHat takes the system inline under "clifford",
// from a file under "clifford_ref", or generated from "p" and "k".
HypersurfaceFamily family_from_json(const nlohmann::json& j);

struct Evaluation {
  double F = 0.0;
  TangentVec grad;
  double lap = 0.0;
};

double evaluate_F(const HypersurfaceFamily& fam, const ProductPoint& p);
Evaluation evaluate(const HypersurfaceFamily& fam, const ProductPoint& p);

// |grad F|^2 = b(F) and lap F = a(F). For GraphSH a(F) depends on the
// branch of cos(Theta) at p.
double family_b(const HypersurfaceFamily& fam, double F);
double family_a(const HypersurfaceFamily& fam, double F, const ProductPoint& p);

// Points on the level F = fam.level(); deterministic in seed.
ProductPoint sample_on_level(const HypersurfaceFamily& fam, std::uint64_t seed);
// Newton iteration along grad F; throws NumericalFailure if it stalls.
ProductPoint project_to_level(const HypersurfaceFamily& fam, ProductPoint p, double level);

struct IsoReport {
  int samples = 0;
  double max_b_residual = 0.0;
  double max_a_residual = 0.0;
  double max_fd_residual = 0.0;
  double max_level_residual = 0.0;
};

IsoReport check_isoparametric(const HypersurfaceFamily& fam, int samples, std::uint64_t seed,
                              int workers = 1);

TangentVec unit_normal(const HypersurfaceFamily& fam, const ProductPoint& p);
double angle_function(const HypersurfaceFamily& fam, const ProductPoint& p);
// V = PN - CN.
TangentVec angle_vector(const ProductPoint& p, const TangentVec& N);

struct ShapeOperator {
  Mat A;
  std::vector<TangentVec> frame;
  double asymmetry = 0.0;
};

constexpr double kShapeStep = 1e-5;

ShapeOperator shape_operator(const HypersurfaceFamily& fam, const ProductPoint& p,
                             const std::vector<TangentVec>* basis = nullptr,
                             double h = kShapeStep);

// Applies A to a tangent vector of the hypersurface at p.
TangentVec apply_shape(const ShapeOperator& S, const ProductPoint& p, const TangentVec& v);

struct Cluster {
  double value = 0.0;
  int multiplicity = 0;
};

struct SpectrumReport {
  std::vector<Cluster> clusters;
  std::vector<double> eigenvalues;
  double symmetry_residual = 0.0;
  double trace = 0.0;
  bool ambiguous = false;
  // Reciprocal pairing lambda * lambda' = -1/2 between nonzero clusters of
  // equal multiplicity; only evaluated on S^n x S^n families.
  bool pairing_checked = false;
  double pairing_residual = 0.0;
};

constexpr double kClusterTol = 1e-6;

std::vector<Cluster> cluster_values(std::vector<double> values, double tol, bool* ambiguous = nullptr);
SpectrumReport spectrum_of(const Mat& A, double cluster_tol, bool pairing);
SpectrumReport principal_spectrum(const HypersurfaceFamily& fam, const ProductPoint& p,
                                  double cluster_tol = kClusterTol);

// Frame V/|V|, horizontal (X, 0) with X orthogonal to N^h, vertical (0, Y)
// with Y orthogonal to N^v.
std::vector<TangentVec> adapted_frame(const ProductPoint& p, const TangentVec& N);

struct SliceBlocks {
  std::vector<double> horizontal;
  std::vector<double> vertical;
  double mixing = 0.0;
  double C = 0.0;
};

SliceBlocks slice_blocks(const HypersurfaceFamily& fam, const ProductPoint& p);
double rigidity_residual(const AmbientSpec& amb, const SliceBlocks& b);
double rigidity_residual(const HypersurfaceFamily& fam, const ProductPoint& p);

struct CurvatureScalars {
  double H = 0.0;
  double R = 0.0;
  std::vector<Cluster> ric;
  // Largest deviation of Ric(X,X)/|X|^2 from its mean over the frame
  // directions; zero exactly when the hypersurface is Einstein at p.
  double einstein_defect = 0.0;
};

// Ricci tensor of the hypersurface in the frame of S via the Gauss equation.
Mat ricci_matrix(const ProductPoint& p, int c1, int c2, const ShapeOperator& S);
CurvatureScalars curvature_scalars(const HypersurfaceFamily& fam, const ProductPoint& p);

// Values the library predicts at a regular point; see the README for the
// places where these differ from commonly quoted formulas.
struct Prediction {
  double C = 0.0;
  std::vector<Cluster> spectrum;
};

Prediction predicted(const HypersurfaceFamily& fam);

// Deterministic parallel loop: f(i) for i in [0, count).
void parallel_for(int count, int workers, const std::function<void(int)>& f);

} // namespace isogeo
