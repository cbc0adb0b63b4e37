#include "isogeo/flows.hpp"

#include "isogeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace isogeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_sign(const HypersurfaceFamily& fam, const FlowState& s) {
  TangentVec N = unit_normal(fam, s.point);
  double d = inner(s.point, s.normal, N);
  if (std::abs(std::abs(d) - 1) > 1e-6) throw NumericalFailure("flowed normal is not normal to the level set");
  return d > 0 ? 1.0 : -1.0;
}

std::vector<double> sorted_eigs(const Mat& A) {
  Mat S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

FlowState normal_flow(const HypersurfaceFamily& fam, const ProductPoint& p, double t) {
  TangentVec N = unit_normal(fam, p);
  FlowState s;
  s.point = product_exp(p, N, t);
  s.normal = {factor_exp_velocity(p.x, N.v1, t), factor_exp_velocity(p.y, N.v2, t)};
  s.t = t;
  return s;
}

std::vector<double> flowed_spectrum(const HypersurfaceFamily& fam, const ProductPoint& p, double t) {
  FlowState s = normal_flow(fam, p, t);
  double sg = level_sign(fam, s);
  std::vector<double> v = sorted_eigs(shape_operator(fam, s.point).A * sg);
  return v;
}

double riccati_angle(double lambda) {
  // theta in (0, 2 pi) with lambda = cot(theta/2)/sqrt 2.
  return 2 * (std::numbers::pi / 2 - std::atan(std::numbers::sqrt2 * lambda));
}

double riccati_predict(double lambda, double t) {
  double arg = riccati_angle(lambda) / 2 - t / std::numbers::sqrt2;
  double s = std::sin(arg);
  if (std::abs(s) < 1e-15) return kInf;
  return std::cos(arg) / s / std::numbers::sqrt2;
}

double riccati_residual(const HypersurfaceFamily& fam, const ProductPoint& p, double t) {
  std::vector<double> base = sorted_eigs(shape_operator(fam, p).A);
  std::vector<double> pred;
  for (double l : base) pred.push_back(std::abs(l) < 1e-6 ? 0.0 : riccati_predict(l, t));
  std::sort(pred.begin(), pred.end());
  std::vector<double> got = flowed_spectrum(fam, p, t);
  double worst = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) worst = std::max(worst, std::abs(pred[i] - got[i]));
  return worst;
}

double gen_sin(double tau, double r) {
  if (tau < 0) return std::sin(std::sqrt(-tau) * r) / std::sqrt(-tau);
  if (tau > 0) return std::sinh(std::sqrt(tau) * r) / std::sqrt(tau);
  return r;
}

double gen_cos(double tau, double r) {
  if (tau < 0) return std::cos(std::sqrt(-tau) * r);
  if (tau > 0) return std::cosh(std::sqrt(tau) * r);
  return 1.0;
}

Mat JacobiModel::J(double r) const {
  const auto d = A.rows();
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.row(i) = -gen_sin(tau[i], r) * A.row(i);
    out(i, i) += gen_cos(tau[i], r);
  }
  return out;
}

Mat JacobiModel::Jprime(double r) const {
  const auto d = A.rows();
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.row(i) = -gen_cos(tau[i], r) * A.row(i);
    out(i, i) += tau[i] * gen_sin(tau[i], r);
  }
  return out;
}

Mat JacobiModel::shape(double r) const {
  Mat Jr = J(r);
  // -J' J^{-1} = -(J^{-T} J'^T)^T
  Mat X = Jr.transpose().partialPivLu().solve(Jprime(r).transpose());
  return -X.transpose();
}

JacobiModel jacobi_model(const HypersurfaceFamily& fam, const ProductPoint& p) {
  TangentVec N = unit_normal(fam, p);
  JacobiModel M;
  M.C = inner(p, product_structure(N), N);
  if (std::abs(M.C) >= 1 - 1e-8) throw DomainError("jacobi model needs |C| < 1");
  auto amb = fam.ambient();
  const double tau1 = -amb.c1 * (1 + M.C) / 2, tau2 = -amb.c2 * (1 - M.C) / 2;
  const Vec z1 = Vec::Zero(p.x.coords.size()), z2 = Vec::Zero(p.y.coords.size());
  for (Vec& v : factor_complement(p.y, {N.v2})) {
    M.frame.push_back({z1, v});
    M.tau.push_back(tau2);
  }
  TangentVec V = angle_vector(p, N);
  M.frame.push_back(V * (1.0 / norm(p, V)));
  M.tau.push_back(0.0);
  for (Vec& h : factor_complement(p.x, {N.v1})) {
    M.frame.push_back({h, z2});
    M.tau.push_back(tau1);
  }
  M.A = shape_operator(fam, p, &M.frame).A;
  return M;
}

std::vector<double> focal_distances(const HypersurfaceFamily& fam, const ProductPoint& p, double t_max,
                                    double step, int sign) {
  if (!(step > 0)) throw UsageError("focal_distances: step must be positive");
  JacobiModel M = jacobi_model(fam, p);
  if (sign < 0) M.A = -M.A;

  // Reciprocal of the curvature of largest magnitude; it crosses zero at a
  // focal point and stays finite there.
  auto recip = [&](double t) {
    Mat Jt = M.J(t);
    if (Jt.determinant() == 0.0) return 0.0;
    auto ev = sorted_eigs(M.shape(t));
    double best = 0;
    for (double v : ev)
      if (std::abs(v) > std::abs(best)) best = v;
    return best == 0.0 ? kInf : 1.0 / best;
  };

  std::vector<double> out;
  double prev_t = 0, prev = recip(0);
  const int steps = static_cast<int>(std::ceil(t_max / step));
  for (int k = 1; k <= steps; ++k) {
    double t = std::min(t_max, k * step);
    double cur = recip(t);
    if (std::isfinite(prev) && std::isfinite(cur) && prev * cur < 0) {
      double a = prev_t, b = t, fa = prev;
      while (b - a > 1e-10) {
        double mid = 0.5 * (a + b), fm = recip(mid);
        if (fm * fa <= 0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      double root = 0.5 * (a + b);
      if (std::abs(recip(root)) < 1e-6) out.push_back(root);
    }
    prev_t = t;
    prev = cur;
  }
  return out;
}

VFlowReport v_flow_isometry_check(const HypersurfaceFamily& fam, const ProductPoint& p, double t) {
  TangentVec N = unit_normal(fam, p);
  double C = inner(p, product_structure(N), N);
  ProductPoint q{factor_exp(p.x, (1 - C) * N.v1, t), factor_exp(p.y, -(1 + C) * N.v2, t)};
  VFlowReport rep;
  rep.on_level = std::abs(evaluate_F(fam, q) - evaluate_F(fam, p));
  SliceBlocks a = slice_blocks(fam, p), b = slice_blocks(fam, q);
  for (std::size_t i = 0; i < a.horizontal.size(); ++i)
    rep.residual = std::max(rep.residual, std::abs(a.horizontal[i] - b.horizontal[i]));
  for (std::size_t i = 0; i < a.vertical.size(); ++i)
    rep.residual = std::max(rep.residual, std::abs(a.vertical[i] - b.vertical[i]));
  return rep;
}

JacobiReport jacobi_determinant_check(const HypersurfaceFamily& fam, const ProductPoint& p,
                                      const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw UsageError("jacobi check: empty grid");
  JacobiModel M = jacobi_model(fam, p);
  const double h = r_grid.size() > 1 ? std::abs(r_grid[1] - r_grid[0]) : 0.02;
  const double d = kStencilStep;
  JacobiReport rep;
  rep.D0 = M.det(0.0);
  double rmax = *std::max_element(r_grid.begin(), r_grid.end());
  auto focal = focal_distances(fam, p, rmax + 3 * h, h);
  double limit = kInf;
  if (!focal.empty()) {
    rep.first_focal = focal.front();
    limit = focal.front() - 3 * h;
  }
  for (double r : r_grid) {
    if (r > limit) {
      rep.truncated = true;
      continue;
    }
    double D = M.det(r);
    double Dp = (-M.det(r + 2 * d) + 8 * M.det(r + d) - 8 * M.det(r - d) + M.det(r - 2 * d)) / (12 * d);
    FlowState s = normal_flow(fam, p, r);
    double H = level_sign(fam, s) * shape_operator(fam, s.point).A.trace();
    rep.residual = std::max(rep.residual, std::abs(Dp + H * D));
    ++rep.points;
  }
  return rep;
}

} // namespace isogeo
