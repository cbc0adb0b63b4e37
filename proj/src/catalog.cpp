#include "isogeo/catalog.hpp"

#include "isogeo/algebra.hpp"
#include "isogeo/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace isogeo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Lorentz sign flip turning Euclidean partials into a Lorentz gradient.
Vec lorentz_raise(const Vec& g) {
  Vec r = g;
  r[0] = -r[0];
  return r;
}

Vec factor_gradient(const FactorPoint& p, const Vec& partials) {
  return factor_project(p, p.c > 0 ? partials : lorentz_raise(partials));
}

// Euclidean value, partials and second partials of the ambient extension.
struct Derivs {
  double G = 0.0;
  Vec gx, gy;
  Mat Hxx, Hyy;
};

struct GraphAngles {
  double Theta, r2, s;
  Vec Gu;
};

GraphAngles graph_angles(const GraphSHParams& g, const ProductPoint& p) {
  const Vec& x = p.x.coords;
  double s = lorentz_inner(p.y.coords, g.u.u);
  if (!(s < 0.0))
    throw DomainError("graph family: -<y,u>_L must be positive");
  return {std::atan2(x[1], x[0]) - g.a * std::log(-s), x.squaredNorm(), s, lorentz_raise(g.u.u)};
}

Derivs derivs(const HypersurfaceFamily& fam, const ProductPoint& p, bool hess) {
  const Vec& x = p.x.coords;
  const Vec& y = p.y.coords;
  Derivs d;
  if (const auto* mt = std::get_if<MTParams>(&fam.params)) {
    (void)mt;
    d.G = x.dot(y);
    d.gx = y;
    d.gy = x;
    if (hess) {
      d.Hxx = Mat::Zero(x.size(), x.size());
      d.Hyy = Mat::Zero(y.size(), y.size());
    }
    return d;
  }
  if (const auto* g = std::get_if<GraphSHParams>(&fam.params)) {
    auto ga = graph_angles(*g, p);
    double c = std::cos(ga.Theta), sn = std::sin(ga.Theta);
    Vec dx(2);
    dx << -x[1] / ga.r2, x[0] / ga.r2;
    Vec dy = -g->a * ga.Gu / ga.s;
    d.G = sn;
    d.gx = c * dx;
    d.gy = c * dy;
    if (hess) {
      Mat D2x(2, 2);
      double r4 = ga.r2 * ga.r2;
      D2x << 2 * x[0] * x[1], x[1] * x[1] - x[0] * x[0], x[1] * x[1] - x[0] * x[0], -2 * x[0] * x[1];
      D2x /= r4;
      Mat D2y = g->a * ga.Gu * ga.Gu.transpose() / (ga.s * ga.s);
      d.Hxx = c * D2x - sn * dx * dx.transpose();
      d.Hyy = c * D2y - sn * dy * dy.transpose();
    }
    return d;
  }
  // Quadratic-form families: G = sum_a <M_a x, y>^2.
  d.G = 0.0;
  d.gx = Vec::Zero(x.size());
  d.gy = Vec::Zero(y.size());
  if (hess) {
    d.Hxx = Mat::Zero(x.size(), x.size());
    d.Hyy = Mat::Zero(y.size(), y.size());
  }
  for (const Mat& M : fam.forms) {
    Vec Mx = M * x;
    Vec Mty = M.transpose() * y;
    double w = Mx.dot(y);
    d.G += w * w;
    d.gx += 2 * w * Mty;
    d.gy += 2 * w * Mx;
    if (hess) {
      d.Hxx += 2 * Mty * Mty.transpose();
      d.Hyy += 2 * Mx * Mx.transpose();
    }
  }
  return d;
}

double factor_laplacian(const FactorPoint& p, const Vec& partials, const Mat& H) {
  double radial = partials.dot(p.coords);
  double s = 0.0;
  for (const Vec& e : factor_complement(p, {})) s += e.dot(H * e) - p.c * radial;
  return s;
}

void check_open_unit(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0))
    throw UsageError(std::string(what) + ": level t must lie in (0,1)");
}

} // namespace

int field_dim(Field f) {
  switch (f) {
  case Field::R: return 1;
  case Field::C: return 2;
  case Field::H: return 4;
  }
  return 1;
}

Field parse_field(const std::string& s) {
  if (s == "R" || s == "r" || s == "real") return Field::R;
  if (s == "C" || s == "c" || s == "complex") return Field::C;
  if (s == "H" || s == "h" || s == "quaternion") return Field::H;
  throw UsageError("unknown field '" + s + "' (expected R, C or H)");
}

std::string field_name(Field f) {
  switch (f) {
  case Field::R: return "R";
  case Field::C: return "C";
  case Field::H: return "H";
  }
  return "R";
}

std::string HypersurfaceFamily::tag() const {
  return std::visit(overloaded{[](const MTParams&) { return std::string("mt"); },
                               [](const MHatParams&) { return std::string("mhat"); },
                               [](const GraphSHParams&) { return std::string("graph"); },
                               [](const MTFParams&) { return std::string("mtf"); }},
                    params);
}

std::string HypersurfaceFamily::describe() const {
  return std::visit(
      overloaded{
          [](const MTParams& q) { return "mt(n=" + std::to_string(q.n) + ",t=" + fmt("%g", q.t) + ")"; },
          [](const MHatParams& q) {
            return "mhat(p=" + std::to_string(q.sys.p) + ",l=" + std::to_string(q.sys.l) +
                   ",t=" + fmt("%g", q.t) + ")";
          },
          [](const GraphSHParams& q) {
            return "graph(m=" + std::to_string(q.m) + ",a=" + fmt("%g", q.a) + ",t=" + fmt("%g", q.t) +
                   (q.branch > 0 ? ",cos+)" : ",cos-)");
          },
          [](const MTFParams& q) {
            return "mtf(" + field_name(q.field) + ",n=" + std::to_string(q.n) + ",t=" + fmt("%g", q.t) + ")";
          }},
      params);
}

AmbientSpec HypersurfaceFamily::ambient() const {
  return std::visit(overloaded{[](const MTParams& q) { return AmbientSpec{q.n, 1, q.n, 1}; },
                               [](const MHatParams& q) { return AmbientSpec{q.sys.l - 1, 1, q.sys.l - 1, 1}; },
                               [](const GraphSHParams& q) { return AmbientSpec{1, 1, q.m, -1}; },
                               [](const MTFParams& q) {
                                 int l = (q.n + 1) * field_dim(q.field);
                                 return AmbientSpec{l - 1, 1, l - 1, 1};
                               }},
                    params);
}

double HypersurfaceFamily::level() const {
  return std::visit([](const auto& q) { return q.t; }, params);
}

int HypersurfaceFamily::dim() const {
  auto a = ambient();
  return a.n + a.m - 1;
}

bool HypersurfaceFamily::spherical_product() const {
  auto a = ambient();
  return a.c1 > 0 && a.c2 > 0 && a.n == a.m;
}

HypersurfaceFamily make_mt(int n, double t) {
  if (n < 1) throw UsageError("mt: n must be >= 1");
  if (!(t > -1.0 && t < 1.0)) throw UsageError("mt: level t must lie in (-1,1)");
  return {MTParams{n, t}, {}};
}

HypersurfaceFamily make_mhat(CliffordSystem sys, double t) {
  if (sys.p < 2) throw UsageError("mhat: p must be >= 2");
  if (static_cast<int>(sys.E.size()) != sys.p - 1) throw UsageError("mhat: system needs p-1 skew matrices");
  check_open_unit(t, "mhat");
  if (!verify_system(sys).all_pass()) throw UsageError("mhat: matrices violate the Clifford relations");
  HypersurfaceFamily fam;
  fam.forms.push_back(Mat::Identity(sys.l, sys.l));
  for (const IMat& E : sys.E) fam.forms.push_back(E.cast<double>());
  fam.params = MHatParams{std::move(sys), t};
  return fam;
}

HypersurfaceFamily make_graph(int m, double a, const LightVec& u, double t, int branch) {
  if (m < 1) throw UsageError("graph: m must be >= 1");
  if (a == 0.0 || !std::isfinite(a)) throw UsageError("graph: a must be a nonzero real");
  if (u.u.size() != m + 1) throw UsageError("graph: lightlike vector must have m+1 entries");
  if (!(u.u[0] > 0.0) || std::abs(lorentz_inner(u.u, u.u)) > 1e-12)
    throw UsageError("graph: u must be future lightlike");
  if (!(t > -1.0 && t < 1.0)) throw UsageError("graph: level t must lie in (-1,1)");
  if (branch != 1 && branch != -1) throw UsageError("graph: branch must be +1 or -1");
  return {GraphSHParams{m, a, u, t, branch}, {}};
}

std::vector<Mat> field_right_units(Field f, int n) {
  const int d = field_dim(f);
  const int l = (n + 1) * d;
  std::vector<Mat> out;
  for (int k = 0; k < d; ++k) {
    auto ek = cd::unit<double>(d, k);
    // Right multiplication q -> q e_k on one F-coordinate.
    Mat block(d, d);
    for (int j = 0; j < d; ++j) {
      auto ej = cd::unit<double>(d, j);
      auto prod = cd::mul<double>(ej, ek);
      for (int i = 0; i < d; ++i) block(i, j) = prod[i];
    }
    Mat M = Mat::Zero(l, l);
    for (int b = 0; b <= n; ++b) M.block(b * d, b * d, d, d) = block;
    out.push_back(M);
  }
  return out;
}

HypersurfaceFamily make_mtf(Field f, int n, double t) {
  if (n < 1) throw UsageError("mtf: n must be >= 1");
  check_open_unit(t, "mtf");
  return {MTFParams{f, n, t}, field_right_units(f, n)};
}

nlohmann::json family_to_json(const HypersurfaceFamily& fam) {
  nlohmann::json j;
  j["tag"] = fam.tag();
  std::visit(overloaded{[&](const MTParams& q) {
                          j["n"] = q.n;
                          j["t"] = q.t;
                        },
                        [&](const MHatParams& q) {
                          j["clifford"] = clifford_to_json(q.sys, false);
                          j["t"] = q.t;
                        },
                        [&](const GraphSHParams& q) {
                          j["m"] = q.m;
                          j["a"] = q.a;
                          j["u"] = std::vector<double>(q.u.u.begin(), q.u.u.end());
                          j["t"] = q.t;
                          j["branch"] = q.branch;
                        },
                        [&](const MTFParams& q) {
                          j["field"] = field_name(q.field);
                          j["n"] = q.n;
                          j["t"] = q.t;
                        }},
             fam.params);
  return j;
}

HypersurfaceFamily family_from_json(const nlohmann::json& j) {
  try {
    const std::string tag = j.at("tag").get<std::string>();
    if (tag == "mt") return make_mt(j.at("n").get<int>(), j.value("t", 0.0));
    if (tag == "mhat") {
      double t = j.value("t", 0.5);
      if (j.contains("clifford")) return make_mhat(clifford_from_json(j["clifford"]), t);
      if (j.contains("clifford_ref")) {
        std::ifstream in(j["clifford_ref"].get<std::string>());
        if (!in) throw UsageError("mhat: cannot open clifford_ref");
        return make_mhat(clifford_from_json(nlohmann::json::parse(in)), t);
      }
      return make_mhat(gen_system(j.at("p").get<int>(), j.value("k", 1)), t);
    }
    if (tag == "graph") {
      int m = j.at("m").get<int>();
      LightVec u;
      if (j.contains("u")) {
        auto v = j["u"].get<std::vector<double>>();
        u.u = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
      } else if (j.contains("w")) {
        auto v = j["w"].get<std::vector<double>>();
        u = LightVec::from_direction(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
      } else {
        u = LightVec::from_direction(Vec::Unit(m, 0));
      }
      return make_graph(m, j.at("a").get<double>(), u, j.value("t", 0.0), j.value("branch", 1));
    }
    if (tag == "mtf")
      return make_mtf(parse_field(j.at("field").get<std::string>()), j.at("n").get<int>(), j.value("t", 0.5));
    throw UsageError("unknown family tag '" + tag + "'");
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("family json: ") + e.what());
  }
}

double evaluate_F(const HypersurfaceFamily& fam, const ProductPoint& p) {
  return derivs(fam, p, false).G;
}

Evaluation evaluate(const HypersurfaceFamily& fam, const ProductPoint& p) {
  Derivs d = derivs(fam, p, true);
  Evaluation ev;
  ev.F = d.G;
  ev.grad = {factor_gradient(p.x, d.gx), factor_gradient(p.y, d.gy)};
  ev.lap = factor_laplacian(p.x, d.gx, d.Hxx) + factor_laplacian(p.y, d.gy, d.Hyy);
  return ev;
}

double family_b(const HypersurfaceFamily& fam, double F) {
  return std::visit(overloaded{[&](const MTParams&) { return 2 * (1 - F * F); },
                               [&](const GraphSHParams& q) { return (1 + q.a * q.a) * (1 - F * F); },
                               [&](const auto&) { return 8 * F * (1 - F); }},
                    fam.params);
}

double family_a(const HypersurfaceFamily& fam, double F, const ProductPoint& p) {
  return std::visit(
      overloaded{[&](const MTParams& q) { return -2.0 * q.n * F; },
                 [&](const MHatParams& q) { return 4.0 * q.sys.p - 4.0 * q.sys.l * F; },
                 [&](const MTFParams& q) {
                   double d = field_dim(q.field);
                   return 4 * d * (1 - (q.n + 1) * F);
                 },
                 [&](const GraphSHParams& q) {
                   // Laplacian of the horospherical log term is m-1, so the
                   // cos(Theta) branch enters.
                   double sg = std::cos(graph_angles(q, p).Theta) >= 0 ? 1.0 : -1.0;
                   return -(1 + q.a * q.a) * F - q.a * (q.m - 1) * sg * std::sqrt(std::max(0.0, 1 - F * F));
                 }},
      fam.params);
}

ProductPoint project_to_level(const HypersurfaceFamily& fam, ProductPoint p, double level) {
  for (int it = 0; it < 50; ++it) {
    Derivs d = derivs(fam, p, false);
    double r = d.G - level;
    if (std::abs(r) < 1e-12) return p;
    TangentVec g{factor_gradient(p.x, d.gx), factor_gradient(p.y, d.gy)};
    double g2 = inner(p, g, g);
    if (!(g2 > 1e-14)) throw NumericalFailure("level projection hit a critical point");
    p = product_exp(p, g, -r / g2);
  }
  if (std::abs(evaluate_F(fam, p) - level) < 1e-12) return p;
  throw NumericalFailure("level projection did not converge");
}

ProductPoint sample_on_level(const HypersurfaceFamily& fam, std::uint64_t seed) {
  if (const auto* g = std::get_if<GraphSHParams>(&fam.params)) {
    ProductPoint p = sample_point(fam.ambient(), seed);
    double s = lorentz_inner(p.y.coords, g->u.u);
    double Theta = g->branch > 0 ? std::asin(g->t) : std::numbers::pi - std::asin(g->t);
    double phi = Theta + g->a * std::log(-s);
    Vec x(2);
    x << std::cos(phi), std::sin(phi);
    p.x = make_factor(x, 1);
    return p;
  }
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    ProductPoint p = sample_point(fam.ambient(), attempt == 0 ? seed : derive_seed(seed, attempt));
    try {
      p = project_to_level(fam, p, fam.level());
      Evaluation ev = evaluate(fam, p);
      if (norm(p, ev.grad) > 1e-6) return p;
    } catch (const NumericalFailure&) {
    }
  }
  throw NumericalFailure("could not sample a regular point on the level set");
}

IsoReport check_isoparametric(const HypersurfaceFamily& fam, int samples, std::uint64_t seed, int workers) {
  if (samples < 1) throw UsageError("samples must be >= 1");
  struct Row {
    double b, a, fd, lvl;
  };
  std::vector<Row> rows(static_cast<std::size_t>(samples));
  parallel_for(samples, workers, [&](int i) {
    std::uint64_t si = derive_seed(seed, static_cast<std::uint64_t>(i));
    ProductPoint p = sample_on_level(fam, si);
    Evaluation ev = evaluate(fam, p);
    Row r;
    r.b = std::abs(inner(p, ev.grad, ev.grad) - family_b(fam, ev.F));
    r.a = std::abs(ev.lap - family_a(fam, ev.F, p));
    r.lvl = std::abs(ev.F - fam.level());

    std::mt19937_64 rng(derive_seed(si, 0xfdULL));
    std::normal_distribution<double> gauss;
    Vec a1(p.x.coords.size()), a2(p.y.coords.size());
    for (auto& v : a1) v = gauss(rng);
    for (auto& v : a2) v = gauss(rng);
    TangentVec v = tangent_project(p, a1, a2);
    v = v * (1.0 / norm(p, v));
    const double h = 1e-5;
    double fd = (evaluate_F(fam, product_exp(p, v, h)) - evaluate_F(fam, product_exp(p, v, -h))) / (2 * h);
    r.fd = std::abs(fd - inner(p, ev.grad, v));
    rows[static_cast<std::size_t>(i)] = r;
  });
  IsoReport rep;
  rep.samples = samples;
  for (const Row& r : rows) {
    rep.max_b_residual = std::max(rep.max_b_residual, r.b);
    rep.max_a_residual = std::max(rep.max_a_residual, r.a);
    rep.max_fd_residual = std::max(rep.max_fd_residual, r.fd);
    rep.max_level_residual = std::max(rep.max_level_residual, r.lvl);
  }
  return rep;
}

TangentVec unit_normal(const HypersurfaceFamily& fam, const ProductPoint& p) {
  Derivs d = derivs(fam, p, false);
  TangentVec g{factor_gradient(p.x, d.gx), factor_gradient(p.y, d.gy)};
  double len = norm(p, g);
  if (len < 1e-8) throw SingularLevel("gradient vanishes: point lies on a focal level");
  return g * (1.0 / len);
}

double angle_function(const HypersurfaceFamily& fam, const ProductPoint& p) {
  TangentVec N = unit_normal(fam, p);
  return inner(p, product_structure(N), N);
}

TangentVec angle_vector(const ProductPoint& p, const TangentVec& N) {
  double C = inner(p, product_structure(N), N);
  return product_structure(N) - N * C;
}

ShapeOperator shape_operator(const HypersurfaceFamily& fam, const ProductPoint& p,
                             const std::vector<TangentVec>* basis, double h) {
  ShapeOperator S;
  TangentVec N = unit_normal(fam, p);
  S.frame = basis ? *basis : complement_frame(p, N);
  const int d = static_cast<int>(S.frame.size());
  S.A = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    TangentVec Np = unit_normal(fam, product_exp(p, S.frame[i], h));
    TangentVec Nm = unit_normal(fam, product_exp(p, S.frame[i], -h));
    TangentVec D = (Np - Nm) * (1.0 / (2 * h));
    for (int j = 0; j < d; ++j) S.A(j, i) = -inner(p, D, S.frame[j]);
  }
  S.asymmetry = d ? (S.A - S.A.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (S.asymmetry > 1e-5) throw NumericalFailure("shape operator asymmetry exceeds 1e-5");
  S.A = 0.5 * (S.A + S.A.transpose()).eval();
  return S;
}

TangentVec apply_shape(const ShapeOperator& S, const ProductPoint& p, const TangentVec& v) {
  const int d = static_cast<int>(S.frame.size());
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = inner(p, v, S.frame[i]);
  Vec Ac = S.A * c;
  TangentVec out{Vec::Zero(p.x.coords.size()), Vec::Zero(p.y.coords.size())};
  for (int i = 0; i < d; ++i) out = out + S.frame[i] * Ac[i];
  return out;
}

std::vector<Cluster> cluster_values(std::vector<double> values, double tol, bool* ambiguous) {
  std::sort(values.begin(), values.end());
  std::vector<Cluster> out;
  std::vector<double> sums;
  bool amb = false;
  double last = 0.0;
  for (double v : values) {
    double gap = v - last;
    double scale = tol * (1 + std::abs(v));
    if (out.empty() || gap > scale) {
      if (!out.empty() && gap < 2 * scale) amb = true;
      out.push_back({v, 1});
      sums.push_back(v);
    } else {
      ++out.back().multiplicity;
      sums.back() += v;
    }
    last = v;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].value = sums[i] / out[i].multiplicity;
  if (ambiguous) *ambiguous = amb;
  return out;
}

SpectrumReport spectrum_of(const Mat& A, double cluster_tol, bool pairing) {
  SpectrumReport rep;
  if (A.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  for (double v : rep.eigenvalues) rep.trace += v;
  rep.clusters = cluster_values(rep.eigenvalues, cluster_tol, &rep.ambiguous);
  if (pairing) {
    rep.pairing_checked = true;
    for (const Cluster& c : rep.clusters) {
      if (std::abs(c.value) < 1e-4) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const Cluster& o : rep.clusters)
        if (o.multiplicity == c.multiplicity) best = std::min(best, std::abs(c.value * o.value + 0.5));
      rep.pairing_residual = std::max(rep.pairing_residual, best);
    }
  }
  return rep;
}

SpectrumReport principal_spectrum(const HypersurfaceFamily& fam, const ProductPoint& p, double cluster_tol) {
  ShapeOperator S = shape_operator(fam, p);
  SpectrumReport rep = spectrum_of(S.A, cluster_tol, fam.spherical_product());
  rep.symmetry_residual = S.asymmetry;
  return rep;
}

std::vector<TangentVec> adapted_frame(const ProductPoint& p, const TangentVec& N) {
  TangentVec V = angle_vector(p, N);
  double len = norm(p, V);
  if (len < 1e-8) throw DomainError("angle vector vanishes: |C| = 1");
  std::vector<TangentVec> frame{V * (1.0 / len)};
  const Vec z1 = Vec::Zero(p.x.coords.size());
  const Vec z2 = Vec::Zero(p.y.coords.size());
  for (Vec& h : factor_complement(p.x, {N.v1})) frame.push_back({h, z2});
  for (Vec& v : factor_complement(p.y, {N.v2})) frame.push_back({z1, v});
  return frame;
}

SliceBlocks slice_blocks(const HypersurfaceFamily& fam, const ProductPoint& p) {
  TangentVec N = unit_normal(fam, p);
  SliceBlocks b;
  b.C = inner(p, product_structure(N), N);
  if (std::abs(b.C) >= 1 - 1e-8) throw DomainError("slice blocks need |C| < 1");
  auto frame = adapted_frame(p, N);
  ShapeOperator S = shape_operator(fam, p, &frame);
  const int nh = p.n() - 1, nv = p.m() - 1;
  Mat Ah = S.A.block(1, 1, nh, nh);
  Mat Av = S.A.block(1 + nh, 1 + nh, nv, nv);
  b.horizontal = spectrum_of(Ah, kClusterTol, false).eigenvalues;
  b.vertical = spectrum_of(Av, kClusterTol, false).eigenvalues;
  b.mixing = S.A.block(1, 1 + nh, nh, nv).norm();
  return b;
}

double rigidity_residual(const AmbientSpec& amb, const SliceBlocks& b) {
  const double C = b.C;
  const double C1sq = (1 + C) / 2, C2sq = (1 - C) / 2;
  double sl = 0.0, sm = 0.0;
  for (double v : b.horizontal) sl += v * v;
  for (double v : b.vertical) sm += v * v;
  double lhs = (1 - C) * (1 - C) * (amb.c1 * C1sq * (amb.n - 1) + sl);
  double rhs = (1 + C) * (1 + C) * (amb.c2 * C2sq * (amb.m - 1) + sm);
  return std::abs(lhs - rhs);
}

double rigidity_residual(const HypersurfaceFamily& fam, const ProductPoint& p) {
  return rigidity_residual(fam.ambient(), slice_blocks(fam, p));
}

Mat ricci_matrix(const ProductPoint& p, int c1, int c2, const ShapeOperator& S) {
  const auto& e = S.frame;
  const int d = static_cast<int>(e.size());
  Mat Gh(d, d), Gv(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Gh(i, j) = factor_inner(p.x.c, e[i].v1, e[j].v1);
      Gv(i, j) = factor_inner(p.y.c, e[i].v2, e[j].v2);
    }
  // sum_k <R(e_k, e_i) e_j, e_k> for the product of space forms.
  Mat Rb = c1 * (Gh * Gh.trace() - Gh * Gh) + c2 * (Gv * Gv.trace() - Gv * Gv);
  double H = S.A.trace();
  return Rb + H * S.A - S.A * S.A;
}

CurvatureScalars curvature_scalars(const HypersurfaceFamily& fam, const ProductPoint& p) {
  ShapeOperator S = shape_operator(fam, p);
  auto amb = fam.ambient();
  Mat Ric = ricci_matrix(p, amb.c1, amb.c2, S);
  CurvatureScalars cs;
  cs.H = S.A.trace();
  cs.R = Ric.trace();
  auto sp = spectrum_of(Ric, kClusterTol, false);
  cs.ric = sp.clusters;
  double mean = cs.R / std::max<Eigen::Index>(1, Ric.rows());
  for (double v : sp.eigenvalues) cs.einstein_defect = std::max(cs.einstein_defect, std::abs(v - mean));
  return cs;
}

namespace {

std::vector<Cluster> sorted_nonzero(std::vector<Cluster> cs) {
  cs.erase(std::remove_if(cs.begin(), cs.end(), [](const Cluster& c) { return c.multiplicity <= 0; }), cs.end());
  std::sort(cs.begin(), cs.end(), [](const Cluster& a, const Cluster& b) { return a.value < b.value; });
  return cs;
}

// Five-curvature spectrum of sum_a <M_a x, y>^2 = t with p forms on R^l.
std::vector<Cluster> quadratic_spectrum(int p, int l, double t) {
  const double phi0 = std::atan(std::sqrt((1 - std::sqrt(t)) / (1 + std::sqrt(t))));
  std::vector<Cluster> cs{{0.0, 1}};
  const int mult[4] = {l - p - 1, p - 1, l - p - 1, p - 1};
  for (int k = 0; k < 4; ++k) {
    double ang = phi0 + k * std::numbers::pi / 4;
    cs.push_back({std::cos(ang) / std::sin(ang) / std::numbers::sqrt2, mult[k]});
  }
  return sorted_nonzero(cs);
}

} // namespace

Prediction predicted(const HypersurfaceFamily& fam) {
  return std::visit(
      overloaded{[](const MTParams& q) {
                   double lp = std::sqrt((1 + q.t) / (2 * (1 - q.t)));
                   double lm = -std::sqrt((1 - q.t) / (2 * (1 + q.t)));
                   return Prediction{0.0, sorted_nonzero({{lm, q.n - 1}, {0.0, 1}, {lp, q.n - 1}})};
                 },
                 [](const MHatParams& q) { return Prediction{0.0, quadratic_spectrum(q.sys.p, q.sys.l, q.t)}; },
                 [](const MTFParams& q) {
                   int d = field_dim(q.field);
                   return Prediction{0.0, quadratic_spectrum(d, (q.n + 1) * d, q.t)};
                 },
                 [](const GraphSHParams& q) {
                   double s = 1 + q.a * q.a;
                   double lam = q.branch * q.a / std::sqrt(s);
                   return Prediction{(1 - q.a * q.a) / s, sorted_nonzero({{0.0, 1}, {lam, q.m - 1}})};
                 }},
      fam.params);
}

void parallel_for(int count, int workers, const std::function<void(int)>& f) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  int err_index = count;
  std::exception_ptr err;
  auto run = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        // Keep the lowest failing index so the rethrown error is scheduling-independent.
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min(workers, count);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

} // namespace isogeo
