// isogeo: verification driver for isoparametric hypersurfaces in products of
// space forms. Exit status 0 when every check passes, 1 when a check fails,
// 2 on bad usage.

#include "battery.hpp"

#include "isogeo/clifford.hpp"
#include "isogeo/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace isogeo;
using namespace isogeo::cli;

namespace {

struct FamilyArgs {
  std::string tag, spec;
  int n = 0, m = 0, p = 0, k = 1, branch = 1;
  double t = 0, a = 0;
  std::string field;
  std::vector<double> w;
  std::map<std::string, CLI::Option*> given;
};

void add_family_options(CLI::App* sub, FamilyArgs& f) {
  sub->add_option("family_tag", f.tag, "mt, mhat, graph or mtf");
  sub->add_option("--family", f.tag, "mt, mhat, graph or mtf");
  sub->add_option("--spec", f.spec, "family JSON file");
  f.given["n"] = sub->add_option("--n", f.n, "sphere dimension (mt) or F-dimension (mtf)");
  f.given["m"] = sub->add_option("--m", f.m, "hyperbolic dimension (graph)");
  f.given["p"] = sub->add_option("--p", f.p, "Clifford system size (mhat)");
  f.given["k"] = sub->add_option("--k", f.k, "number of irreducible blocks (mhat)");
  f.given["t"] = sub->add_option("--t", f.t, "level");
  f.given["a"] = sub->add_option("--a", f.a, "nonzero slope (graph)");
  f.given["branch"] = sub->add_option("--branch", f.branch, "sign of cos(Theta) for sampling (graph)");
  f.given["field"] = sub->add_option("--field", f.field, "R, C or H (mtf)");
  f.given["w"] = sub->add_option("--w", f.w, "unit direction of the lightlike vector (graph)");
}

HypersurfaceFamily build_family(const FamilyArgs& f) {
  nlohmann::json j;
  if (!f.spec.empty()) {
    std::ifstream in(f.spec);
    if (!in) throw UsageError("cannot open family spec '" + f.spec + "'");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("family spec: ") + e.what());
    }
  }
  if (!f.tag.empty()) j["tag"] = f.tag;
  if (!j.contains("tag")) throw UsageError("no family given (use --family or --spec)");
  auto set = [&](const std::string& key, const auto& value) {
    if (f.given.at(key)->count()) j[key] = value;
  };
  set("n", f.n);
  set("m", f.m);
  set("p", f.p);
  set("k", f.k);
  set("t", f.t);
  set("a", f.a);
  set("branch", f.branch);
  set("field", f.field);
  set("w", f.w);
  return family_from_json(j);
}

double env_tolerance() {
  const char* v = std::getenv("ISOGEO_TOL_RESIDUAL");
  if (!v || !*v) return 1e-9;
  char* end = nullptr;
  double x = std::strtod(v, &end);
  if (*end != '\0' || !(x > 0)) throw UsageError(std::string("ISOGEO_TOL_RESIDUAL must be a positive real, got '") + v + "'");
  return x;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification driver for isoparametric hypersurfaces in S^n x S^m and S^n x H^m"};
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions opt;
  std::optional<double> tol_flag;
  std::string format = "json", output;
  app.add_option("--samples", opt.samples, "samples per family instance")->capture_default_str();
  app.add_option("--seed", opt.seed, "master seed")->capture_default_str();
  app.add_option("--workers", opt.workers, "worker threads")->capture_default_str();
  app.add_option("--tol", tol_flag, "residual tolerance (overrides ISOGEO_TOL_RESIDUAL)");
  app.add_option("--format", format, "json or csv")->capture_default_str();
  app.add_option("--output,-o", output, "report path (default stdout)");

  auto* clif = app.add_subcommand("clifford", "generate or verify Clifford systems");
  clif->require_subcommand(1);
  int cp = 1, ck = 1;
  std::string cfile;
  bool no_p = false;
  auto* cgen = clif->add_subcommand("gen", "print the generated system as JSON");
  cgen->add_option("--p", cp)->required();
  cgen->add_option("--k", ck)->capture_default_str();
  cgen->add_flag("--no-symmetric", no_p, "omit the symmetric matrices P");
  auto* cver = clif->add_subcommand("verify", "check the Clifford relations exactly");
  cver->add_option("--p", cp);
  cver->add_option("--k", ck)->capture_default_str();
  cver->add_option("--file", cfile, "system JSON instead of --p/--k");

  FamilyArgs fv, fs, ff;
  auto* ver = app.add_subcommand("verify", "isoparametric, angle, spectrum, rigidity and AV checks");
  add_family_options(ver, fv);
  auto* spec = app.add_subcommand("spectrum", "principal curvature checks");
  add_family_options(spec, fs);
  auto* flow = app.add_subcommand("flow", "focal, Riccati, Jacobi determinant and V-flow checks");
  add_family_options(flow, ff);

  auto* kac = app.add_subcommand("kac", "exact coefficient-recurrence suite");
  kac->require_subcommand(1);
  auto* kver = kac->add_subcommand("verify", "run the exact suite on one (m, n)");
  KacOptions ko;
  std::string tau1 = "2", tau2 = "3";
  kver->add_option("--m", ko.m)->required();
  kver->add_option("--n", ko.n)->required();
  kver->add_option("--kmax", ko.kmax, "default 2mn+4");
  kver->add_option("--tau1", tau1, "rational a/b")->capture_default_str();
  kver->add_option("--tau2", tau2, "rational c/d")->capture_default_str();
  kver->add_option("--s", ko.s, "rank-check offsets (default 2mn and 2mn+3)");

  auto* series = app.add_subcommand("series", "Laurent series suite");
  series->require_subcommand(1);
  auto* scheck = series->add_subcommand("check", "run the full series battery");

  auto* all = app.add_subcommand("all", "full battery at desk scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    opt.tol_residual = tol_flag ? *tol_flag : env_tolerance();
    if (!(opt.tol_residual > 0)) throw UsageError("--tol must be positive");
    if (opt.samples < 1) throw UsageError("--samples must be >= 1");
    if (opt.workers < 1) throw UsageError("--workers must be >= 1");
    const ReportFormat fmt = parse_report_format(format);

    if (cgen->parsed()) {
      write_output(clifford_to_json(gen_system(cp, ck), !no_p).dump(2) + "\n", output);
      return 0;
    }

    std::vector<CheckResult> results;
    if (cver->parsed()) {
      if (!cfile.empty()) {
        std::ifstream in(cfile);
        if (!in) throw UsageError("cannot open '" + cfile + "'");
        CliffordSystem sys;
        try {
          sys = clifford_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
          throw UsageError(std::string("clifford json: ") + e.what());
        }
        for (const auto& c : verify_system(sys).checks)
          results.push_back(exact_check("clifford." + c.name, "file=" + cfile, c.pass,
                                        c.pass ? "" : "first violation at (" + std::to_string(c.i) + "," +
                                                          std::to_string(c.j) + ")"));
      } else {
        results = clifford_checks(cp, ck);
      }
    } else if (ver->parsed()) {
      results = family_checks(build_family(fv), opt);
    } else if (spec->parsed()) {
      results = spectrum_checks(build_family(fs), opt);
    } else if (flow->parsed()) {
      results = flow_checks(build_family(ff), opt);
    } else if (kver->parsed()) {
      ko.tau1 = parse_rational(tau1);
      ko.tau2 = parse_rational(tau2);
      results = kac_checks(ko, opt);
    } else if (scheck->parsed()) {
      results = series_checks();
    } else if (all->parsed()) {
      results = all_checks(opt);
    }

    ReportMeta meta;
    meta.seed = opt.seed;
    write_output(emit(results, fmt, meta), output);
    return all_pass(results) ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "isogeo: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "isogeo: " << e.what() << "\n";
    return 1;
  }
}
