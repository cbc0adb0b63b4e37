#pragma once

#include "isogeo/bipoly.hpp"
#include "isogeo/catalog.hpp"
#include "isogeo/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace isogeo::cli {

struct RunOptions {
  int samples = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
  double tol_residual = 1e-9;
};

// Fixed tolerances for the finite-difference based checks.
constexpr double kTolFdGradient = 1e-6;
constexpr double kTolSpectrum = 1e-6;
constexpr double kTolAV = 1e-6;
constexpr double kTolRigidity = 1e-7;
constexpr double kTolPairing = 1e-6;
constexpr double kTolMeanCurvature = 1e-8;
constexpr double kTolFlow = 1e-5;
constexpr double kTolFocal = 1e-6;
constexpr double kTolVFlow = 1e-6;
constexpr double kTolWitness = 1e-8;
constexpr double kTolGraphSymmetry = 1e-10;

// Flow checks run on this many sample points at most.
constexpr int kFlowPoints = 10;
constexpr int kWitnessPairs = 100;

std::vector<CheckResult> clifford_checks(int p, int k);
std::vector<CheckResult> family_checks(const HypersurfaceFamily& fam, const RunOptions& opt);
std::vector<CheckResult> spectrum_checks(const HypersurfaceFamily& fam, const RunOptions& opt);
std::vector<CheckResult> flow_checks(const HypersurfaceFamily& fam, const RunOptions& opt);
std::vector<CheckResult> witness_checks(const HypersurfaceFamily& fam, const RunOptions& opt);

struct KacOptions {
  int m = 1, n = 2, kmax = -1;  // kmax < 0: 2mn + 4
  Rational tau1 = 2, tau2 = 3;
  std::vector<int> s;           // empty: {2mn, 2mn + 3}
};
std::vector<CheckResult> kac_checks(const KacOptions& k, const RunOptions& opt);

std::vector<CheckResult> series_checks();

std::vector<CheckResult> all_checks(const RunOptions& opt);

} // namespace isogeo::cli
