#pragma once

#include "isogeo/bipoly.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace isogeo {

// tau-Kac matrix of order d in the formal variable tau1 (which_tau = 1) or
// tau2 (which_tau = 2).
PolyMatrix kac_matrix(int d, int which_tau);
bool kac_charpoly_check(int d);

// I_m (x) K_n(tau1) + K_m(tau2) (x) I_n; cell (l, nu) sits at index l*n + nu.
PolyMatrix kronecker_sum(int m, int n);
PolyMatrix build_Q(int m, int n);

// Tables indexed by (l, nu, k); `first` holds alpha or p, `second` beta or q.
struct CoeffTable {
  int m = 0, n = 0, kmax = 0;
  std::vector<BiPoly> first, second;

  static CoeffTable zeros(int m, int n, int kmax);
  std::size_t index(int l, int nu, int k) const {
    return (static_cast<std::size_t>(k) * m + l) * n + nu;
  }
  BiPoly& a(int l, int nu, int k) { return first[index(l, nu, k)]; }
  BiPoly& b(int l, int nu, int k) { return second[index(l, nu, k)]; }
  const BiPoly& a(int l, int nu, int k) const { return first[index(l, nu, k)]; }
  const BiPoly& b(int l, int nu, int k) const { return second[index(l, nu, k)]; }
  // Layer k flattened as (first..., second...), length 2mn.
  std::vector<BiPoly> row(int k) const;
};

// Derivative-coefficient recurrence; only layer k = 0 of `init` is read.
CoeffTable run_recurrence_ab(int m, int n, int kmax, const CoeffTable& init);

// Deliberate defects for mutation testing.
enum class PQMutation { none, drop_tau1_term, shift_index };
CoeffTable run_recurrence_pq(int m, int n, int kmax, PQMutation mut = PQMutation::none);

// e1~ Q^k for k = 0..kmax as BiPoly rows.
std::vector<std::vector<BiPoly>> q_power_rows(int m, int n, int kmax);

struct ExactCheck {
  std::string name;
  std::string instance;
  bool pass = false;
  std::string witness;
};

// Monomial coefficients of the interpolating polynomial through (xs, ys).
std::vector<Rational> interpolate_1d(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

// Parity, factorial and leading-term checks on the (p, q) table. The degree
// check interpolates sigma over an (n, m) grid anchored at the instance and
// covers k <= min(kmax, kdeg_max).
std::vector<ExactCheck> verify_prop62(int m, int n, int kmax, int kdeg_max = 10,
                                      PQMutation mut = PQMutation::none);

struct AngleSets {
  std::set<Rational> singular;  // Q singular (c1 c2 > 0, one of m, n even)
  std::set<Rational> nonsimple; // repeated eigenvalues of the Kronecker sum
};
// Values with |C| < 1 only.
AngleSets exceptional_angles(int m, int n);
// Same enumeration with the numerator sign as printed in the source.
AngleSets exceptional_angles_printed(int m, int n);

Rational angle_tau1(const Rational& c1, const Rational& C);
Rational angle_tau2(const Rational& c2, const Rational& C);

// det Q == 0 on the grid C = a/grid, |a| < grid, plus every listed angle,
// compared with membership in the singular set.
ExactCheck singular_angle_grid_check(int m, int n, int c1, int c2, int grid = 24);

// Reason the eigenvalues (m-1-2i) sqrt(tau2) + (n-1-2j) sqrt(tau1) fail to be
// simple (or, for m or n even, fail to be nonzero).
std::optional<std::string> genericity_violation(int m, int n, const Rational& tau1, const Rational& tau2);

// Null vector of K_d(tau) normalized to first entry 1 (d odd).
std::vector<Rational> kac_kernel(int d, const Rational& tau);

// (w, 0) Q^k = lambda^k (w, 0) + k lambda^{k-1} (0, w) for every left
// eigenvector w = y_i (x) x_j, with tau1 = a^2 and tau2 = b^2.
ExactCheck jordan_action_check(int m, int n, const Rational& a, const Rational& b, int kmax);

// Throws UsageError when (tau1, tau2) is not generic or s is out of range.
std::vector<ExactCheck> kac_rank_checks(int m, int n, int s, const Rational& tau1, const Rational& tau2);

ExactCheck chessboard_check(int m, int n, int lmax);
ExactCheck detq_symbolic_check(int m, int n);
ExactCheck detq_sampled_check(int m, int n, std::uint64_t seed, int samples = 5);
ExactCheck pq_matrix_power_check(int m, int n, int kmax);
ExactCheck ab_pq_equivalence_check(int m, int n, int kmax, std::uint64_t seed);

} // namespace isogeo
