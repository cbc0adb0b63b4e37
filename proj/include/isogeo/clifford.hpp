#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

namespace isogeo {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Dimension of the irreducible module: 1,2,4,4,8,8,8,8 then x16 every 8 steps.
int delta(int p);

// Skew system E_1..E_{p-1} on R^l and symmetric system P_0..P_p on R^{2l},
// with P_0 = diag(I,-I), P_1 = [[0,I],[I,0]], P_{a+1} = [[0,E_a],[-E_a,0]].
struct CliffordSystem {
  int p = 1;
  int k = 1;
  int l = 1;
  std::vector<IMat> E;
  std::vector<IMat> P;
};

CliffordSystem gen_system(int p, int k);
std::vector<IMat> symmetric_system(const std::vector<IMat>& E, int l);

struct RelationCheck {
  std::string name;
  bool pass = true;
  // First violating pair; E indices are 1-based, P indices 0-based.
  int i = -1;
  int j = -1;
};

struct RelationReport {
  std::vector<RelationCheck> checks;
  bool all_pass() const;
  const RelationCheck* find(const std::string& name) const;
};

RelationReport verify_system(const CliffordSystem& sys);

// <x,y>^2 + sum_a <E_a x, y>^2 on S^{l-1} x S^{l-1}.
double otfkm_restricted_f(const CliffordSystem& sys, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y);
// |Z|^4 - 2 sum_a <P_a Z, Z>^2 on R^{2l}.
double otfkm_full(const CliffordSystem& sys, const Eigen::VectorXd& Z);

nlohmann::json clifford_to_json(const CliffordSystem& sys, bool with_p = true);
CliffordSystem clifford_from_json(const nlohmann::json& j);

} // namespace isogeo
