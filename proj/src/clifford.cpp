#include "isogeo/clifford.hpp"

#include "isogeo/algebra.hpp"
#include "isogeo/errors.hpp"

namespace isogeo {

int delta(int p) {
  if (p <= 0) throw UsageError("delta: p must be >= 1");
  static constexpr int base[8] = {1, 2, 4, 4, 8, 8, 8, 8};
  int d = base[(p - 1) % 8];
  for (int q = p; q > 8; q -= 8) d *= 16;
  return d;
}

namespace {

// Left multiplication by the i-th unit of the d-dimensional algebra.
IMat left_mult(int d, int i) {
  IMat M(d, d);
  auto e = cd::unit<long long>(d, i);
  for (int j = 0; j < d; ++j) {
    auto col = cd::mul<long long>(e, cd::unit<long long>(d, j));
    for (int r = 0; r < d; ++r) M(r, j) = col[r];
  }
  return M;
}

IMat kron(const IMat& A, const IMat& B) {
  IMat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

// r anticommuting skew square roots of -I on R^{delta(r+1)}.
std::vector<IMat> irreducible(int r) {
  if (r >= 8) {
    auto inner = irreducible(r - 8);
    const int l = static_cast<int>(inner.empty() ? 1 : inner[0].rows());
    IMat J(2, 2), K(2, 2), L(2, 2);
    J << 0, -1, 1, 0;
    K << 1, 0, 0, -1;
    L << 0, 1, 1, 0;
    const IMat I8 = IMat::Identity(8, 8), Il = IMat::Identity(l, l);
    std::vector<IMat> out;
    for (int i = 1; i < 8; ++i) out.push_back(kron(kron(left_mult(8, i), K), Il));
    out.push_back(kron(kron(I8, J), Il));
    const IMat omega = kron(I8, L);
    for (const IMat& e : inner) out.push_back(kron(omega, e));
    return out;
  }
  const int d = delta(r + 1);
  std::vector<IMat> out;
  for (int i = 1; i <= r; ++i) out.push_back(left_mult(d, i));
  return out;
}

} // namespace

std::vector<IMat> symmetric_system(const std::vector<IMat>& E, int l) {
  const IMat I = IMat::Identity(l, l), Z = IMat::Zero(l, l);
  std::vector<IMat> P;
  IMat P0(2 * l, 2 * l), P1(2 * l, 2 * l);
  P0 << I, Z, Z, -I;
  P1 << Z, I, I, Z;
  P.push_back(P0);
  P.push_back(P1);
  for (const IMat& e : E) {
    IMat Pa(2 * l, 2 * l);
    Pa << Z, e, -e, Z;
    P.push_back(Pa);
  }
  return P;
}

CliffordSystem gen_system(int p, int k) {
  if (p < 1 || k < 1) throw UsageError("gen_system: need p >= 1 and k >= 1");
  const int d = delta(p);
  const int l = k * d;
  auto base = irreducible(p - 1);
  CliffordSystem sys{p, k, l, {}, {}};
  for (const IMat& e : base) {
    IMat big = IMat::Zero(l, l);
    for (int c = 0; c < k; ++c) big.block(c * d, c * d, d, d) = e;
    sys.E.push_back(big);
  }
  sys.P = symmetric_system(sys.E, l);
  return sys;
}

bool RelationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const RelationCheck* RelationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

// First (a,b) with a <= b where M_a M_b + M_b M_a != 2 s delta_ab I.
RelationCheck anticommute(const std::string& name, const std::vector<IMat>& M, long long s,
                          int offset) {
  RelationCheck rc{name};
  for (std::size_t a = 0; a < M.size() && rc.pass; ++a)
    for (std::size_t b = a; b < M.size(); ++b) {
      IMat lhs = M[a] * M[b] + M[b] * M[a];
      IMat rhs = IMat::Zero(lhs.rows(), lhs.cols());
      if (a == b) rhs = 2 * s * IMat::Identity(lhs.rows(), lhs.cols());
      if (lhs != rhs) {
        rc = {name, false, static_cast<int>(a) + offset, static_cast<int>(b) + offset};
        break;
      }
    }
  return rc;
}

RelationCheck each(const std::string& name, const std::vector<IMat>& M, int offset,
                   bool (*ok)(const IMat&)) {
  for (std::size_t a = 0; a < M.size(); ++a)
    if (!ok(M[a])) return {name, false, static_cast<int>(a) + offset, static_cast<int>(a) + offset};
  return {name};
}

bool is_skew(const IMat& A) { return A + A.transpose() == IMat::Zero(A.rows(), A.cols()); }
bool is_symmetric(const IMat& A) { return A == A.transpose(); }
bool is_orthogonal(const IMat& A) {
  return A.transpose() * A == IMat::Identity(A.rows(), A.cols());
}

} // namespace

RelationReport verify_system(const CliffordSystem& sys) {
  RelationReport rep;
  bool shapes = static_cast<int>(sys.E.size()) == sys.p - 1;
  for (const auto& e : sys.E) shapes = shapes && e.rows() == sys.l && e.cols() == sys.l;
  for (const auto& q : sys.P) shapes = shapes && q.rows() == 2 * sys.l && q.cols() == 2 * sys.l;
  rep.checks.push_back({"shapes", shapes});
  if (!shapes) return rep;

  rep.checks.push_back(each("E.skew", sys.E, 1, is_skew));
  rep.checks.push_back(each("E.orthogonal", sys.E, 1, is_orthogonal));
  rep.checks.push_back(anticommute("E.clifford", sys.E, -1, 1));

  if (!sys.P.empty()) {
    RelationCheck count{"P.count", static_cast<int>(sys.P.size()) == sys.p + 1};
    rep.checks.push_back(count);
    rep.checks.push_back(each("P.symmetric", sys.P, 0, is_symmetric));
    rep.checks.push_back(each("P.orthogonal", sys.P, 0, is_orthogonal));
    rep.checks.push_back(anticommute("P.clifford", sys.P, 1, 0));
    auto canon = symmetric_system({}, sys.l);
    RelationCheck blocks{"P.canonical_blocks"};
    for (int a = 0; a < 2 && a < static_cast<int>(sys.P.size()); ++a)
      if (sys.P[a] != canon[a]) {
        blocks = {"P.canonical_blocks", false, a, a};
        break;
      }
    rep.checks.push_back(blocks);
  }
  return rep;
}

double otfkm_restricted_f(const CliffordSystem& sys, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
  if (x.size() != sys.l || y.size() != sys.l)
    throw UsageError("otfkm_restricted_f: vectors must have length l");
  double xy = x.dot(y);
  double f = xy * xy;
  for (const IMat& e : sys.E) {
    double w = (e.cast<double>() * x).dot(y);
    f += w * w;
  }
  return f;
}

double otfkm_full(const CliffordSystem& sys, const Eigen::VectorXd& Z) {
  if (Z.size() != 2 * sys.l) throw UsageError("otfkm_full: vector must have length 2l");
  if (sys.P.empty()) throw UsageError("otfkm_full: system has no symmetric part");
  double z2 = Z.squaredNorm();
  double F = z2 * z2;
  for (const IMat& q : sys.P) {
    double w = (q.cast<double>() * Z).dot(Z);
    F -= 2 * w * w;
  }
  return F;
}

namespace {

nlohmann::json mat_json(const IMat& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) r.push_back(A(i, j));
    rows.push_back(r);
  }
  return rows;
}

IMat json_mat(const nlohmann::json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw UsageError("clifford json: matrix has wrong row count");
  IMat A(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw UsageError("clifford json: matrix has wrong column count");
    for (int c = 0; c < n; ++c) A(r, c) = j[r][c].get<long long>();
  }
  return A;
}

} // namespace

nlohmann::json clifford_to_json(const CliffordSystem& sys, bool with_p) {
  nlohmann::json j;
  j["p"] = sys.p;
  j["k"] = sys.k;
  j["l"] = sys.l;
  nlohmann::json E = nlohmann::json::array();
  for (const auto& e : sys.E) E.push_back(mat_json(e));
  j["E"] = E;
  if (with_p && !sys.P.empty()) {
    nlohmann::json P = nlohmann::json::array();
    for (const auto& q : sys.P) P.push_back(mat_json(q));
    j["P"] = P;
  }
  return j;
}

CliffordSystem clifford_from_json(const nlohmann::json& j) {
  try {
    CliffordSystem sys;
    sys.p = j.at("p").get<int>();
    sys.k = j.at("k").get<int>();
    sys.l = j.at("l").get<int>();
    if (sys.p < 1 || sys.k < 1 || sys.l < 1) throw UsageError("clifford json: bad sizes");
    for (const auto& e : j.at("E")) sys.E.push_back(json_mat(e, sys.l));
    if (j.contains("P"))
      for (const auto& q : j.at("P")) sys.P.push_back(json_mat(q, 2 * sys.l));
    else
      sys.P = symmetric_system(sys.E, sys.l);
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("clifford json: ") + e.what());
  }
}

} // namespace isogeo
