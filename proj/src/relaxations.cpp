#include "xorq/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace xorq {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Vector-valued matrices

VectorValuedMatrix make_vvm(std::vector<CMat> mats) {
  VectorValuedMatrix X;
  X.d = static_cast<int>(mats.size());
  X.n = mats.empty() ? 0 : static_cast<int>(mats[0].rows());
  for (const CMat &m : mats)
    if (m.rows() != X.n || m.cols() != X.n)
      throw Error(ErrorKind::DimensionMismatch, "vector-valued matrix components differ in shape");
  X.mats = std::move(mats);
  return X;
}

CMat odot(const VectorValuedMatrix &X, const VectorValuedMatrix &Y) {
  if (X.d != Y.d) throw Error(ErrorKind::DimensionMismatch, "odot needs equal vector lengths");
  CMat out = CMat::Zero(static_cast<Eigen::Index>(X.n) * Y.n, static_cast<Eigen::Index>(X.n) * Y.n);
  for (int r = 0; r < X.d; ++r) out += tensor(X.mats[r], Y.mats[r]);
  return out;
}

std::pair<CMat, CMat> vvm_products(const VectorValuedMatrix &X) {
  CMat a = CMat::Zero(X.n, X.n), b = CMat::Zero(X.n, X.n);
  for (const CMat &m : X.mats) {
    a += m * m.adjoint();
    b += m.adjoint() * m;
  }
  return {a, b};
}

cplx vvm_objective(const GameMatrix &G, const VectorValuedMatrix &X, const VectorValuedMatrix &Y) {
  if (X.n != G.n || Y.n != G.n)
    throw Error(ErrorKind::DimensionMismatch, "vector-valued matrix does not match the game");
  return (odot(X, Y) * G.M).trace();
}

double vvm_norm_excess(const VectorValuedMatrix &X) {
  if (X.d == 0 || X.n == 0) return 0.0;
  const auto [a, b] = vvm_products(X);
  return std::max({0.0, op_norm(a) - 1.0, op_norm(b) - 1.0});
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

// Q[p, q] = sum of Gram entries G[x, y] over the listed pairs.
using PairList = std::function<std::vector<std::pair<int, int>>(int, int)>;

struct Lmi {
  int dim;
  PairList pairs;
};

Lmi row_form(int n, int offset) {
  return {n, [n, offset](int p, int q) {
            std::vector<std::pair<int, int>> out;
            for (int c = 0; c < n; ++c) out.push_back({offset + p * n + c, offset + q * n + c});
            return out;
          }};
}

Lmi col_form(int n, int offset) {
  return {n, [n, offset](int p, int q) {
            std::vector<std::pair<int, int>> out;
            for (int a = 0; a < n; ++a) out.push_back({offset + a * n + p, offset + a * n + q});
            return out;
          }};
}

// Adds slack block S and the equalities S + Q = I.
void add_lmi(SdpInstance &inst, const Lmi &lmi, const std::string &label) {
  const int sb = static_cast<int>(inst.blocks.size());
  inst.blocks.push_back({label, lmi.dim});
  for (int p = 0; p < lmi.dim; ++p)
    for (int q = p; q < lmi.dim; ++q) {
      const auto pairs = lmi.pairs(p, q);
      FunctionalBuilder re;
      re.add_re(sb, p, q, 1.0);
      for (const auto &[x, y] : pairs) re.add_re(0, x, y, 1.0);
      inst.constraints.push_back({re.entries(), p == q ? 1.0 : 0.0});
      if (p == q) continue;
      FunctionalBuilder im;
      im.add_im(sb, p, q, 1.0);
      for (const auto &[x, y] : pairs) im.add_im(0, x, y, 1.0);
      inst.constraints.push_back({im.entries(), 0.0});
    }
}

CMat lmi_value(const Lmi &lmi, const CMat &Gram) {
  CMat Q = CMat::Zero(lmi.dim, lmi.dim);
  for (int p = 0; p < lmi.dim; ++p)
    for (int q = 0; q < lmi.dim; ++q)
      for (const auto &[x, y] : lmi.pairs(p, q)) Q(p, q) += Gram(x, y);
  return Q;
}

void add_objective(SdpInstance &inst, const GameMatrix &G, int w0, int v0) {
  const int n = G.n;
  FunctionalBuilder f;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          const cplx m = G.M(c * n + e, a * n + b);
          if (m != cplx(0)) f.add_complex(0, w0 + a * n + c, v0 + b * n + e, m);
        }
  inst.objective = f.entries();
}

std::vector<Lmi> nc_lmis(int n) {
  const int n2 = n * n;
  return {row_form(n, 0), col_form(n, 0), row_form(n, n2), col_form(n, n2)};
}

std::vector<Lmi> os_lmis(int n) {
  const int n2 = n * n;
  return {row_form(n, 0), col_form(n, n2), row_form(n, 2 * n2), col_form(n, 3 * n2)};
}

const char *kNcLabels[] = {"XXdag", "XdagX^T", "YYdag^T", "YdagY"};
const char *kOsLabels[] = {"XR XRdag", "XCdag XC^T", "YR YRdag^T", "YCdag YC"};

std::vector<CMat> point_from(const std::vector<Lmi> &lmis, const CMat &W) {
  std::vector<CMat> out;
  out.push_back(W.adjoint() * W);
  for (const Lmi &l : lmis) out.push_back(identity(l.dim) - lmi_value(l, out[0]));
  return out;
}

// Rows of W with G = W^dagger W, keeping the numerically positive spectrum.
CMat gram_factor(const CMat &Gram) {
  HermEig e = herm_eig(hermitian_part(Gram));
  const double top = std::max(e.values.size() ? e.values(0) : 0.0, 0.0);
  int rank = 0;
  while (rank < e.values.size() && e.values(rank) > 1e-12 * std::max(top, 1e-300)) ++rank;
  CMat W(rank, Gram.cols());
  for (int k = 0; k < rank; ++k) W.row(k) = std::sqrt(e.values(k)) * e.vectors.col(k).adjoint();
  return W;
}

VectorValuedMatrix read_family(const CMat &W, int n, int offset, bool conjugate) {
  std::vector<CMat> mats;
  for (Eigen::Index r = 0; r < W.rows(); ++r) {
    CMat X(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const cplx v = W(r, offset + i * n + k);
        X(i, k) = conjugate ? std::conj(v) : v;
      }
    mats.push_back(X);
  }
  VectorValuedMatrix out;
  out.n = n;
  out.d = static_cast<int>(mats.size());
  out.mats = std::move(mats);
  return out;
}

void write_family(CMat &W, const VectorValuedMatrix &X, int offset, bool conjugate) {
  for (int r = 0; r < X.d; ++r)
    for (int i = 0; i < X.n; ++i)
      for (int k = 0; k < X.n; ++k) {
        const cplx v = X.mats[r](i, k);
        W(r, offset + i * X.n + k) = conjugate ? std::conj(v) : v;
      }
}

RelaxationResult run(const SdpInstance &inst, double tol) {
  RelaxationResult res;
  SdpSolution sol = solve(inst, tol);
  res.value = sol.primal_value;
  res.dual_value = sol.dual_value;
  res.solver_gap = sol.gap;
  res.iterations = sol.iterations;
  res.certificate = certify(inst, sol, tol);
  res.vectors = gram_factor(sol.Z[0]);
  return res;
}

}  // namespace

SdpInstance beta_sdp_instance(const ClassicalGame &G) {
  const int n = G.n;
  SdpInstance inst;
  inst.blocks.push_back({"gram", 2 * n});
  FunctionalBuilder f;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (G.R(s, t) != 0.0) f.add_re(0, s, n + t, G.R(s, t));
  inst.objective = f.entries();
  for (int i = 0; i < 2 * n; ++i) {
    const int sb = static_cast<int>(inst.blocks.size());
    inst.blocks.push_back({"slack" + std::to_string(i), 1});
    FunctionalBuilder c;
    c.add_re(0, i, i, 1.0);
    c.add_re(sb, 0, 0, 1.0);
    inst.constraints.push_back({c.entries(), 1.0});
  }
  return inst;
}

SdpInstance beta_nc_instance(const GameMatrix &G) {
  const int n = G.n, n2 = n * n;
  SdpInstance inst;
  inst.blocks.push_back({"gram", 2 * n2});
  add_objective(inst, G, 0, n2);
  const auto lmis = nc_lmis(n);
  for (std::size_t k = 0; k < lmis.size(); ++k) add_lmi(inst, lmis[k], kNcLabels[k]);
  return inst;
}

SdpInstance beta_os_instance(const GameMatrix &G) {
  const int n = G.n, n2 = n * n;
  const int wR = 0, wC = n2, vR = 2 * n2, vC = 3 * n2;
  SdpInstance inst;
  inst.blocks.push_back({"gram", 4 * n2});
  add_objective(inst, G, wR, vC);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) {
          const int ac = a * n + c, be = b * n + e;
          FunctionalBuilder re, im;
          re.add_re(0, wR + ac, vC + be, 1.0);
          re.add_re(0, wC + ac, vR + be, -1.0);
          im.add_im(0, wR + ac, vC + be, 1.0);
          im.add_im(0, wC + ac, vR + be, -1.0);
          inst.constraints.push_back({re.entries(), 0.0});
          inst.constraints.push_back({im.entries(), 0.0});
        }
  const auto lmis = os_lmis(n);
  for (std::size_t k = 0; k < lmis.size(); ++k) add_lmi(inst, lmis[k], kOsLabels[k]);
  return inst;
}

CMat nc_vectors(const VectorValuedMatrix &X, const VectorValuedMatrix &Y) {
  if (X.n != Y.n || X.d != Y.d) throw Error(ErrorKind::DimensionMismatch, "X and Y differ in shape");
  const int n2 = X.n * X.n;
  CMat W = CMat::Zero(X.d, 2 * n2);
  write_family(W, X, 0, true);
  write_family(W, Y, n2, false);
  return W;
}

CMat os_vectors(const VectorValuedMatrix &XR, const VectorValuedMatrix &XC,
                const VectorValuedMatrix &YR, const VectorValuedMatrix &YC) {
  for (const auto *m : {&XC, &YR, &YC})
    if (m->n != XR.n || m->d != XR.d)
      throw Error(ErrorKind::DimensionMismatch, "operator-space families differ in shape");
  const int n2 = XR.n * XR.n;
  CMat W = CMat::Zero(XR.d, 4 * n2);
  write_family(W, XR, 0, true);
  write_family(W, XC, n2, true);
  write_family(W, YR, 2 * n2, false);
  write_family(W, YC, 3 * n2, false);
  return W;
}

std::vector<CMat> nc_point(const GameMatrix &G, const CMat &W) {
  if (W.cols() != 2 * G.n * G.n) throw Error(ErrorKind::DimensionMismatch, "vector layout mismatch");
  return point_from(nc_lmis(G.n), W);
}

std::vector<CMat> os_point(const GameMatrix &G, const CMat &W) {
  if (W.cols() != 4 * G.n * G.n) throw Error(ErrorKind::DimensionMismatch, "vector layout mismatch");
  return point_from(os_lmis(G.n), W);
}

RelaxationResult beta_sdp(const ClassicalGame &G, double tol) {
  RelaxationResult res = run(beta_sdp_instance(G), tol);
  const int n = G.n;
  const CMat &W = res.vectors;
  double v = 0.0, viol = 0.0;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) v += G.R(s, t) * W.col(s).dot(W.col(n + t)).real();
  for (int i = 0; i < 2 * n; ++i) viol = std::max(viol, W.col(i).squaredNorm() - 1.0);
  res.witness_value = v;
  res.witness_violation = viol;
  return res;
}

RelaxationResult beta_nc(const GameMatrix &G, double tol) {
  RelaxationResult res = run(beta_nc_instance(G), tol);
  const int n = G.n;
  VectorValuedMatrix X = read_family(res.vectors, n, 0, true);
  VectorValuedMatrix Y = read_family(res.vectors, n, n * n, false);
  res.witness_value = vvm_objective(G, X, Y).real();
  res.witness_violation = std::max(vvm_norm_excess(X), vvm_norm_excess(Y));
  res.witness = {X, Y};
  return res;
}

RelaxationResult beta_os(const GameMatrix &G, double tol) {
  RelaxationResult res = run(beta_os_instance(G), tol);
  const int n = G.n, n2 = n * n;
  VectorValuedMatrix XR = read_family(res.vectors, n, 0, true);
  VectorValuedMatrix XC = read_family(res.vectors, n, n2, true);
  VectorValuedMatrix YR = read_family(res.vectors, n, 2 * n2, false);
  VectorValuedMatrix YC = read_family(res.vectors, n, 3 * n2, false);
  res.witness_value = vvm_objective(G, XR, YC).real();
  res.witness_violation = os_violation(XR, XC, YR, YC);
  res.witness = {XR, XC, YR, YC};
  return res;
}

std::pair<VectorValuedMatrix, VectorValuedMatrix> h1_nc_witness() {
  std::vector<CMat> mats;
  for (const CMat &C : h_basis(1)) mats.push_back(C / std::sqrt(2.0));
  VectorValuedMatrix X = make_vvm(mats);
  return {X, X};
}

std::vector<VectorValuedMatrix> t_os_witness(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  // Components 0..n-1 carry the |0><i| entries, n..2n-1 the |i><0| entries.
  std::vector<CMat> R(2 * n, CMat::Zero(n + 1, n + 1)), C(2 * n, CMat::Zero(n + 1, n + 1));
  for (int i = 1; i <= n; ++i) {
    R[i - 1](0, i) = s;
    R[n + i - 1](i, 0) = 1.0;
    C[i - 1](0, i) = 1.0;
    C[n + i - 1](i, 0) = s;
  }
  VectorValuedMatrix XR = make_vvm(R), XC = make_vvm(C);
  return {XR, XC, XR, XC};
}

double os_violation(const VectorValuedMatrix &XR, const VectorValuedMatrix &XC,
                    const VectorValuedMatrix &YR, const VectorValuedMatrix &YC) {
  double v = 0.0;
  v = std::max(v, op_norm(vvm_products(XR).first) - 1.0);
  v = std::max(v, op_norm(vvm_products(XC).second) - 1.0);
  v = std::max(v, op_norm(vvm_products(YR).first) - 1.0);
  v = std::max(v, op_norm(vvm_products(YC).second) - 1.0);
  v = std::max(v, (odot(XR, YC) - odot(XC, YR)).cwiseAbs().maxCoeff());
  return v;
}

// ---------------------------------------------------------------------------
// Chains

std::vector<ChainCheck> check_chains(const BiasReport &r) {
  std::vector<ChainCheck> out;
  const double slack = 4.0 * r.tol;
  auto hard = [&](const std::string &label, double lhs, double rhs) {
    out.push_back({label, lhs, rhs, true, lhs <= rhs + slack});
  };
  auto soft = [&](const std::string &label, double lhs, double rhs) {
    out.push_back({label, lhs, rhs, false, lhs <= rhs + slack});
  };
  if (r.beta_nc) {
    const double b = *r.beta_nc;
    if (r.omega_lower) hard("omega <= beta_nc", *r.omega_lower, b);
    if (r.omega_c_lower) hard("omega_c <= beta_nc", *r.omega_c_lower, b);
    for (const MeValue &m : r.me_lower) hard("omega_me(d=" + std::to_string(m.d) + ") <= beta_nc", m.value, b);
    hard("beta_nc <= trace_norm", b, r.trace_norm);
  }
  if (r.beta_os) {
    const double b = *r.beta_os;
    for (const EntangledValue &e : r.entangled_lower)
      hard("omega_star(" + std::to_string(e.dA) + "x" + std::to_string(e.dB) + ") <= beta_os", e.value,
           b);
    hard("beta_os <= trace_norm", b, r.trace_norm);
  }
  if (r.beta_nc && r.beta_os) hard("beta_nc <= beta_os", *r.beta_nc, *r.beta_os);
  if (r.beta_sdp && r.omega_lower) hard("omega <= beta_sdp", *r.omega_lower, *r.beta_sdp);
  if (r.beta_sdp && r.omega_c_lower) hard("omega_c <= beta_sdp", *r.omega_c_lower, *r.beta_sdp);

  if (r.beta_nc && r.omega_lower) soft("beta_nc <= 2 sqrt2 omega", *r.beta_nc, 2.0 * std::sqrt(2.0) * *r.omega_lower);
  if (r.beta_nc && r.omega_c_lower) soft("beta_nc <= 2 omega_c", *r.beta_nc, 2.0 * *r.omega_c_lower);
  if (r.beta_os && !r.entangled_lower.empty()) {
    double best = 0.0;
    for (const EntangledValue &e : r.entangled_lower) best = std::max(best, e.value);
    soft("beta_os <= 2 omega_star", *r.beta_os, 2.0 * best);
  }
  return out;
}

HnClosedForms h_n_closed_forms(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
  auto binom = [](int a, int b) {
    cpp_int r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const cpp_rational ratio(cpp_int(n + 1), cpp_int(2 * n + 1));
  const cpp_int c1 = binom(2 * n + 1, n);
  HnClosedForms out;
  out.omega_exact = ratio * ratio * cpp_rational(c1 * c1, binom(4 * n + 1, 2 * n));
  out.beta_nc_exact = out.omega_exact / ratio;
  out.omega = static_cast<double>(out.omega_exact);
  out.beta_nc = static_cast<double>(out.beta_nc_exact);
  return out;
}

}  // namespace xorq
