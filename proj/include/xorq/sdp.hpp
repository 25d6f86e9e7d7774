#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "xorq/linalg.hpp"

namespace xorq {

// Sparse Hermitian coefficient: entry v at (r, c) with r <= c, the lower
// triangle implied by Hermitian completion. A list of entries F defines the
// real functional Re Tr(F^dagger Z), i.e. 2 Re(conj(v) Z[r, c]) off the
// diagonal and Re(v) Z[r, r] on it.
struct SdpEntry {
  int block = 0;
  int r = 0, c = 0;
  cplx v;
};

struct SdpBlock {
  std::string label;
  int dim = 0;
};

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
};

// maximize sum_b Re Tr(C_b^dagger Z_b) subject to the equalities, Z_b >= 0.
struct SdpInstance {
  std::vector<SdpBlock> blocks;
  std::vector<SdpEntry> objective;
  std::vector<SdpConstraint> constraints;
};

struct SdpSolution {
  std::vector<CMat> Z;  // primal blocks
  RVec y;               // dual multipliers
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // dual - primal
  double primal_residual = 0.0;  // max |<F_i, Z> - rhs_i|
  double dual_residual = 0.0;    // Frobenius norm of the dual equation residual
  int iterations = 0;
};

struct CertifyReport {
  double max_constraint_residual = 0.0;
  double min_primal_eigenvalue = 0.0;
  double min_dual_slack_eigenvalue = 0.0;
  double gap = 0.0;
  bool ok = true;
  std::vector<std::string> violations;
};

// Thrown for Infeasible / Unbounded outcomes, with the certificate found.
class SdpError : public Error {
 public:
  SdpError(ErrorKind kind, const std::string &what, RVec certificate)
      : Error(kind, what), certificate_(std::move(certificate)) {}
  const RVec &certificate() const { return certificate_; }

 private:
  RVec certificate_;
};

// Real symmetric entry (r <= c) of a real instance; the functional is
// 2 v X[r, c] off the diagonal and v X[r, r] on it.
struct RealEntry {
  int block = 0;
  int r = 0, c = 0;
  double v = 0.0;
};

struct RealSdp {
  std::vector<int> dims;
  std::vector<RealEntry> C;
  std::vector<std::vector<RealEntry>> A;
  RVec b;
};

// Complex block of size m becomes a real block of size 2m holding
// [[Re Z, -Im Z], [Im Z, Re Z]]. Coefficients are halved so that the real
// functional equals Re Tr(F^dagger Z) exactly, with no extra factor of 2.
RealSdp real_embedding(const SdpInstance &inst);
// Recovers Z = X + iY from a real block [[P, Q], [Q^T, S]] by averaging the
// two copies: X = (P + S) / 2, Y = (Q^T - Q) / 2.
CMat complex_from_real_block(const RMat &R);

struct RealSdpSolution {
  std::vector<RMat> X, Z;
  RVec y;
  double primal_value = 0.0, dual_value = 0.0;
  double primal_residual = 0.0, dual_residual = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iterations = 120;
};

RealSdpSolution solve_real(const RealSdp &sdp, const SolverOptions &opt);
SdpSolution solve(const SdpInstance &inst, double tol = 1e-6);
CertifyReport certify(const SdpInstance &inst, const SdpSolution &sol, double tol = 1e-6);

// Helpers shared with the relaxation builder.
double functional_value(const std::vector<SdpEntry> &entries, const std::vector<CMat> &Z);
void validate_instance(const SdpInstance &inst);

// Accumulates a real linear functional of Hermitian block entries.
class FunctionalBuilder {
 public:
  // coeff * Re Z_block[p, q]
  void add_re(int block, int p, int q, double coeff);
  // coeff * Im Z_block[p, q]
  void add_im(int block, int p, int q, double coeff);
  // Re(m * Z_block[p, q])
  void add_complex(int block, int p, int q, cplx m);
  std::vector<SdpEntry> entries() const;

 private:
  struct Key {
    int block, r, c;
    bool operator<(const Key &o) const {
      return std::tie(block, r, c) < std::tie(o.block, o.r, o.c);
    }
  };
  std::vector<std::pair<Key, cplx>> acc_;
  void add(int block, int r, int c, cplx v);
};

}  // namespace xorq
