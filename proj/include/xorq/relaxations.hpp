#pragma once

#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "xorq/bias_report.hpp"
#include "xorq/games.hpp"
#include "xorq/sdp.hpp"

namespace xorq {

// n x n matrix with vector entries: entry (i, k) is (mats[0](i, k), ..., mats[d-1](i, k)).
struct VectorValuedMatrix {
  int n = 0;
  int d = 0;
  std::vector<CMat> mats;
};

VectorValuedMatrix make_vvm(std::vector<CMat> mats);
// sum_r X_r (x) Y_r
CMat odot(const VectorValuedMatrix &X, const VectorValuedMatrix &Y);
// (sum_r X_r X_r^dagger, sum_r X_r^dagger X_r)
std::pair<CMat, CMat> vvm_products(const VectorValuedMatrix &X);
// Tr((X odot Y) M)
cplx vvm_objective(const GameMatrix &G, const VectorValuedMatrix &X, const VectorValuedMatrix &Y);
// Largest amount by which max(||X X^dagger||, ||X^dagger X||) exceeds 1, or 0.
double vvm_norm_excess(const VectorValuedMatrix &X);

struct RelaxationResult {
  double value = 0.0;       // primal objective of the solved program
  double dual_value = 0.0;  // certified upper bound
  double solver_gap = 0.0;
  int iterations = 0;
  // beta_nc: {X, Y}; beta_os: {X_R, X_C, Y_R, Y_C}; beta_sdp: empty.
  std::vector<VectorValuedMatrix> witness;
  // beta_sdp: columns are the vectors x_0..x_{n-1}, y_0..y_{n-1}.
  CMat vectors;
  double witness_value = 0.0;      // objective recomputed from the witness
  double witness_violation = 0.0;  // largest constraint violation of the witness
  CertifyReport certificate;
};

// Compiled programs. Block 0 is the Gram matrix; the remaining blocks are slacks.
SdpInstance beta_sdp_instance(const ClassicalGame &G);
SdpInstance beta_nc_instance(const GameMatrix &G);
SdpInstance beta_os_instance(const GameMatrix &G);

// Gram layouts: nc uses w_(a,c) = a n + c and v_(b,e) = n^2 + b n + e; os uses
// the families wR, wC, vR, vC at offsets 0, n^2, 2 n^2, 3 n^2. Column p of the
// returned matrix is the vector of variable p, so the Gram matrix is W^dagger W.
CMat nc_vectors(const VectorValuedMatrix &X, const VectorValuedMatrix &Y);
CMat os_vectors(const VectorValuedMatrix &XR, const VectorValuedMatrix &XC,
                const VectorValuedMatrix &YR, const VectorValuedMatrix &YC);
// Full primal point (Gram plus slacks I - Q) of the compiled program for given vectors.
std::vector<CMat> nc_point(const GameMatrix &G, const CMat &W);
std::vector<CMat> os_point(const GameMatrix &G, const CMat &W);

RelaxationResult beta_sdp(const ClassicalGame &G, double tol = 1e-6);
RelaxationResult beta_nc(const GameMatrix &G, double tol = 1e-6);
RelaxationResult beta_os(const GameMatrix &G, double tol = 1e-6);

// X = Y = (C_1, C_2, C_3) / sqrt(2) for h_game(1).
std::pair<VectorValuedMatrix, VectorValuedMatrix> h1_nc_witness();
// d = 2n: X_R = Y_R = (|0><i| / sqrt(n))_i then (|i><0|)_i, X_C = Y_C = (|0><i|)_i then
// (|i><0| / sqrt(n))_i, i = 1..n.
std::vector<VectorValuedMatrix> t_os_witness(int n);
// max over the os constraints of the violation, including the odot equality.
double os_violation(const VectorValuedMatrix &XR, const VectorValuedMatrix &XC,
                    const VectorValuedMatrix &YR, const VectorValuedMatrix &YC);

std::vector<ChainCheck> check_chains(const BiasReport &report);

struct HnClosedForms {
  boost::multiprecision::cpp_rational omega_exact, beta_nc_exact;
  double omega = 0.0, beta_nc = 0.0;
};
HnClosedForms h_n_closed_forms(int n);

}  // namespace xorq
