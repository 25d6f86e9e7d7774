#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "xorq/error.hpp"

namespace xorq {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

struct HermEig {
  RVec values;   // descending
  CMat vectors;  // columns, orthonormal
};

struct Svd {
  CMat U;    // m x k
  RVec S;    // k, descending
  CMat V;    // n x k, A = U diag(S) V^dagger
};

struct Gsvd {
  CMat U1, U2;  // d x d unitary
  CMat R;       // n x k, full column rank
  RVec D1, D2;  // k, D1^2 + D2^2 = 1
  int k = 0;
};

struct Isometries {
  CMat V1, V2;  // d x d', orthonormal rows
  int d_prime = 0;
};

enum class Side { First, Second };

// Relative Frobenius distance from Hermiticity, ||H - H^dagger||_F / max(1, ||H||_F).
double hermiticity_defect(const CMat &H);
void require_square(const CMat &A, const char *what);
void require_hermitian(const CMat &H, const char *what);
CMat hermitian_part(const CMat &H);

HermEig herm_eig(const CMat &H);
Svd svd(const CMat &A);
double trace_norm(const CMat &A);
double op_norm(const CMat &A);
int numerical_rank(const RVec &singular_values);

CMat tensor(const CMat &A, const CMat &B);
CVec tensor(const CVec &a, const CVec &b);

// Traces out the `which` factor of C^{d1} (x) C^{d2}.
CMat partial_trace(const CMat &P, int d1, int d2, Side which);

// perm[k] is the output position of input factor k, so output position j
// carries input factor perm^{-1}[j].
CVec permute_systems(const CVec &v, const std::vector<int> &dims, const std::vector<int> &perm);
CMat permute_systems(const CMat &P, const std::vector<int> &dims, const std::vector<int> &perm);
// Index map of permute_systems: out[idx_out] = in[map[idx_out]].
std::vector<std::int64_t> permutation_index_map(const std::vector<int> &dims,
                                                const std::vector<int> &perm);

CMat sign_of_hermitian(const CMat &K);
// Unitary A maximizing Re Tr(A K); equals V U^dagger for K = U S V^dagger.
CMat polar_unitary(const CMat &K);
// Unitary factor W of A = W P.
CMat unitary_factor(const CMat &A);

// Tr(A^dagger B).
cplx frob_inner(const CMat &A, const CMat &B);
// Tr(A B).
cplx trace_product(const CMat &A, const CMat &B);

Gsvd gsvd(const CMat &A1, const CMat &A2);
Isometries proportionality_isometries(const CMat &A1, const CMat &A2, const CMat &B1,
                                      const CMat &B2);
// Every column pair x_i = (A1 V1 ; B2 V2)_i, y_i = (A2 V2 ; B1 V1)_i satisfies
// x = t y or y = t x for some t >= 0, within tol relative to the input scale.
bool check_column_proportionality(const CMat &A1, const CMat &A2, const CMat &B1,
                                  const CMat &B2, const Isometries &iso, double tol);

// Accepts a bijection onto {0..m-1} or onto {1..m}.
int permutation_sign(const std::vector<int> &perm);

// Completes the orthonormal columns of Q (d x r) to a d x d unitary.
CMat complete_unitary(const CMat &Q);

CVec max_entangled(int d);
CMat identity(int d);

// Seeded random helpers; all draws go through std::mt19937_64.
using Rng = std::mt19937_64;
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);
CMat random_gaussian(int rows, int cols, Rng &rng);
CMat random_hermitian(int d, Rng &rng);
CMat random_unitary(int d, Rng &rng);
CVec random_unit_vector(int d, Rng &rng);
CMat random_observable(int d, Rng &rng);

}  // namespace xorq
