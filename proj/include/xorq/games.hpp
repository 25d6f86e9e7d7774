#pragma once

#include <string>
#include <vector>

#include "xorq/linalg.hpp"

namespace xorq {

// A quantum XOR game on C^n (x) C^n. Composite index (i, j) is i * n + j.
struct GameMatrix {
  int n = 0;
  CMat M;  // n^2 x n^2, Hermitian, trace norm <= 1
  int dim() const { return n * n; }
};

struct ClassicalGame {
  int n = 0;
  RMat R;  // n x n, sum |R| <= 1
};

struct RefereeProtocol {
  std::vector<double> p;     // weights |lambda_i|
  std::vector<int> c;        // target bit, 1 for negative eigenvalues
  std::vector<CVec> states;  // eigenvectors of M
  double reject = 0.0;       // 1 - sum p
};

struct ProductTerm {
  double weight = 0.0;
  int sign = 1;
  int left = 0, right = 0;  // indices into the Hermitian basis
  CMat H_left, H_right;     // trace norm 1
};

struct ProductStateProtocol {
  std::string basis;  // name of the local Hermitian basis
  std::vector<ProductTerm> terms;
  double total_weight = 0.0;
};

// Rank-one game: referee prepares eta in C^n (x) C^n (x) C^v, keeps C^v, and
// projects the returned registers onto gamma.
struct RankOneGame {
  int n = 0;
  int v_dim = 0;
  CVec eta, gamma;      // index ((a * n + b) * v_dim + v)
  double weight = 1.0;  // source game matrix = weight * rank_one_matrix
};

GameMatrix validate(int n, const CMat &M);
GameMatrix from_classical(const ClassicalGame &g);
ClassicalGame classical(const RMat &R);
ClassicalGame chsh_classical();
GameMatrix chsh();
GameMatrix t_game(int n);
GameMatrix h_game(int n);
GameMatrix c_game(int n);
GameMatrix tensor_games(const GameMatrix &G1, const GameMatrix &G2);

// True when M is diagonal with real entries, i.e. a classical game.
bool is_classical(const GameMatrix &G, double tol = 1e-12);
ClassicalGame to_classical(const GameMatrix &G);

// Subsets of {0..m-1} of size k in lexicographic order, each sorted.
std::vector<std::vector<int>> lex_subsets(int m, int k);
// The operators C_1..C_{2n+1} defining h_game(n), each C(2n+1, n) square.
std::vector<CMat> h_basis(int n);
unsigned long long binomial(int a, int b);

RefereeProtocol to_referee_protocol(const GameMatrix &G);
// Identity followed by the generalized Gell-Mann matrices, each scaled to trace norm 1.
std::vector<CMat> hermitian_basis(int n);
ProductStateProtocol to_product_state_protocol(const GameMatrix &G);
CMat reconstruct(const ProductStateProtocol &p, int n);

CMat rank_one_matrix(const RankOneGame &g);
RankOneGame xor_to_rank_one(const GameMatrix &G);
GameMatrix rank_one_to_xor(const RankOneGame &g);
RankOneGame t_rank_one(int n);

}  // namespace xorq
