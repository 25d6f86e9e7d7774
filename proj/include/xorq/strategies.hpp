#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "xorq/games.hpp"

namespace xorq {

// Player operators act on message (x) private space with the message first:
// index (msg, priv) is msg * d_priv + priv.
struct Unentangled {
  CMat A, B;  // n x n Hermitian contractions
};

struct Complex {
  CMat A, B;  // n x n contractions
};

struct MaxEntangled {
  int d = 1;
  CMat A, B;  // (n d) x (n d) Hermitian contractions, state Psi_me(d)
};

struct Entangled {
  int dA = 1, dB = 1;
  CMat A, B;  // (n dA) x (n dA) and (n dB) x (n dB)
  CVec psi;   // unit vector on C^dA (x) C^dB
};

using Strategy = std::variant<Unentangled, Complex, MaxEntangled, Entangled>;

enum class StrategyKind { Unentangled, Complex, MaxEntangled, Entangled };
StrategyKind kind_of(const Strategy &s);
const char *kind_name(StrategyKind k);

// Throws on shape, Hermiticity, contraction or normalization violations.
void validate_strategy(const GameMatrix &G, const Strategy &s);

// Signed value Tr((A (x) B) M) for the Hermitian classes; modulus for Complex.
double bias(const GameMatrix &G, const Strategy &s);

// Spectral form of a game used by the evaluators: M = sum_k lambda_k m_k m_k^dagger,
// with m_k reshaped to an n x n matrix.
struct SpectralGame {
  int n = 0;
  std::vector<double> lambda;
  std::vector<CMat> modes;
};
SpectralGame spectral_form(const GameMatrix &G);

// <x|(A (x) B)|x> summed over the spectral modes with x = permuted(m_k (x) psi).
// psi is given as a dA x dB matrix. Works for any A, B of the right shape.
cplx entangled_value(const SpectralGame &S, const CMat &A, const CMat &B, const CMat &Psi);

// Effective operators: value = Tr(A K_A) = Tr(B K_B) for fixed partners.
CMat effective_a(const SpectralGame &S, const CMat &B, const CMat &Psi);
CMat effective_b(const SpectralGame &S, const CMat &A, const CMat &Psi);
// T on C^dA (x) C^dB with value = <psi|T|psi>.
CMat state_operator(const GameMatrix &G, const CMat &A, const CMat &B, int dA, int dB);

CMat psi_matrix(const CVec &psi, int dA, int dB);
CVec psi_vector(const CMat &Psi);
Entangled as_entangled(const MaxEntangled &s);

// Dense reference: Tr((A (x) B)(M (x) |psi><phi|)) with registers permuted explicitly.
cplx dense_value(const CMat &M, int n, const CMat &A, const CMat &B, const CVec &psi,
                 const CVec &phi, int dA, int dB);

Unentangled t_unentangled_strategy(int n);
Complex h1_unentangled_strategy();
MaxEntangled h1_me_strategy();

// D^{-1/2} sum_{j=1..d} psi^{(x) j} (x) phi^{(x)(d-j)} with all A copies before all B copies.
// psi and phi live on C^m (x) C^m.
CVec embezzlement_state(int m, int d, const CVec &psi, const CVec &phi);

Entangled t_entangled_strategy(int n, int d);

// Rank-one value amplitude Tr((U (x) V)(Mhat (x) |psi><phi|)) for operators on C^n (x) C^h.
cplx rank_one_amplitude(const RankOneGame &g, const CMat &U, const CMat &V, const CVec &psi,
                        const CVec &phi, int h);
Entangled lemma_rank_one_strategy(const RankOneGame &g, const CMat &U, const CMat &V,
                                  const CVec &psi, const CVec &phi, int h, int d);

// Support-restricted, observable, player-symmetric strategy for a swap-invariant game.
Entangled symmetrize(const GameMatrix &G, const Entangled &s);
bool is_swap_invariant(const GameMatrix &G, double tol = 1e-10);

double max_bias_upper_bound_tn(int n, int d);

Strategy random_strategy(StrategyKind kind, const GameMatrix &G, const std::vector<int> &dims,
                         std::uint64_t seed);

// Pads private spaces by a direct sum so that the value is unchanged.
Entangled embed_entangled(const Entangled &s, int n, int dA, int dB);

}  // namespace xorq
