#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xorq/strategies.hpp"

namespace xorq {

struct OptimizerConfig {
  int restarts = 50;
  int max_iters = 500;
  double improvement_tol = 1e-9;
  std::uint64_t seed = 0;
};

struct HeuristicResult {
  double value = 0.0;
  Strategy strategy;
  int iterations_used = 0;  // cycles of the best restart
  std::vector<double> restart_values;
};

// K with Tr((A (x) B) M) = Tr(A K) for every n x n A.
CMat effective_operator_for_a(const GameMatrix &G, const CMat &B);
CMat effective_operator_for_b(const GameMatrix &G, const CMat &A);

// Restart 0 starts from `warm` when given; restarts 1..k draw Gaussian starts
// from (seed, restart). When no warm start is given restart 0 is a draw too.
HeuristicResult omega_lower(const GameMatrix &G, const OptimizerConfig &cfg,
                            const std::optional<Unentangled> &warm = std::nullopt);
HeuristicResult omega_c_lower(const GameMatrix &G, const OptimizerConfig &cfg,
                              const std::optional<Strategy> &warm = std::nullopt);
HeuristicResult me_lower(const GameMatrix &G, int d, const OptimizerConfig &cfg,
                         const std::optional<Strategy> &warm = std::nullopt);
HeuristicResult entangled_lower(const GameMatrix &G, int dA, int dB, const OptimizerConfig &cfg,
                                const std::optional<Strategy> &warm = std::nullopt);

// Lifts an optimum of a smaller class into the requested class without changing
// its value (complex strategies need an even maximally entangled dimension).
MaxEntangled lift_to_me(const GameMatrix &G, const Strategy &s, int d);
Entangled lift_to_entangled(const GameMatrix &G, const Strategy &s, int dA, int dB);

// Rounds a complex (unitary) strategy to a real observable one via the
// eigenbases of A and B, a 720-point phase grid and single-flip local search.
Unentangled round_complex_to_real(const GameMatrix &G, const Complex &s);

// Worker count from XORQ_THREADS (default 1).
int configured_threads();

}  // namespace xorq
