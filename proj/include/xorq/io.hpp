#pragma once

#include <string>

#include "xorq/bias_report.hpp"
#include "xorq/games.hpp"
#include "xorq/relaxations.hpp"
#include "xorq/sdp.hpp"
#include "xorq/strategies.hpp"

namespace xorq {

// "xorq-game-v1": nonzero entries sorted by (r, c).
std::string game_to_json(const GameMatrix &G);
GameMatrix game_from_json(const std::string &text);

// {"R": [[...], ...]} with a real n x n coefficient matrix.
ClassicalGame classical_from_json(const std::string &text);
// {"n": n, "M": rows of [re, im] pairs}, an n^2 x n^2 matrix.
GameMatrix matrix_from_json(const std::string &text);

// "xorq-strategy-v1": matrices as row-major [re, im] pairs.
std::string strategy_to_json(const Strategy &s, int n);
Strategy strategy_from_json(const std::string &text);

// "xorq-sdp-v1"
std::string sdp_to_json(const SdpInstance &inst);
SdpInstance sdp_from_json(const std::string &text);
std::string sdp_solution_to_json(const SdpSolution &sol, const CertifyReport &rep);

// "xorq-result-v1"
std::string relaxation_to_json(const std::string &kind, const RelaxationResult &r);
std::string report_to_json(const BiasReport &r);
std::string report_to_csv(const BiasReport &r);
std::string report_to_text(const BiasReport &r);

// Rounds to 12 significant digits so that printed reports are byte-stable.
double round12(double x);

std::string read_file(const std::string &path);
// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string &path, const std::string &content);

}  // namespace xorq
