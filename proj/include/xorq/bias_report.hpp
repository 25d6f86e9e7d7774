#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xorq {

struct ChainCheck {
  std::string label;  // e.g. "omega <= beta_nc"
  double lhs = 0.0, rhs = 0.0;
  bool hard = true;  // soft checks are diagnostics only
  bool pass = true;
};

struct MeValue {
  int d = 1;
  double value = 0.0;
};

struct EntangledValue {
  int dA = 1, dB = 1;
  double value = 0.0;
};

// Everything computed for one game. Absent quantities stay empty.
struct BiasReport {
  std::string game;
  int n = 0;
  double trace_norm = 0.0;
  std::optional<double> omega_lower, omega_c_lower;
  std::vector<MeValue> me_lower;
  std::vector<EntangledValue> entangled_lower;
  std::optional<double> beta_sdp, beta_nc, beta_os;
  std::vector<ChainCheck> chains;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int restarts = 50;
  std::map<std::string, double> runtimes;  // seconds per quantity
};

}  // namespace xorq
