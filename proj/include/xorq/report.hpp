#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xorq/bias_report.hpp"
#include "xorq/heuristics.hpp"
#include "xorq/relaxations.hpp"

namespace xorq {

struct ReportRequest {
  bool omega = false;
  bool omega_c = false;
  std::vector<int> me_dims;
  std::vector<std::pair<int, int>> entangled_dims;
  bool beta_sdp = false;
  bool beta_nc = false;
  bool beta_os = false;
};

// Parses a comma-separated list such as "omega,me:3,ent:2x2,beta-nc,chains".
ReportRequest parse_quantities(const std::string &list);

// Runs the requested quantities. Heuristics are warm-started along
// omega -> omega_c -> me -> entangled; the chain checks are always filled in.
BiasReport compute_report(const GameMatrix &G, const std::string &name, const ReportRequest &req,
                          const OptimizerConfig &cfg, double tol);

struct TableRow {
  std::string game;
  std::string quantity;
  double computed = 0.0;
  double expected = 0.0;
  std::string relation;  // "=", ">=" or "<="
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<TableRow> paper_table(const OptimizerConfig &cfg, double tol);
std::string table_to_csv(const std::vector<TableRow> &rows);
std::string table_to_json(const std::vector<TableRow> &rows);
std::string table_to_text(const std::vector<TableRow> &rows);

}  // namespace xorq
