#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xorq/io.hpp"
#include "xorq/report.hpp"

using namespace xorq;

namespace {

constexpr int kOk = 0;
constexpr int kBadArgs = 2;
constexpr int kChainFailure = 3;
constexpr int kSolverFailure = 4;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Infeasible:
    case ErrorKind::Unbounded:
    case ErrorKind::MaxIterations:
    case ErrorKind::NumericalFailure:
      return kSolverFailure;
    default:
      return kBadArgs;
  }
}

void emit(const std::string &payload, const std::string &out) {
  if (out.empty())
    std::cout << payload;
  else
    write_file_atomic(out, payload);
}

GameMatrix make_game(const std::string &name, int param, const std::vector<std::string> &inputs) {
  auto need_param = [&] {
    if (param < 1) throw Error(ErrorKind::BadArgs, "--param must be a positive integer");
  };
  auto need_inputs = [&](std::size_t k) {
    if (inputs.size() != k) throw Error(ErrorKind::BadArgs, "--input must be given " + std::to_string(k) + " time(s)");
  };
  if (name == "chsh") return chsh();
  if (name == "tn") return need_param(), t_game(param);
  if (name == "hn") return need_param(), h_game(param);
  if (name == "cn") return need_param(), c_game(param);
  if (name == "classical-file") return need_inputs(1), from_classical(classical_from_json(read_file(inputs[0])));
  if (name == "matrix-file") return need_inputs(1), matrix_from_json(read_file(inputs[0]));
  if (name == "tensor") {
    need_inputs(2);
    return tensor_games(game_from_json(read_file(inputs[0])), game_from_json(read_file(inputs[1])));
  }
  throw Error(ErrorKind::BadArgs, "unknown game '" + name + "'");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum XOR game toolkit"};
  app.require_subcommand(1);

  std::string name, out, format = "text", path, quantities, relaxation;
  int param = 0;
  std::vector<std::string> inputs;
  double tol = 1e-6;
  bool timings = false;
  OptimizerConfig cfg;

  auto *game = app.add_subcommand("game", "write a game file");
  game->add_option("--name", name, "chsh, tn, hn, cn, classical-file, matrix-file or tensor")->required();
  game->add_option("--param", param, "size parameter for tn, hn and cn");
  game->add_option("--input", inputs, "input file(s) for classical-file, matrix-file and tensor");
  game->add_option("--out", out, "output path (stdout if omitted)");

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--restarts", cfg.restarts, "heuristic restarts")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", out, "output path (stdout if omitted)");
  };

  auto *biascmd = app.add_subcommand("bias", "compute bounds for a game file");
  biascmd->add_option("game", path, "game file")->required();
  biascmd->add_option("--quantities", quantities,
                      "comma list of omega, omega-c, me:<d>, ent:<dA>x<dB>, beta-sdp, beta-nc, beta-os, chains")
      ->required();
  biascmd->add_flag("--timings", timings, "include wall-clock runtimes in the json output");
  add_common(biascmd);

  auto *report = app.add_subcommand("report", "reproduce reference tables");
  report->require_subcommand(1);
  auto *table = report->add_subcommand("paper-table", "run the reference corpus");
  add_common(table);

  auto *sdp = app.add_subcommand("sdp", "raw solver access");
  sdp->require_subcommand(1);
  auto *solvecmd = sdp->add_subcommand("solve", "solve an xorq-sdp-v1 instance");
  solvecmd->add_option("instance", path, "instance file")->required();
  solvecmd->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
  solvecmd->add_option("--out", out, "output path (stdout if omitted)");
  auto *compile = sdp->add_subcommand("compile", "write the relaxation program of a game");
  compile->add_option("game", path, "game file")->required();
  compile->add_option("--relaxation", relaxation, "sdp, nc or os")
      ->required()
      ->check(CLI::IsMember({"sdp", "nc", "os"}));
  compile->add_option("--out", out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (*game) {
      emit(game_to_json(make_game(name, param, inputs)), out);
      return kOk;
    }
    if (*biascmd) {
      const ReportRequest req = parse_quantities(quantities);
      const GameMatrix G = game_from_json(read_file(path));
      std::cerr << "computing " << quantities << " for " << path << "\n";
      BiasReport r = compute_report(G, path, req, cfg, tol);
      for (const auto &[k, v] : r.runtimes) std::cerr << "  " << k << ": " << v << " s\n";
      // Runtimes vary between runs, so they stay out of the byte-stable payload unless asked for.
      if (!timings) r.runtimes.clear();
      const std::string payload =
          format == "json" ? report_to_json(r) : format == "csv" ? report_to_csv(r) : report_to_text(r);
      emit(payload, out);
      for (const ChainCheck &c : r.chains)
        if (c.hard && !c.pass) {
          std::cerr << "chain check failed: " << c.label << "\n";
          return kChainFailure;
        }
      return kOk;
    }
    if (*table) {
      std::cerr << "running the reference corpus\n";
      const auto rows = paper_table(cfg, tol);
      if (!out.empty()) {
        write_file_atomic(out + ".csv", table_to_csv(rows));
        write_file_atomic(out + ".json", table_to_json(rows));
      }
      std::cout << (format == "json" ? table_to_json(rows) : format == "csv" ? table_to_csv(rows) : table_to_text(rows));
      for (const TableRow &r : rows)
        if (!r.pass) return kChainFailure;
      return kOk;
    }
    if (*solvecmd) {
      const SdpInstance inst = sdp_from_json(read_file(path));
      const SdpSolution sol = solve(inst, tol);
      emit(sdp_solution_to_json(sol, certify(inst, sol, tol)), out);
      return kOk;
    }
    if (*compile) {
      const GameMatrix G = game_from_json(read_file(path));
      SdpInstance inst;
      if (relaxation == "sdp") {
        if (!is_classical(G)) throw Error(ErrorKind::BadArgs, "the sdp relaxation needs a classical game");
        inst = beta_sdp_instance(to_classical(G));
      } else {
        inst = relaxation == "nc" ? beta_nc_instance(G) : beta_os_instance(G);
      }
      emit(sdp_to_json(inst), out);
      return kOk;
    }
  } catch (const SdpError &e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\ncertificate:";
    for (Eigen::Index i = 0; i < e.certificate().size(); ++i) std::cerr << " " << e.certificate()(i);
    std::cerr << "\n";
    return kSolverFailure;
  } catch (const Error &e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  }
  return kBadArgs;
}
