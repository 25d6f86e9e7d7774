#include "xorq/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace xorq {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string &what) { throw Error(ErrorKind::ParseError, what); }

json parse(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::exception &e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T get(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    parse_fail(std::string("field '") + key + "' has the wrong type");
  }
}

const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j[key];
}

void expect_format(const json &j, const char *fmt) {
  if (get<std::string>(j, "format") != fmt) parse_fail(std::string("expected format ") + fmt);
}

json pairs_of(const CMat &A) {
  json out = json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) out.push_back({A(r, c).real(), A(r, c).imag()});
  return out;
}

json pairs_of(const CVec &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

cplx pair_value(const json &p) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    parse_fail("expected a [re, im] pair");
  return {p[0].get<double>(), p[1].get<double>()};
}

CMat matrix_of(const json &arr, Eigen::Index dim) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(dim * dim))
    parse_fail("matrix has the wrong number of entries");
  CMat A(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) A(r, c) = pair_value(arr[r * dim + c]);
  return A;
}

CVec vector_of(const json &arr) {
  if (!arr.is_array()) parse_fail("expected an array of pairs");
  CVec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = pair_value(arr[i]);
  return v;
}

json entries_json(const std::vector<SdpEntry> &es) {
  json out = json::array();
  for (const SdpEntry &e : es)
    out.push_back({{"b", e.block}, {"r", e.r}, {"c", e.c}, {"re", e.v.real()}, {"im", e.v.imag()}});
  return out;
}

std::vector<SdpEntry> entries_from(const json &arr) {
  if (!arr.is_array()) parse_fail("entry list must be an array");
  std::vector<SdpEntry> out;
  for (const json &e : arr)
    out.push_back({get<int>(e, "b"), get<int>(e, "r"), get<int>(e, "c"),
                   cplx(get<double>(e, "re"), get<double>(e, "im"))});
  return out;
}

json rounded(double x) { return round12(x); }

json report_json(const BiasReport &r) {
  json j;
  j["format"] = "xorq-result-v1";
  j["kind"] = "bias-report";
  j["game"] = r.game;
  j["n"] = r.n;
  j["trace_norm"] = rounded(r.trace_norm);
  auto opt = [&](const char *key, const std::optional<double> &v) {
    if (v) j[key] = rounded(*v);
  };
  opt("omega_lower", r.omega_lower);
  opt("omega_c_lower", r.omega_c_lower);
  opt("beta_sdp", r.beta_sdp);
  opt("beta_nc", r.beta_nc);
  opt("beta_os", r.beta_os);
  if (!r.me_lower.empty()) {
    json a = json::array();
    for (const MeValue &m : r.me_lower) a.push_back({{"d", m.d}, {"value", rounded(m.value)}});
    j["me_lower"] = a;
  }
  if (!r.entangled_lower.empty()) {
    json a = json::array();
    for (const EntangledValue &e : r.entangled_lower)
      a.push_back({{"dA", e.dA}, {"dB", e.dB}, {"value", rounded(e.value)}});
    j["entangled_lower"] = a;
  }
  json chains = json::array();
  for (const ChainCheck &c : r.chains)
    chains.push_back({{"label", c.label},
                      {"lhs", rounded(c.lhs)},
                      {"rhs", rounded(c.rhs)},
                      {"hard", c.hard},
                      {"pass", c.pass}});
  j["chains"] = chains;
  j["config"] = {{"tol", r.tol}, {"seed", r.seed}, {"restarts", r.restarts}};
  if (!r.runtimes.empty()) {
    json rt = json::object();
    for (const auto &[k, v] : r.runtimes) rt[k] = rounded(v);
    j["runtimes"] = rt;
  }
  return j;
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // folds -0
}

std::string game_to_json(const GameMatrix &G) {
  json j;
  j["format"] = "xorq-game-v1";
  j["n"] = G.n;
  json es = json::array();
  for (Eigen::Index r = 0; r < G.M.rows(); ++r)
    for (Eigen::Index c = 0; c < G.M.cols(); ++c) {
      const cplx v = G.M(r, c);
      if (v != cplx(0)) es.push_back({{"r", r}, {"c", c}, {"re", v.real()}, {"im", v.imag()}});
    }
  j["entries"] = es;
  return j.dump() + "\n";
}

GameMatrix game_from_json(const std::string &text) {
  const json j = parse(text);
  expect_format(j, "xorq-game-v1");
  const int n = get<int>(j, "n");
  if (n < 1 || n > 64) parse_fail("n out of range");
  const json es = field(j, "entries");
  if (!es.is_array()) parse_fail("entries must be an array");
  CMat M = CMat::Zero(n * n, n * n);
  for (const json &e : es) {
    const int r = get<int>(e, "r"), c = get<int>(e, "c");
    if (r < 0 || c < 0 || r >= n * n || c >= n * n) parse_fail("entry index out of range");
    M(r, c) += cplx(get<double>(e, "re"), get<double>(e, "im"));
  }
  return validate(n, M);
}

ClassicalGame classical_from_json(const std::string &text) {
  const json j = parse(text);
  const auto rows = get<std::vector<std::vector<double>>>(j, "R");
  const int n = static_cast<int>(rows.size());
  if (n < 1) parse_fail("R must be non-empty");
  RMat R(n, n);
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(rows[s].size()) != n) parse_fail("R must be square");
    for (int t = 0; t < n; ++t) R(s, t) = rows[s][t];
  }
  return classical(R);
}

GameMatrix matrix_from_json(const std::string &text) {
  const json j = parse(text);
  const int n = get<int>(j, "n");
  if (n < 1 || n > 64) parse_fail("n out of range");
  const json &rows = field(j, "M");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n * n)) parse_fail("M must have n^2 rows");
  CMat M(n * n, n * n);
  for (int r = 0; r < n * n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(n * n))
      parse_fail("M must have n^2 columns");
    for (int c = 0; c < n * n; ++c) M(r, c) = pair_value(rows[r][c]);
  }
  return validate(n, M);
}

std::string strategy_to_json(const Strategy &s, int n) {
  json j;
  j["format"] = "xorq-strategy-v1";
  j["kind"] = kind_name(kind_of(s));
  j["n"] = n;
  std::visit(
      [&](const auto &x) {
        using T = std::decay_t<decltype(x)>;
        j["A"] = pairs_of(x.A);
        j["B"] = pairs_of(x.B);
        if constexpr (std::is_same_v<T, Entangled>) {
          j["dA"] = x.dA;
          j["dB"] = x.dB;
          j["psi"] = pairs_of(x.psi);
        } else if constexpr (std::is_same_v<T, MaxEntangled>) {
          j["dA"] = x.d;
          j["dB"] = x.d;
          j["psi"] = json::array();
        } else {
          j["dA"] = 1;
          j["dB"] = 1;
          j["psi"] = json::array();
        }
      },
      s);
  return j.dump() + "\n";
}

Strategy strategy_from_json(const std::string &text) {
  const json j = parse(text);
  expect_format(j, "xorq-strategy-v1");
  const std::string kind = get<std::string>(j, "kind");
  const int n = get<int>(j, "n");
  const int dA = get<int>(j, "dA"), dB = get<int>(j, "dB");
  if (n < 1 || dA < 1 || dB < 1) parse_fail("dimensions must be positive");
  if (kind == "unentangled") return Unentangled{matrix_of(field(j, "A"), n), matrix_of(field(j, "B"), n)};
  if (kind == "complex") return Complex{matrix_of(field(j, "A"), n), matrix_of(field(j, "B"), n)};
  if (kind == "maxent") {
    if (dA != dB) parse_fail("maxent strategies need dA = dB");
    return MaxEntangled{dA, matrix_of(field(j, "A"), n * dA), matrix_of(field(j, "B"), n * dA)};
  }
  if (kind == "entangled") {
    CVec psi = vector_of(field(j, "psi"));
    if (psi.size() != static_cast<Eigen::Index>(dA) * dB) parse_fail("psi has the wrong length");
    return Entangled{dA, dB, matrix_of(field(j, "A"), n * dA), matrix_of(field(j, "B"), n * dB), psi};
  }
  parse_fail("unknown strategy kind '" + kind + "'");
}

std::string sdp_to_json(const SdpInstance &inst) {
  json j;
  j["format"] = "xorq-sdp-v1";
  json blocks = json::array();
  for (const SdpBlock &b : inst.blocks) blocks.push_back({{"label", b.label}, {"dim", b.dim}});
  j["blocks"] = blocks;
  j["objective"] = entries_json(inst.objective);
  json cons = json::array();
  for (const SdpConstraint &c : inst.constraints)
    cons.push_back({{"entries", entries_json(c.entries)}, {"rhs", c.rhs}});
  j["constraints"] = cons;
  return j.dump() + "\n";
}

SdpInstance sdp_from_json(const std::string &text) {
  const json j = parse(text);
  expect_format(j, "xorq-sdp-v1");
  SdpInstance inst;
  const json &blocks = field(j, "blocks");
  if (!blocks.is_array()) parse_fail("blocks must be an array");
  for (const json &b : blocks) inst.blocks.push_back({get<std::string>(b, "label"), get<int>(b, "dim")});
  inst.objective = entries_from(field(j, "objective"));
  const json &cons = field(j, "constraints");
  if (!cons.is_array()) parse_fail("constraints must be an array");
  for (const json &c : cons) inst.constraints.push_back({entries_from(field(c, "entries")), get<double>(c, "rhs")});
  try {
    validate_instance(inst);
  } catch (const Error &e) {
    parse_fail(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

std::string sdp_solution_to_json(const SdpSolution &sol, const CertifyReport &rep) {
  json j;
  j["format"] = "xorq-result-v1";
  j["kind"] = "sdp-solution";
  j["primal_value"] = rounded(sol.primal_value);
  j["dual_value"] = rounded(sol.dual_value);
  j["gap"] = rounded(sol.gap);
  j["iterations"] = sol.iterations;
  json ys = json::array();
  for (Eigen::Index i = 0; i < sol.y.size(); ++i) ys.push_back(rounded(sol.y(i)));
  j["y"] = ys;
  json zs = json::array();
  for (const CMat &Z : sol.Z) {
    json m = json::array();
    for (Eigen::Index r = 0; r < Z.rows(); ++r)
      for (Eigen::Index c = 0; c < Z.cols(); ++c)
        m.push_back({rounded(Z(r, c).real()), rounded(Z(r, c).imag())});
    zs.push_back(m);
  }
  j["Z"] = zs;
  j["certify"] = {{"ok", rep.ok},
                  {"max_constraint_residual", rounded(rep.max_constraint_residual)},
                  {"min_primal_eigenvalue", rounded(rep.min_primal_eigenvalue)},
                  {"min_dual_slack_eigenvalue", rounded(rep.min_dual_slack_eigenvalue)},
                  {"gap", rounded(rep.gap)},
                  {"violations", rep.violations}};
  return j.dump(2) + "\n";
}

std::string relaxation_to_json(const std::string &kind, const RelaxationResult &r) {
  json j;
  j["format"] = "xorq-result-v1";
  j["kind"] = kind;
  j["value"] = rounded(r.value);
  j["dual_value"] = rounded(r.dual_value);
  j["solver_gap"] = rounded(r.solver_gap);
  j["iterations"] = r.iterations;
  j["witness_value"] = rounded(r.witness_value);
  j["witness_violation"] = rounded(r.witness_violation);
  j["certified"] = r.certificate.ok;
  json w = json::array();
  for (const VectorValuedMatrix &X : r.witness) {
    json mats = json::array();
    for (const CMat &m : X.mats) {
      json p = json::array();
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) p.push_back({rounded(m(a, b).real()), rounded(m(a, b).imag())});
      mats.push_back(p);
    }
    w.push_back({{"n", X.n}, {"d", X.d}, {"mats", mats}});
  }
  j["witness"] = w;
  return j.dump(2) + "\n";
}

std::string report_to_json(const BiasReport &r) { return report_json(r).dump(2) + "\n"; }

std::string report_to_csv(const BiasReport &r) {
  std::ostringstream os;
  os << "quantity,value\n";
  os << "trace_norm," << fmt12(round12(r.trace_norm)) << "\n";
  auto opt = [&](const char *k, const std::optional<double> &v) {
    if (v) os << k << "," << fmt12(round12(*v)) << "\n";
  };
  opt("omega_lower", r.omega_lower);
  opt("omega_c_lower", r.omega_c_lower);
  for (const MeValue &m : r.me_lower) os << "me_lower(d=" << m.d << ")," << fmt12(round12(m.value)) << "\n";
  for (const EntangledValue &e : r.entangled_lower)
    os << "entangled_lower(" << e.dA << "x" << e.dB << ")," << fmt12(round12(e.value)) << "\n";
  opt("beta_sdp", r.beta_sdp);
  opt("beta_nc", r.beta_nc);
  opt("beta_os", r.beta_os);
  for (const ChainCheck &c : r.chains)
    os << "chain[" << c.label << "]," << (c.pass ? "pass" : "fail") << (c.hard ? "" : " (soft)") << "\n";
  return os.str();
}

std::string report_to_text(const BiasReport &r) {
  std::ostringstream os;
  os << "game " << r.game << " (n = " << r.n << ")\n";
  os << "  trace_norm      " << fmt12(round12(r.trace_norm)) << "\n";
  auto opt = [&](const char *k, const std::optional<double> &v) {
    if (v) os << "  " << k << std::string(16 - std::string(k).size(), ' ') << fmt12(round12(*v)) << "\n";
  };
  opt("omega_lower", r.omega_lower);
  opt("omega_c_lower", r.omega_c_lower);
  for (const MeValue &m : r.me_lower) os << "  me_lower d=" << m.d << "   " << fmt12(round12(m.value)) << "\n";
  for (const EntangledValue &e : r.entangled_lower)
    os << "  entangled " << e.dA << "x" << e.dB << "  " << fmt12(round12(e.value)) << "\n";
  opt("beta_sdp", r.beta_sdp);
  opt("beta_nc", r.beta_nc);
  opt("beta_os", r.beta_os);
  for (const ChainCheck &c : r.chains)
    os << "  " << (c.pass ? "ok  " : "FAIL") << " " << c.label << " (" << fmt12(round12(c.lhs)) << " vs "
       << fmt12(round12(c.rhs)) << ")" << (c.hard ? "" : " [diagnostic]") << "\n";
  return os.str();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::BadArgs, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::BadArgs, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::BadArgs, "cannot rename into " + path);
  }
}

}  // namespace xorq
