// Copyright 2026 The mlocc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end shared by tools/mlocc and the CLI tests.
//
// Exit codes: 0 success, 1 internal error, 2 malformed input, 3 non-unitary
// matrix, 4 protocol stage failure, 5 asserted inequality violated.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlocc/gates.hpp"
#include "mlocc/json_io.hpp"
#include "mlocc/markov_cost.hpp"
#include "mlocc/protocol.hpp"

namespace mlocc::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kMalformedInput = 2,
  kNonUnitary = 3,
  kStageFailure = 4,
  kInequalityViolated = 5,
};

struct RunConfig {
  std::string command;
  std::string gate;
  std::string unitary_file;
  std::optional<long long> d;
  std::string vlist_file;
  std::string instrument_file;
  std::optional<double> tol;
  std::optional<double> fixed_point_tol;
  std::string out;
  bool verbose = false;
};

namespace detail {

struct Input {
  CMatrix u;
  Dim d = 0;
  std::optional<gates::NamedGate> gate;
};

inline Tolerances tolerances(const RunConfig& cfg) {
  Tolerances t;
  std::optional<double> general = cfg.tol;
  if (!general) {
    if (const char* env = std::getenv("MARKOV_TOL"); env && *env) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v))
        throw InputError(std::string("MARKOV_TOL='") + env + "' is not a positive number");
      general = v;
    }
  }
  if (general) {
    if (!(*general > 0) || !std::isfinite(*general)) throw InputError("--tol must be positive");
    t.general = *general;
  }
  if (cfg.fixed_point_tol) {
    if (!(*cfg.fixed_point_tol > 0) || *cfg.fixed_point_tol >= 1) throw InputError("--fixed-point-tol must lie in (0, 1)");
    t.fixed_point = *cfg.fixed_point_tol;
  }
  return t;
}

inline Input load_unitary(const RunConfig& cfg, const Tolerances& tol) {
  if (cfg.gate.empty() == cfg.unitary_file.empty()) throw InputError("give exactly one of --gate or --unitary");
  if (cfg.d && *cfg.d < 2) throw InputError("--d must be at least 2");
  Input in;
  if (!cfg.gate.empty()) {
    in.gate = gates::parse_gate_name(cfg.gate);
    in.d = cfg.d ? static_cast<Dim>(*cfg.d) : 2;
    in.u = gates::make(*in.gate, in.d);
  } else {
    in.u = io::matrix_from_json(io::parse_file(cfg.unitary_file));
    if (in.u.rows() != in.u.cols()) throw InputError("unitary must be square");
    const auto n = in.u.rows();
    const auto root = static_cast<Dim>(std::llround(std::sqrt(static_cast<double>(n))));
    in.d = cfg.d ? static_cast<Dim>(*cfg.d) : root;
    if (in.d * in.d != n)
      throw InputError("a " + std::to_string(n) + "x" + std::to_string(n) + " matrix is not a two-qudit gate with d = " +
                       std::to_string(in.d));
  }
  require_unitary(in.u, tol.unitary, "input unitary");
  return in;
}

inline std::vector<CMatrix> load_vlist(const RunConfig& cfg, const Input& in) {
  if (!cfg.vlist_file.empty()) return io::matrix_list_from_json(io::parse_file(cfg.vlist_file));
  if (!in.gate) throw InputError("a custom --unitary needs --vlist");
  return gates::default_vlist(*in.gate, in.d);
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

inline std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << (std::abs(x) < 0.5 * std::pow(10.0, -digits) ? 0.0 : x);
  return os.str();
}

inline int cmd_cost(const RunConfig& cfg, std::ostream& out) {
  const Tolerances tol = tolerances(cfg);
  const Input in = load_unitary(cfg, tol);
  MarkovCostOptions opt;
  opt.tol = tol;
  const auto report = markov_cost(in.u, in.d, opt);
  out << fixed(report.cost_bits, 6) << "\n";
  if (!cfg.out.empty()) write_file(cfg.out, io::dump(io::to_json(report)));
  return kOk;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const Tolerances tol = tolerances(cfg);
  const Input in = load_unitary(cfg, tol);
  MarkovCostOptions opt;
  opt.tol = tol;
  const auto report = markov_cost(in.u, in.d, opt);
  io::json j = {{"d", in.d},
                {"schmidt_coeffs", io::numbers(report.schmidt_coeffs)},
                {"omega_eigenvalues", io::numbers(report.omega_eigenvalues)},
                {"fixed_point_rank", report.fixed_point_rank},
                {"phi_infinity_eigenvalues", io::numbers(report.phi_infinity.eigenvalues())},
                {"cost_bits", io::number(report.cost_bits)},
                {"cesaro_residual", io::number(report.cesaro_residual)}};
  if (cfg.verbose) {
    j["schmidt"] = io::to_json(operator_schmidt(in.u, in.d, tol));
    j["omega"] = io::to_json(omega(in.u, in.d, tol));
    j["phi_infinity"] = io::to_json(report.phi_infinity);
  }
  const std::string text = io::dump(j);
  if (cfg.out.empty())
    out << text;
  else
    write_file(cfg.out, text);
  return kOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Tolerances tol = tolerances(cfg);
  const Input in = load_unitary(cfg, tol);
  const auto vlist = load_vlist(cfg, in);
  ProtocolTranscript tr = [&] {
    try {
      return run_two_round(in.u, in.d, vlist, tol);
    } catch (const ProtocolError&) {
      throw;
    } catch (const NonUnitaryError&) {
      throw;
    } catch (const Error& e) {
      throw ProtocolError("run_two_round", std::nullopt, e.what());
    }
  }();
  out << "fidelity " << fixed(tr.fidelity, 9) << "\n";
  out << "ledger ebits_in=" << fixed(tr.ledger.ebits_in, 6) << " ebits_out=" << fixed(tr.ledger.ebits_out, 6)
      << " cbits_forward=" << fixed(tr.ledger.cbits_forward, 6)
      << " cbits_backward=" << fixed(tr.ledger.cbits_backward, 6) << "\n";
  out << tr.summary() << "\n";
  if (!cfg.out.empty()) write_file(cfg.out, io::dump(io::to_json(tr, cfg.verbose)));
  return kOk;
}

struct LoadedInstrument {
  MeasurementInstrument instr;
  QState resource;
};

inline LoadedInstrument load_instrument(const RunConfig& cfg, const Input& in, const Tolerances& tol) {
  if (cfg.instrument_file.empty()) {
    const auto vlist = load_vlist(cfg, in);
    return {build_alice_measurement(vlist, in.d, tol), max_entangled(static_cast<Dim>(vlist.size()))};
  }
  if (!cfg.vlist_file.empty()) throw InputError("give at most one of --vlist or --instrument");
  const auto j = io::parse_file(cfg.instrument_file);
  if (!j.is_object() || !j.contains("ops")) throw InputError("instrument file needs an 'ops' array");
  auto ops = io::matrix_list_from_json(j.at("ops"));
  const Dim d_in = ops.front().cols();
  if (d_in % in.d != 0) throw InputError("instrument input dimension is not a multiple of d");
  const Dim k = d_in / in.d;
  QState resource = j.contains("resource") ? io::state_from_json(j.at("resource"), tol) : max_entangled(k);
  if (resource.dims()[0] != k) throw InputError("resource's first subsystem must have dimension " + std::to_string(k));
  MeasurementInstrument instr{std::move(ops), d_in, in.d};
  for (const auto& m : instr.ops)
    if (m.rows() != in.d || m.cols() != d_in) throw InputError("instrument operators must all be d x d*dim(A_0)");
  const double r = instr.completeness_residual();
  if (r > tol.general) throw InputError("instrument is not complete (residual " + std::to_string(r) + ")");
  return {std::move(instr), std::move(resource)};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Tolerances tol = tolerances(cfg);
  const Input in = load_unitary(cfg, tol);
  const auto li = load_instrument(cfg, in, tol);
  const auto lemma = lemma_inequality_check(li.instr, li.resource, in.u, in.d, tol);
  const auto audit = entropy_audit(li.instr, li.resource, in.u, in.d, tol);
  std::vector<InequalityCheck> checks = lemma.checks;
  const Certificate& c = lemma.certificate;
  if (c.markovianizing_eps <= 1e-8) {
    const double h = audit.at("H(p)"), m = audit.at("M(U^dagger)");
    checks.push_back({"H(p) >= M(U^dagger) for an exact Markovianizing instrument", h, m - 1e-6, h >= m - 1e-6});
  }
  out << "oblivious_eps " << fixed(c.oblivious_eps, 9) << "\n";
  out << "decoupling_eps " << fixed(c.decoupling_eps, 9) << "\n";
  out << "markovianizing_eps " << fixed(c.markovianizing_eps, 9) << "\n";
  out << "markov_cmi " << fixed(c.markov_cmi, 9) << "\n";
  out << "H(p) " << fixed(audit.at("H(p)"), 9) << "  M(U^dagger) " << fixed(audit.at("M(U^dagger)"), 9) << "\n";
  bool all = true;
  io::json jc = io::json::array();
  for (const auto& ch : checks) {
    all = all && ch.passed;
    out << (ch.passed ? "PASS " : "FAIL ") << ch.name << " (" << fixed(ch.lhs, 9) << " vs " << fixed(ch.rhs, 9)
        << ")\n";
    jc.push_back(io::to_json(ch));
  }
  if (!cfg.out.empty()) {
    io::json j = {{"certificate", io::to_json(c)},
                  {"audit", io::to_json(audit)},
                  {"product_distance", io::number(lemma.product_distance)},
                  {"checks", std::move(jc)},
                  {"passed", all}};
    write_file(cfg.out, io::dump(j));
  }
  return all ? kOk : kInequalityViolated;
}

}  // namespace detail

/// Parses argv and runs one command; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markovianizing cost and two-round LOCC protocol simulation for bipartite unitaries", "mlocc"};
  app.require_subcommand(1);
  RunConfig cfg;
  long long d_value = 0;
  double tol_value = 0, fp_value = 0;

  auto add_common = [&](CLI::App* sub) {
    auto* g = sub->add_option("--gate", cfg.gate, "identity, swap, cnot, cz, cphase(theta) or dft");
    auto* u = sub->add_option("--unitary", cfg.unitary_file, "JSON matrix file");
    g->excludes(u);
    sub->add_option("--d", d_value, "local dimension (default 2 for named gates)");
    sub->add_option("--tol", tol_value, "general numerical tolerance (default 1e-9, or $MARKOV_TOL)");
    sub->add_option("--fixed-point-tol", fp_value, "eigenvalues >= 1 - tol count as fixed points (default 1e-6)");
    sub->add_option("--out", cfg.out, "write the JSON report here");
    sub->add_flag("--verbose", cfg.verbose, "embed matrices in JSON reports");
  };
  auto* cost = app.add_subcommand("cost", "print M(U) in bits");
  auto* analyze = app.add_subcommand("analyze", "Schmidt coefficients, Omega spectrum and Phi_inf spectrum");
  auto* simulate = app.add_subcommand("simulate", "run the two-round protocol");
  auto* verify = app.add_subcommand("verify", "certificates, lemma inequalities and entropy audit");
  for (auto* s : {cost, analyze, simulate, verify}) add_common(s);
  for (auto* s : {simulate, verify}) s->add_option("--vlist", cfg.vlist_file, "JSON list of randomizing unitaries");
  verify->add_option("--instrument", cfg.instrument_file, "JSON {\"ops\": [...], \"resource\": state}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  }
  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub->count("--d")) cfg.d = d_value;
  if (sub->count("--tol")) cfg.tol = tol_value;
  if (sub->count("--fixed-point-tol")) cfg.fixed_point_tol = fp_value;

  try {
    if (cfg.command == "cost") return detail::cmd_cost(cfg, out);
    if (cfg.command == "analyze") return detail::cmd_analyze(cfg, out);
    if (cfg.command == "simulate") return detail::cmd_simulate(cfg, out);
    return detail::cmd_verify(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const NonUnitaryError& e) {
    err << "error: " << e.what() << "\n";
    return kNonUnitary;
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << "\n";
    return kStageFailure;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace mlocc::cli
