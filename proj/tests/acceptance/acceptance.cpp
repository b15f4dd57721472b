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


// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mlocc.hpp"
#include "mlocc/cli.hpp"

namespace {

using namespace mlocc;

struct Gate {
  std::string name;
  CMatrix u;
  Dim d;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Named gates at d = 2 and 3, then 25 Haar unitaries at d = 2 and 10 at d = 3.
std::vector<Gate> gate_suite() {
  std::vector<Gate> out;
  for (Dim d : {2, 3})
    for (const char* n : {"identity", "swap", "cnot", "cz", "cphase(0.785398163397)", "cphase(1.57079632679)",
                          "cphase(0.3)", "dft"})
      out.push_back({std::string(n) + " d=" + std::to_string(d), gates::make(n, d), d});
  random::Engine rng(2026);
  for (int i = 0; i < 25; ++i) out.push_back({"haar2#" + std::to_string(i), random::haar_unitary(4, rng), 2});
  for (int i = 0; i < 10; ++i) out.push_back({"haar3#" + std::to_string(i), random::haar_unitary(9, rng), 3});
  return out;
}

MeasurementInstrument random_instrument(Dim d, Dim d_a0, Dim outcomes, random::Engine& rng) {
  outcomes = std::max(outcomes, d_a0);
  const CMatrix iso = random::haar_unitary(outcomes * d, rng).leftCols(d * d_a0);
  MeasurementInstrument instr{{}, d * d_a0, d};
  for (Dim k = 0; k < outcomes; ++k) instr.ops.push_back(iso.middleRows(k * d, d));
  return instr;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome criterion1() {
  struct Case {
    std::string name;
    CMatrix u;
    Dim d;
    double expect;
  };
  std::vector<Case> cases;
  for (Dim d : {2, 3, 4}) cases.push_back({"I_" + std::to_string(d), gates::identity(d), d, 0.0});
  cases.push_back({"SWAP_2", gates::swap(2), 2, 2.0});
  cases.push_back({"SWAP_3", gates::swap(3), 3, 2.0 * std::log2(3.0)});
  cases.push_back({"CNOT", gates::cnot(2), 2, 1.0});
  cases.push_back({"CZ", gates::cz(2), 2, 1.0});
  for (double th : {std::numbers::pi / 4, std::numbers::pi / 2, 0.3})
    cases.push_back({"cphase(" + fmt(th) + ")", gates::cphase(th, 2), 2, 1.0});
  bool pass = true;
  double worst_err = 0, worst_time = 0;
  std::string bad;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const double m = markov_cost(c.u, c.d).cost_bits;
    const double t = seconds_since(t0);
    const double err = std::abs(m - c.expect);
    worst_err = std::max(worst_err, err);
    worst_time = std::max(worst_time, t);
    if (err > 1e-9 || t >= 1.0) {
      pass = false;
      bad += " " + c.name + "=" + fmt(m);
    }
  }
  return {pass, std::to_string(cases.size()) + " gates, max error " + fmt(worst_err) + " bits, max time " +
                    fmt(worst_time) + " s" + (bad.empty() ? "" : ";" + bad)};
}

Outcome criterion2(const std::vector<Gate>& suite) {
  const int n = 2000;
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  double worst = 0;
  std::string bad;
  for (const auto& g : suite) {
    const CMatrix om = omega(g.u, g.d);
    const double gap = max_abs_diff(omega_infinity(om), cesaro_oracle(om, n));
    worst = std::max(worst, gap * n);
    if (gap > 2.0 / n) {
      ++failures;
      bad += " " + g.name + " (N*gap=" + fmt(gap * n) + ")";
    }
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 60.0, std::to_string(suite.size()) + " unitaries, " + std::to_string(failures) +
                                         " exceed 2/N, max N*gap " + fmt(worst) + ", " + fmt(t) + " s" +
                                         (bad.empty() ? "" : ";" + bad)};
}

Outcome criterion3(const std::vector<Gate>& suite) {
  double worst = 0;
  for (const auto& g : suite) {
    const auto basis = OperatorBasis::pauli(g.d);
    const CMatrix p = omega_infinity(omega(g.u, g.d));
    worst = std::max(worst, max_abs_diff(phi_infinity_pauli_sum(p, basis), phi_infinity_channel_route(p, basis)));
  }
  return {worst <= 1e-9, std::to_string(suite.size()) + " unitaries, max elementwise gap " + fmt(worst)};
}

Outcome criterion4() {
  CMatrix z = CMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  const std::vector<CMatrix> vs{CMatrix::Identity(2, 2), z};
  bool pass = true;
  std::string detail;
  for (const auto& [name, u] : std::vector<std::pair<std::string, CMatrix>>{{"CNOT", gates::cnot(2)}, {"CZ", gates::cz(2)}}) {
    const auto tr = run_two_round(u, 2, vs);
    const bool ledger = tr.ledger == ResourceLedger{2.0, 0.0, 1.0, 2.0};
    const bool gap_reported = tr.rate_gap() > 0.5 && tr.summary().find("gap 1.000000") != std::string::npos;
    pass = pass && tr.fidelity >= 1.0 - 1e-9 && ledger && gap_reported;
    detail += name + ": fidelity " + fmt(tr.fidelity) + ", ledger " + (ledger ? "2/1/2" : "wrong") + ", \"" +
              tr.summary() + "\"; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome criterion5() {
  CMatrix z = CMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  const auto instr = build_alice_measurement({CMatrix::Identity(2, 2), z}, 2);
  const auto c = certify(instr, max_entangled(2), gates::cnot(2), 2);
  const bool pass = c.oblivious_eps <= 1e-10 && c.decoupling_eps <= 1e-8 && c.markovianizing_eps <= 1e-8 &&
                    c.markov_cmi <= 1e-9;
  return {pass, "oblivious " + fmt(c.oblivious_eps) + ", decoupling " + fmt(c.decoupling_eps) + ", markovianizing " +
                    fmt(c.markovianizing_eps) + ", CMI " + fmt(c.markov_cmi)};
}

Outcome criterion6() {
  random::Engine rng(6);
  int violations = 0, checks = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    const CMatrix u = random::haar_unitary(4, rng);
    MeasurementInstrument instr;
    QState res = max_entangled(2);
    if (t % 2 == 0) {
      std::vector<CMatrix> vs;
      for (int j = 0; j < 2 + t % 3; ++j) vs.push_back(random::haar_unitary(2, rng));
      instr = build_alice_measurement(vs, 2);
      res = max_entangled(static_cast<Dim>(vs.size()));
    } else {
      instr = random_instrument(2, 2, 2 + t % 3, rng);
      if (t % 4 == 3) res = random::random_density({2, 2}, rng);
    }
    const auto rep = lemma_inequality_check(instr, res, u, 2);
    for (std::size_t i = 0; i < 2; ++i) {
      ++checks;
      if (!rep.checks[i].passed) ++violations;
      slack = std::min(slack, rep.checks[i].rhs - rep.checks[i].lhs);
    }
  }
  return {violations == 0, "50 pairs, " + std::to_string(checks) + " checks, " + std::to_string(violations) +
                               " violations, min slack " + fmt(slack)};
}

Outcome criterion7() {
  // exactly-Markovianizing instruments: default twirls of the gate library plus Z-twirls of diagonal gates
  struct Case {
    CMatrix u;
    Dim d;
    std::vector<CMatrix> vs;
  };
  std::vector<Case> cases;
  for (Dim d : {2, 3})
    for (const char* n : {"identity", "swap", "cnot", "cz", "cphase(0.3)", "dft"}) {
      const auto g = gates::parse_gate_name(n);
      cases.push_back({gates::make(g, d), d, gates::default_vlist(g, d)});
    }
  random::Engine rng(7);
  for (int i = 0; i < 5; ++i) {
    const CMatrix local = kron(CMatrix(random::haar_unitary(2, rng)), CMatrix(random::haar_unitary(2, rng)));
    cases.push_back({gates::cphase(0.4 + i, 2) * local, 2, gates::default_vlist(gates::parse_gate_name("cz"), 2)});
  }
  int exact = 0, violations = 0;
  for (const auto& c : cases) {
    const auto instr = build_alice_measurement(c.vs, c.d);
    const QState res = max_entangled(static_cast<Dim>(c.vs.size()));
    if (markovianizing_error(instr, res, c.u, c.d).eps > 1e-8) continue;
    ++exact;
    const auto audit = entropy_audit(instr, res, c.u, c.d);
    if (audit.at("H(p)") < audit.at("M(U^dagger)") - 1e-6) ++violations;
  }
  CMatrix z = CMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  const auto instr = build_alice_measurement({CMatrix::Identity(2, 2), z}, 2);
  double s_ba = 0, i_br = 0;
  for (const auto& b : measurement_branches(instr, max_entangled(2), gates::cnot(2), 2)) {
    const auto bob = find_bob_isometry(b.state, 2);
    const auto mb = merging_bounds(QState::pure(bob.psi_p), {0}, {2}, {1});
    s_ba = std::max(s_ba, std::abs(mb.at("S(B|A)") - 1.0));
    i_br = std::max(i_br, std::abs(mb.at("I(B:R)") - 1.0));
  }
  const bool pass = violations == 0 && exact > 0 && s_ba <= 1e-9 && i_br <= 1e-9;
  return {pass, std::to_string(exact) + " exact instruments, " + std::to_string(violations) +
                    " H < M violations; CNOT Psi^p |S(B|A)-1| = " + fmt(s_ba) + ", |I(B:R)-1| = " + fmt(i_br)};
}

Outcome criterion8() {
  random::Engine rng(8);
  std::vector<std::string> failed;
  auto check = [&](const std::string& name, bool ok) {
    if (!ok) failed.push_back(name);
  };
  bool ok = true;
  for (int t = 0; t < 30; ++t) {
    const Dim d = 2 + t % 3;
    const QChannel e = e_tilde(random::haar_unitary(d * d, rng), d);
    ok = ok && e.trace_preserving_residual() <= 1e-9 && e.unitality_residual() <= 1e-9;
  }
  check("channel unitality/CPTP", ok);
  ok = true;
  for (Dim d : {2, 3, 4}) {
    const auto basis = OperatorBasis::pauli(d);
    std::vector<CMatrix> all{CMatrix::Identity(d, d)};
    all.insert(all.end(), basis.traceless.begin(), basis.traceless.end());
    ok = ok && all.size() == std::size_t(d * d);
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) {
        const Complex ip = (all[i].adjoint() * all[j]).trace();
        ok = ok && std::abs(ip - (i == j ? Complex(double(d)) : Complex(0))) <= 1e-10;
      }
  }
  check("Pauli orthogonality", ok);
  double min_cmi = 0;
  for (int t = 0; t < 200; ++t) {
    const Dims dims{2, Dim(2 + t % 2), 2};
    const QState s = random::random_density(dims, rng, 1 + t % 6);
    min_cmi = std::min(min_cmi, conditional_mutual_information(s, {0}, {2}, {1}));
  }
  check("CMI nonnegativity", min_cmi >= -1e-9);
  ok = true;
  for (int t = 0; t < 20; ++t) {
    const Dim d = 2 + t % 2;
    const CMatrix u = random::haar_unitary(d * d, rng);
    const CMatrix uv = u * kron(CMatrix(CMatrix::Identity(d, d)), CMatrix(random::haar_unitary(d, rng)));
    ok = ok && std::abs(markov_cost(uv, d).cost_bits - markov_cost(u, d).cost_bits) <= 1e-9;
  }
  check("right-local invariance", ok);
  ok = true;
  for (int t = 0; t < 10; ++t) {
    const Dim d = 2 + t % 2;
    const CMatrix u = t < 4 ? gates::make(t % 2 ? "cnot" : "cphase(0.3)", d) : random::haar_unitary(d * d, rng);
    MarkovCostOptions opt;
    opt.basis = random::random_operator_basis(d, rng);
    ok = ok && std::abs(markov_cost(u, d, opt).cost_bits - markov_cost(u, d).cost_bits) <= 1e-9;
  }
  check("basis robustness", ok);
  std::string detail = "5 property suites";
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail + "; min CMI over 200 states " + fmt(min_cmi)};
}

Outcome criterion9() {
  namespace fs = std::filesystem;
  const std::vector<std::pair<std::string, std::vector<std::string>>> fixtures{
      {"cost_cnot.json", {"cost", "--gate", "cnot"}},
      {"cost_swap_d3.json", {"cost", "--gate", "swap", "--d", "3"}},
      {"simulate_cnot.json", {"simulate", "--gate", "cnot"}},
      {"simulate_cnot_verbose.json", {"simulate", "--gate", "cnot", "--verbose"}},
      {"verify_cnot.json", {"verify", "--gate", "cnot"}},
      {"analyze_cphase.json", {"analyze", "--gate", "cphase(0.3)", "--verbose"}},
  };
  const fs::path dir = fs::temp_directory_path() / "mlocc_acceptance";
  fs::create_directories(dir);
  auto read = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  int identical = 0, golden = 0;
  for (const auto& [name, args] : fixtures) {
    std::string texts[2];
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path out = dir / (std::to_string(pass) + "_" + name);
      std::vector<std::string> full{"mlocc"};
      full.insert(full.end(), args.begin(), args.end());
      full.push_back("--out");
      full.push_back(out.string());
      std::vector<const char*> argv;
      for (const auto& a : full) argv.push_back(a.c_str());
      std::ostringstream sink;
      if (cli::run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink) != 0) return {false, name + " failed"};
      texts[pass] = read(out);
    }
    if (!texts[0].empty() && texts[0] == texts[1]) ++identical;
    if (texts[0] == read(fs::path(MLOCC_GOLDEN_DIR) / name)) ++golden;
  }
  const int n = static_cast<int>(fixtures.size());
  return {identical == n && golden == n, std::to_string(identical) + "/" + std::to_string(n) +
                                             " fixtures byte-identical across runs, " + std::to_string(golden) + "/" +
                                             std::to_string(n) + " match the golden files"};
}

}  // namespace

int main() {
  const auto suite = gate_suite();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Markovianizing-cost golden values", criterion1},
      {"omega_infinity vs Cesaro mean within 2/N", [&] { return criterion2(suite); }},
      {"Phi_inf Pauli sum vs channel route", [&] { return criterion3(suite); }},
      {"two-round protocol end to end", criterion4},
      {"certificates for CNOT with {I,Z}", criterion5},
      {"lemma inequalities on 50 random pairs", criterion6},
      {"entropy audit and merging bounds", criterion7},
      {"module property suites", criterion8},
      {"CLI determinism", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
