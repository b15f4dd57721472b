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

// JSON interchange. Matrices are {"rows", "cols", "re", "im"} with row-major
// entries; states add "dims". Output is reproducible: keys sorted, floats
// rounded to 12 significant digits and |x| < 1e-12 written as 0.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlocc/markov_cost.hpp"
#include "mlocc/protocol.hpp"

namespace mlocc::io {

using json = nlohmann::json;

inline double round_sig(double x) {
  if (!std::isfinite(x)) throw InputError("cannot serialize a non-finite number");
  if (std::abs(x) < 1e-12) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline json number(double x) { return round_sig(x); }

inline json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

inline json numbers(const RVector& xs) { return numbers(std::vector<double>(xs.data(), xs.data() + xs.size())); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Matrices and states

inline json to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Dim i = 0; i < m.rows(); ++i)
    for (Dim j = 0; j < m.cols(); ++j) {
      re.push_back(number(m(i, j).real()));
      im.push_back(number(m(i, j).imag()));
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline json to_json(const QState& s) {
  json j = to_json(s.matrix());
  j["dims"] = s.dims();
  return j;
}

namespace detail {

inline Dim positive_int(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw InputError(std::string("field '") + key + "' must be a positive integer");
  return static_cast<Dim>(v.get<long long>());
}

inline std::vector<double> real_array(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("field '") + key + "' must be an array");
  const json& a = j.at(key);
  if (a.size() != n)
    throw InputError(std::string("field '") + key + "' has " + std::to_string(a.size()) + " entries, expected " +
                     std::to_string(n));
  std::vector<double> out;
  out.reserve(n);
  for (const auto& v : a) {
    if (!v.is_number()) throw InputError(std::string("field '") + key + "' contains a non-number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(std::string("field '") + key + "' contains a non-finite value");
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw InputError("matrix must be a JSON object");
  const Dim rows = detail::positive_int(j, "rows");
  const Dim cols = detail::positive_int(j, "cols");
  const std::size_t n = static_cast<std::size_t>(rows * cols);
  const auto re = detail::real_array(j, "re", n);
  std::vector<double> im(n, 0.0);
  if (j.contains("im")) im = detail::real_array(j, "im", n);
  CMatrix m(rows, cols);
  for (Dim i = 0; i < rows; ++i)
    for (Dim k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      m(i, k) = Complex(re[idx], im[idx]);
    }
  return m;
}

inline QState state_from_json(const json& j, const Tolerances& tol = {}) {
  CMatrix m = matrix_from_json(j);
  if (!j.contains("dims") || !j.at("dims").is_array()) throw InputError("state needs a 'dims' array");
  Dims dims;
  for (const auto& v : j.at("dims")) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw InputError("state dims must be positive integers");
    dims.push_back(static_cast<Dim>(v.get<long long>()));
  }
  try {
    return QState(std::move(m), std::move(dims), tol);
  } catch (const DimensionError& e) {
    throw InputError(e.what());
  } catch (const InvalidStateError& e) {
    throw InputError(e.what());
  } catch (const NonHermitianError& e) {
    throw InputError(e.what());
  }
}

/// Either a JSON array of matrices or an object {"unitaries": [...]}.
inline std::vector<CMatrix> matrix_list_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object() && j.contains("unitaries")) arr = &j.at("unitaries");
  if (!arr->is_array() || arr->empty()) throw InputError("expected a nonempty array of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : *arr) out.push_back(matrix_from_json(m));
  return out;
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const SchmidtDecomposition& s) {
  json left = json::array(), right = json::array();
  for (const auto& m : s.left) left.push_back(to_json(m));
  for (const auto& m : s.right) right.push_back(to_json(m));
  return {{"coeffs", numbers(s.coeffs)}, {"left", std::move(left)}, {"right", std::move(right)}};
}

inline json to_json(const MarkovCostReport& r) {
  return {{"d", r.d},
          {"schmidt_coeffs", numbers(r.schmidt_coeffs)},
          {"omega_eigenvalues", numbers(r.omega_eigenvalues)},
          {"fixed_point_rank", r.fixed_point_rank},
          {"phi_infinity", to_json(r.phi_infinity)},
          {"cost_bits", number(r.cost_bits)},
          {"cesaro_residual", number(r.cesaro_residual)}};
}

inline json to_json(const EntropyReport& r) {
  json j = json::object();
  for (const auto& e : r.entries) j[e.name] = number(e.bits);
  return j;
}

inline json to_json(const ResourceLedger& l) {
  return {{"ebits_in", number(l.ebits_in)},
          {"ebits_out", number(l.ebits_out)},
          {"cbits_forward", number(l.cbits_forward)},
          {"cbits_backward", number(l.cbits_backward)}};
}

inline json to_json(const Certificate& c) {
  json per = json::array();
  for (const auto& o : c.per_outcome)
    per.push_back({{"k", o.k},
                   {"probability", number(o.probability)},
                   {"oblivious", number(o.oblivious)},
                   {"decoupling", number(o.decoupling)},
                   {"markovianizing", number(o.markovianizing)},
                   {"cmi", number(o.cmi)}});
  return {{"oblivious_eps", number(c.oblivious_eps)},
          {"decoupling_eps", number(c.decoupling_eps)},
          {"markovianizing_eps", number(c.markovianizing_eps)},
          {"markov_cmi", number(c.markov_cmi)},
          {"per_outcome", std::move(per)}};
}

inline json to_json(const InequalityCheck& c) {
  return {{"name", c.name}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"passed", c.passed}};
}

inline json to_json(const ProtocolTranscript& t, bool verbose = false) {
  json outcomes = json::array();
  for (const auto& o : t.outcomes)
    outcomes.push_back(
        {{"k", o.k}, {"l", o.l}, {"probability", number(o.probability)}, {"fidelity", number(o.fidelity)}});
  json stages = json::array();
  for (const auto& s : t.stages) stages.push_back({{"stage", s.stage}, {"delta", to_json(s.delta)}});
  json j = {{"d", t.d},
            {"num_unitaries", t.num_unitaries},
            {"d_b1", t.d_b1},
            {"outcomes", std::move(outcomes)},
            {"fidelity", number(t.fidelity)},
            {"ledger", to_json(t.ledger)},
            {"stages", std::move(stages)},
            {"audits", to_json(t.audits)},
            {"markov_cost_bits", number(t.markov_cost_bits)},
            {"rate_gap", number(t.rate_gap())},
            {"note", t.summary()}};
  if (verbose) j["final_state"] = to_json(t.final_state);
  return j;
}

}  // namespace mlocc::io
