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

// Built-in two-qudit gates on (A, B), each d^2 x d^2 with A the more significant index.

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mlocc/operators.hpp"
#include "mlocc/tensor.hpp"

namespace mlocc::gates {

inline CMatrix identity(Dim d) { return CMatrix::Identity(d * d, d * d); }

/// |a, b> -> |b, a>.
inline CMatrix swap(Dim d) {
  CMatrix u = CMatrix::Zero(d * d, d * d);
  for (Dim a = 0; a < d; ++a)
    for (Dim b = 0; b < d; ++b) u(b * d + a, a * d + b) = 1.0;
  return u;
}

/// The SUM gate |a, b> -> |a, b + a mod d>; CNOT at d = 2.
inline CMatrix cnot(Dim d) {
  CMatrix u = CMatrix::Zero(d * d, d * d);
  for (Dim a = 0; a < d; ++a)
    for (Dim b = 0; b < d; ++b) u(a * d + (a + b) % d, a * d + b) = 1.0;
  return u;
}

/// |a, b> -> omega^{ab} |a, b>, omega = e^{2 pi i/d}; CZ at d = 2.
inline CMatrix cz(Dim d) {
  CMatrix u = CMatrix::Zero(d * d, d * d);
  for (Dim a = 0; a < d; ++a)
    for (Dim b = 0; b < d; ++b)
      u(a * d + b, a * d + b) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a * b) /
                                                    static_cast<double>(d));
  return u;
}

/// Phase e^{i theta} on |d-1, d-1>, identity elsewhere.
inline CMatrix cphase(double theta, Dim d) {
  CMatrix u = identity(d);
  u(d * d - 1, d * d - 1) = std::polar(1.0, theta);
  return u;
}

/// Fourier transform on the joint d^2-dimensional space.
inline CMatrix dft(Dim d) {
  const Dim n = d * d;
  CMatrix u(n, n);
  for (Dim j = 0; j < n; ++j)
    for (Dim k = 0; k < n; ++k)
      u(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                           2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
  return u;
}

struct NamedGate {
  std::string family;  // identity, swap, cnot, cz, cphase, dft
  double theta = std::numbers::pi / 2;
};

/// Accepts "identity", "swap", "cnot", "cz", "dft", "cphase" (theta = pi/2) and "cphase(THETA)".
inline NamedGate parse_gate_name(const std::string& raw) {
  std::string name;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(static_cast<char>(std::tolower(c)));
  for (const char* f : {"identity", "swap", "cnot", "cz", "dft", "cphase"})
    if (name == f) return {f};
  if (name.rfind("cphase(", 0) == 0 && name.back() == ')') {
    const std::string arg = name.substr(7, name.size() - 8);
    std::size_t used = 0;
    double theta = 0.0;
    try {
      theta = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || !std::isfinite(theta))
      throw InputError("gate '" + raw + "': cannot parse the angle");
    return {"cphase", theta};
  }
  throw InputError("unknown gate '" + raw + "' (expected identity, swap, cnot, cz, cphase(theta), dft)");
}

inline CMatrix make(const NamedGate& g, Dim d) {
  if (d < 2) throw InputError("gate dimension must be at least 2");
  if (g.family == "identity") return identity(d);
  if (g.family == "swap") return swap(d);
  if (g.family == "cnot") return cnot(d);
  if (g.family == "cz") return cz(d);
  if (g.family == "cphase") return cphase(g.theta, d);
  if (g.family == "dft") return dft(d);
  throw InputError("unknown gate family '" + g.family + "'");
}

inline CMatrix make(const std::string& name, Dim d) { return make(parse_gate_name(name), d); }

/// Randomizing unitaries on A that Markovianize Psi(U^dagger) exactly in one shot:
/// the Z^j dephasing for controlled gates, the full Pauli twirl for swap and dft.
inline std::vector<CMatrix> default_vlist(const NamedGate& g, Dim d) {
  std::vector<CMatrix> out;
  if (g.family == "identity") {
    out.push_back(CMatrix::Identity(d, d));
  } else if (g.family == "cnot" || g.family == "cz" || g.family == "cphase") {
    for (Dim q = 0; q < d; ++q) out.push_back(gen_pauli(d, 0, q).matrix);
  } else {
    for (auto& s : pauli_basis(d)) out.push_back(std::move(s.matrix));
  }
  return out;
}

}  // namespace mlocc::gates
