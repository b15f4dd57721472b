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

// Independent oracles and generators shared by the test suites. Nothing here
// calls back into the routine it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "mlocc.hpp"

namespace mlocc::testing {

inline random::Engine engine(std::uint64_t seed) { return random::Engine(seed); }

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Kronecker product straight from the index formula (a (x) b)[i*p+k, j*q+l] = a[i,j] b[k,l].
inline CMatrix kron_oracle(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Dim i = 0; i < a.rows(); ++i)
    for (Dim j = 0; j < a.cols(); ++j)
      for (Dim k = 0; k < b.rows(); ++k)
        for (Dim l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Mixed-radix digits of a flat index, most significant subsystem first.
inline std::vector<Dim> digits(Dim flat, const Dims& dims) {
  std::vector<Dim> out(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    out[s] = flat % dims[s];
    flat /= dims[s];
  }
  return out;
}

/// Partial trace by the explicit sum over matching traced digits.
inline CMatrix partial_trace_oracle(const CMatrix& rho, const Dims& dims, const std::vector<bool>& keep) {
  Dims kd;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (keep[s]) kd.push_back(dims[s]);
  const Dim n = total_dim(dims), nk = total_dim(kd);
  CMatrix out = CMatrix::Zero(nk, nk);
  for (Dim r = 0; r < n; ++r)
    for (Dim c = 0; c < n; ++c) {
      const auto dr = digits(r, dims), dc = digits(c, dims);
      bool match = true;
      Dim kr = 0, kc = 0;
      for (std::size_t s = 0; s < dims.size(); ++s) {
        if (keep[s]) {
          kr = kr * dims[s] + dr[s];
          kc = kc * dims[s] + dc[s];
        } else if (dr[s] != dc[s]) {
          match = false;
        }
      }
      if (match) out(kr, kc) += rho(r, c);
    }
  return out;
}

/// -sum l log2 l over a list of probabilities.
inline double entropy_oracle(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

inline QState projector(const CVector& v, const Dims& dims) { return QState(v * v.adjoint(), dims); }

inline CVector basis_vector(Dim n, Dim i) { return CVector::Unit(n, i); }

inline CMatrix random_hermitian(Dim n, random::Engine& rng) {
  const CMatrix g = random::ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Max elementwise |a - b| up to a global phase on vectors.
inline double phase_insensitive_diff(const CVector& a, const CVector& b) {
  const Complex ov = b.dot(a);
  const Complex phase = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace mlocc::testing
