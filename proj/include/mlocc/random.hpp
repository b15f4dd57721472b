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

// Seeded random unitaries, states and operator bases for property tests.

#include <cmath>
#include <random>

#include "mlocc/operators.hpp"
#include "mlocc/tensor.hpp"

namespace mlocc::random {

using Engine = std::mt19937_64;

inline CMatrix ginibre(Dim rows, Dim cols, Engine& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Dim i = 0; i < rows; ++i)
    for (Dim j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases removed.
inline CMatrix haar_unitary(Dim n, Engine& rng) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(n, n, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Dim j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline StateVector random_pure(const Dims& dims, Engine& rng) {
  CVector v = ginibre(total_dim(dims), 1, rng).col(0);
  v.normalize();
  return {std::move(v), dims};
}

/// G G^dagger / Tr with G of shape dim x rank; full rank by default.
inline QState random_density(const Dims& dims, Engine& rng, Dim rank = 0) {
  const Dim n = total_dim(dims);
  const CMatrix g = ginibre(n, rank > 0 ? rank : n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return QState(std::move(rho), dims);
}

/// Random channel from a Haar isometry split into `n_kraus` blocks.
inline QChannel random_channel(Dim d, Dim n_kraus, Engine& rng) {
  const CMatrix v = haar_unitary(d * n_kraus, rng).leftCols(d);
  std::vector<CMatrix> k;
  for (Dim i = 0; i < n_kraus; ++i) k.push_back(v.middleRows(i * d, d));
  return QChannel(std::move(k), d, d);
}

/// B_i = sum_j O_ij sigma_j over the traceless Paulis with Haar O; orthogonal with Tr[B^dagger B] = d.
inline OperatorBasis random_operator_basis(Dim d, Engine& rng) {
  const OperatorBasis pauli = OperatorBasis::pauli(d);
  const Dim n = static_cast<Dim>(pauli.traceless.size());
  const CMatrix o = haar_unitary(n, rng);
  OperatorBasis b{d, {}};
  for (Dim i = 0; i < n; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    for (Dim j = 0; j < n; ++j) m += o(i, j) * pauli.traceless[static_cast<std::size_t>(j)];
    b.traceless.push_back(std::move(m));
  }
  return b;
}

}  // namespace mlocc::random
