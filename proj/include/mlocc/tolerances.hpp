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

namespace mlocc {

/// Numerical thresholds shared by every check in the library.
///
/// `general` is the default comparison tolerance (overridable from the CLI
/// with --tol or MARKOV_TOL). `fixed_point` decides which transfer-matrix
/// eigenvalues count as 1: Omega carries O(1e-12) arithmetic noise and a
/// degenerate eigenvalue-1 subspace must be captured whole.
struct Tolerances {
  double state = 1e-10;             // QState Hermiticity, trace and min-eigenvalue checks
  double hermitian_input = 1e-8;    // eig_hermitian precondition
  double unitary = 1e-8;            // unitarity residual of gate inputs
  double general = 1e-9;            // CPTP checks, spectrum bounds, CMI clamping
  double fixed_point = 1e-6;        // eigenvalues >= 1 - fixed_point span the fixed-point space
  double schmidt_cutoff = 1e-10;    // operator-Schmidt coefficients below this are dropped
  double cmi_certificate = 1e-6;    // Markov candidate must have CMI below this
  double bob_precondition = 0.1;    // max decoupling distance accepted by find_bob_isometry
  double rank_cutoff = 1e-10;       // eigenvalues above this count toward a state's rank
};

}  // namespace mlocc
