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

// Markovianizing cost of a bipartite unitary on two d-level systems.
//
// The pipeline is
//   U --operator-Schmidt--> E~ (unital, self-adjoint channel on A)
//     --transfer matrix on the traceless sector--> Omega
//     --spectral projection onto eigenvalue 1--> Omega_inf
//     --Pauli sum--> Phi_inf on A (x) R,   M(U) = S(Phi_inf).
// The Cesaro mean N^{-1} sum_{n=1}^N Omega^n is kept as an independent oracle
// for Omega_inf. The maps Xi and F reconstruct Psi_M(U^dagger) from its
// R_A R_B marginal and define the constructive Markov candidate.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mlocc/operators.hpp"
#include "mlocc/tensor.hpp"

namespace mlocc {

namespace detail {

inline void check_bipartite_unitary(const CMatrix& u, Dim d, const Tolerances& tol, const char* what) {
  if (d < 1 || u.rows() != d * d || u.cols() != d * d)
    throw DimensionError(std::string(what) + ": expected a " + std::to_string(d * d) + "x" +
                         std::to_string(d * d) + " unitary");
  require_unitary(u, tol.unitary, what);
}

}  // namespace detail

/// E~ in Kraus form: sum_{s,s'} (c_s c_s')^2 Ad(E_s E_s'^dagger), from the operator-Schmidt decomposition.
inline QChannel e_tilde(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  detail::check_bipartite_unitary(u, d, tol, "e_tilde");
  const auto sd = operator_schmidt(u, d, tol);
  std::vector<CMatrix> kraus;
  kraus.reserve(sd.coeffs.size() * sd.coeffs.size());
  for (std::size_t s = 0; s < sd.coeffs.size(); ++s)
    for (std::size_t s2 = 0; s2 < sd.coeffs.size(); ++s2)
      kraus.push_back(sd.coeffs[s] * sd.coeffs[s2] * sd.left[s] * sd.left[s2].adjoint());
  return QChannel(std::move(kraus), d, d);
}

/// E~(tau) = d^-2 Tr_B[U (Tr_B[U^dagger (tau (x) I) U] (x) I) U^dagger], evaluated literally.
inline CMatrix e_tilde_formula(const CMatrix& u, Dim d, const CMatrix& tau) {
  const CMatrix id = CMatrix::Identity(d, d);
  const Dims ab{d, d};
  const CMatrix inner = partial_trace(CMatrix(u.adjoint() * kron(tau, id) * u), ab, {0});
  const CMatrix outer = partial_trace(CMatrix(u * kron(inner, id) * u.adjoint()), ab, {0});
  return outer / static_cast<double>(d * d);
}

/// Transfer matrix of a self-adjoint channel restricted to the traceless sector of `basis`.
inline CMatrix omega(const QChannel& channel, const OperatorBasis& basis, const Tolerances& tol = {}) {
  CMatrix om = transfer_matrix(channel, std::span<const CMatrix>(basis.traceless));
  const double h = hermiticity_residual(om);
  if (h > tol.general) throw NonHermitianError("omega: transfer matrix Hermiticity residual " + std::to_string(h));
  return 0.5 * (om + om.adjoint());
}

/// [Omega]_{pq,rs} = Tr[sigma_pq^dagger E~(sigma_rs)] / d over (p,q),(r,s) != (0,0), lexicographic.
inline CMatrix omega(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  return omega(e_tilde(u, d, tol), OperatorBasis::pauli(d), tol);
}

/// Orthogonal projector onto the eigenvalue-1 eigenspace of a Hermitian contraction.
///
/// Eigenvalues >= 1 - tol.fixed_point count as 1; an eigenvalue above
/// 1 + tol.general means the upstream map was not unital/CPTP.
inline CMatrix omega_infinity(const CMatrix& om, const Tolerances& tol = {}) {
  const auto eig = eig_hermitian(om, tol);
  const Dim n = om.rows();
  if (n > 0 && (eig.values(n - 1) > 1.0 + tol.general || eig.values(0) < -1.0 - tol.general))
    throw SpectrumError("omega_infinity: spectrum [" + std::to_string(eig.values(0)) + ", " +
                        std::to_string(eig.values(n - 1)) + "] leaves [-1, 1]");
  CMatrix proj = CMatrix::Zero(n, n);
  for (Dim i = 0; i < n; ++i)
    if (eig.values(i) >= 1.0 - tol.fixed_point) proj.noalias() += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  return proj;
}

inline int fixed_point_rank(const CMatrix& om, const Tolerances& tol = {}) {
  const RVector l = eig_hermitian(om, tol).values;
  return static_cast<int>((l.array() >= 1.0 - tol.fixed_point).count());
}

/// N^{-1} sum_{n=1}^N Omega^n.
inline CMatrix cesaro_oracle(const CMatrix& om, int n_terms) {
  if (n_terms < 1) throw DimensionError("cesaro_oracle: need at least one term");
  CMatrix power = om;
  CMatrix sum = om;
  for (int n = 2; n <= n_terms; ++n) {
    power = power * om;
    sum += power;
  }
  return sum / static_cast<double>(n_terms);
}

/// Phi_inf = d^-2 (I (x) I + sum_ij [Omega_inf]_ij B_i (x) B_j^*).
inline CMatrix phi_infinity_pauli_sum(const CMatrix& omega_inf, const OperatorBasis& basis) {
  const Dim d = basis.d;
  const std::size_t n = basis.traceless.size();
  if (omega_inf.rows() != static_cast<Dim>(n)) throw DimensionError("phi_infinity: projector/basis size mismatch");
  CMatrix phi = CMatrix::Identity(d * d, d * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex w = omega_inf(static_cast<Dim>(i), static_cast<Dim>(j));
      if (std::abs(w) < 1e-15) continue;
      phi += w * kron(basis.traceless[i], CMatrix(basis.traceless[j].conjugate()));
    }
  return phi / static_cast<double>(d * d);
}

/// E_inf(X) = Tr[X] I/d + sum_ij B_i [Omega_inf]_ij Tr[B_j^dagger X] / d.
inline CMatrix apply_fixed_point_map(const CMatrix& omega_inf, const OperatorBasis& basis, const CMatrix& x) {
  const Dim d = basis.d;
  const std::size_t n = basis.traceless.size();
  CVector coeff(static_cast<Dim>(n));
  for (std::size_t j = 0; j < n; ++j)
    coeff(static_cast<Dim>(j)) = basis.traceless[j].conjugate().cwiseProduct(x).sum() / static_cast<double>(d);
  const CVector mapped = omega_inf * coeff;
  CMatrix out = x.trace() / static_cast<double>(d) * CMatrix::Identity(d, d);
  for (std::size_t i = 0; i < n; ++i) out += mapped(static_cast<Dim>(i)) * basis.traceless[i];
  return out;
}

/// (E_inf (x) id)(Phi_d), built from matrix units.
inline CMatrix phi_infinity_channel_route(const CMatrix& omega_inf, const OperatorBasis& basis) {
  const Dim d = basis.d;
  CMatrix phi = CMatrix::Zero(d * d, d * d);
  for (Dim a = 0; a < d; ++a)
    for (Dim b = 0; b < d; ++b) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(a, b) = 1.0;
      phi += kron(apply_fixed_point_map(omega_inf, basis, unit), unit);
    }
  return phi / static_cast<double>(d);
}

inline QState phi_infinity(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  const auto basis = OperatorBasis::pauli(d);
  const CMatrix proj = omega_infinity(omega(e_tilde(u, d, tol), basis, tol), tol);
  try {
    return QState(phi_infinity_pauli_sum(proj, basis), {d, d}, tol);
  } catch (const InvalidStateError& e) {
    throw InvalidStateError(std::string("phi_infinity: basis/normalization inconsistency: ") + e.what());
  }
}

struct MarkovCostOptions {
  Tolerances tol;
  int cesaro_terms = 2000;
  std::optional<OperatorBasis> basis;  // defaults to the generalized Paulis
};

struct MarkovCostReport {
  Dim d = 0;
  std::vector<double> schmidt_coeffs;
  std::vector<double> omega_eigenvalues;  // ascending
  int fixed_point_rank = 0;
  QState phi_infinity;
  double cost_bits = 0.0;
  double cesaro_residual = 0.0;  // max |Omega_inf - Cesaro_N(Omega)|
};

inline MarkovCostReport markov_cost(const CMatrix& u, Dim d, const MarkovCostOptions& opt = {}) {
  const Tolerances& tol = opt.tol;
  detail::check_bipartite_unitary(u, d, tol, "markov_cost");
  const auto sd = operator_schmidt(u, d, tol);
  const OperatorBasis basis = opt.basis ? *opt.basis : OperatorBasis::pauli(d);
  if (basis.d != d) throw DimensionError("markov_cost: basis dimension mismatch");
  const CMatrix om = omega(e_tilde(u, d, tol), basis, tol);
  const auto eig = eig_hermitian(om, tol);
  const CMatrix proj = omega_infinity(om, tol);
  const double residual = om.size() == 0 ? 0.0 : max_abs_diff(proj, cesaro_oracle(om, opt.cesaro_terms));
  QState phi(phi_infinity_pauli_sum(proj, basis), {d, d}, tol);
  const double cost = von_neumann_entropy(phi);
  std::vector<double> spectrum(eig.values.data(), eig.values.data() + eig.values.size());
  const int rank = static_cast<int>((eig.values.array() >= 1.0 - tol.fixed_point).count());
  return MarkovCostReport{d, sd.coeffs, std::move(spectrum), rank, std::move(phi), cost, residual};
}

// ---------------------------------------------------------------------------
// Reconstruction maps

/// Xi : R_A R_B -> R_A B R_B,
///   Xi(tau) = U^* (Tr_{R_B}[U^T tau U^*] (x) Phi_d^{B R_B}) U^T,
/// with U^* acting on (R_A, R_B). Conjugation is entrywise in the computational basis.
inline QChannel xi_map(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  detail::check_bipartite_unitary(u, d, tol, "xi_map");
  const CMatrix id = CMatrix::Identity(d, d);
  const CVector phi = max_entangled_vector(d).amplitudes;
  const CMatrix attach = kron(id, CMatrix(phi));  // R_A -> R_A B R_B
  const CMatrix outer = embed_operator(u.conjugate(), {d, d, d}, {0, 2});
  const CMatrix inner = u.transpose();
  std::vector<CMatrix> kraus;
  for (Dim r = 0; r < d; ++r) {
    CMatrix bra = CMatrix::Zero(1, d);
    bra(0, r) = 1.0;
    kraus.push_back(outer * attach * kron(id, bra) * inner);
  }
  return QChannel(std::move(kraus), d * d, d * d * d);
}

/// F : R_A -> R_A, F(tau) = Tr_{B R_B} Xi(tau (x) I/d).
inline QChannel f_map(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  const QChannel xi = xi_map(u, d, tol);
  const CMatrix id = CMatrix::Identity(d, d);
  std::vector<CMatrix> append;
  for (Dim r = 0; r < d; ++r) {
    CMatrix ket = CMatrix::Zero(d, 1);
    ket(r, 0) = 1.0 / std::sqrt(static_cast<double>(d));
    append.push_back(kron(id, ket));
  }
  std::vector<CMatrix> discard;
  for (Dim x = 0; x < d * d; ++x) {
    CMatrix bra = CMatrix::Zero(1, d * d);
    bra(0, x) = 1.0;
    discard.push_back(kron(id, bra));
  }
  return compose(QChannel(std::move(discard), d * d * d, d),
                 compose(xi, QChannel(std::move(append), d, d * d)));
}

/// The Markov state (id (x) Xi)(Psi0^{A'R_A} (x) I/d), where Psi0 is the A'R_A
/// marginal of `state` projected onto the fixed points of id (x) F.
///
/// `state` lives on (A', R_A, B, R_B). The projection is the Cesaro limit of
/// F, i.e. the spectral projector of F's (Hermitian) transfer matrix onto
/// eigenvalue 1. Throws CertificateError if the result has
/// I(A' : B R_B | R_A) above tol.cmi_certificate.
inline QState nearest_markov_candidate(const QState& state, const CMatrix& u, const Tolerances& tol = {}) {
  if (state.num_subsystems() != 4) throw DimensionError("nearest_markov_candidate: expected (A', R_A, B, R_B)");
  const Dim d = state.dims()[1];
  if (state.dims()[2] != d || state.dims()[3] != d)
    throw DimensionError("nearest_markov_candidate: R_A, B, R_B must share one dimension");
  const Dim da = state.dims()[0];

  const auto basis = OperatorBasis::pauli(d);
  const auto full = basis.full();
  const CMatrix fixed = omega_infinity(transfer_matrix(f_map(u, d, tol), std::span<const CMatrix>(full)), tol);
  // the identity direction is fixed (F is unital); drop it and reuse the traceless machinery
  const CMatrix fixed_traceless = fixed.bottomRightCorner(fixed.rows() - 1, fixed.cols() - 1);

  const CMatrix marginal = partial_trace(state.matrix(), state.dims(), {0, 1});
  CMatrix projected = CMatrix::Zero(da * d, da * d);
  for (Dim a = 0; a < da; ++a)
    for (Dim b = 0; b < da; ++b)
      projected.block(a * d, b * d, d, d) =
          apply_fixed_point_map(fixed_traceless, basis, marginal.block(a * d, b * d, d, d));

  const CMatrix extended = kron(projected, CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
  auto rebuilt = apply_kraus(xi_map(u, d, tol).kraus(), extended, {da, d, d}, {1, 2}, Dims{d, d, d});
  QState candidate(std::move(rebuilt.matrix), std::move(rebuilt.dims), tol);
  const double cmi = conditional_mutual_information(candidate, {0}, {2, 3}, {1}, tol);
  if (cmi > tol.cmi_certificate)
    throw CertificateError("nearest_markov_candidate: candidate has I(A':BR_B|R_A) = " + std::to_string(cmi));
  return candidate;
}

}  // namespace mlocc
