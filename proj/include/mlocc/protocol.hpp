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

// Single-shot two-round LOCC implementation of U^AB on |Phi_d>^{AR_A}|Phi_d>^{BR_B}.
//
// Global subsystem order is (A, R_A, B, R_B) followed by ancillas. Alice's
// measurement maps (A, A_0) -> A' and leaves A' in A's slot; the resource's
// remaining systems (Bob's half B_0 and, for mixed resources, a purifier)
// follow R_B. Merging is done by teleportation, so the ledger is exact but not
// rate-optimal.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlocc/markov_cost.hpp"
#include "mlocc/operators.hpp"
#include "mlocc/tensor.hpp"

namespace mlocc {

// ---------------------------------------------------------------------------
// Data types

/// Operators M_k : (A, A_0) -> A', each d_out x d_in.
struct MeasurementInstrument {
  std::vector<CMatrix> ops;
  Dim d_in = 0;
  Dim d_out = 0;

  double completeness_residual() const {
    CMatrix s = CMatrix::Zero(d_in, d_in);
    for (const auto& m : ops) s.noalias() += m.adjoint() * m;
    return (s - CMatrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  }
};

/// Quantities in bits. ebits_in = log K, ebits_out = log L.
struct ResourceLedger {
  double ebits_in = 0.0;
  double ebits_out = 0.0;
  double cbits_forward = 0.0;
  double cbits_backward = 0.0;

  ResourceLedger& operator+=(const ResourceLedger& o) {
    ebits_in += o.ebits_in;
    ebits_out += o.ebits_out;
    cbits_forward += o.cbits_forward;
    cbits_backward += o.cbits_backward;
    return *this;
  }
  double net_ebits() const { return ebits_in - ebits_out; }
  bool operator==(const ResourceLedger&) const = default;
};

struct LedgerEntry {
  std::string stage;
  ResourceLedger delta;
};

struct OutcomeTerm {
  std::size_t k = 0;
  double probability = 0.0;
  double eps = 0.0;
};

/// eps = sum_k p_k eps_k.
struct ErrorEstimate {
  double eps = 0.0;
  std::vector<OutcomeTerm> per_outcome;
};

/// Candidate-based Markovianizing error with the averaged I(A':BR_B|R_A) alongside.
struct MarkovianizingEstimate {
  double eps = 0.0;
  double cmi = 0.0;
  std::vector<OutcomeTerm> per_outcome;
  std::vector<double> per_outcome_cmi;
};

struct OutcomeCertificate {
  std::size_t k = 0;
  double probability = 0.0;
  double oblivious = 0.0;
  double decoupling = 0.0;
  double markovianizing = 0.0;
  double cmi = 0.0;
};

struct Certificate {
  double oblivious_eps = 0.0;
  double decoupling_eps = 0.0;
  double markovianizing_eps = 0.0;
  double markov_cmi = 0.0;
  std::vector<OutcomeCertificate> per_outcome;
};

// ---------------------------------------------------------------------------
// The state Psi(U)

/// (U^{AB} (x) I)|Phi_d>^{AR_A}|Phi_d>^{BR_B}, dims (A, R_A, B, R_B). `dagger` uses U^dagger.
inline StateVector psi_vector(const CMatrix& u, Dim d, bool dagger = false, const Tolerances& tol = {}) {
  detail::check_bipartite_unitary(u, d, tol, "psi_state");
  const StateVector phi = max_entangled_vector(d);
  StateVector both{kron(phi.amplitudes, phi.amplitudes), {d, d, d, d}};
  return apply_operator(dagger ? CMatrix(u.adjoint()) : u, both, {0, 2});
}

inline QState psi_state(const CMatrix& u, Dim d, bool dagger = false, const Tolerances& tol = {}) {
  return QState::pure(psi_vector(u, d, dagger, tol), tol);
}

// ---------------------------------------------------------------------------
// Measurement-induced maps

struct InducedResult {
  double probability = 0.0;
  std::optional<QState> state;  // empty when the outcome has probability zero
};

/// p^-1 M (tau (x) phi_res^{A_0}) M^dagger on the `target` subsystem of `input`.
///
/// Subsystem 0 of `resource` is A_0; the resource's other subsystems are
/// traced out. The output keeps `input`'s layout with A' in place of A.
inline InducedResult induced_map(const CMatrix& m, const QState& resource, const QState& input, std::size_t target,
                                 const Tolerances& tol = {}) {
  if (target >= input.num_subsystems()) throw DimensionError("induced_map: target out of range");
  const Dim da = input.dims()[target];
  const Dim da0 = resource.dims()[0];
  if (m.cols() != da * da0)
    throw DimensionError("induced_map: operator has " + std::to_string(m.cols()) + " columns, expected " +
                         std::to_string(da * da0));
  const std::size_t n_in = input.num_subsystems();
  Dims joint_dims = input.dims();
  joint_dims.insert(joint_dims.end(), resource.dims().begin(), resource.dims().end());
  const CMatrix joint = kron(input.matrix(), resource.matrix());
  auto out = apply_kraus({m}, joint, joint_dims, {target, n_in}, Dims{m.rows()});
  IndexSet keep(n_in);
  for (std::size_t i = 0; i < n_in; ++i) keep[i] = i;
  CMatrix reduced = partial_trace(out.matrix, out.dims, keep);
  const double p = reduced.trace().real();
  if (p <= tol.state) return {std::max(p, 0.0), std::nullopt};
  Dims dims(out.dims.begin(), out.dims.begin() + static_cast<std::ptrdiff_t>(n_in));
  return {p, QState(reduced / p, std::move(dims), tol)};
}

namespace detail {

/// Purification of a resource state: subsystem 0 (A_0) first, then the rest,
/// then a purifying system when the resource is mixed.
inline StateVector purify_resource(const QState& resource, const Tolerances& tol) {
  const auto eig = eig_hermitian(resource.matrix(), tol);
  std::vector<Dim> support;
  for (Dim i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > tol.rank_cutoff) support.push_back(i);
  if (support.size() == 1)
    return {eig.vectors.col(support[0]), resource.dims()};
  const Dim n = resource.dim();
  const Dim r = static_cast<Dim>(support.size());
  CVector v = CVector::Zero(n * r);
  for (Dim j = 0; j < r; ++j) {
    const Dim i = support[static_cast<std::size_t>(j)];
    const CVector col = std::sqrt(eig.values(i)) * eig.vectors.col(i);
    for (Dim x = 0; x < n; ++x) v(x * r + j) = col(x);
  }
  v.normalize();
  Dims dims = resource.dims();
  dims.push_back(r);
  return {std::move(v), std::move(dims)};
}

inline void check_instrument(const MeasurementInstrument& instr, const QState& resource, Dim d,
                             const Tolerances& tol) {
  if (instr.ops.empty()) throw DimensionError("instrument has no operators");
  if (instr.d_out != d) throw DimensionError("instrument output dimension must equal d");
  if (instr.d_in != d * resource.dims()[0])
    throw DimensionError("instrument input dimension " + std::to_string(instr.d_in) + " != d * dim(A_0) = " +
                         std::to_string(d * resource.dims()[0]));
  for (const auto& m : instr.ops)
    if (m.rows() != instr.d_out || m.cols() != instr.d_in)
      throw DimensionError("instrument operator shape mismatch");
  const double r = instr.completeness_residual();
  if (r > tol.general) throw InvalidStateError("instrument completeness residual " + std::to_string(r));
}

}  // namespace detail

/// One measurement branch on Psi(U^dagger) (x) resource.
struct MeasurementBranch {
  std::size_t k = 0;
  double probability = 0.0;
  StateVector state;  // normalized; (A', R_A, B, R_B, resource systems other than A_0...)
};

/// All outcomes with nonzero probability, from a pure joint state.
inline std::vector<MeasurementBranch> measurement_branches(const MeasurementInstrument& instr,
                                                           const QState& resource, const CMatrix& u, Dim d,
                                                           const Tolerances& tol = {}) {
  detail::check_instrument(instr, resource, d, tol);
  const StateVector psi = psi_vector(u, d, true, tol);
  const StateVector res = detail::purify_resource(resource, tol);
  Dims dims = psi.dims;
  dims.insert(dims.end(), res.dims.begin(), res.dims.end());
  const StateVector joint{kron(psi.amplitudes, res.amplitudes), dims};
  std::vector<MeasurementBranch> out;
  for (std::size_t k = 0; k < instr.ops.size(); ++k) {
    StateVector s = apply_operator(instr.ops[k], joint, {0, 4}, Dims{d});
    const double p = s.amplitudes.squaredNorm();
    if (p <= tol.state) continue;
    s.amplitudes /= std::sqrt(p);
    out.push_back({k, p, std::move(s)});
  }
  return out;
}

/// sum_k p_k || Phi_{M_k}^{R_A} - I/d ||_1 with Phi_{M_k} = E_{M_k}(Phi_d^{AR_A}).
inline ErrorEstimate oblivious_error(const MeasurementInstrument& instr, const QState& resource, Dim d,
                                     const Tolerances& tol = {}) {
  detail::check_instrument(instr, resource, d, tol);
  const QState phi = max_entangled(d);
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  ErrorEstimate est;
  for (std::size_t k = 0; k < instr.ops.size(); ++k) {
    const auto r = induced_map(instr.ops[k], resource, phi, 0, tol);
    if (!r.state) continue;
    const double e = trace_norm(partial_trace(r.state->matrix(), r.state->dims(), {1}) - mixed);
    est.per_outcome.push_back({k, r.probability, e});
    est.eps += r.probability * e;
  }
  return est;
}

/// sum_k p_k || Psi_k^{A'R_AR_B} - Psi_k^{A'R_A} (x) Psi_k^{R_B} ||_1 on Psi_{M_k}(U^dagger).
inline ErrorEstimate decoupling_error(const MeasurementInstrument& instr, const QState& resource, const CMatrix& u,
                                      Dim d, const Tolerances& tol = {}) {
  ErrorEstimate est;
  for (const auto& b : measurement_branches(instr, resource, u, d, tol)) {
    const CMatrix rho = reduced_density(b.state, {0, 1, 3});
    const Dims dims{d, d, d};
    const CMatrix prod = kron(partial_trace(rho, dims, {0, 1}), partial_trace(rho, dims, {2}));
    const double e = trace_norm(rho - prod);
    est.per_outcome.push_back({b.k, b.probability, e});
    est.eps += b.probability * e;
  }
  return est;
}

/// sum_k p_k || Psi_{M_k}(U^dagger) - Upsilon_k ||_1 with Upsilon_k = nearest_markov_candidate(Psi_{M_k}(U^dagger)).
///
/// The candidate is an upper bound on the distance to the Markov set, so the
/// averaged I(A':BR_B|R_A) of Psi_{M_k}(U^dagger) is reported as well.
inline MarkovianizingEstimate markovianizing_error(const MeasurementInstrument& instr, const QState& resource,
                                                   const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  MarkovianizingEstimate est;
  for (const auto& b : measurement_branches(instr, resource, u, d, tol)) {
    const QState psi(reduced_density(b.state, {0, 1, 2, 3}), {d, d, d, d}, tol);
    const QState candidate = nearest_markov_candidate(psi, u, tol);
    const double e = trace_norm(psi.matrix() - candidate.matrix());
    const double cmi = conditional_mutual_information(psi, {0}, {2, 3}, {1}, tol);
    est.per_outcome.push_back({b.k, b.probability, e});
    est.per_outcome_cmi.push_back(cmi);
    est.eps += b.probability * e;
    est.cmi += b.probability * cmi;
  }
  return est;
}

inline Certificate certify(const MeasurementInstrument& instr, const QState& resource, const CMatrix& u, Dim d,
                           const Tolerances& tol = {}) {
  const auto obl = oblivious_error(instr, resource, d, tol);
  const auto dec = decoupling_error(instr, resource, u, d, tol);
  const auto mar = markovianizing_error(instr, resource, u, d, tol);
  Certificate c{obl.eps, dec.eps, mar.eps, mar.cmi, {}};
  for (std::size_t i = 0; i < dec.per_outcome.size(); ++i) {
    const auto& t = dec.per_outcome[i];
    OutcomeCertificate oc{t.k, t.probability, 0.0, t.eps, mar.per_outcome[i].eps, mar.per_outcome_cmi[i]};
    for (const auto& o : obl.per_outcome)
      if (o.k == t.k) oc.oblivious = o.eps;
    c.per_outcome.push_back(oc);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Alice's measurement

/// M_k = K^{-1/2} sum_j e^{2 pi i jk/K} <j|^{A_0} (x) V_j, input order (A, A_0).
inline MeasurementInstrument build_alice_measurement(const std::vector<CMatrix>& v_list, Dim d,
                                                     const Tolerances& tol = {}) {
  if (v_list.empty()) throw DimensionError("build_alice_measurement: empty unitary list");
  const Dim k_count = static_cast<Dim>(v_list.size());
  for (std::size_t j = 0; j < v_list.size(); ++j) {
    if (v_list[j].rows() != d || v_list[j].cols() != d)
      throw DimensionError("build_alice_measurement: V_" + std::to_string(j) + " is not " + std::to_string(d) +
                           "x" + std::to_string(d));
    require_unitary(v_list[j], tol.unitary, "build_alice_measurement: V_" + std::to_string(j));
  }
  MeasurementInstrument instr{{}, d * k_count, d};
  const double norm = 1.0 / std::sqrt(static_cast<double>(k_count));
  for (Dim k = 0; k < k_count; ++k) {
    CMatrix m = CMatrix::Zero(d, d * k_count);
    for (Dim j = 0; j < k_count; ++j) {
      const Complex phase = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                                 static_cast<double>(k_count));
      const CMatrix& v = v_list[static_cast<std::size_t>(j)];
      for (Dim a = 0; a < d; ++a)
        for (Dim b = 0; b < d; ++b) m(a, b * k_count + j) = phase * v(a, b);
    }
    instr.ops.push_back(std::move(m));
  }
  return instr;
}

// ---------------------------------------------------------------------------
// Purification alignment

struct UhlmannAlignment {
  CMatrix isometry;    // party of `psi` -> party of `target`
  StateVector rotated; // (id (x) isometry)|psi>, in the target's layout
  double overlap = 0.0;  // |<target|rotated>|, the root fidelity of the reference marginals
};

/// Isometry on `psi_party` that maximizes the overlap with `target`.
///
/// Both states must carry the same reference systems (the complements of the
/// party sets) in the same relative order; the target's party dimension must
/// be at least that of `psi`.
inline UhlmannAlignment uhlmann_align(const StateVector& psi, const IndexSet& psi_party, const StateVector& target,
                                      const IndexSet& target_party) {
  auto split = [](const Dims& dims, const IndexSet& party) {
    detail::check_index_set(dims, party, "uhlmann_align");
    IndexSet order;
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (std::find(party.begin(), party.end(), i) == party.end()) order.push_back(i);
    const std::size_t n_ref = order.size();
    order.insert(order.end(), party.begin(), party.end());
    return std::make_pair(order, n_ref);
  };
  const auto [p_order, p_nref] = split(psi.dims, psi_party);
  const auto [t_order, t_nref] = split(target.dims, target_party);
  const Dims p_dims = permute_dims(psi.dims, p_order);
  const Dims t_dims = permute_dims(target.dims, t_order);
  if (p_nref != t_nref || !std::equal(p_dims.begin(), p_dims.begin() + static_cast<std::ptrdiff_t>(p_nref),
                                      t_dims.begin()))
    throw DimensionError("uhlmann_align: reference systems differ");
  const Dim d_ref = total_dim(psi.dims) / total_dim(psi.dims, psi_party);
  const Dim d_in = total_dim(psi.dims, psi_party);
  const Dim d_out = total_dim(target.dims, target_party);
  if (d_out < d_in) throw DimensionError("uhlmann_align: target party smaller than source party");

  const CVector pv = permute_subsystems(psi.amplitudes, psi.dims, p_order);
  const CVector tv = permute_subsystems(target.amplitudes, target.dims, t_order);
  Eigen::Map<const CMatrix> p(pv.data(), d_in, d_ref);
  Eigen::Map<const CMatrix> t(tv.data(), d_out, d_ref);
  const CMatrix q = p * t.adjoint();  // maximize Re Tr[W q]
  Eigen::JacobiSVD<CMatrix> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix w = svd.matrixV().leftCols(d_in) * svd.matrixU().adjoint();

  const CMatrix rotated = w * p;
  const CVector flat = Eigen::Map<const CVector>(rotated.data(), rotated.size());
  IndexSet inverse(t_order.size());
  for (std::size_t i = 0; i < t_order.size(); ++i) inverse[t_order[i]] = i;
  StateVector out{permute_subsystems(flat, t_dims, inverse), target.dims};
  const double overlap = std::abs(target.amplitudes.dot(out.amplitudes));
  return {w, std::move(out), overlap};
}

inline double pure_trace_distance(double overlap) {
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
}

// ---------------------------------------------------------------------------
// Bob's isometry

struct BobIsometry {
  CMatrix w;          // (B, B_0...) -> (B, B_1)
  Dim d_b1 = 0;
  StateVector psi_p;  // (A', R_A, B_1)
  StateVector rotated;  // (A', R_A, B, R_B, B_1)
  double delta = 0.0;     // || rho^{A'R_AR_B} - rho^{A'R_A} (x) I/d ||_1
  double distance = 0.0;  // || rotated - psi_p (x) Phi_d^{BR_B} ||_1
  double bound = 0.0;     // 4 sqrt(2 delta)
};

struct BobIsometryOptions {
  std::optional<Dim> d_b1;           // defaults to max(dim B_0..., rank rho^{A'R_A})
  bool enforce_precondition = true;  // reject delta > tol.bob_precondition
};

/// Uhlmann isometry W^{BB_0 -> BB_1} taking `state` close to psi_p^{A'R_AB_1} (x) Phi_d^{BR_B}.
///
/// `state` is pure on (A', R_A, B, R_B, B_0...). psi_p is the canonical
/// purification sum_i sqrt(mu_i)|e_i>|i> of rho^{A'R_A}. When R_B is decoupled
/// from A'R_A and maximally mixed, delta is small and the distance is at most
/// 2 sqrt(delta).
inline BobIsometry find_bob_isometry(const StateVector& state, Dim d, const BobIsometryOptions& opt = {},
                                     const Tolerances& tol = {}) {
  if (state.dims.size() < 4 || state.dims[1] != d || state.dims[2] != d || state.dims[3] != d)
    throw DimensionError("find_bob_isometry: expected (A', R_A, B, R_B, B_0...) with R_A, B, R_B of dimension d");
  const Dim da = state.dims[0];
  const Dims ref_dims{da, d, d};
  const CMatrix rho3 = reduced_density(state, {0, 1, 3});
  const CMatrix rho2 = partial_trace(rho3, ref_dims, {0, 1});
  const double delta =
      trace_norm(rho3 - kron(rho2, CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d))));
  if (opt.enforce_precondition && delta > tol.bob_precondition)
    throw CertificateError("find_bob_isometry: R_B is not decoupled and maximally mixed (delta = " +
                           std::to_string(delta) + ")");

  const auto eig = eig_hermitian(rho2, tol);
  std::vector<Dim> support;
  for (Dim i = eig.values.size() - 1; i >= 0; --i)
    if (eig.values(i) > tol.rank_cutoff) support.push_back(i);
  const Dim rank = static_cast<Dim>(support.size());
  Dim d_b0 = 1;
  for (std::size_t i = 4; i < state.dims.size(); ++i) d_b0 *= state.dims[i];
  const Dim d_b1 = opt.d_b1 ? *opt.d_b1 : std::max(d_b0, rank);
  if (d_b1 < rank || d_b1 < d_b0)
    throw DimensionError("find_bob_isometry: B_1 dimension " + std::to_string(d_b1) + " too small");

  CVector pp = CVector::Zero(da * d * d_b1);
  for (Dim j = 0; j < rank; ++j) {
    const Dim i = support[static_cast<std::size_t>(j)];
    const CVector e = std::sqrt(eig.values(i)) * eig.vectors.col(i);
    for (Dim x = 0; x < da * d; ++x) pp(x * d_b1 + j) = e(x);
  }
  pp.normalize();
  StateVector psi_p{pp, {da, d, d_b1}};
  // (A', R_A, B_1) (x) (B, R_B) -> (A', R_A, B, R_B, B_1)
  StateVector target{kron(pp, max_entangled_vector(d).amplitudes), {da, d, d_b1, d, d}};
  target = {permute_subsystems(target.amplitudes, target.dims, {0, 1, 3, 4, 2}), {da, d, d, d, d_b1}};

  IndexSet party{2};
  for (std::size_t i = 4; i < state.dims.size(); ++i) party.push_back(i);
  auto al = uhlmann_align(state, party, target, {2, 4});
  return {std::move(al.isometry), d_b1, std::move(psi_p), std::move(al.rotated), delta,
          pure_trace_distance(al.overlap), 4.0 * std::sqrt(2.0 * delta)};
}

// ---------------------------------------------------------------------------
// Teleportation-based merging

struct TeleportBranch {
  Dim outcome = 0;  // p * d_b + q of the Bell outcome
  double probability = 0.0;
  StateVector state;
};

namespace detail {

/// (sigma_pq)^{A_1} <Phi_pq|^{S B_2}, from (S, B_2, A_1) to A_1.
inline CMatrix teleport_kraus(Dim d_b, Dim p, Dim q) {
  const CMatrix s = gen_pauli(d_b, p, q).matrix;
  const CVector bell = kron(s, CMatrix::Identity(d_b, d_b)) * max_entangled_vector(d_b).amplitudes;
  const CMatrix bra = bell.adjoint();
  return s * kron(bra, CMatrix::Identity(d_b, d_b));
}

}  // namespace detail

/// Every Bell outcome of teleporting subsystem `system`; the received system
/// takes the sender's slot, so each branch equals the input.
inline std::vector<TeleportBranch> teleport_branches(const StateVector& psi, std::size_t system, Dim d_b) {
  if (system >= psi.dims.size() || psi.dims[system] != d_b)
    throw DimensionError("teleport: system dimension does not match d_b");
  const std::size_t n = psi.dims.size();
  Dims dims = psi.dims;
  dims.push_back(d_b);
  dims.push_back(d_b);
  const StateVector joint{kron(psi.amplitudes, max_entangled_vector(d_b).amplitudes), dims};
  std::vector<TeleportBranch> out;
  for (Dim p = 0; p < d_b; ++p)
    for (Dim q = 0; q < d_b; ++q) {
      StateVector s = apply_operator(detail::teleport_kraus(d_b, p, q), joint, {system, n, n + 1}, Dims{d_b});
      const double prob = s.amplitudes.squaredNorm();
      s.amplitudes /= std::sqrt(prob);
      out.push_back({p * d_b + q, prob, std::move(s)});
    }
  return out;
}

struct MergeResult {
  QState state;
  ResourceLedger delta;
};

inline ResourceLedger teleport_cost(Dim d_b) {
  const double b = std::log2(static_cast<double>(d_b));
  return {b, 0.0, 0.0, 2.0 * b};
}

/// Moves `system` from Bob to Alice by teleportation. Costs log2 d_b ebits and 2 log2 d_b cbits back.
inline MergeResult teleport_merge(const QState& state, std::size_t system, Dim d_b,
                                  double available_ebits = std::numeric_limits<double>::infinity(),
                                  const Tolerances& tol = {}) {
  if (system >= state.num_subsystems() || state.dims()[system] != d_b)
    throw DimensionError("teleport_merge: system dimension does not match d_b");
  const ResourceLedger cost = teleport_cost(d_b);
  if (available_ebits + 1e-12 < cost.ebits_in)
    throw InsufficientResourceError("teleport_merge: need " + std::to_string(cost.ebits_in) + " ebits, have " +
                                    std::to_string(available_ebits));
  if (d_b == 1) return {state, cost};
  const std::size_t n = state.num_subsystems();
  Dims dims = state.dims();
  dims.push_back(d_b);
  dims.push_back(d_b);
  const CMatrix joint = kron(state.matrix(), max_entangled(d_b).matrix());
  std::vector<CMatrix> kraus;
  for (Dim p = 0; p < d_b; ++p)
    for (Dim q = 0; q < d_b; ++q) kraus.push_back(detail::teleport_kraus(d_b, p, q));
  auto out = apply_kraus(kraus, joint, dims, {system, n, n + 1}, Dims{d_b});
  return {QState(std::move(out.matrix), std::move(out.dims), tol), cost};
}

/// S(B|A) and I(B:R) of a state, the merging lower bounds for moving B to A.
inline EntropyReport merging_bounds(const QState& state, const IndexSet& a, const IndexSet& b, const IndexSet& r,
                                    const Tolerances& tol = {}) {
  detail::require_disjoint({&a, &b, &r}, "merging_bounds");
  EntropyReport rep;
  rep.add("S(B|A)", subsystem_entropy(state, detail::set_union(a, b)) - subsystem_entropy(state, a),
          detail::set_union(a, b));
  rep.add("I(B:R)", mutual_information(state, b, r), detail::set_union(b, r));
  (void)tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Entropy audit

/// H({p_k}), the averaged entropy decreases and M(U^dagger).
///
/// dS(A')_k = S(A)_Psi + S(A_0)_res - S(A')_{Psi_k} and
/// dS(G)_k = S(G)_res - S(G)_{Psi_k}, G being the resource's systems other than A_0.
inline EntropyReport entropy_audit(const MeasurementInstrument& instr, const QState& resource, const CMatrix& u,
                                   Dim d, const Tolerances& tol = {}) {
  const auto branches = measurement_branches(instr, resource, u, d, tol);
  const double s_a = subsystem_entropy(psi_vector(u, d, true, tol), {0});
  const double s_a0 = subsystem_entropy(resource, {0});
  IndexSet g_res;
  for (std::size_t i = 1; i < resource.num_subsystems(); ++i) g_res.push_back(i);
  const double s_g = subsystem_entropy(resource, g_res);
  std::vector<double> probs;
  double ds_a = 0.0, ds_g = 0.0;
  for (const auto& b : branches) {
    IndexSet g;
    for (std::size_t i = 0; i < g_res.size(); ++i) g.push_back(4 + i);
    probs.push_back(b.probability);
    ds_a += b.probability * (s_a + s_a0 - subsystem_entropy(b.state, {0}));
    ds_g += b.probability * (s_g - subsystem_entropy(b.state, g));
  }
  EntropyReport rep;
  rep.add("H(p)", shannon_entropy(probs));
  rep.add("dS(A')_av", ds_a);
  rep.add("dS(G)_av", ds_g);
  rep.add("dS(A')_av-dS(G)_av", ds_a - ds_g);
  MarkovCostOptions mo;
  mo.tol = tol;
  rep.add("M(U^dagger)", markov_cost(CMatrix(u.adjoint()), d, mo).cost_bits);
  return rep;
}

// ---------------------------------------------------------------------------
// Inequality checks

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
};

struct LemmaReport {
  Certificate certificate;
  double product_distance = 0.0;  // sum_k p_k || W_k Psi_k - psi_p (x) Phi_d ||_1
  std::vector<InequalityCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

/// Decoupling <= 7 max eps, the Bob-isometry product distance <= 4 sqrt(2 max eps),
/// and the qualitative converse (oblivious and decoupled => Markovianized).
inline LemmaReport lemma_inequality_check(const MeasurementInstrument& instr, const QState& resource,
                                          const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  LemmaReport rep{certify(instr, resource, u, d, tol), 0.0, {}};
  const Certificate& c = rep.certificate;
  const double eps = std::max(c.oblivious_eps, c.markovianizing_eps);
  for (const auto& b : measurement_branches(instr, resource, u, d, tol)) {
    const auto bob = find_bob_isometry(b.state, d, {std::nullopt, false}, tol);
    rep.product_distance += b.probability * bob.distance;
  }
  rep.checks.push_back({"decoupling <= 7 max(oblivious, markovianizing)", c.decoupling_eps, 7.0 * eps + 1e-8,
                        c.decoupling_eps <= 7.0 * eps + 1e-8});
  const double bound = 4.0 * std::sqrt(2.0 * eps) + 1e-8;
  rep.checks.push_back({"product distance <= 4 sqrt(2 max(oblivious, markovianizing))", rep.product_distance, bound,
                        rep.product_distance <= bound});
  if (c.oblivious_eps <= 1e-8 && c.decoupling_eps <= 1e-8)
    rep.checks.push_back({"oblivious and decoupled => markovianizing <= 1e-6", c.markovianizing_eps, 1e-6,
                          c.markovianizing_eps <= 1e-6});
  return rep;
}

// ---------------------------------------------------------------------------
// Two-round protocol

struct BranchRecord {
  std::size_t k = 0;  // Alice's outcome
  Dim l = 0;          // Bob's Bell outcome
  double probability = 0.0;
  double fidelity = 0.0;
};

struct ProtocolTranscript {
  Dim d = 0;
  std::size_t num_unitaries = 0;
  Dim d_b1 = 0;
  std::vector<BranchRecord> outcomes;
  QState final_state;  // (A, R_A, B, R_B)
  double fidelity = 0.0;
  ResourceLedger ledger;
  std::vector<LedgerEntry> stages;
  EntropyReport audits;
  double markov_cost_bits = 0.0;  // M(U^dagger)

  /// Net entanglement spent above the optimal rate M(U^dagger).
  double rate_gap() const { return ledger.net_ebits() - markov_cost_bits; }

  std::string summary() const {
    auto fmt = [](double x) {
      std::ostringstream v;
      v << std::fixed << std::setprecision(6) << (std::abs(x) < 5e-7 ? 0.0 : x);
      return v.str();
    };
    return "single-shot teleportation merging spends " + fmt(ledger.net_ebits()) +
           " ebits against the rate M(U^dagger) = " + fmt(markov_cost_bits) + " (gap " + fmt(rate_gap()) + ")";
  }
};

/// Alice measures with {V_j} on resource Phi_K, Bob applies W_k and teleports
/// B_1 back, Alice aligns her systems with |Phi_d>^{AR_A}|Phi_d>^{BR_B}.
inline ProtocolTranscript run_two_round(const CMatrix& u, Dim d, const std::vector<CMatrix>& v_list,
                                        const Tolerances& tol = {}) {
  detail::check_bipartite_unitary(u, d, tol, "run_two_round");
  MeasurementInstrument instr;
  try {
    instr = build_alice_measurement(v_list, d, tol);
  } catch (const Error& e) {
    throw ProtocolError("alice_measurement", std::nullopt, e.what());
  }
  const Dim k_count = static_cast<Dim>(v_list.size());
  const QState resource = max_entangled(k_count);

  std::vector<LedgerEntry> stages;
  const double log_k = std::log2(static_cast<double>(k_count));
  stages.push_back({"alice_measurement", {log_k, 0.0, log_k, 0.0}});
  const auto branches = measurement_branches(instr, resource, u, d, tol);

  Dim d_b1 = k_count;
  for (const auto& b : branches) {
    const CMatrix rho2 = reduced_density(b.state, {0, 1});
    const RVector l = eigenvalues_hermitian(rho2);
    d_b1 = std::max<Dim>(d_b1, static_cast<Dim>((l.array() > tol.rank_cutoff).count()));
  }

  std::vector<BobIsometry> bob;
  for (const auto& b : branches) {
    try {
      bob.push_back(find_bob_isometry(b.state, d, {d_b1, true}, tol));
    } catch (const Error& e) {
      throw ProtocolError("bob_isometry", b.k, e.what());
    }
  }
  stages.push_back({"bob_isometry", {}});
  stages.push_back({"teleport_merge", teleport_cost(d_b1)});
  stages.push_back({"alice_correction", {}});

  StateVector ideal{kron(kron(max_entangled_vector(d).amplitudes, max_entangled_vector(d).amplitudes),
                         CVector::Unit(d_b1, 0)),
                    {d, d, d, d, d_b1}};
  ProtocolTranscript tr{d, v_list.size(), d_b1, {}, QState::maximally_mixed({d, d, d, d}), 0.0, {}, stages, {}, 0.0};
  CMatrix final_rho = CMatrix::Zero(d * d * d * d, d * d * d * d);
  EntropyReport merging;
  double s_ba = 0.0, i_br = 0.0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    const QState pp = QState::pure(bob[i].psi_p, tol);
    const auto mb = merging_bounds(pp, {0}, {2}, {1}, tol);
    s_ba += b.probability * mb.at("S(B|A)");
    i_br += b.probability * mb.at("I(B:R)");
    for (auto& t : teleport_branches(bob[i].rotated, 4, d_b1)) {
      UhlmannAlignment al;
      try {
        al = uhlmann_align(t.state, {0, 4}, ideal, {0, 4});
      } catch (const Error& e) {
        throw ProtocolError("alice_correction", b.k, e.what());
      }
      const double p = b.probability * t.probability;
      const CMatrix rho = reduced_density(al.rotated, {0, 1, 2, 3});
      final_rho += p * rho;
      tr.outcomes.push_back({b.k, t.outcome, p, al.overlap * al.overlap});
    }
  }
  for (const auto& s : stages) tr.ledger += s.delta;
  tr.final_state = QState(final_rho, {d, d, d, d}, tol);
  const CVector phiphi = kron(max_entangled_vector(d).amplitudes, max_entangled_vector(d).amplitudes);
  tr.fidelity = std::clamp(phiphi.dot(final_rho * phiphi).real(), 0.0, 1.0);
  tr.audits = entropy_audit(instr, resource, u, d, tol);
  tr.audits.add("S(B_1|A')_av", s_ba);
  tr.audits.add("I(B_1:R_A)_av", i_br);
  tr.markov_cost_bits = tr.audits.at("M(U^dagger)");
  return tr;
}

}  // namespace mlocc
