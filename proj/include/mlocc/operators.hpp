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

// Structured operator families: generalized Paulis, maximally entangled
// states, the operator-Schmidt decomposition and Kraus-form channels.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlocc/tensor.hpp"

namespace mlocc {

inline void require_unitary(const CMatrix& u, double tol, const std::string& what) {
  const double r = unitarity_residual(u);
  if (!(r <= tol)) throw NonUnitaryError(what + " is not unitary", r);
}

// ---------------------------------------------------------------------------
// Generalized Pauli (Weyl-Heisenberg) operators

struct GeneralizedPauli {
  Dim d = 0;
  Dim p = 0;  // shift
  Dim q = 0;  // phase
  CMatrix matrix;
};

/// sigma_pq = sum_t exp(2 pi i q t / d) |t - p mod d><t|, t = 0..d-1.
///
/// The phase carries a 1/d so that Tr[sigma_pq^dagger sigma_rs] = d delta_pr delta_qs.
inline GeneralizedPauli gen_pauli(Dim d, Dim p, Dim q) {
  if (d < 1) throw DimensionError("gen_pauli: dimension must be positive");
  if (p < 0 || p >= d || q < 0 || q >= d)
    throw DimensionError("gen_pauli: indices (" + std::to_string(p) + ", " + std::to_string(q) +
                         ") out of range for d = " + std::to_string(d));
  CMatrix m = CMatrix::Zero(d, d);
  for (Dim t = 0; t < d; ++t) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((q * t) % d) / static_cast<double>(d);
    m((t - p + d) % d, t) = std::polar(1.0, phase);
  }
  return {d, p, q, std::move(m)};
}

/// All d^2 operators, (p, q) in lexicographic order; (0, 0) = identity comes first.
inline std::vector<GeneralizedPauli> pauli_basis(Dim d) {
  std::vector<GeneralizedPauli> out;
  for (Dim p = 0; p < d; ++p)
    for (Dim q = 0; q < d; ++q) out.push_back(gen_pauli(d, p, q));
  return out;
}

/// Orthogonal operator basis, identity excluded: Tr[B_i^dagger B_j] = d delta_ij, Tr B_i = 0.
struct OperatorBasis {
  Dim d = 0;
  std::vector<CMatrix> traceless;

  /// The generalized Paulis in lexicographic (p, q) order, (0, 0) excluded.
  static OperatorBasis pauli(Dim d) {
    OperatorBasis b{d, {}};
    for (auto& s : pauli_basis(d))
      if (s.p != 0 || s.q != 0) b.traceless.push_back(std::move(s.matrix));
    return b;
  }

  /// Identity followed by the traceless elements.
  std::vector<CMatrix> full() const {
    std::vector<CMatrix> all{CMatrix::Identity(d, d)};
    all.insert(all.end(), traceless.begin(), traceless.end());
    return all;
  }
};

// ---------------------------------------------------------------------------
// Maximally entangled states

/// d^{-1/2} sum_t |t>|t>, dims {d, d}. d = 1 gives the trivial one-dimensional state.
inline StateVector max_entangled_vector(Dim d) {
  CVector v = CVector::Zero(d * d);
  for (Dim t = 0; t < d; ++t) v(t * d + t) = 1.0 / std::sqrt(static_cast<double>(d));
  return {std::move(v), {d, d}};
}

inline QState max_entangled(Dim d) {
  if (d < 1) throw DimensionError("max_entangled: dimension must be positive");
  return QState::pure(max_entangled_vector(d));
}

// ---------------------------------------------------------------------------
// Operator-Schmidt decomposition

/// U = sum_s c_s E_s (x) F_s with c_s > 0, sum c_s^2 = 1 and d^{-1} Tr[E_s^dagger E_s'] = delta.
struct SchmidtDecomposition {
  Dim d = 0;
  std::vector<double> coeffs;
  std::vector<CMatrix> left;
  std::vector<CMatrix> right;

  CMatrix reconstruct() const {
    CMatrix u = CMatrix::Zero(d * d, d * d);
    for (std::size_t s = 0; s < coeffs.size(); ++s) u += coeffs[s] * kron(left[s], right[s]);
    return u;
  }
};

/// Reshuffles U's indices (a,b; a',b') -> (a,a'; b,b') and takes the SVD.
inline SchmidtDecomposition operator_schmidt(const CMatrix& u, Dim d, const Tolerances& tol = {}) {
  if (d < 1 || u.rows() != d * d || u.cols() != d * d)
    throw DimensionError("operator_schmidt: expected a " + std::to_string(d * d) + "x" + std::to_string(d * d) +
                         " matrix");
  require_unitary(u, tol.unitary, "operator_schmidt input");
  CMatrix reshuffled(d * d, d * d);
  for (Dim a = 0; a < d; ++a)
    for (Dim b = 0; b < d; ++b)
      for (Dim a2 = 0; a2 < d; ++a2)
        for (Dim b2 = 0; b2 < d; ++b2) reshuffled(a * d + a2, b * d + b2) = u(a * d + b, a2 * d + b2);
  const auto dec = svd(reshuffled);
  const double root_d = std::sqrt(static_cast<double>(d));
  SchmidtDecomposition out{d, {}, {}, {}};
  for (Dim s = 0; s < dec.s.size(); ++s) {
    const double c = dec.s(s) / static_cast<double>(d);
    if (c < tol.schmidt_cutoff) continue;
    CMatrix e(d, d), f(d, d);
    for (Dim i = 0; i < d; ++i)
      for (Dim j = 0; j < d; ++j) {
        e(i, j) = root_d * dec.u(i * d + j, s);
        f(i, j) = root_d * std::conj(dec.v(i * d + j, s));
      }
    out.coeffs.push_back(c);
    out.left.push_back(std::move(e));
    out.right.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Channels

/// Completely positive map in Kraus form, each operator d_out x d_in.
class QChannel {
 public:
  QChannel(std::vector<CMatrix> kraus, Dim d_in, Dim d_out)
      : kraus_(std::move(kraus)), d_in_(d_in), d_out_(d_out) {
    if (kraus_.empty()) throw DimensionError("QChannel: empty Kraus list");
    for (const auto& k : kraus_)
      if (k.rows() != d_out_ || k.cols() != d_in_)
        throw DimensionError("QChannel: Kraus operator is " + std::to_string(k.rows()) + "x" +
                             std::to_string(k.cols()) + ", expected " + std::to_string(d_out_) + "x" +
                             std::to_string(d_in_));
  }

  static QChannel identity(Dim d) { return QChannel({CMatrix::Identity(d, d)}, d, d); }

  static QChannel unitary(const CMatrix& u) { return QChannel({u}, u.cols(), u.rows()); }

  /// tau -> Tr[tau] I/d, Kraus {sigma_pq / d}.
  static QChannel completely_depolarizing(Dim d) {
    std::vector<CMatrix> k;
    for (auto& s : pauli_basis(d)) k.push_back(s.matrix / static_cast<double>(d));
    return QChannel(std::move(k), d, d);
  }

  /// Complete dephasing in the computational basis, Kraus {|t><t|}.
  static QChannel dephasing(Dim d) {
    std::vector<CMatrix> k;
    for (Dim t = 0; t < d; ++t) {
      CMatrix p = CMatrix::Zero(d, d);
      p(t, t) = 1.0;
      k.push_back(std::move(p));
    }
    return QChannel(std::move(k), d, d);
  }

  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }
  Dim d_in() const noexcept { return d_in_; }
  Dim d_out() const noexcept { return d_out_; }

  /// sum_k K x K^dagger for an operator x on the input space.
  CMatrix operator()(const CMatrix& x) const {
    if (x.rows() != d_in_ || x.cols() != d_in_) throw DimensionError("QChannel: operator dimension mismatch");
    CMatrix out = CMatrix::Zero(d_out_, d_out_);
    for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
    return out;
  }

  /// sum_k K^dagger K.
  CMatrix kraus_sum() const {
    CMatrix s = CMatrix::Zero(d_in_, d_in_);
    for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
    return s;
  }

  double trace_preserving_residual() const {
    return (kraus_sum() - CMatrix::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff();
  }

  bool is_trace_preserving(double tol = 1e-9) const { return trace_preserving_residual() <= tol; }

  /// Only meaningful for d_in == d_out.
  double unitality_residual() const {
    return ((*this)(CMatrix::Identity(d_in_, d_in_)) - CMatrix::Identity(d_out_, d_out_)).cwiseAbs().maxCoeff();
  }

 private:
  std::vector<CMatrix> kraus_;
  Dim d_in_;
  Dim d_out_;
};

/// outer o inner.
inline QChannel compose(const QChannel& outer, const QChannel& inner) {
  if (outer.d_in() != inner.d_out()) throw DimensionError("compose: dimension mismatch");
  std::vector<CMatrix> k;
  k.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& a : outer.kraus())
    for (const auto& b : inner.kraus()) k.push_back(a * b);
  return QChannel(std::move(k), inner.d_in(), outer.d_out());
}

inline QChannel channel_adjoint(const QChannel& ch) {
  std::vector<CMatrix> k;
  for (const auto& a : ch.kraus()) k.push_back(a.adjoint());
  return QChannel(std::move(k), ch.d_out(), ch.d_in());
}

/// (ch on target) (x) id on the rest. When d_out != d_in the targets collapse
/// into one output subsystem at the position of the lowest target.
inline SystemOperator apply_channel(const QChannel& ch, const CMatrix& rho, const Dims& dims,
                                    const IndexSet& target) {
  if (total_dim(dims, target) != ch.d_in())
    throw DimensionError("apply_channel: channel input dimension " + std::to_string(ch.d_in()) +
                         " does not match target dimension " + std::to_string(total_dim(dims, target)));
  std::optional<Dims> out;
  if (ch.d_out() != ch.d_in()) out = Dims{ch.d_out()};
  return apply_kraus(ch.kraus(), rho, dims, target, out);
}

inline QState apply_channel(const QChannel& ch, const QState& state, const IndexSet& target,
                            const Tolerances& tol = {}) {
  auto r = apply_channel(ch, state.matrix(), state.dims(), target);
  return QState(std::move(r.matrix), std::move(r.dims), tol);
}

/// [T]_ij = Tr[B_i^dagger ch(B_j)] / d for an orthogonal basis with Tr[B^dagger B] = d,
/// so the identity channel maps to the identity matrix.
inline CMatrix transfer_matrix(const QChannel& ch, std::span<const CMatrix> basis) {
  if (ch.d_in() != ch.d_out()) throw DimensionError("transfer_matrix: channel must map a space to itself");
  const Dim d = ch.d_in();
  const Dim n = static_cast<Dim>(basis.size());
  std::vector<CMatrix> images;
  images.reserve(basis.size());
  for (const auto& b : basis) {
    if (b.rows() != d || b.cols() != d) throw DimensionError("transfer_matrix: basis element dimension mismatch");
    images.push_back(ch(b));
  }
  CMatrix t(n, n);
  for (Dim i = 0; i < n; ++i)
    for (Dim j = 0; j < n; ++j)
      t(i, j) = basis[static_cast<std::size_t>(i)].conjugate().cwiseProduct(images[static_cast<std::size_t>(j)]).sum();
  return t / static_cast<double>(d);
}

inline CMatrix transfer_matrix(const QChannel& ch, const std::vector<GeneralizedPauli>& basis) {
  std::vector<CMatrix> m;
  for (const auto& s : basis) m.push_back(s.matrix);
  return transfer_matrix(ch, std::span<const CMatrix>(m));
}

}  // namespace mlocc
