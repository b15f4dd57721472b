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

// Dense complex linear algebra on multipartite spaces.
//
// Conventions: a space with subsystem dimensions (d_0, ..., d_{k-1}) is
// indexed row-major, subsystem 0 most significant, so that kron(a, b) acts
// as a on subsystem 0 and b on subsystem 1. All entropies are in bits.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlocc/errors.hpp"
#include "mlocc/tolerances.hpp"

namespace mlocc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Dim = Eigen::Index;
using Dims = std::vector<Dim>;
using IndexSet = std::vector<std::size_t>;

inline Dim total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), Dim{1}, std::multiplies<>{});
}

inline Dim total_dim(const Dims& dims, const IndexSet& systems) {
  Dim n = 1;
  for (auto s : systems) n *= dims.at(s);
  return n;
}

inline bool all_finite(const CMatrix& a) {
  return a.allFinite();
}

inline void require_finite(const CMatrix& a, const char* what = "matrix") {
  if (!a.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Dim i = 0; i < a.rows(); ++i)
    for (Dim j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Dim i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Max elementwise |a - a^dagger|.
inline double hermiticity_residual(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Max elementwise |u^dagger u - I|.
inline double unitarity_residual(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Max elementwise |w^dagger w - I| for an isometry w (rows >= cols).
inline double isometry_residual(const CMatrix& w) {
  return (w.adjoint() * w - CMatrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Subsystem bookkeeping

namespace detail {

inline void check_index_set(const Dims& dims, const IndexSet& systems, const char* what) {
  std::vector<bool> seen(dims.size(), false);
  for (auto s : systems) {
    if (s >= dims.size())
      throw DimensionError(std::string(what) + ": subsystem index " + std::to_string(s) +
                           " out of range for " + std::to_string(dims.size()) + " subsystems");
    if (seen[s]) throw DimensionError(std::string(what) + ": repeated subsystem index");
    seen[s] = true;
  }
}

inline void check_dims(const Dims& dims) {
  for (auto d : dims)
    if (d < 1) throw DimensionError("subsystem dimensions must be positive");
}

/// For each flat index of the permuted layout, the flat index it came from.
/// Subsystem k of the new layout is subsystem order[k] of the old one.
inline std::vector<Dim> permutation_indices(const Dims& dims, const IndexSet& order) {
  const std::size_t n = dims.size();
  std::vector<Dim> old_stride(n, 1);
  for (std::size_t i = n; i-- > 1;) old_stride[i - 1] = old_stride[i] * dims[i];
  Dims new_dims(n);
  std::vector<Dim> stride(n);
  for (std::size_t k = 0; k < n; ++k) {
    new_dims[k] = dims[order[k]];
    stride[k] = old_stride[order[k]];
  }
  const Dim total = total_dim(dims);
  std::vector<Dim> map(static_cast<std::size_t>(total));
  std::vector<Dim> digit(n, 0);
  Dim old = 0;
  for (Dim flat = 0; flat < total; ++flat) {
    map[static_cast<std::size_t>(flat)] = old;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < new_dims[k]) {
        old += stride[k];
        break;
      }
      old -= stride[k] * (new_dims[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

inline void check_permutation(std::size_t n, const IndexSet& order) {
  if (order.size() != n) throw DimensionError("permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (auto s : order) {
    if (s >= n || seen[s]) throw DimensionError("invalid subsystem permutation");
    seen[s] = true;
  }
}

/// Layout bookkeeping for an operator acting on `targets` with output subsystems `out_dims`.
struct OperatorLayout {
  IndexSet front;     // targets first (in the given order), then the rest ascending
  Dim din = 1;
  Dim rest = 1;
  Dims mid_dims;      // out_dims followed by the rest
  IndexSet back;      // permutation from the mid layout to the final layout
  Dims final_dims;
};

// Final placement: when out_dims has one entry per target, each target keeps
// its position; otherwise the output block sits where the lowest target was
// and the other targets disappear.
inline OperatorLayout make_layout(const Dims& dims, const IndexSet& targets, const Dims& out_dims) {
  check_index_set(dims, targets, "operator targets");
  if (targets.empty()) throw DimensionError("operator needs at least one target subsystem");
  OperatorLayout L;
  L.front = targets;
  IndexSet rest;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (std::find(targets.begin(), targets.end(), i) == targets.end()) rest.push_back(i);
  L.front.insert(L.front.end(), rest.begin(), rest.end());
  L.din = total_dim(dims, targets);
  L.rest = total_dim(dims, rest);
  const std::size_t m = out_dims.size();
  L.mid_dims = out_dims;
  for (auto r : rest) L.mid_dims.push_back(dims[r]);

  if (m == targets.size()) {
    // slot of original subsystem i in the mid layout
    std::vector<std::size_t> slot(dims.size());
    for (std::size_t t = 0; t < m; ++t) slot[targets[t]] = t;
    for (std::size_t j = 0; j < rest.size(); ++j) slot[rest[j]] = m + j;
    for (std::size_t i = 0; i < dims.size(); ++i) L.back.push_back(slot[i]);
  } else {
    const std::size_t anchor = *std::min_element(targets.begin(), targets.end());
    std::size_t j = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (i == anchor)
        for (std::size_t t = 0; t < m; ++t) L.back.push_back(t);
      if (j < rest.size() && rest[j] == i) L.back.push_back(m + j++);
    }
  }
  for (auto s : L.back) L.final_dims.push_back(L.mid_dims[s]);
  return L;
}

}  // namespace detail

/// Reorders subsystems: subsystem k of the result is subsystem order[k] of the input.
inline CVector permute_subsystems(const CVector& v, const Dims& dims, const IndexSet& order) {
  detail::check_permutation(dims.size(), order);
  const auto map = detail::permutation_indices(dims, order);
  CVector out(v.size());
  for (Dim i = 0; i < v.size(); ++i) out(i) = v(map[static_cast<std::size_t>(i)]);
  return out;
}

inline CMatrix permute_subsystems(const CMatrix& a, const Dims& dims, const IndexSet& order) {
  detail::check_permutation(dims.size(), order);
  const auto map = detail::permutation_indices(dims, order);
  const Dim n = a.rows();
  CMatrix out(n, n);
  for (Dim j = 0; j < n; ++j) {
    const Dim oj = map[static_cast<std::size_t>(j)];
    for (Dim i = 0; i < n; ++i) out(i, j) = a(map[static_cast<std::size_t>(i)], oj);
  }
  return out;
}

inline Dims permute_dims(const Dims& dims, const IndexSet& order) {
  Dims out;
  for (auto s : order) out.push_back(dims.at(s));
  return out;
}

/// A square matrix together with the subsystem structure of its space.
struct SystemOperator {
  CMatrix matrix;
  Dims dims;
};

/// Pure state vector with subsystem structure (not necessarily normalized).
struct StateVector {
  CVector amplitudes;
  Dims dims;

  double norm() const { return amplitudes.norm(); }
};

/// Embeds `op`, acting on `targets` in the given order, into the full space.
inline CMatrix embed_operator(const CMatrix& op, const Dims& dims, const IndexSet& targets) {
  detail::check_index_set(dims, targets, "embed_operator");
  if (op.rows() != op.cols() || op.rows() != total_dim(dims, targets))
    throw DimensionError("embed_operator: operator shape does not match target dimensions");
  IndexSet order = targets;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (std::find(targets.begin(), targets.end(), i) == targets.end()) order.push_back(i);
  const CMatrix front = kron(op, CMatrix::Identity(total_dim(dims) / op.rows(), total_dim(dims) / op.rows()));
  IndexSet inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  return permute_subsystems(front, permute_dims(dims, order), inverse);
}

namespace detail {

inline Dims default_out_dims(const CMatrix& op, const Dims& dims, const IndexSet& targets) {
  if (op.rows() == op.cols()) {
    Dims out;
    for (auto t : targets) out.push_back(dims.at(t));
    return out;
  }
  if (op.rows() == 1) return {};
  return {op.rows()};
}

}  // namespace detail

/// Applies `op` (rows = product of out_dims, cols = product of target dims) to a pure state.
inline StateVector apply_operator(const CMatrix& op, const StateVector& psi, const IndexSet& targets,
                                  std::optional<Dims> out_dims = std::nullopt) {
  const Dims out = out_dims ? *out_dims : detail::default_out_dims(op, psi.dims, targets);
  const auto L = detail::make_layout(psi.dims, targets, out);
  if (op.cols() != L.din || op.rows() != total_dim(out))
    throw DimensionError("apply_operator: operator shape does not match target dimensions");
  const CVector front = permute_subsystems(psi.amplitudes, psi.dims, L.front);
  Eigen::Map<const CMatrix> m(front.data(), L.rest, L.din);
  const CMatrix applied = m * op.transpose();
  const CVector mid = Eigen::Map<const CVector>(applied.data(), applied.size());
  return {permute_subsystems(mid, L.mid_dims, L.back), L.final_dims};
}

/// Applies rho -> sum_k K_k rho K_k^dagger on `targets`.
inline SystemOperator apply_kraus(const std::vector<CMatrix>& kraus, const CMatrix& rho, const Dims& dims,
                                  const IndexSet& targets, std::optional<Dims> out_dims = std::nullopt) {
  if (kraus.empty()) throw DimensionError("apply_kraus: empty Kraus list");
  const Dims out = out_dims ? *out_dims : detail::default_out_dims(kraus.front(), dims, targets);
  const auto L = detail::make_layout(dims, targets, out);
  const Dim dout = total_dim(out);
  const CMatrix front = permute_subsystems(rho, dims, L.front);
  const Dim rest = L.rest;
  CMatrix acc = CMatrix::Zero(dout * rest, dout * rest);
  for (const auto& k : kraus) {
    if (k.cols() != L.din || k.rows() != dout)
      throw DimensionError("apply_kraus: Kraus operator shape does not match target dimensions");
    CMatrix left = CMatrix::Zero(dout * rest, front.cols());
    for (Dim a = 0; a < dout; ++a)
      for (Dim t = 0; t < L.din; ++t)
        if (k(a, t) != Complex(0.0))
          left.middleRows(a * rest, rest).noalias() += k(a, t) * front.middleRows(t * rest, rest);
    for (Dim b = 0; b < dout; ++b)
      for (Dim t = 0; t < L.din; ++t)
        if (k(b, t) != Complex(0.0))
          acc.middleCols(b * rest, rest).noalias() += std::conj(k(b, t)) * left.middleCols(t * rest, rest);
  }
  return {permute_subsystems(acc, L.mid_dims, L.back), L.final_dims};
}

/// Partial trace of a (not necessarily normalized) operator; kept subsystems stay in ascending order.
inline CMatrix partial_trace(const CMatrix& a, const Dims& dims, IndexSet keep) {
  detail::check_index_set(dims, keep, "partial_trace");
  if (a.rows() != total_dim(dims) || a.cols() != a.rows())
    throw DimensionError("partial_trace: matrix does not match subsystem dimensions");
  std::sort(keep.begin(), keep.end());
  IndexSet order = keep;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) order.push_back(i);
  const Dim dk = total_dim(dims, keep);
  const Dim rest = total_dim(dims) / dk;
  const CMatrix front = permute_subsystems(a, dims, order);
  CMatrix out(dk, dk);
  for (Dim i = 0; i < dk; ++i)
    for (Dim j = 0; j < dk; ++j) out(i, j) = front.block(i * rest, j * rest, rest, rest).trace();
  return out;
}

/// Reduced density operator of a pure state on `keep` (ascending order).
inline CMatrix reduced_density(const StateVector& psi, IndexSet keep) {
  detail::check_index_set(psi.dims, keep, "reduced_density");
  std::sort(keep.begin(), keep.end());
  IndexSet order = keep;
  for (std::size_t i = 0; i < psi.dims.size(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) order.push_back(i);
  const Dim dk = total_dim(psi.dims, keep);
  const Dim rest = total_dim(psi.dims) / dk;
  const CVector front = permute_subsystems(psi.amplitudes, psi.dims, order);
  Eigen::Map<const CMatrix> m(front.data(), rest, dk);
  return m.transpose() * m.conjugate();
}

// ---------------------------------------------------------------------------
// Spectral decompositions

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors
};

inline HermitianEigen eig_hermitian(const CMatrix& a, const Tolerances& tol = {}) {
  if (a.rows() != a.cols()) throw NonHermitianError("eig_hermitian: matrix is not square");
  const double r = hermiticity_residual(a);
  if (!(r <= tol.hermitian_input))
    throw NonHermitianError("eig_hermitian: Hermiticity residual " + std::to_string(r));
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline RVector eigenvalues_hermitian(const CMatrix& a) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

struct SvdResult {
  CMatrix u;
  RVector s;  // nonincreasing
  CMatrix v;  // a = u * diag(s) * v^dagger
};

inline SvdResult svd(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> js(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {js.matrixU(), js.singularValues(), js.matrixV()};
}

inline double trace_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> js(a);
  return js.singularValues().sum();
}

/// Matrix square root of a PSD matrix; eigenvalues below zero are clamped.
inline CMatrix psd_sqrt(const CMatrix& a) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Entropies

/// -sum p log2 p over nonnegative weights; zeros contribute nothing.
inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

/// Entropy of a spectrum with the clamping rule: values in [-cutoff, 0) count as 0,
/// anything more negative is an invalid state.
inline double spectrum_entropy(const RVector& eigenvalues, double cutoff = 1e-10) {
  double h = 0.0;
  for (Dim i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l < -cutoff)
      throw InvalidStateError("negative eigenvalue " + std::to_string(l) + " in entropy");
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

// ---------------------------------------------------------------------------
// QState

/// Density matrix with an explicit ordered list of subsystem dimensions.
class QState {
 public:
  QState(CMatrix rho, Dims dims, const Tolerances& tol = {}) : rho_(std::move(rho)), dims_(std::move(dims)) {
    detail::check_dims(dims_);
    if (rho_.rows() != rho_.cols() || rho_.rows() != total_dim(dims_))
      throw DimensionError("QState: matrix side " + std::to_string(rho_.rows()) +
                           " does not match product of dims " + std::to_string(total_dim(dims_)));
    require_finite(rho_, "QState");
    const double h = hermiticity_residual(rho_);
    if (h > tol.state) throw NonHermitianError("QState: Hermiticity residual " + std::to_string(h));
    const double tr_err = std::abs(rho_.trace() - Complex(1.0));
    if (tr_err > tol.state) throw InvalidStateError("QState: trace deviates from 1 by " + std::to_string(tr_err));
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const double min_eig = eigenvalues_hermitian(rho_).minCoeff();
    if (min_eig < -tol.state) throw InvalidStateError("QState: minimum eigenvalue " + std::to_string(min_eig));
  }

  /// Projector onto a normalized pure state.
  static QState pure(const StateVector& psi, const Tolerances& tol = {}) {
    const double n = psi.norm();
    if (n == 0.0) throw InvalidStateError("QState::pure: zero vector");
    const CVector v = psi.amplitudes / n;
    return QState(v * v.adjoint(), psi.dims, tol);
  }

  static QState maximally_mixed(const Dims& dims) {
    const Dim n = total_dim(dims);
    return QState(CMatrix::Identity(n, n) / static_cast<double>(n), dims);
  }

  const CMatrix& matrix() const noexcept { return rho_; }
  const Dims& dims() const noexcept { return dims_; }
  Dim dim() const noexcept { return rho_.rows(); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }

  RVector eigenvalues() const { return eigenvalues_hermitian(rho_); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  CMatrix rho_;
  Dims dims_;
};

inline QState partial_trace(const QState& state, IndexSet keep) {
  if (keep.empty()) throw DimensionError("partial_trace: keep set must be nonempty");
  std::sort(keep.begin(), keep.end());
  CMatrix r = partial_trace(state.matrix(), state.dims(), keep);
  Dims d;
  for (auto k : keep) d.push_back(state.dims()[k]);
  return QState(std::move(r), std::move(d));
}

inline QState permute_subsystems(const QState& state, const IndexSet& order) {
  return QState(permute_subsystems(state.matrix(), state.dims(), order), permute_dims(state.dims(), order));
}

inline QState tensor(const QState& a, const QState& b) {
  Dims d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return QState(kron(a.matrix(), b.matrix()), std::move(d));
}

inline double von_neumann_entropy(const QState& state) {
  return spectrum_entropy(state.eigenvalues());
}

/// S of the marginal on `systems`; the empty set has entropy 0.
inline double subsystem_entropy(const QState& state, const IndexSet& systems) {
  if (systems.empty()) return 0.0;
  detail::check_index_set(state.dims(), systems, "subsystem_entropy");
  if (systems.size() == state.num_subsystems()) return von_neumann_entropy(state);
  return spectrum_entropy(eigenvalues_hermitian(partial_trace(state.matrix(), state.dims(), systems)));
}

inline double subsystem_entropy(const StateVector& psi, const IndexSet& systems) {
  if (systems.empty() || systems.size() == psi.dims.size()) return 0.0;
  const double n2 = psi.amplitudes.squaredNorm();
  return spectrum_entropy(eigenvalues_hermitian(reduced_density(psi, systems) / n2));
}

namespace detail {

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet u = a;
  u.insert(u.end(), b.begin(), b.end());
  std::sort(u.begin(), u.end());
  return u;
}

inline void require_disjoint(std::initializer_list<const IndexSet*> sets, const char* what) {
  IndexSet all;
  for (auto* s : sets) all.insert(all.end(), s->begin(), s->end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw DimensionError(std::string(what) + ": index sets overlap");
}

}  // namespace detail

/// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC), clamped to 0 from within -tol.general.
inline double conditional_mutual_information(const QState& state, const IndexSet& a, const IndexSet& c,
                                             const IndexSet& b, const Tolerances& tol = {}) {
  detail::require_disjoint({&a, &b, &c}, "conditional_mutual_information");
  const IndexSet ab = detail::set_union(a, b);
  const IndexSet bc = detail::set_union(b, c);
  const IndexSet abc = detail::set_union(ab, c);
  const double v = subsystem_entropy(state, ab) + subsystem_entropy(state, bc) -
                   subsystem_entropy(state, b) - subsystem_entropy(state, abc);
  return (v < 0.0 && v >= -tol.general) ? 0.0 : v;
}

inline double mutual_information(const QState& state, const IndexSet& a, const IndexSet& b) {
  return conditional_mutual_information(state, a, b, {});
}

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)) = || sqrt(rho) sqrt(sigma) ||_1; the trace-norm form
/// avoids square roots of noisy near-zero eigenvalues when either state is low rank.
/// A numerically pure argument is handled exactly through sqrt(<psi|other|psi>).
inline double root_fidelity_trace(const CMatrix& rho, const CMatrix& sigma) {
  for (const auto* pair : {&rho, &sigma}) {
    const CMatrix& p = *pair;
    const CMatrix& other = pair == &rho ? sigma : rho;
    if (std::abs((p * p).trace().real() - 1.0) < 1e-12) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (p + p.adjoint()));
      const CVector v = es.eigenvectors().col(p.rows() - 1);
      return std::sqrt(std::max(0.0, v.dot(other * v).real()));
    }
  }
  return trace_norm(psd_sqrt(rho) * psd_sqrt(sigma));
}

/// Uhlmann fidelity in the squared convention F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
/// For a pure sigma = |psi><psi| this is <psi|rho|psi>.
inline double fidelity(const QState& rho, const QState& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::clamp(std::pow(root_fidelity_trace(rho.matrix(), sigma.matrix()), 2.0), 0.0, 1.0);
}

/// sqrt(F): the root-fidelity convention used by the Fuchs-van de Graaf bounds.
inline double root_fidelity(const QState& rho, const QState& sigma) {
  return std::sqrt(fidelity(rho, sigma));
}

/// One named entropic quantity in bits.
struct EntropyEntry {
  std::string name;
  IndexSet systems;
  double bits = 0.0;
};

struct EntropyReport {
  std::vector<EntropyEntry> entries;

  void add(std::string name, double bits, IndexSet systems = {}) {
    entries.push_back({std::move(name), std::move(systems), bits});
  }

  std::optional<double> get(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e.bits;
    return std::nullopt;
  }

  double at(const std::string& name) const {
    auto v = get(name);
    if (!v) throw Error("entropy report has no entry '" + name + "'");
    return *v;
  }
};

}  // namespace mlocc
