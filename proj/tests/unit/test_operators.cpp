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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support.hpp"

namespace mlocc {
namespace {

using testing::engine;

TEST(GenPauli, IdentityAndShift) {
  EXPECT_EQ(gen_pauli(2, 0, 0).matrix, CMatrix(CMatrix::Identity(2, 2)));
  EXPECT_EQ(gen_pauli(2, 1, 0).matrix, testing::pauli_x());
  EXPECT_LT(max_abs_diff(gen_pauli(2, 0, 1).matrix, testing::pauli_z()), 1e-15);
}

TEST(GenPauli, QutritClock) {
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  CMatrix expect = CMatrix::Zero(3, 3);
  expect.diagonal() << 1.0, w, w * w;
  EXPECT_LT(max_abs_diff(gen_pauli(3, 0, 1).matrix, expect), 1e-15);
}

TEST(GenPauli, ShiftFollowsFormula) {
  // sigma_pq |t> = e^{2 pi i q t/d} |t - p mod d>
  const Dim d = 4;
  for (Dim p = 0; p < d; ++p)
    for (Dim q = 0; q < d; ++q) {
      const CMatrix s = gen_pauli(d, p, q).matrix;
      for (Dim t = 0; t < d; ++t) {
        CVector expect = CVector::Zero(d);
        expect(((t - p) % d + d) % d) = std::polar(1.0, 2 * std::numbers::pi * double(q * t) / double(d));
        EXPECT_LT((s.col(t) - expect).cwiseAbs().maxCoeff(), 1e-14);
      }
    }
}

TEST(GenPauli, RejectsOutOfRangeIndices) {
  EXPECT_THROW(gen_pauli(2, 2, 0), DimensionError);
  EXPECT_THROW(gen_pauli(3, 0, -1), DimensionError);
}

TEST(GenPauli, OrthogonalUnitaryBasis) {
  for (Dim d : {2, 3, 4}) {
    const auto basis = pauli_basis(d);
    ASSERT_EQ(basis.size(), std::size_t(d * d));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LT(unitarity_residual(basis[i].matrix), 1e-10);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const Complex ip = (basis[i].matrix.adjoint() * basis[j].matrix).trace();
        EXPECT_LT(std::abs(ip - (i == j ? Complex(double(d)) : Complex(0.0))), 1e-10);
      }
    }
  }
}

TEST(MaxEntangled, BellProjector) {
  const CMatrix m = max_entangled(2).matrix();
  for (Dim i : {0, 3})
    for (Dim j : {0, 3}) EXPECT_NEAR(m(i, j).real(), 0.5, 1e-15);
  EXPECT_NEAR(m.cwiseAbs().sum(), 2.0, 1e-15);
}

TEST(MaxEntangled, MarginalsAndPurity) {
  for (Dim d : {2, 3, 4}) {
    const QState p = max_entangled(d);
    EXPECT_LT(max_abs_diff(partial_trace(p, {1}).matrix(), CMatrix::Identity(d, d) / double(d)), 1e-15);
    EXPECT_LT(max_abs_diff(partial_trace(p, {0}).matrix(), CMatrix::Identity(d, d) / double(d)), 1e-15);
  }
  EXPECT_NEAR(max_entangled(3).purity(), 1.0, 1e-14);
}

TEST(OperatorSchmidt, Identity) {
  for (Dim d : {2, 3}) {
    const auto s = operator_schmidt(gates::identity(d), d);
    ASSERT_EQ(s.coeffs.size(), 1u);
    EXPECT_NEAR(s.coeffs[0], 1.0, 1e-12);
    // E and F equal I up to a compensating phase
    const Complex ph = s.left[0](0, 0);
    EXPECT_LT(max_abs_diff(s.left[0], ph * CMatrix::Identity(d, d)), 1e-12);
    EXPECT_LT(max_abs_diff(s.right[0], CMatrix::Identity(d, d) / ph), 1e-12);
  }
}

TEST(OperatorSchmidt, SwapHasFourEqualCoefficients) {
  const auto s = operator_schmidt(gates::swap(2), 2);
  ASSERT_EQ(s.coeffs.size(), 4u);
  for (double c : s.coeffs) EXPECT_NEAR(c, 0.5, 1e-12);
}

TEST(OperatorSchmidt, CnotHasTwoCoefficients) {
  const auto s = operator_schmidt(gates::cnot(2), 2);
  ASSERT_EQ(s.coeffs.size(), 2u);
  for (double c : s.coeffs) EXPECT_NEAR(c, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(OperatorSchmidt, ReconstructsRandomUnitaries) {
  auto rng = engine(21);
  for (int t = 0; t < 50; ++t) {
    const Dim d = 2 + t % 2;
    const CMatrix u = random::haar_unitary(d * d, rng);
    const auto s = operator_schmidt(u, d);
    EXPECT_LT(max_abs_diff(s.reconstruct(), u), 1e-8);
    double sum = 0;
    for (double c : s.coeffs) sum += c * c;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (std::size_t a = 0; a < s.coeffs.size(); ++a)
      for (std::size_t b = 0; b < s.coeffs.size(); ++b) {
        const Complex e = (s.left[a].adjoint() * s.left[b]).trace() / double(d);
        const Complex f = (s.right[a].adjoint() * s.right[b]).trace() / double(d);
        const double delta = a == b ? 1.0 : 0.0;
        EXPECT_LT(std::abs(e - delta), 1e-8);
        EXPECT_LT(std::abs(f - delta), 1e-8);
      }
  }
}

TEST(OperatorSchmidt, RejectsNonUnitary) {
  CMatrix m = gates::cnot(2);
  m(0, 0) = 2.0;
  EXPECT_THROW(operator_schmidt(m, 2), NonUnitaryError);
  EXPECT_THROW(operator_schmidt(CMatrix::Identity(3, 3), 2), DimensionError);
}

TEST(ApplyChannel, IdentityLeavesStateUnchanged) {
  auto rng = engine(22);
  const QState s = random::random_density({2, 3}, rng);
  EXPECT_LT(max_abs_diff(apply_channel(QChannel::identity(3), s, {1}).matrix(), s.matrix()), 1e-15);
}

TEST(ApplyChannel, DepolarizingOnMaximallyEntangled) {
  for (Dim d : {2, 3}) {
    const QState out = apply_channel(QChannel::completely_depolarizing(d), max_entangled(d), {0});
    EXPECT_LT(max_abs_diff(out.matrix(), CMatrix::Identity(d * d, d * d) / double(d * d)), 1e-14);
  }
}

TEST(ApplyChannel, DephasingOnBell) {
  const QState out = apply_channel(QChannel::dephasing(2), max_entangled(2), {1});
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;
  EXPECT_LT(max_abs_diff(out.matrix(), expect), 1e-15);
}

TEST(ApplyChannel, UnitalChannelFixesMaximallyMixed) {
  auto rng = engine(23);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = random::haar_unitary(4, rng);
    const QChannel e = e_tilde(u, 2);
    const QState out = apply_channel(e, QState::maximally_mixed({2, 2}), {1});
    EXPECT_LT(max_abs_diff(out.matrix(), CMatrix::Identity(4, 4) / 4.0), 1e-12);
  }
}

TEST(ApplyChannel, RejectsDimensionMismatch) {
  EXPECT_THROW(apply_channel(QChannel::identity(3), QState::maximally_mixed({2, 2}), {0}), DimensionError);
}

TEST(ChannelAdjoint, KnownCases) {
  const QChannel id = QChannel::identity(3);
  EXPECT_EQ(channel_adjoint(id).kraus().front(), id.kraus().front());
  auto rng = engine(24);
  const CMatrix u = random::haar_unitary(3, rng);
  const CMatrix x = random::ginibre(3, 3, rng);
  EXPECT_LT(max_abs_diff(channel_adjoint(QChannel::unitary(u))(x), u.adjoint() * x * u), 1e-14);
}

TEST(ChannelAdjoint, TracePairing) {
  auto rng = engine(25);
  for (int t = 0; t < 20; ++t) {
    const QChannel ch = random::random_channel(3, 1 + t % 4, rng);
    const CMatrix a = random::ginibre(3, 3, rng), b = random::ginibre(3, 3, rng);
    const Complex lhs = (a.adjoint() * ch(b)).trace();
    const Complex rhs = (channel_adjoint(ch)(a).adjoint() * b).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-9);
  }
}

TEST(TransferMatrix, IdentityAndDepolarizing) {
  const auto basis = OperatorBasis::pauli(2);
  const std::span<const CMatrix> b(basis.traceless);
  EXPECT_LT(max_abs_diff(transfer_matrix(QChannel::identity(2), b), CMatrix::Identity(3, 3)), 1e-15);
  EXPECT_LT(transfer_matrix(QChannel::completely_depolarizing(2), b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransferMatrix, DephasingInXYZOrder) {
  const std::vector<CMatrix> xyz{testing::pauli_x(), testing::pauli_y(), testing::pauli_z()};
  CMatrix expect = CMatrix::Zero(3, 3);
  expect(2, 2) = 1.0;
  EXPECT_LT(max_abs_diff(transfer_matrix(QChannel::dephasing(2), std::span<const CMatrix>(xyz)), expect), 1e-15);
}

TEST(TransferMatrix, CompositionIsMatrixProduct) {
  auto rng = engine(26);
  for (Dim d : {2, 3}) {
    const auto full = OperatorBasis::pauli(d).full();
    const std::span<const CMatrix> b(full);
    for (int t = 0; t < 10; ++t) {
      const QChannel x = random::random_channel(d, 2, rng), y = random::random_channel(d, 3, rng);
      EXPECT_LT(max_abs_diff(transfer_matrix(compose(x, y), b), transfer_matrix(x, b) * transfer_matrix(y, b)), 1e-9);
    }
  }
}

TEST(TransferMatrix, PauliListOverloadAgrees) {
  auto rng = engine(27);
  const QChannel ch = random::random_channel(3, 2, rng);
  const auto full = OperatorBasis::pauli(3).full();
  EXPECT_LT(max_abs_diff(transfer_matrix(ch, pauli_basis(3)), transfer_matrix(ch, std::span<const CMatrix>(full))),
            1e-15);
}

TEST(QChannelChecks, RandomChannelsAreTracePreserving) {
  auto rng = engine(28);
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(random::random_channel(3, 1 + t % 3, rng).is_trace_preserving());
  EXPECT_THROW(QChannel({CMatrix::Identity(2, 3)}, 2, 2), DimensionError);
}

}  // namespace
}  // namespace mlocc
