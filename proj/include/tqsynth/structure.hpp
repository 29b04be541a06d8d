// Copyright 2026 The tqsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <optional>

#include "tqsynth/circuit.hpp"

namespace tqsynth {

/// u = |0><0|_q (x) block0 + |1><1|_q (x) block1 in the computational basis,
/// with q the controlling qubit (0=A, 1=B, 2=C on 8 dims; 0/1 on 4 dims).
/// Blocks act on the remaining qubits in their natural order.
struct ControlledForm {
    int control;
    ComplexMatrix block0;
    ComplexMatrix block1;
};

/// A product state a*psi1 + b*psi2 = f1 (x) f2 found inside a 2-dim span.
/// The state is unit-norm with the coefficient a real and nonnegative;
/// residual is the second Schmidt coefficient of the state (0 = exact
/// product up to roundoff).
struct ProductWitness {
    cplx a;
    cplx b;
    Eigen::Vector4cd state;
    Eigen::Vector2cd f1;
    Eigen::Vector2cd f2;
    double residual;
};

/// Local factors of a controlled pair product U_AB * U_AC =
/// |0><0|_A (x) (v0 (x) w0) + |1><1|_A (x) (v1 (x) w1).
/// The v factors (first slot) carry unit determinant.
struct ControlledPairFactors {
    Eigen::Matrix2cd v0, w0, v1, w1;
    double residual0, residual1;
};

/// Canonical two-qubit decomposition
///   u = e^{i global_phase} (u_a (x) u_b) * exp(i sum_k alpha_k s_k (x) s_k)
///       * (v_a (x) v_b),   s = (X, Y, Z),
/// with all four locals in SU(2) and alpha in the Weyl chamber
/// pi/4 >= alpha_x >= alpha_y >= |alpha_z|.
struct KakDecomposition {
    Eigen::Matrix2cd u_a, u_b, v_a, v_b;
    std::array<double, 3> alpha;
    double global_phase;
};

/// Detects block-diagonal (controlled) structure with respect to the given
/// control qubit. Returns the two diagonal blocks when both off-diagonal
/// blocks have Frobenius norm below tol, nullopt otherwise. Throws
/// std::invalid_argument when u is not unitary, not 4x4/8x8, or the control
/// index is out of range for the dimension.
std::optional<ControlledForm> detect_controlled(const ComplexMatrix& u, int control,
                                                double tol = 1e-9);

/// Finds a product state in span{psi1, psi2} by solving the determinant
/// quadratic det(a M1 + b M2) = 0 for the 2x2 reshapes M of the states.
/// Root selection is deterministic: larger |a| first, ties broken by larger
/// Re(b); an identically-zero quadratic returns (a, b) = (1, 0).
ProductWitness product_state_in_span(const Eigen::Vector4cd& psi1, const Eigen::Vector4cd& psi2);

/// Expands U_AB * U_AC on the full register and, when the product is
/// A-controlled with product-form blocks (Schmidt residual < 1e-8), returns
/// the four local factors. Throws std::invalid_argument when the gates do
/// not carry the AB and AC pair tags.
std::optional<ControlledPairFactors> factor_controlled_pair(const TwoQubitGate& g_ab,
                                                            const TwoQubitGate& g_ac);

/// True iff the spectrum of the 4x4 unitary u is {z1, z1, z2, z2} (each
/// eigenvalue twice), matched within tol on the unit circle. This is the
/// spectral signature of w (x) I for one-qubit w, up to global phase.
bool has_local_spectrum(const ComplexMatrix& u, double tol = 1e-8);

/// Canonical (KAK) decomposition of a 4x4 unitary. Reconstruction agrees
/// with the input to phase_distance < 1e-9 (exactly, not just up to phase:
/// the global_phase field carries the phase).
KakDecomposition kak_decompose(const ComplexMatrix& u);

/// Rebuilds the 4x4 unitary from a decomposition. The interaction part is
/// exponentiated directly from the Hermitian generator, deliberately not
/// sharing the magic-basis route used by kak_decompose.
Matrix4 kak_reconstruct(const KakDecomposition& k);

}  // namespace tqsynth
