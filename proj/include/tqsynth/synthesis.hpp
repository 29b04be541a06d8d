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

#include <string>
#include <vector>

#include "tqsynth/circuit.hpp"

namespace tqsynth {

/// Classification of a doubly controlled one-qubit gate CC-u by the
/// eigenstructure of u. count is the minimal number of two-qubit gates
/// needed: 0 (identity), 1 (scalar phase), 4 (unit determinant, distinct
/// eigenvalues) or 5 (everything else).
struct CcuClass {
    double theta1;  // eigenphases of u, sorted, in [0, 2*pi)
    double theta2;
    double det_phase;  // theta1 + theta2 mod 2*pi
    int count;
    Eigen::Matrix2cd basis_change;  // u = P diag(e^{i t1}, e^{i t2}) P^dag
    std::string optimality;
};

/// Named 8- or 4-dimensional target for synthesis and verification.
/// fredkin / toffoli / ccu-diag are 8x8; w / r / swap are 4x4 primitives.
struct GateCatalogEntry {
    std::string name;
    ComplexMatrix unitary;
};

/// Minimal number of two-qubit gates that can reach a generic n-qubit
/// unitary: ceil((4^n - 3n - 1) / 9). Domain 2 <= n <= 31 (the numerator
/// overflows 64-bit beyond that).
long long lower_bound(int n);

/// Classifies CC-u. Throws std::invalid_argument unless u is a 2x2 unitary.
CcuClass classify_ccu(const Eigen::Matrix2cd& u);

/// Principal square root of a unitary: eigenphases taken in [0, 2*pi) and
/// halved, so sqrt(X) = [[1+i, 1-i], [1-i, 1+i]] / 2.
ComplexMatrix sqrt_unitary(const ComplexMatrix& u);

/// Five-gate circuit for CC-u, any one-qubit unitary u: with W^2 = u,
/// [CW on BC, CNOT on AB, CW^dag on BC, CNOT on AB, CW on AC].
Circuit synth_ccu_five(const Eigen::Matrix2cd& u);

/// Four-gate circuit for the diagonal target V(-theta, theta):
/// [U_BC^dag, CW on AC, U_BC, CW on AC] with W = diag(e^{-i theta/2},
/// e^{i theta/2}) and U_BC the B-anticontrolled NOT on C, which conjugates
/// I (x) W into the diagonal the construction needs.
Circuit synth_ccu_four(double theta);

/// One-gate circuit for CC-(e^{i theta} I): the AB gate diag(1,1,1,e^{i theta}).
Circuit synth_ccu_one(double theta);

/// Dispatch on classify_ccu: emits 0, 1, 4 or 5 gates implementing CC-u
/// itself (the basis change of u is folded into the gates touching C).
Circuit synth_ccu(const Eigen::Matrix2cd& u);

/// Five-gate Fredkin circuit: the seven-gate controlled-sqrt(X) sequence
/// with its two adjacent BC pairs merged.
Circuit synth_fredkin();

/// CC-u on the full register: identity except the |11x> block, which is u.
Matrix8 ccu_matrix(const Eigen::Matrix2cd& u);

/// Named targets: "fredkin", "toffoli", "swap" (no params),
/// "ccu-diag" {theta1, theta2}, "w" {theta}, "r" {theta1, theta2}.
/// Angles in radians. Throws std::invalid_argument on unknown names or a
/// wrong parameter count.
GateCatalogEntry make_target(const std::string& name, const std::vector<double>& params = {});

}  // namespace tqsynth
