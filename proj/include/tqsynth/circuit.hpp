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

#include <stdexcept>
#include <string>
#include <vector>

#include "tqsynth/linalg.hpp"

namespace tqsynth {

// Conventions used throughout:
//  - qubits are A, B, C with basis state |abc> at index 4a + 2b + c
//    (A is the slow index);
//  - gate lists are in temporal order, so the circuit unitary is the
//    reversed matrix product G_k * ... * G_2 * G_1.

/// Which pair of the three qubits a two-qubit gate acts on. The first letter
/// is the slow index of the gate's own 4x4 matrix.
enum class PairClass { AB, AC, BC };

const char* to_string(PairClass p);
PairClass pair_from_string(const std::string& s);

struct TwoQubitGate {
    PairClass pair;
    Matrix4 matrix;
    std::string label;  // optional annotation, empty means absent
};

struct Circuit {
    std::vector<TwoQubitGate> gates;
};

/// Pair tags of a circuit in temporal order; k() is the gate count.
struct StructureSignature {
    std::vector<PairClass> pairs;
    int k() const { return static_cast<int>(pairs.size()); }
    bool operator==(const StructureSignature&) const = default;
};

/// Malformed serialized circuit (syntax or schema); the message carries the
/// location (byte offset or JSON path).
struct CircuitParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally valid circuit with bad content (e.g. a non-unitary gate);
/// gate_index names the offending gate.
struct CircuitValidationError : std::runtime_error {
    int gate_index;
    CircuitValidationError(const std::string& msg, int index)
        : std::runtime_error(msg), gate_index(index) {}
};

/// Lifts a 4x4 gate on the given pair to the full 8-dimensional register,
/// identity on the spectator qubit.
Matrix8 embed(PairClass pair, const Matrix4& m);

/// Product of the embedded gates in reverse list order (temporal semantics).
/// An empty circuit gives the identity.
Matrix8 circuit_unitary(const Circuit& c);

/// Multiplies adjacent gates that share a pair class and drops gates equal
/// to the identity up to global phase (phase_distance < 1e-12); dropped
/// phases are folded into a remaining gate so the expansion is preserved
/// exactly. Runs to a fixpoint.
Circuit merge_adjacent(const Circuit& c);

StructureSignature signature_of(const Circuit& c);

/// Real optimization degrees of freedom of a k-gate circuit template with n
/// marked local slots: 9k + 3n.
long long dof_count(const StructureSignature& sig, int n);

/// Circuit -> JSON document (schema below). Doubles round-trip bit-exactly.
///
///   {"qubits": ["A","B","C"],
///    "gates": [{"pair": "BC", "label": "cx",
///               "matrix": [[[re,im], ...4], ...4]}, ...]}
std::string serialize(const Circuit& c);

/// Inverse of serialize. Throws CircuitParseError on malformed input and
/// CircuitValidationError when a gate fails the unitarity check (1e-10).
Circuit parse_circuit(const std::string& text);

/// Human-readable QASM-like listing. Export only; there is no parser for it.
std::string export_text(const Circuit& c);

}  // namespace tqsynth
