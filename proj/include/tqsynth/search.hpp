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

#include <cstdint>
#include <string>
#include <vector>

#include "tqsynth/circuit.hpp"

namespace tqsynth {

enum class GradientMode { analytic, finite_difference };

struct SearchConfig {
    int restarts = 20;
    int max_iterations = 2000;
    double convergence_tol = 1e-12;  // stop when an accepted step improves less than this
    std::uint64_t seed = 0;
    GradientMode gradient = GradientMode::analytic;
    double fd_step = 1e-6;  // central-difference step for the finite_difference mode
    int threads = 0;        // 0 = hardware concurrency; restarts reduce in index order
    bool record_trace = false;
};

/// Multi-start local optimization outcome for one circuit structure.
/// per_restart holds the final objective of every restart in restart order;
/// reruns with the same config and seed reproduce it bit for bit.
/// best_infidelity always equals infidelity(circuit_unitary(best_circuit),
/// target) recomputed through the public circuit path.
struct SearchResult {
    StructureSignature structure;
    double best_infidelity;
    Circuit best_circuit;
    std::vector<double> per_restart;
    std::vector<int> iterations_used;
    std::vector<std::vector<double>> traces;  // accepted objectives, only if record_trace
};

struct StructureEvidence {
    StructureSignature structure;
    double best_infidelity;
    std::vector<double> per_restart;
};

/// Numerical (not proof-grade) optimality evidence: best infidelity floors
/// per gate count k. floors[k-1] is the best value over all structures with
/// at most k gates, hence non-increasing. verdict_k is the smallest k whose
/// floor is below the positive threshold, or -1 if none is.
struct OptimalityReport {
    std::string target_name;
    int k_max;
    std::uint64_t seed;
    int restarts;
    std::vector<StructureEvidence> structures;
    std::vector<double> floors;
    int verdict_k;
    std::string verdict;
    double negative_threshold = 1e-3;
    double positive_threshold = 1e-6;
};

/// All length-k pair sequences without adjacent repeats (3 * 2^(k-1) of
/// them), in lexicographic AB < AC < BC order. k >= 1.
std::vector<StructureSignature> enumerate_structures(int k);

/// Seeded multi-start local descent over the 15-parameters-per-gate chart
/// U_g = exp(i sum_j p_j P_j), P_j the non-identity two-qubit Pauli products
/// in lexicographic order. Minimizes 1 - |tr(target^dag U(p))| / 8.
/// When witness_params (15 * k values) is given it replaces the random
/// start of restart 0. Throws std::invalid_argument unless target is an
/// 8x8 unitary.
SearchResult optimize_structure(const ComplexMatrix& target, const StructureSignature& structure,
                                const SearchConfig& cfg,
                                const std::vector<double>* witness_params = nullptr);

/// Runs optimize_structure over every structure with 1 <= k <= k_max
/// (k_max <= 6) and aggregates floors and a verdict. A witness circuit, when
/// given, seeds restart 0 of the structure matching its merged signature.
OptimalityReport optimality_evidence(const ComplexMatrix& target, const std::string& target_name,
                                     int k_max, const SearchConfig& cfg,
                                     const Circuit* witness = nullptr);

std::string report_to_json(const OptimalityReport& r);

/// Chart helpers, exposed for testing: exp(i sum p_j P_j) and its log-chart
/// projection (gate recovered up to global phase).
Matrix4 su4_from_params(const double* p);
std::vector<double> params_from_gate(const Matrix4& u);

}  // namespace tqsynth
