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

#include "tqsynth/circuit.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace tqsynth {

using nlohmann::json;

const char* to_string(PairClass p) {
    switch (p) {
        case PairClass::AB: return "AB";
        case PairClass::AC: return "AC";
        case PairClass::BC: return "BC";
    }
    throw std::logic_error("bad PairClass");
}

PairClass pair_from_string(const std::string& s) {
    if (s == "AB") return PairClass::AB;
    if (s == "AC") return PairClass::AC;
    if (s == "BC") return PairClass::BC;
    throw std::invalid_argument("unknown pair class '" + s + "'");
}

Matrix8 embed(PairClass pair, const Matrix4& m) {
    Matrix8 out = Matrix8::Zero();
    // Full index is 4a + 2b + c. The spectator qubit contributes a Kronecker
    // delta; the pair's own index keeps the first letter slow.
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int b2 = 0; b2 < 2; ++b2)
                        for (int c2 = 0; c2 < 2; ++c2) {
                            cplx v;
                            switch (pair) {
                                case PairClass::AB:
                                    v = (c == c2) ? m(2 * a + b, 2 * a2 + b2) : 0.0;
                                    break;
                                case PairClass::AC:
                                    v = (b == b2) ? m(2 * a + c, 2 * a2 + c2) : 0.0;
                                    break;
                                case PairClass::BC:
                                    v = (a == a2) ? m(2 * b + c, 2 * b2 + c2) : 0.0;
                                    break;
                            }
                            out(4 * a + 2 * b + c, 4 * a2 + 2 * b2 + c2) = v;
                        }
    return out;
}

Matrix8 circuit_unitary(const Circuit& c) {
    Matrix8 u = Matrix8::Identity();
    for (const auto& g : c.gates) u = embed(g.pair, g.matrix) * u;
    return u;
}

namespace {

// True iff m = e^{i phi} I within 1e-12 in Frobenius norm; reports the phase.
bool phase_identity(const Matrix4& m, cplx& phase) {
    cplx t = m.trace();
    if (std::abs(t) < 3.9) return false;
    cplx ph = t / std::abs(t);
    if ((m - ph * Matrix4::Identity()).norm() >= 1e-12) return false;
    phase = ph;
    return true;
}

std::string join_labels(const std::string& later, const std::string& earlier) {
    if (later.empty()) return earlier;
    if (earlier.empty()) return later;
    return later + "*" + earlier;
}

}  // namespace

Circuit merge_adjacent(const Circuit& c) {
    std::vector<TwoQubitGate> out;
    cplx carried_phase = 1.0;

    for (const auto& gate : c.gates) {
        TwoQubitGate g = gate;
        for (;;) {
            cplx ph;
            if (phase_identity(g.matrix, ph)) {
                carried_phase *= ph;
                break;
            }
            if (!out.empty() && out.back().pair == g.pair) {
                g.matrix = (g.matrix * out.back().matrix).eval();
                g.label = join_labels(g.label, out.back().label);
                out.pop_back();
                continue;
            }
            out.push_back(g);
            break;
        }
    }

    // Phases from dropped gates must not change the expansion; park them on
    // a surviving gate, or on an explicit carrier if nothing survived.
    if (std::abs(carried_phase - 1.0) > 1e-12) {
        if (!out.empty()) {
            out.front().matrix *= carried_phase;
        } else {
            out.push_back({PairClass::AB, carried_phase * Matrix4::Identity(), "phase"});
        }
    }
    return Circuit{std::move(out)};
}

StructureSignature signature_of(const Circuit& c) {
    StructureSignature s;
    s.pairs.reserve(c.gates.size());
    for (const auto& g : c.gates) s.pairs.push_back(g.pair);
    return s;
}

long long dof_count(const StructureSignature& sig, int n) {
    if (n < 0) throw std::invalid_argument("dof_count: n must be nonnegative");
    return 9LL * sig.k() + 3LL * n;
}

std::string serialize(const Circuit& c) {
    json j;
    j["qubits"] = {"A", "B", "C"};
    json gates = json::array();
    for (const auto& g : c.gates) {
        json jg;
        jg["pair"] = to_string(g.pair);
        if (!g.label.empty()) jg["label"] = g.label;
        json m = json::array();
        for (int r = 0; r < 4; ++r) {
            json row = json::array();
            for (int col = 0; col < 4; ++col)
                row.push_back({g.matrix(r, col).real(), g.matrix(r, col).imag()});
            m.push_back(row);
        }
        jg["matrix"] = m;
        gates.push_back(jg);
    }
    j["gates"] = gates;
    return j.dump(2);
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& why) {
    throw CircuitParseError(path + ": " + why);
}

double number_at(const json& v, const std::string& path) {
    if (!v.is_number()) parse_fail(path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) parse_fail(path, "number is not finite");
    return d;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CircuitParseError(std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
    } catch (const json::exception& e) {
        // e.g. number overflow, which nlohmann reports outside parse_error
        throw CircuitParseError(std::string("$: ") + e.what());
    }

    if (!j.is_object()) parse_fail("$", "expected an object");
    if (!j.contains("qubits")) parse_fail("qubits", "missing");
    if (j["qubits"] != json({"A", "B", "C"}))
        parse_fail("qubits", "expected [\"A\",\"B\",\"C\"]");
    if (!j.contains("gates") || !j["gates"].is_array()) parse_fail("gates", "expected an array");

    Circuit c;
    int i = 0;
    for (const auto& jg : j["gates"]) {
        const std::string at = "gates[" + std::to_string(i) + "]";
        if (!jg.is_object()) parse_fail(at, "expected an object");
        if (!jg.contains("pair") || !jg["pair"].is_string()) parse_fail(at + ".pair", "expected a string");
        TwoQubitGate g;
        try {
            g.pair = pair_from_string(jg["pair"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            parse_fail(at + ".pair", e.what());
        }
        if (jg.contains("label")) {
            if (!jg["label"].is_string()) parse_fail(at + ".label", "expected a string");
            g.label = jg["label"].get<std::string>();
        }
        if (!jg.contains("matrix") || !jg["matrix"].is_array() || jg["matrix"].size() != 4)
            parse_fail(at + ".matrix", "expected 4 rows");
        for (int r = 0; r < 4; ++r) {
            const auto& row = jg["matrix"][r];
            const std::string rat = at + ".matrix[" + std::to_string(r) + "]";
            if (!row.is_array() || row.size() != 4) parse_fail(rat, "expected 4 entries");
            for (int col = 0; col < 4; ++col) {
                const auto& e = row[col];
                const std::string eat = rat + "[" + std::to_string(col) + "]";
                if (!e.is_array() || e.size() != 2) parse_fail(eat, "expected [re, im]");
                g.matrix(r, col) = cplx(number_at(e[0], eat + "[0]"), number_at(e[1], eat + "[1]"));
            }
        }
        c.gates.push_back(std::move(g));
        ++i;
    }

    for (int k = 0; k < static_cast<int>(c.gates.size()); ++k) {
        if (!is_unitary(ComplexMatrix(c.gates[k].matrix), 1e-10))
            throw CircuitValidationError(
                "gate " + std::to_string(k) + ": matrix is not unitary within 1e-10", k);
    }
    return c;
}

std::string export_text(const Circuit& c) {
    std::ostringstream os;
    os.precision(17);
    os << "// qubits A, B, C; basis |abc> at index 4a+2b+c\n";
    os << "// " << c.gates.size() << " two-qubit gate(s), temporal order\n";
    int i = 0;
    for (const auto& g : c.gates) {
        os << "gate " << i++ << " " << to_string(g.pair);
        if (!g.label.empty()) os << "  // " << g.label;
        os << "\n";
        for (int r = 0; r < 4; ++r) {
            os << "  ";
            for (int col = 0; col < 4; ++col) {
                cplx v = g.matrix(r, col);
                os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
                if (col != 3) os << " ";
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace tqsynth
