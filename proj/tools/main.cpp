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

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tqsynth/circuit.hpp"
#include "tqsynth/search.hpp"
#include "tqsynth/structure.hpp"
#include "tqsynth/synthesis.hpp"

namespace {

using nlohmann::json;
using namespace tqsynth;

// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 input validation error.
constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kUsage = 2;
constexpr int kBadInput = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_stream_or_file(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ComplexMatrix parse_matrix_json(const std::string& text, int dim, const std::string& what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(what + ": " + e.what());
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw InputError(what + ": expected " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
            throw InputError(what + ": row " + std::to_string(r) + ": expected " +
                             std::to_string(dim) + " entries");
        for (int c = 0; c < dim; ++c) {
            const auto& e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw InputError(what + ": entry [" + std::to_string(r) + "][" +
                                 std::to_string(c) + "]: expected [re, im]");
            double re = e[0].get<double>(), im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw InputError(what + ": entry [" + std::to_string(r) + "][" +
                                 std::to_string(c) + "]: not finite");
            m(r, c) = cplx(re, im);
        }
    }
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

// One-qubit u given as a named gate, --diag angles, or an inline JSON 2x2.
struct USpec {
    std::string named;
    std::vector<double> diag;
    std::string inline_json;

    bool present() const { return !named.empty() || !diag.empty() || !inline_json.empty(); }

    Eigen::Matrix2cd build() const {
        int given = (!named.empty()) + (!diag.empty()) + (!inline_json.empty());
        if (given != 1) throw CLI::ValidationError("give exactly one of --u / --diag");
        Eigen::Matrix2cd u;
        if (!named.empty()) {
            if (named == "X")
                u << 0, 1, 1, 0;
            else if (named == "Y")
                u << 0, cplx(0, -1), cplx(0, 1), 0;
            else if (named == "Z")
                u << 1, 0, 0, -1;
            else if (named == "H") {
                const double s = 1.0 / std::sqrt(2.0);
                u << s, s, s, -s;
            } else if (named == "I")
                u = Eigen::Matrix2cd::Identity();
            else
                u = Eigen::Matrix2cd(parse_matrix_json(named, 2, "--u"));
        } else if (!diag.empty()) {
            u = Eigen::Matrix2cd::Zero();
            u(0, 0) = std::exp(cplx(0, diag[0]));
            u(1, 1) = std::exp(cplx(0, diag[1]));
        }
        if (!inline_json.empty()) u = Eigen::Matrix2cd(parse_matrix_json(inline_json, 2, "--u"));
        if (!is_unitary(ComplexMatrix(u), 1e-9)) throw InputError("u is not unitary within 1e-9");
        return u;
    }
};

// Target families shared by synth / verify / evidence.
struct TargetSpec {
    std::string family;  // "fredkin" or "ccu"; empty with target_file
    std::string target_file;
    USpec u;

    std::string describe() const {
        if (!target_file.empty()) return target_file;
        if (family == "fredkin") return "fredkin";
        return "ccu";
    }

    Matrix8 build() const {
        if (!target_file.empty()) {
            ComplexMatrix m = parse_matrix_json(read_stream_or_file(target_file), 8, target_file);
            if (!is_unitary(m, 1e-9)) throw InputError(target_file + ": not unitary within 1e-9");
            return Matrix8(m);
        }
        if (family == "fredkin") return Matrix8(make_target("fredkin").unitary);
        if (family == "ccu") return ccu_matrix(u.build());
        throw CLI::ValidationError("target must be fredkin or ccu");
    }

    // Known-good construction for the family, used for the self-check loop
    // and as the search witness. Absent for file targets.
    std::optional<Circuit> construction() const {
        if (!target_file.empty()) return std::nullopt;
        if (family == "fredkin") return synth_fredkin();
        return synth_ccu(u.build());
    }
};

void add_uspec(CLI::App* cmd, USpec& u) {
    cmd->add_option("--u", u.named, "one-qubit u: X, Y, Z, H, I or inline JSON 2x2 of [re,im]");
    cmd->add_option("--diag", u.diag, "one-qubit u = diag(e^{i t1}, e^{i t2}), radians")
        ->expected(2);
}

int cmd_lower_bound(int n) {
    try {
        std::cout << lower_bound(n) << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << "lower-bound: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

int cmd_synth(const TargetSpec& spec) {
    Matrix8 target = spec.build();
    std::optional<Circuit> c = spec.construction();
    if (!c) throw InputError("synth needs a named target family");
    double d = phase_distance(ComplexMatrix(circuit_unitary(*c)), ComplexMatrix(target));
    if (!(d < 1e-9)) {
        std::cerr << "synth: self-check failed, phase_distance = " << d << "\n";
        return kVerifyFail;
    }
    std::cout << serialize(*c) << "\n";
    return kOk;
}

int cmd_classify(const USpec& u) {
    CcuClass c = classify_ccu(u.build());
    json j;
    j["count"] = c.count;
    j["theta1"] = c.theta1;
    j["theta2"] = c.theta2;
    j["det_phase"] = c.det_phase;
    j["basis_change"] = matrix_to_json(ComplexMatrix(c.basis_change));
    j["optimality"] = c.optimality;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_verify(const TargetSpec& spec, const std::string& circuit_path) {
    Matrix8 target = spec.build();
    Circuit c = parse_circuit(read_stream_or_file(circuit_path));
    Circuit merged = merge_adjacent(c);
    double d = phase_distance(ComplexMatrix(circuit_unitary(c)), ComplexMatrix(target));
    bool pass = d < 1e-9;
    json j;
    j["target"] = spec.describe();
    j["gates"] = c.gates.size();
    j["merged_gates"] = merged.gates.size();
    j["phase_distance"] = d;
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? kOk : kVerifyFail;
}

int cmd_evidence(const TargetSpec& spec, int kmax, std::uint64_t seed, int restarts,
                 bool finite_difference) {
    Matrix8 target = spec.build();
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    if (finite_difference) cfg.gradient = GradientMode::finite_difference;
    std::optional<Circuit> witness = spec.construction();
    OptimalityReport rep = optimality_evidence(target, spec.describe(), kmax, cfg,
                                               witness ? &*witness : nullptr);
    std::cout << report_to_json(rep) << "\n";
    return kOk;
}

int cmd_kak(const std::string& path) {
    ComplexMatrix m = parse_matrix_json(read_stream_or_file(path), 4, path.empty() ? "-" : path);
    KakDecomposition k = kak_decompose(m);
    json j;
    j["alpha"] = {k.alpha[0], k.alpha[1], k.alpha[2]};
    j["global_phase"] = k.global_phase;
    j["u_a"] = matrix_to_json(ComplexMatrix(k.u_a));
    j["u_b"] = matrix_to_json(ComplexMatrix(k.u_b));
    j["v_a"] = matrix_to_json(ComplexMatrix(k.v_a));
    j["v_b"] = matrix_to_json(ComplexMatrix(k.v_b));
    double residual = (kak_reconstruct(k) - Matrix4(m)).norm();
    j["reconstruction_residual"] = residual;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit-gate synthesis toolkit for three-qubit targets"};
    app.require_subcommand(1);

    int lb_n = 0;
    CLI::App* lb = app.add_subcommand("lower-bound",
                                      "print the minimal two-qubit gate count for n qubits");
    lb->add_option("n", lb_n, "number of qubits (>= 2)")->required();

    TargetSpec synth_spec;
    CLI::App* synth = app.add_subcommand("synth", "emit a verified circuit for a named target");
    synth->add_option("target", synth_spec.family, "fredkin or ccu")->required();
    add_uspec(synth, synth_spec.u);

    USpec classify_u;
    CLI::App* classify = app.add_subcommand("classify",
                                            "classify CC-u by the eigenstructure of u");
    add_uspec(classify, classify_u);

    TargetSpec verify_spec;
    std::string verify_circuit;
    CLI::App* verify = app.add_subcommand("verify", "check a circuit JSON against a target");
    verify->add_option("target", verify_spec.family, "fredkin or ccu (omit with --target-file)");
    add_uspec(verify, verify_spec.u);
    verify->add_option("--target-file", verify_spec.target_file,
                       "file with an 8x8 unitary as JSON rows of [re,im]");
    verify->add_option("circuit", verify_circuit, "circuit JSON file, - or absent for stdin");

    TargetSpec ev_spec;
    int ev_kmax = 4;
    std::uint64_t ev_seed = 0;
    int ev_restarts = 20;
    bool ev_fd = false;
    CLI::App* evidence = app.add_subcommand("evidence",
                                            "numerical optimality evidence across gate counts");
    evidence->add_option("target", ev_spec.family, "fredkin or ccu (omit with --target-file)");
    add_uspec(evidence, ev_spec.u);
    evidence->add_option("--target-file", ev_spec.target_file,
                         "file with an 8x8 unitary as JSON rows of [re,im]");
    evidence->add_option("--kmax", ev_kmax, "largest gate count to search (1..6)");
    evidence->add_option("--seed", ev_seed, "RNG seed; identical seeds reproduce the report");
    evidence->add_option("--restarts", ev_restarts, "restarts per structure");
    evidence->add_flag("--finite-difference", ev_fd,
                       "use central differences instead of the analytic gradient");

    std::string kak_path;
    CLI::App* kak = app.add_subcommand("kak", "canonical decomposition of a 4x4 unitary");
    kak->add_option("matrix", kak_path, "file with a 4x4 unitary as JSON rows of [re,im]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (lb->parsed()) return cmd_lower_bound(lb_n);
        if (synth->parsed()) return cmd_synth(synth_spec);
        if (classify->parsed()) return cmd_classify(classify_u);
        if (verify->parsed()) {
            if (verify_spec.family.empty() == verify_spec.target_file.empty()) {
                std::cerr << "verify: give a target family or --target-file\n";
                return kUsage;
            }
            return cmd_verify(verify_spec, verify_circuit);
        }
        if (evidence->parsed()) {
            if (ev_spec.family.empty() == ev_spec.target_file.empty()) {
                std::cerr << "evidence: give a target family or --target-file\n";
                return kUsage;
            }
            if (ev_kmax < 1 || ev_kmax > 6) {
                std::cerr << "evidence: --kmax must be in [1, 6]\n";
                return kUsage;
            }
            if (ev_restarts < 1) {
                std::cerr << "evidence: --restarts must be >= 1\n";
                return kUsage;
            }
            return cmd_evidence(ev_spec, ev_kmax, ev_seed, ev_restarts, ev_fd);
        }
        if (kak->parsed()) return cmd_kak(kak_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const CircuitParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kBadInput;
    } catch (const CircuitValidationError& e) {
        std::cerr << "invalid circuit: " << e.what() << "\n";
        return kBadInput;
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kUsage;
}
