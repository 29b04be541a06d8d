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

#include "tqsynth/synthesis.hpp"

#include <cmath>
#include <stdexcept>

namespace tqsynth {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2 * kPi;

using Eigen::Matrix2cd;

Matrix2cd eitheta(double t1, double t2) {
    Matrix2cd d = Matrix2cd::Zero();
    d(0, 0) = std::exp(cplx(0, t1));
    d(1, 1) = std::exp(cplx(0, t2));
    return d;
}

/// 4x4 gate applying w on the second qubit when the first is 1.
Matrix4 controlled(const Matrix2cd& w) {
    Matrix4 g = Matrix4::Identity();
    g.block<2, 2>(2, 2) = w;
    return g;
}

/// 4x4 gate applying w on the second qubit when the first is 0.
Matrix4 anticontrolled(const Matrix2cd& w) {
    Matrix4 g = Matrix4::Identity();
    g.block<2, 2>(0, 0) = w;
    return g;
}

const Matrix2cd& pauli_x() {
    static const Matrix2cd x = (Matrix2cd() << 0, 1, 1, 0).finished();
    return x;
}

/// CNOT with the *second* qubit of the pair controlling the first.
Matrix4 cnot_second_controls_first() {
    Matrix4 g = Matrix4::Zero();
    g(0, 0) = 1;  // |00> -> |00>
    g(1, 3) = 1;  // |11> -> |01>
    g(2, 2) = 1;  // |10> -> |10>
    g(3, 1) = 1;  // |01> -> |11>
    return g;
}

}  // namespace

long long lower_bound(int n) {
    if (n < 2) throw std::invalid_argument("lower_bound: need n >= 2");
    if (n > 31) throw std::invalid_argument("lower_bound: n > 31 overflows the 64-bit numerator");
    const long long num = (1LL << (2 * n)) - 3LL * n - 1;
    return (num + 8) / 9;  // ceil for a nonnegative numerator
}

CcuClass classify_ccu(const Matrix2cd& u) {
    if (!is_unitary(ComplexMatrix(u), 1e-10))
        throw std::invalid_argument("classify_ccu: u must be a 2x2 unitary");

    const auto es = eig_unitary(u);
    const cplx z1 = es.eigenvalues(0), z2 = es.eigenvalues(1);

    CcuClass c;
    c.theta1 = std::arg(z1);
    c.theta2 = std::arg(z2);
    if (c.theta1 < 0) c.theta1 += kTwoPi;
    if (c.theta2 < 0) c.theta2 += kTwoPi;
    c.det_phase = std::fmod(c.theta1 + c.theta2, kTwoPi);
    c.basis_change = es.eigenvectors;

    // Tolerances compare points on the unit circle, not raw angles.
    const double tol = 1e-9;
    const bool id1 = std::abs(z1 - 1.0) < tol;
    const bool id2 = std::abs(z2 - 1.0) < tol;
    const bool degenerate = std::abs(z1 - z2) < tol;
    const bool det_one = std::abs(z1 * z2 - 1.0) < tol;

    if (id1 && id2) {
        c.count = 0;
        c.optimality = "identity; zero gates";
    } else if (degenerate) {
        c.count = 1;
        c.optimality = "scalar phase; one diagonal AB gate is enough and necessary";
    } else if (det_one) {
        c.count = 4;
        c.optimality = "unit determinant, distinct eigenvalues; construction meets the matching lower bound 4";
    } else {
        c.count = 5;
        c.optimality = "generic case; construction meets the matching lower bound 5";
    }
    return c;
}

ComplexMatrix sqrt_unitary(const ComplexMatrix& u) {
    const auto es = eig_unitary(u);
    ComplexVector half(es.eigenvalues.size());
    for (Eigen::Index j = 0; j < half.size(); ++j) {
        double p = std::arg(es.eigenvalues(j));
        if (p < 0) p += kTwoPi;
        half(j) = std::exp(cplx(0, p / 2.0));
    }
    return es.eigenvectors * half.asDiagonal() * es.eigenvectors.adjoint();
}

Circuit synth_ccu_five(const Matrix2cd& u) {
    if (!is_unitary(ComplexMatrix(u), 1e-10))
        throw std::invalid_argument("synth_ccu_five: u must be a 2x2 unitary");
    const Matrix2cd w = sqrt_unitary(u);
    const Matrix4 cx = controlled(pauli_x());
    Circuit c;
    c.gates.push_back({PairClass::BC, controlled(w), "cw"});
    c.gates.push_back({PairClass::AB, cx, "cx"});
    c.gates.push_back({PairClass::BC, controlled(w.adjoint()), "cwdg"});
    c.gates.push_back({PairClass::AB, cx, "cx"});
    c.gates.push_back({PairClass::AC, controlled(w), "cw"});
    return c;
}

Circuit synth_ccu_four(double theta) {
    const Matrix2cd w = eitheta(-theta / 2, theta / 2);
    const Matrix4 ubc = anticontrolled(pauli_x());
    Circuit c;
    c.gates.push_back({PairClass::BC, ubc.adjoint(), "ubcdg"});
    c.gates.push_back({PairClass::AC, controlled(w), "cw"});
    c.gates.push_back({PairClass::BC, ubc, "ubc"});
    c.gates.push_back({PairClass::AC, controlled(w), "cw"});
    return c;
}

Circuit synth_ccu_one(double theta) {
    Circuit c;
    Matrix4 g = Matrix4::Identity();
    g(3, 3) = std::exp(cplx(0, theta));
    c.gates.push_back({PairClass::AB, g, "w"});
    return c;
}

Circuit synth_ccu(const Matrix2cd& u) {
    const CcuClass cls = classify_ccu(u);
    switch (cls.count) {
        case 0:
            return Circuit{};
        case 1: {
            // Both eigenvalues agree within tolerance; split the difference.
            const cplx mid = std::exp(cplx(0, cls.theta1)) + std::exp(cplx(0, cls.theta2));
            double t = std::arg(mid);
            if (t < 0) t += kTwoPi;
            return synth_ccu_one(t);
        }
        case 4: {
            // V(theta1, theta2) with theta1 = -theta2 mod 2pi; fold the
            // eigenbasis of u into the first and last gate touching C.
            Circuit c = synth_ccu_four(cls.theta2);
            const Matrix2cd& p = cls.basis_change;
            c.gates.front().matrix = c.gates.front().matrix * kron2x2(Matrix2cd::Identity(), p.adjoint());
            c.gates.back().matrix = kron2x2(Matrix2cd::Identity(), p) * c.gates.back().matrix;
            return c;
        }
        default:
            return synth_ccu_five(u);
    }
}

Circuit synth_fredkin() {
    const Matrix2cd v = sqrt_unitary(pauli_x());
    const Matrix4 cx_ab = controlled(pauli_x());
    const Matrix4 cx_cb = cnot_second_controls_first();
    Circuit c;
    c.gates.push_back({PairClass::BC, cx_cb, "cx_cb"});
    c.gates.push_back({PairClass::BC, controlled(v), "cv"});
    c.gates.push_back({PairClass::AC, controlled(v), "cv"});
    c.gates.push_back({PairClass::AB, cx_ab, "cx"});
    c.gates.push_back({PairClass::BC, controlled(v.adjoint()), "cvdg"});
    c.gates.push_back({PairClass::BC, cx_cb, "cx_cb"});
    c.gates.push_back({PairClass::AB, cx_ab, "cx"});
    return merge_adjacent(c);
}

Matrix8 ccu_matrix(const Matrix2cd& u) {
    Matrix8 m = Matrix8::Identity();
    m.block<2, 2>(6, 6) = u;
    return m;
}

GateCatalogEntry make_target(const std::string& name, const std::vector<double>& params) {
    auto need = [&](size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("make_target: '" + name + "' takes " + std::to_string(n) +
                                        " parameter(s), got " + std::to_string(params.size()));
    };
    GateCatalogEntry e;
    e.name = name;
    if (name == "fredkin") {
        need(0);
        Matrix8 f = Matrix8::Identity();
        f(5, 5) = f(6, 6) = 0;
        f(5, 6) = f(6, 5) = 1;  // |101> <-> |110> when A = 1
        e.unitary = f;
    } else if (name == "toffoli") {
        need(0);
        e.unitary = ccu_matrix(pauli_x());
    } else if (name == "ccu-diag") {
        need(2);
        e.unitary = ccu_matrix(eitheta(params[0], params[1]));
    } else if (name == "w") {
        need(1);
        Matrix4 g = Matrix4::Identity();
        g(3, 3) = std::exp(cplx(0, params[0]));
        e.unitary = g;
    } else if (name == "r") {
        need(2);
        Matrix4 g = Matrix4::Identity();
        g(2, 2) = std::exp(cplx(0, params[0]));
        g(3, 3) = std::exp(cplx(0, params[1]));
        e.unitary = g;
    } else if (name == "swap") {
        need(0);
        Matrix4 s = Matrix4::Zero();
        s(0, 0) = s(3, 3) = 1;
        s(1, 2) = s(2, 1) = 1;
        e.unitary = s;
    } else {
        throw std::invalid_argument("make_target: unknown target '" + name + "'");
    }
    return e;
}

}  // namespace tqsynth
