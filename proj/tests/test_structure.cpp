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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "tqsynth/structure.hpp"
#include "tqsynth/synthesis.hpp"

using namespace tqsynth;

namespace {

Eigen::Matrix2cd sigma(int k) {
    Eigen::Matrix2cd m;
    switch (k) {
        case 0: m << 0, 1, 1, 0; break;
        case 1: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

Matrix4 cnot_gate() {
    Matrix4 c = Matrix4::Identity();
    c(2, 2) = c(3, 3) = 0;
    c(2, 3) = c(3, 2) = 1;
    return c;
}

Matrix4 swap_gate() {
    Matrix4 s = Matrix4::Identity();
    s(1, 1) = s(2, 2) = 0;
    s(1, 2) = s(2, 1) = 1;
    return s;
}

// Canonical interaction exp(i sum_k alpha_k s_k (x) s_k) through the
// independent Pade-exponential oracle.
Matrix4 canonical_by_expm(double ax, double ay, double az) {
    ComplexMatrix h = ax * kron(sigma(0), sigma(0)) + ay * kron(sigma(1), sigma(1)) +
                      az * kron(sigma(2), sigma(2));
    return Matrix4(testutil::expm(cplx(0, 1) * h));
}

// Spectral local-equivalence invariant: the eigenvalue multiset of
// gamma(u) = (E^dag u' E)^T (E^dag u' E) with u' = u / det(u)^{1/4} and E the
// standard Bell-phase change of basis. Computed here from scratch so the
// comparison does not share code with kak_decompose.
std::vector<cplx> gamma_eigenvalues(const Matrix4& u) {
    Matrix4 e;
    const double s = 1.0 / std::sqrt(2.0);
    e << cplx(s, 0), 0, 0, cplx(0, s),
         0, cplx(0, s), cplx(s, 0), 0,
         0, cplx(0, s), cplx(-s, 0), 0,
         cplx(s, 0), 0, 0, cplx(0, -s);
    cplx det = u.determinant();
    Matrix4 up = u * std::exp(cplx(0, -std::arg(det) / 4.0));
    Matrix4 m = e.adjoint() * up * e;
    Matrix4 g = m.transpose() * m;
    Eigen::ComplexEigenSolver<Matrix4> es(g);
    std::vector<cplx> vals(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
        double pa = std::arg(a), pb = std::arg(b);
        return pa != pb ? pa < pb : std::abs(a) < std::abs(b);
    });
    return vals;
}

bool same_multiset(std::vector<cplx> a, std::vector<cplx> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const cplx& x : a) {
        double best = 1e300;
        size_t at = 0;
        for (size_t i = 0; i < b.size(); ++i)
            if (std::abs(b[i] - x) < best) best = std::abs(b[i] - x), at = i;
        if (best > tol) return false;
        b.erase(b.begin() + at);
    }
    return true;
}

// The det(u)^{1/4} branch leaves gamma defined only up to an overall sign,
// so local equivalence compares the multisets up to that sign.
bool gamma_match(const Matrix4& u, const Matrix4& v, double tol) {
    std::vector<cplx> a = gamma_eigenvalues(u);
    std::vector<cplx> b = gamma_eigenvalues(v);
    std::vector<cplx> nb = b;
    for (cplx& z : nb) z = -z;
    return same_multiset(a, b, tol) || same_multiset(a, nb, tol);
}

}  // namespace

TEST_CASE("detect_controlled splits the fredkin permutation on control A only") {
    Matrix8 f = Matrix8(make_target("fredkin").unitary);
    auto on_a = detect_controlled(f, 0);
    REQUIRE(on_a.has_value());
    CHECK(on_a->control == 0);
    CHECK((on_a->block0 - ComplexMatrix(Matrix4::Identity())).norm() < 1e-12);
    CHECK((on_a->block1 - ComplexMatrix(swap_gate())).norm() < 1e-12);
    CHECK_FALSE(detect_controlled(f, 1).has_value());
    CHECK_FALSE(detect_controlled(f, 2).has_value());
}

TEST_CASE("detect_controlled on a diagonal 8x8 succeeds for every control") {
    Matrix8 v = Matrix8(make_target("ccu-diag", {0.4, 1.1}).unitary);
    for (int q = 0; q < 3; ++q) {
        auto r = detect_controlled(v, q);
        REQUIRE(r.has_value());
        CHECK(is_unitary(r->block0));
        CHECK(is_unitary(r->block1));
    }
    auto on_a = detect_controlled(v, 0);
    CHECK((on_a->block0 - ComplexMatrix(Matrix4::Identity())).norm() < 1e-12);
    Matrix4 r = Matrix4(make_target("r", {0.4, 1.1}).unitary);
    CHECK((on_a->block1 - ComplexMatrix(r)).norm() < 1e-12);
}

TEST_CASE("detect_controlled works on 4x4 inputs") {
    Matrix4 c = cnot_gate();
    auto r = detect_controlled(c, 0);
    REQUIRE(r.has_value());
    CHECK((r->block0 - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((r->block1 - ComplexMatrix(sigma(0))).norm() < 1e-12);
    CHECK_FALSE(detect_controlled(c, 1).has_value());
    CHECK_THROWS_AS(detect_controlled(c, 2), std::invalid_argument);
}

TEST_CASE("detect_controlled input validation") {
    std::mt19937_64 eng(41);
    CHECK_THROWS_AS(detect_controlled(testutil::random_unitary(5, eng), 0), std::invalid_argument);
    CHECK_THROWS_AS(detect_controlled(testutil::random_unitary(8, eng), 3), std::invalid_argument);
    CHECK_THROWS_AS(detect_controlled(testutil::random_unitary(8, eng), -1), std::invalid_argument);
    ComplexMatrix z = ComplexMatrix::Zero(8, 8);
    CHECK_THROWS_AS(detect_controlled(z, 0), std::invalid_argument);
    // A generic unitary is controlled with respect to no qubit.
    ComplexMatrix u = testutil::random_unitary(8, eng);
    for (int q = 0; q < 3; ++q) CHECK_FALSE(detect_controlled(u, q).has_value());
}

TEST_CASE("product_state_in_span frozen example: the Bell pair span") {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd phi_plus, phi_minus;
    phi_plus << s, 0, 0, s;
    phi_minus << s, 0, 0, -s;
    ProductWitness w = product_state_in_span(phi_plus, phi_minus);
    CHECK(w.residual < 1e-12);
    CHECK(std::abs(w.a - cplx(s, 0)) < 1e-9);
    // b = +-1/sqrt(2); both give a product state (|00> or |11>). The
    // deterministic tie-break picks b with larger real part, i.e. |00>.
    CHECK(std::abs(w.b - cplx(s, 0)) < 1e-9);
    Eigen::Vector4cd e00;
    e00 << 1, 0, 0, 0;
    CHECK((w.state - e00).norm() < 1e-9);
    CHECK((kron(w.f1, w.f2) - ComplexMatrix(w.state)).norm() < 1e-9);
}

TEST_CASE("product_state_in_span on an already-product span") {
    Eigen::Vector4cd e00, e01;
    e00 << 1, 0, 0, 0;
    e01 << 0, 1, 0, 0;
    // Every state in this span is a product |0> (x) (a|0> + b|1>); the
    // zero quadratic falls back to (a, b) = (1, 0).
    ProductWitness w = product_state_in_span(e00, e01);
    CHECK(std::abs(w.a - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(w.b) < 1e-12);
    CHECK((w.state - e00).norm() < 1e-12);
    CHECK(w.residual < 1e-14);
}

TEST_CASE("every 2-dim span contains a product state (random spans)") {
    std::mt19937_64 eng(42);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Vector4cd p1 = testutil::random_state4(eng);
        Eigen::Vector4cd p2 = testutil::random_state4(eng);
        p2 -= p1.dot(p2) * p1;
        if (p2.norm() < 1e-3) continue;
        p2.normalize();
        ProductWitness w = product_state_in_span(p1, p2);
        CHECK(w.residual < 1e-9);
        CHECK(std::abs(w.state.norm() - 1.0) < 1e-12);
        // The witness lies in the span and matches its coefficients.
        CHECK((w.a * p1 + w.b * p2 - w.state).norm() < 1e-9);
        CHECK((kron(w.f1, w.f2) - ComplexMatrix(w.state)).norm() < 2e-8);
        CHECK(w.a.real() >= 0.0);
        CHECK(std::abs(w.a.imag()) < 1e-12);
    }
}

TEST_CASE("product_state_in_span is deterministic") {
    std::mt19937_64 eng(43);
    Eigen::Vector4cd p1 = testutil::random_state4(eng);
    Eigen::Vector4cd p2 = testutil::random_state4(eng);
    ProductWitness w1 = product_state_in_span(p1, p2);
    ProductWitness w2 = product_state_in_span(p1, p2);
    CHECK(w1.a == w2.a);
    CHECK(w1.b == w2.b);
    CHECK((w1.state - w2.state).norm() == 0.0);
}

TEST_CASE("factor_controlled_pair frozen example: cz on AB times cz on AC") {
    Matrix4 cz = Matrix4::Identity();
    cz(3, 3) = -1;
    TwoQubitGate g_ab{PairClass::AB, cz, ""};
    TwoQubitGate g_ac{PairClass::AC, cz, ""};
    auto f = factor_controlled_pair(g_ab, g_ac);
    REQUIRE(f.has_value());
    CHECK(f->residual0 < 1e-12);
    CHECK(f->residual1 < 1e-12);
    // A=0 block is the identity, A=1 block is Z (x) Z.
    CHECK((kron2x2(f->v0, f->w0) - Matrix4::Identity()).norm() < 1e-10);
    CHECK((kron2x2(f->v1, f->w1) - kron2x2(sigma(2), sigma(2))).norm() < 1e-10);
    CHECK(std::abs(f->v0.determinant() - cplx(1, 0)) < 1e-10);
    CHECK(std::abs(f->v1.determinant() - cplx(1, 0)) < 1e-10);
    CHECK(phase_distance(ComplexMatrix(f->v1), ComplexMatrix(sigma(2))) < 1e-9);
    CHECK(phase_distance(ComplexMatrix(f->w1), ComplexMatrix(sigma(2))) < 1e-9);
}

TEST_CASE("factor_controlled_pair on random controlled gates") {
    std::mt19937_64 eng(44);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Matrix2cd b0 = testutil::random_u2(eng), b1 = testutil::random_u2(eng);
        Eigen::Matrix2cd c0 = testutil::random_u2(eng), c1 = testutil::random_u2(eng);
        Matrix4 gab = Matrix4::Zero();
        gab.block<2, 2>(0, 0) = b0;
        gab.block<2, 2>(2, 2) = b1;
        Matrix4 gac = Matrix4::Zero();
        gac.block<2, 2>(0, 0) = c0;
        gac.block<2, 2>(2, 2) = c1;
        auto f = factor_controlled_pair({PairClass::AB, gab, ""}, {PairClass::AC, gac, ""});
        REQUIRE(f.has_value());
        CHECK(f->residual0 < 1e-10);
        CHECK(f->residual1 < 1e-10);
        CHECK((kron2x2(f->v0, f->w0) - kron2x2(b0, c0)).norm() < 1e-9);
        CHECK((kron2x2(f->v1, f->w1) - kron2x2(b1, c1)).norm() < 1e-9);
        CHECK(std::abs(f->v0.determinant() - cplx(1, 0)) < 1e-10);
        CHECK(std::abs(f->v1.determinant() - cplx(1, 0)) < 1e-10);
    }
}

TEST_CASE("factor_controlled_pair rejects wrong tags and non-controlled input") {
    std::mt19937_64 eng(45);
    Matrix4 g = Matrix4(testutil::random_unitary(4, eng));
    CHECK_THROWS_AS(factor_controlled_pair({PairClass::AC, g, ""}, {PairClass::AB, g, ""}),
                    std::invalid_argument);
    CHECK_THROWS_AS(factor_controlled_pair({PairClass::AB, g, ""}, {PairClass::BC, g, ""}),
                    std::invalid_argument);
    // Generic (non-block-diagonal) gates are not A-controlled.
    auto f = factor_controlled_pair({PairClass::AB, g, ""},
                                    {PairClass::AC, Matrix4(testutil::random_unitary(4, eng)), ""});
    CHECK_FALSE(f.has_value());
}

TEST_CASE("has_local_spectrum recognizes doubled spectra and rejects others") {
    std::mt19937_64 eng(46);
    Eigen::Matrix2cd w = testutil::random_u2(eng);
    Eigen::Matrix2cd i2 = Eigen::Matrix2cd::Identity();
    CHECK(has_local_spectrum(kron(w, i2)));
    CHECK(has_local_spectrum(kron(i2, w)));
    CHECK(has_local_spectrum(ComplexMatrix(Matrix4::Identity())));

    Matrix4 r = Matrix4(make_target("r", {0.7, 1.9}).unitary);
    CHECK_FALSE(has_local_spectrum(r));

    Matrix4 cz = Matrix4::Identity();
    cz(3, 3) = -1;
    CHECK_FALSE(has_local_spectrum(cz));

    // r(t, t) = diag(1, 1, e^{it}, e^{it}) does have a doubled spectrum.
    CHECK(has_local_spectrum(make_target("r", {1.3, 1.3}).unitary));

    CHECK_THROWS_AS(has_local_spectrum(ComplexMatrix::Zero(4, 4)), std::invalid_argument);
}

TEST_CASE("kak frozen points: cnot and swap against the exponential oracle") {
    // cnot is locally equivalent to exp(i pi/4 XX): same gamma spectrum.
    Matrix4 ux = canonical_by_expm(M_PI / 4, 0, 0);
    CHECK(gamma_match(cnot_gate(), ux, 1e-9));

    KakDecomposition kc = kak_decompose(cnot_gate());
    CHECK(kc.alpha[0] == doctest::Approx(M_PI / 4).epsilon(1e-9));
    CHECK(std::abs(kc.alpha[1]) < 1e-9);
    CHECK(std::abs(kc.alpha[2]) < 1e-9);

    KakDecomposition ko = kak_decompose(ux);
    CHECK(ko.alpha[0] == doctest::Approx(M_PI / 4).epsilon(1e-9));
    CHECK(std::abs(ko.alpha[1]) < 1e-9);
    CHECK(std::abs(ko.alpha[2]) < 1e-9);

    // swap is locally equivalent to exp(i pi/4 (XX+YY+ZZ)).
    Matrix4 us = canonical_by_expm(M_PI / 4, M_PI / 4, M_PI / 4);
    CHECK(gamma_match(swap_gate(), us, 1e-9));
    KakDecomposition ks = kak_decompose(swap_gate());
    CHECK(ks.alpha[0] == doctest::Approx(M_PI / 4).epsilon(1e-9));
    CHECK(ks.alpha[1] == doctest::Approx(M_PI / 4).epsilon(1e-9));
    CHECK(std::abs(ks.alpha[2]) == doctest::Approx(M_PI / 4).epsilon(1e-9));
}

TEST_CASE("kak of a local product has zero interaction") {
    std::mt19937_64 eng(47);
    Matrix4 u = kron2x2(testutil::random_u2(eng), testutil::random_u2(eng));
    KakDecomposition k = kak_decompose(u);
    CHECK(std::abs(k.alpha[0]) < 1e-9);
    CHECK(std::abs(k.alpha[1]) < 1e-9);
    CHECK(std::abs(k.alpha[2]) < 1e-9);
    CHECK((kak_reconstruct(k) - u).norm() < 1e-9);
}

TEST_CASE("kak reconstruction, chamber and determinant invariants on random unitaries") {
    std::mt19937_64 eng(48);
    const double q = M_PI / 4;
    for (int trial = 0; trial < 200; ++trial) {
        Matrix4 u = Matrix4(testutil::random_unitary(4, eng));
        KakDecomposition k = kak_decompose(u);
        CHECK((kak_reconstruct(k) - u).norm() < 1e-9);
        CHECK(k.alpha[0] <= q + 1e-12);
        CHECK(k.alpha[0] >= k.alpha[1] - 1e-12);
        CHECK(k.alpha[1] >= std::abs(k.alpha[2]) - 1e-12);
        CHECK(k.alpha[1] >= -1e-12);
        CHECK(std::abs(k.u_a.determinant() - cplx(1, 0)) < 1e-9);
        CHECK(std::abs(k.u_b.determinant() - cplx(1, 0)) < 1e-9);
        CHECK(std::abs(k.v_a.determinant() - cplx(1, 0)) < 1e-9);
        CHECK(std::abs(k.v_b.determinant() - cplx(1, 0)) < 1e-9);
    }
}

TEST_CASE("kak handles hard degenerate inputs") {
    std::mt19937_64 eng(49);
    std::vector<Matrix4> cases;
    cases.push_back(Matrix4::Identity());
    cases.push_back(cnot_gate());
    cases.push_back(swap_gate());
    cases.push_back(Matrix4(cplx(0, 1) * Matrix4::Identity()));
    Matrix4 cz = Matrix4::Identity();
    cz(3, 3) = -1;
    cases.push_back(cz);
    cases.push_back(canonical_by_expm(M_PI / 4, M_PI / 4, -M_PI / 4));
    cases.push_back(canonical_by_expm(0.3, 0.3, 0.3));
    cases.push_back(canonical_by_expm(M_PI / 4, 0.2, 0.0));
    cases.push_back(kron2x2(sigma(0), sigma(1)));
    cases.push_back(Matrix4(swap_gate() * cnot_gate()));
    for (const Matrix4& u : cases) {
        KakDecomposition k = kak_decompose(u);
        CHECK((kak_reconstruct(k) - u).norm() < 1e-9);
    }
}

TEST_CASE("kak recovers chamber-interior angles fed through the independent builder") {
    std::mt19937_64 eng(50);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        double ax = 0.08 + 0.60 * ud(eng);
        double ay = 0.05 + (ax - 0.07) * ud(eng);
        if (ay > ax - 0.02) ay = ax - 0.02;
        double az = (ay - 0.02) * (2.0 * ud(eng) - 1.0);
        // Build with the exponential oracle plus random locals.
        Matrix4 mid = canonical_by_expm(ax, ay, az);
        Matrix4 u = kron2x2(testutil::random_su2(eng), testutil::random_su2(eng)) * mid *
                    kron2x2(testutil::random_su2(eng), testutil::random_su2(eng));
        u *= std::exp(cplx(0, 2 * M_PI * ud(eng)));
        KakDecomposition k = kak_decompose(u);
        // Strictly inside the chamber (ax < pi/4) the representative is
        // unique including the sign of az.
        CHECK(k.alpha[0] == doctest::Approx(ax).epsilon(1e-7));
        CHECK(k.alpha[1] == doctest::Approx(ay).epsilon(1e-7));
        CHECK(k.alpha[2] == doctest::Approx(az).epsilon(1e-7));
        CHECK((kak_reconstruct(k) - u).norm() < 1e-9);
    }
}

TEST_CASE("kak_decompose rejects bad input") {
    std::mt19937_64 eng(51);
    CHECK_THROWS_AS(kak_decompose(testutil::random_unitary(8, eng)), std::invalid_argument);
    CHECK_THROWS_AS(kak_decompose(ComplexMatrix(2.0 * Matrix4::Identity())),
                    std::invalid_argument);
}

TEST_CASE("kak_reconstruct matches the oracle exponential on pure canonicals") {
    KakDecomposition k;
    k.u_a = k.u_b = k.v_a = k.v_b = Eigen::Matrix2cd::Identity();
    k.global_phase = 0.0;
    k.alpha = {0.31, 0.17, -0.05};
    CHECK((kak_reconstruct(k) - canonical_by_expm(0.31, 0.17, -0.05)).norm() < 1e-12);
}
