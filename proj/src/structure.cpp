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

#include "tqsynth/structure.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tqsynth {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

using Eigen::Matrix2cd;
using Eigen::Matrix4d;
using Eigen::Vector2cd;
using Eigen::Vector4cd;

Matrix2cd sigma(int k) {
    Matrix2cd s;
    switch (k) {
        case 0: s << 0, 1, 1, 0; return s;
        case 1: s << 0, cplx(0, -1), cplx(0, 1), 0; return s;
        default: s << 1, 0, 0, -1; return s;
    }
}

}  // namespace

std::optional<ControlledForm> detect_controlled(const ComplexMatrix& u, int control, double tol) {
    if (u.rows() != u.cols() || (u.rows() != 4 && u.rows() != 8))
        throw std::invalid_argument("detect_controlled: need a 4x4 or 8x8 matrix");
    const int nbits = u.rows() == 8 ? 3 : 2;
    if (control < 0 || control >= nbits)
        throw std::invalid_argument("detect_controlled: control index out of range");
    if (!is_unitary(u, 1e-10))
        throw std::invalid_argument("detect_controlled: input is not unitary within 1e-10");

    const int n = static_cast<int>(u.rows());
    const int h = n / 2;

    // Reorder so the control bit is the slow index; spectators keep their
    // relative order.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        int cb = (i >> (nbits - 1 - control)) & 1;
        int rest = 0;
        for (int b = 0; b < nbits; ++b) {
            if (b == control) continue;
            rest = (rest << 1) | ((i >> (nbits - 1 - b)) & 1);
        }
        perm[i] = cb * h + rest;
    }
    ComplexMatrix v(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) v(perm[r], perm[c]) = u(r, c);

    if (v.block(0, h, h, h).norm() >= tol || v.block(h, 0, h, h).norm() >= tol)
        return std::nullopt;
    return ControlledForm{control, v.block(0, 0, h, h), v.block(h, h, h, h)};
}

ProductWitness product_state_in_span(const Vector4cd& psi1, const Vector4cd& psi2) {
    auto reshape = [](const Vector4cd& v) {
        Matrix2cd m;
        m << v(0), v(1), v(2), v(3);
        return m;
    };
    const Matrix2cd m1 = reshape(psi1), m2 = reshape(psi2);

    // det(a m1 + b m2) = c20 a^2 + c11 ab + c02 b^2
    const cplx c20 = m1.determinant();
    const cplx c02 = m2.determinant();
    const cplx c11 = (m1 + m2).determinant() - c20 - c02;

    const double input_scale = psi1.squaredNorm() + psi2.squaredNorm();
    const double coeff_scale = std::max({std::abs(c20), std::abs(c11), std::abs(c02)});
    const double eps = 1e-14;

    std::vector<std::pair<cplx, cplx>> roots;
    if (coeff_scale < eps * std::max(input_scale, 1e-300)) {
        roots.emplace_back(1.0, 0.0);  // identically zero: every combination works
    } else if (std::abs(c20) <= eps * coeff_scale) {
        roots.emplace_back(1.0, 0.0);
        if (std::abs(c11) > eps * coeff_scale) roots.emplace_back(-c02, c11);
    } else if (std::abs(c02) <= eps * coeff_scale) {
        roots.emplace_back(0.0, 1.0);
        if (std::abs(c11) > eps * coeff_scale) roots.emplace_back(c11, -c20);
    } else {
        // Stable quadratic in r = b/a: c02 r^2 + c11 r + c20 = 0.
        cplx s = std::sqrt(c11 * c11 - 4.0 * c02 * c20);
        if (std::real(std::conj(c11) * s) < 0) s = -s;
        const cplx q = -0.5 * (c11 + s);
        roots.emplace_back(c02, q);  // r = q / c02
        roots.emplace_back(q, c20);  // r = c20 / q
    }

    // Normalize candidates to a unit state with a real and nonnegative, then
    // pick deterministically: larger |a|, ties by larger Re(b).
    bool have = false;
    cplx best_a = 1.0, best_b = 0.0;
    Vector4cd best_state = psi1.normalized();
    for (auto& [ar, br] : roots) {
        Vector4cd st = ar * psi1 + br * psi2;
        const double n = st.norm();
        if (n < 1e-150) continue;
        cplx a = ar / n, b = br / n;
        cplx ph = 1.0;
        if (std::abs(a) > 1e-12)
            ph = std::conj(a) / std::abs(a);
        else if (std::abs(b) > 0)
            ph = std::conj(b) / std::abs(b);
        a *= ph;
        b *= ph;
        st *= ph / n;
        bool better = !have || std::abs(a) > std::abs(best_a) + 1e-12 ||
                      (std::abs(std::abs(a) - std::abs(best_a)) <= 1e-12 &&
                       std::real(b) > std::real(best_b));
        if (better) {
            have = true;
            best_a = a;
            best_b = b;
            best_state = st;
        }
    }

    ProductWitness w;
    w.a = best_a;
    w.b = best_b;
    w.state = best_state;

    Matrix2cd m = reshape(best_state);
    Eigen::JacobiSVD<Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s1 = svd.singularValues()(0);
    w.f1 = svd.matrixU().col(0) * std::sqrt(s1);
    w.f2 = svd.matrixV().col(0).conjugate() * std::sqrt(s1);
    w.residual = svd.singularValues()(1);

    // Fix the factor phase split so the witness is reproducible bit-for-bit.
    int idx = 0;
    w.f1.cwiseAbs().maxCoeff(&idx);
    if (std::abs(w.f1(idx)) > 0) {
        cplx ph = std::conj(w.f1(idx)) / std::abs(w.f1(idx));
        w.f1 *= ph;
        w.f2 *= std::conj(ph);
    }
    return w;
}

std::optional<ControlledPairFactors> factor_controlled_pair(const TwoQubitGate& g_ab,
                                                            const TwoQubitGate& g_ac) {
    if (g_ab.pair != PairClass::AB || g_ac.pair != PairClass::AC)
        throw std::invalid_argument("factor_controlled_pair: expected pair tags AB and AC");

    const Matrix8 u = embed(PairClass::AB, g_ab.matrix) * embed(PairClass::AC, g_ac.matrix);
    auto cf = detect_controlled(u, 0);
    if (!cf) return std::nullopt;

    auto f0 = nearest_kron_factorization(cf->block0);
    auto f1 = nearest_kron_factorization(cf->block1);
    if (f0.residual >= 1e-8 || f1.residual >= 1e-8) return std::nullopt;

    auto split = [](const KronFactorization& f, Eigen::Matrix2cd& v, Eigen::Matrix2cd& w) {
        const cplx d = std::sqrt(f.a.determinant());
        v = f.a / d;
        w = f.b * d;
    };
    ControlledPairFactors out;
    split(f0, out.v0, out.w0);
    split(f1, out.v1, out.w1);
    out.residual0 = f0.residual;
    out.residual1 = f1.residual;
    return out;
}

bool has_local_spectrum(const ComplexMatrix& u, double tol) {
    if (u.rows() != 4 || u.cols() != 4)
        throw std::invalid_argument("has_local_spectrum: need a 4x4 matrix");
    const auto es = eig_unitary(u);
    const auto& v = es.eigenvalues;
    // Sorted by phase, the only pairings into two equal pairs are the two
    // non-crossing ones (a crossing match forces a non-crossing one too).
    const bool split01_23 = std::abs(v(0) - v(1)) < tol && std::abs(v(2) - v(3)) < tol;
    const bool split12_30 = std::abs(v(1) - v(2)) < tol && std::abs(v(3) - v(0)) < tol;
    return split01_23 || split12_30;
}

namespace {

const Matrix4& magic_basis() {
    // Columns: (|00>+|11>)/s, i(|01>+|10>)/s, (|01>-|10>)/s, i(|00>-|11>)/s
    // with s = sqrt(2). Conjugation by this basis realifies SU(2)(x)SU(2).
    static const Matrix4 m = [] {
        const cplx i(0, 1);
        Matrix4 mm;
        mm << 1, 0, 0, i,
              0, i, 1, 0,
              0, i, -1, 0,
              1, 0, 0, -i;
        return Matrix4(mm / std::sqrt(2.0));
    }();
    return m;
}

struct KakState {
    std::array<double, 3> a;
    double phase;
    Matrix2cd ua, ub, va, vb;
};

// alpha[k] += sign * pi/2, compensated through the right locals and phase.
void shift(KakState& s, int k, int sign) {
    s.a[k] += sign * kPi / 2;
    s.phase += sign * kPi / 2;
    const Matrix2cd is = cplx(0, 1) * sigma(k);
    s.va = is * s.va;
    s.vb = is * s.vb;
}

void canonical_shift(KakState& s, int k) {
    while (s.a[k] > kPi / 4 + 1e-13) shift(s, k, -1);
    while (s.a[k] <= -kPi / 4 + 1e-13) shift(s, k, +1);
}

void swap_axes(KakState& s, int k1, int k2) {
    std::swap(s.a[k1], s.a[k2]);
    // pi rotation about the diagonal axis between k1 and k2
    const Matrix2cd c = cplx(0, -1) * (sigma(k1) + sigma(k2)) / std::sqrt(2.0);
    const Matrix2cd cd = c.adjoint();
    s.ua = s.ua * cd;
    s.ub = s.ub * cd;
    s.va = c * s.va;
    s.vb = c * s.vb;
}

void negate_two(KakState& s, int k1, int k2) {
    const int k3 = 3 - k1 - k2;
    s.a[k1] = -s.a[k1];
    s.a[k2] = -s.a[k2];
    const Matrix2cd m = cplx(0, 1) * sigma(k3);
    s.ua = s.ua * m.adjoint();
    s.va = m * s.va;
}

void sort_axes(KakState& s) {
    if (std::abs(s.a[0]) < std::abs(s.a[1])) swap_axes(s, 0, 1);
    if (std::abs(s.a[1]) < std::abs(s.a[2])) swap_axes(s, 1, 2);
    if (std::abs(s.a[0]) < std::abs(s.a[1])) swap_axes(s, 0, 1);
}

void canonicalize(KakState& s) {
    for (int k = 0; k < 3; ++k) canonical_shift(s, k);
    sort_axes(s);
    if (s.a[0] < 0) negate_two(s, 0, 2);
    if (s.a[1] < 0) negate_two(s, 1, 2);
    canonical_shift(s, 2);
    // Weyl chamber wall: at alpha_x = pi/4 the classes (x, y, z) and
    // (x, y, -z) coincide; pick z >= 0 there.
    if (s.a[0] > kPi / 4 - 1e-12 && s.a[2] < 0) {
        shift(s, 0, -1);
        negate_two(s, 0, 2);
    }
}

}  // namespace

KakDecomposition kak_decompose(const ComplexMatrix& u_in) {
    if (u_in.rows() != 4 || u_in.cols() != 4)
        throw std::invalid_argument("kak_decompose: need a 4x4 matrix");
    if (!is_unitary(u_in, 1e-10))
        throw std::invalid_argument("kak_decompose: input is not unitary within 1e-10");
    const Matrix4 u = u_in;

    KakState st;
    st.phase = std::arg(u.determinant()) / 4.0;
    const Matrix4 su = u * std::exp(cplx(0, -st.phase));

    const Matrix4& m = magic_basis();
    const Matrix4 up = m.adjoint() * su * m;
    const Matrix4 gamma = up.transpose() * up;  // symmetric unitary

    // Simultaneously diagonalize Re(gamma) and Im(gamma) (they commute) by
    // diagonalizing a generic real combination; retry on unlucky pencils.
    const Matrix4d re = gamma.real(), im = gamma.imag();
    static const double kMixes[] = {0.0,          1.0,          -1.0,         0.5,
                                    0.3183098861, -2.7182818284, 1.6180339887, -0.5772156649,
                                    3.1415926535, 0.1234567891};
    Matrix4d p;
    bool ok = false;
    for (double t : kMixes) {
        Eigen::SelfAdjointEigenSolver<Matrix4d> es(re + t * im);
        p = es.eigenvectors();
        Matrix4d dr = p.transpose() * re * p;
        Matrix4d di = p.transpose() * im * p;
        dr.diagonal().setZero();
        di.diagonal().setZero();
        if (dr.norm() < 1e-8 && di.norm() < 1e-8) {
            ok = true;
            break;
        }
    }
    if (!ok) throw std::runtime_error("kak_decompose: simultaneous diagonalization failed");
    if (p.determinant() < 0) p.col(0) *= -1.0;

    const Matrix4 pc = p.cast<cplx>();
    const Vector4cd d = (pc.transpose() * gamma * pc).diagonal();
    std::array<double, 4> theta;
    for (int j = 0; j < 4; ++j) theta[j] = std::arg(d(j)) / 2.0;
    // gamma has unit determinant, so sum(theta) is 0 or pi mod 2pi; force the
    // branch with det(diag(e^{i theta})) = +1 so the left factor lands in SO(4).
    if (std::cos(theta[0] + theta[1] + theta[2] + theta[3]) < 0) theta[0] += kPi;

    Matrix4 q1c = up * pc;
    for (int j = 0; j < 4; ++j) q1c.col(j) *= std::exp(cplx(0, -theta[j]));
    if (q1c.imag().norm() > 1e-6)
        throw std::runtime_error("kak_decompose: left orthogonal factor is not real");
    const Matrix4 k1 = m * q1c * m.adjoint();
    const Matrix4 k2 = m * pc.transpose() * m.adjoint();

    st.a[0] = (theta[0] + theta[1] - theta[2] - theta[3]) / 4.0;
    st.a[1] = (-theta[0] + theta[1] - theta[2] + theta[3]) / 4.0;
    st.a[2] = (theta[0] - theta[1] - theta[2] + theta[3]) / 4.0;
    st.phase += (theta[0] + theta[1] + theta[2] + theta[3]) / 4.0;

    auto split_su2 = [](const Matrix4& k4, Matrix2cd& f1, Matrix2cd& f2) {
        const auto f = nearest_kron_factorization(k4);
        if (f.residual > 1e-6)
            throw std::runtime_error("kak_decompose: local factor extraction failed");
        const cplx d1 = std::sqrt(f.a.determinant());
        const cplx d2 = std::sqrt(f.b.determinant());
        f1 = f.a / d1;
        f2 = f.b / d2;
        return std::arg(d1 * d2);
    };
    st.phase += split_su2(k1, st.ua, st.ub);
    st.phase += split_su2(k2, st.va, st.vb);

    canonicalize(st);

    KakDecomposition out;
    out.u_a = st.ua;
    out.u_b = st.ub;
    out.v_a = st.va;
    out.v_b = st.vb;
    out.alpha = st.a;
    out.global_phase = std::atan2(std::sin(st.phase), std::cos(st.phase));
    return out;
}

Matrix4 kak_reconstruct(const KakDecomposition& k) {
    Matrix4 h = Matrix4::Zero();
    for (int j = 0; j < 3; ++j) h += k.alpha[j] * kron2x2(sigma(j), sigma(j));
    Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
    const Eigen::Array4cd ph = (cplx(0, 1) * es.eigenvalues().cast<cplx>().array()).exp();
    const Matrix4 ud =
        es.eigenvectors() * ph.matrix().asDiagonal() * es.eigenvectors().adjoint();
    return std::exp(cplx(0, k.global_phase)) * kron2x2(k.u_a, k.u_b) * ud * kron2x2(k.v_a, k.v_b);
}

}  // namespace tqsynth
