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

#include "tqsynth/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tqsynth {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double phase_in_2pi(cplx z) {
    double p = std::arg(z);
    if (p < 0) p += kTwoPi;
    // arg(z) == pi maps to pi, arg slightly below -pi is impossible; a value
    // that rounds to exactly 2*pi is folded back to 0.
    if (p >= kTwoPi) p = 0;
    return p;
}
}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix4 kron2x2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("is_unitary: matrix must be square");
    ComplexMatrix g = m.adjoint() * m;
    g.diagonal().array() -= 1.0;
    return g.norm() <= tol;
}

UnitaryEigensystem eig_unitary(const ComplexMatrix& m) {
    if (!is_unitary(m, 1e-10))
        throw std::invalid_argument("eig_unitary: input is not unitary within 1e-10");

    // Schur of a normal matrix is (numerically) diagonal and Q is exactly
    // unitary, which keeps degenerate clusters orthonormal for free.
    Eigen::ComplexSchur<ComplexMatrix> schur(m);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("eig_unitary: Schur iteration failed");

    ComplexVector vals = schur.matrixT().diagonal();
    ComplexMatrix vecs = schur.matrixU();

    const Eigen::Index n = vals.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return phase_in_2pi(vals(i)) < phase_in_2pi(vals(j));
    });

    UnitaryEigensystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = vals(order[k]);
        out.eigenvectors.col(k) = vecs.col(order[k]);
    }
    return out;
}

Spectrum UnitaryEigensystem::spectrum(double cluster_tol) const {
    Spectrum s;
    const Eigen::Index n = eigenvalues.size();
    if (n == 0) return s;

    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
        bool gap = i == n ||
                   phase_in_2pi(eigenvalues(i)) - phase_in_2pi(eigenvalues(i - 1)) >= cluster_tol;
        if (gap) {
            s.eigenvalues.push_back(eigenvalues(start));
            s.multiplicities.push_back(static_cast<int>(i - start));
            start = i;
        }
    }
    // A cluster may straddle phase 0: merge the last cluster into the first
    // when the circular gap closes.
    if (s.eigenvalues.size() > 1) {
        double wrap = phase_in_2pi(eigenvalues(0)) + kTwoPi - phase_in_2pi(eigenvalues(n - 1));
        if (wrap < cluster_tol) {
            s.multiplicities.front() += s.multiplicities.back();
            s.eigenvalues.pop_back();
            s.multiplicities.pop_back();
        }
    }
    return s;
}

double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw std::invalid_argument("phase_distance: shape mismatch");
    // The minimizing phase is -arg tr(u^dag v). Forming the difference at
    // that phase and taking its norm avoids the catastrophic cancellation of
    // the norm-squared expansion, which cannot resolve below sqrt(eps).
    cplx cross = (u.adjoint() * v).trace();
    cplx ph = std::exp(cplx(0, -std::arg(cross)));
    return (u - ph * v).norm();
}

double infidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
        throw std::invalid_argument("infidelity: need square matrices of equal dimension");
    double d = static_cast<double>(u.rows());
    return 1.0 - std::abs((u.adjoint() * v).trace()) / d;
}

KronFactorization nearest_kron_factorization(const ComplexMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("nearest_kron_factorization: input must be 4x4");

    // Realignment: C[(2r+t),(2s+w)] = m[(2r+s),(2t+w)], so a product
    // a (x) b realigns to the rank-1 matrix vec(a) vec(b)^T.
    Eigen::Matrix4cd c;
    for (int r = 0; r < 2; ++r)
        for (int t = 0; t < 2; ++t)
            for (int s = 0; s < 2; ++s)
                for (int w = 0; w < 2; ++w)
                    c(2 * r + t, 2 * s + w) = m(2 * r + s, 2 * t + w);

    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double scale = std::sqrt(sv(0));
    Eigen::Vector4cd va = svd.matrixU().col(0) * scale;
    Eigen::Vector4cd vb = svd.matrixV().col(0).conjugate() * scale;

    KronFactorization f;
    f.a << va(0), va(1), va(2), va(3);
    f.b << vb(0), vb(1), vb(2), vb(3);
    f.residual = sv(1);
    return f;
}

}  // namespace tqsynth
