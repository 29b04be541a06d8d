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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace tqsynth {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using cplx = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Matrix8 = Eigen::Matrix<cplx, 8, 8>;

/// Eigenvalues of a unitary, grouped into degenerate clusters.
/// Multiplicities sum to the matrix dimension.
struct Spectrum {
    std::vector<cplx> eigenvalues;
    std::vector<int> multiplicities;
};

/// Full eigensystem of a unitary matrix. Eigenvalues are sorted by phase in
/// [0, 2*pi); the eigenvector matrix is unitary and columns follow the same
/// order. Ordering inside a degenerate cluster is unspecified.
struct UnitaryEigensystem {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors;

    /// Clusters eigenvalues whose phase gap is below cluster_tol
    /// (circularly, so a cluster may straddle phase 0).
    Spectrum spectrum(double cluster_tol = 1e-8) const;
};

/// Result of the nearest Kronecker-product factorization of a 4x4 matrix:
/// m ~ a (x) b, residual = second operator-Schmidt coefficient. A residual
/// below ~1e-8 certifies that m is a product to working precision.
struct KronFactorization {
    Eigen::Matrix2cd a;
    Eigen::Matrix2cd b;
    double residual;
};

/// Kronecker product, left factor on the slow index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Fixed-size Kronecker product of two one-qubit operators.
Matrix4 kron2x2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

/// True iff ||m^dag m - I||_F <= tol. Throws std::invalid_argument on a
/// non-square input.
bool is_unitary(const ComplexMatrix& m, double tol = 1e-10);

/// Eigensystem of a unitary matrix (Schur route, so the eigenvector matrix
/// stays unitary even for degenerate spectra). Throws std::invalid_argument
/// if m is not unitary within 1e-10.
UnitaryEigensystem eig_unitary(const ComplexMatrix& m);

/// min over phi of ||u - e^{i phi} v||_F. Global-phase-blind distance.
double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v);

/// 1 - |tr(u^dag v)| / d for d-dimensional u, v.
double infidelity(const ComplexMatrix& u, const ComplexMatrix& v);

/// Nearest Kronecker factorization of a 4x4 matrix via the realignment SVD.
KronFactorization nearest_kron_factorization(const ComplexMatrix& m);

}  // namespace tqsynth
