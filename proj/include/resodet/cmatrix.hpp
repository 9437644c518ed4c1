#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "resodet/errors.hpp"
#include "resodet/scaled.hpp"

namespace resodet {

// Dense complex matrix, row-major.
struct CMatrix {
    int n = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    explicit CMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, Complex(0.0)) {}

    Complex& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const Complex& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static CMatrix identity(int n);
    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
};

// det(I + A) by LU with partial pivoting, accumulated as log-magnitude + phase.
ScaledComplex det_one_plus(const CMatrix& A);

Complex trace(const CMatrix& A);

double frobenius_norm(const CMatrix& A);

// Largest singular value by power iteration on A*A (relative tolerance 1e-10).
// Throws NumericalError if the iteration cap is hit.
double power_iteration_norm(const CMatrix& A, double rel_tol = 1e-10, int max_iter = 20000);

// All singular values, descending: cyclic Jacobi on the Hermitian matrix A*A.
std::vector<double> jacobi_singular_values(const CMatrix& A);

}  // namespace resodet
