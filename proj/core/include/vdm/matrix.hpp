#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vdm {

using cplx = std::complex<double>;

// Dense row-major complex matrix; just enough linear algebra for the
// simulation harness (Gram products, trace powers, Jacobi eigenvalues).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const std::vector<cplx>& data() const { return data_; }

    static ComplexMatrix identity(int n);

    ComplexMatrix adjoint() const;
    ComplexMatrix multiply(const ComplexMatrix& rhs) const;
    // A^H * A without forming the adjoint.
    ComplexMatrix gram() const;
    // this scaled by a real factor
    void scale(double factor);
    // right-multiply columns by real diagonal entries: this * diag(d)
    void scale_columns(const std::vector<double>& d);

    bool is_hermitian(double tol = 1e-10) const;

    // Compensated trace (real part; imaginary part of traces of Hermitian
    // products is noise).
    double trace_real() const;

    // Frobenius inner product re tr(A^H B); with B Hermitian this is tr(A B)
    // when A is Hermitian too.
    double frobenius_inner(const ComplexMatrix& rhs) const;

    bool finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

// Eigenvalues of a Hermitian matrix via cyclic complex Jacobi rotations;
// tolerance on the off-diagonal Frobenius norm relative to the matrix norm.
// dim <= 512.
std::vector<double> hermitian_eigenvalues(ComplexMatrix a, double tol = 1e-10);

} // namespace vdm
