#pragma once

#include "chshcert/error.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace chshcert {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Every operator in this library lives on
// a truncated product space of side <= 4096; the eigensolver is capped at
// side 64.
class ComplexMatrix {
public:
    static constexpr std::size_t kMaxSide = 4096;
    static constexpr std::size_t kMaxEigSide = 64;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    cplx* data() noexcept { return entries_.data(); }
    const cplx* data() const noexcept { return entries_.data(); }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix& operator*=(cplx s);

    ComplexMatrix dagger() const;
    ComplexMatrix conj() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    // max |M - M^dagger| over entries; 0 for non-square is never asked.
    double hermiticity_defect() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_;
};

// Kronecker product; errors if the result would exceed kMaxSide per axis.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduces rho (square, side = product of dims) onto the kept factors.
// Subsystems are numbered 1..m; keep must be a non-empty subset.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Sum of singular values. Square input of side <= kMaxEigSide.
double trace_norm(const ComplexMatrix& m);

struct EigenSystem {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // columns, paired with values
};

// Cyclic-Jacobi diagonalization of a Hermitian matrix (defect <= 1e-10,
// side <= kMaxEigSide). Off-diagonal mass is driven below 1e-12 relative
// to the Frobenius norm.
EigenSystem hermitian_eigs(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

// min eigenvalue >= -tol, by eigendecomposition up to kMaxEigSide and a
// tolerance-shifted Cholesky beyond it.
bool is_psd_within(const ComplexMatrix& m, double tol);

enum class Side { A, B };

// Transposes the chosen tensor factor of a bipartite operator.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a,
                                std::size_t dim_b, Side side);

// Tr(a * b) for same-side square matrices.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(h * rho) for Hermitian rho: reduces to a Frobenius inner product,
// sum_ij conj(rho_ij) h_ij, which the SIMD lane handles in one pass.
cplx trace_product_hermitian(const ComplexMatrix& h, const ComplexMatrix& rho);

} // namespace chshcert
