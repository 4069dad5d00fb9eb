#include "chshcert/complex_matrix.hpp"

#include "chshcert/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chshcert {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0)) {
    if (rows > kMaxSide || cols > kMaxSide)
        throw Error(Error::Kind::Size, "matrix side exceeds " + std::to_string(kMaxSide));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw Error(Error::Kind::Shape, "matrix product shape mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    simd::cgemm(data(), rhs.data(), out.data(), rows_, cols_, rhs.cols_);
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error(Error::Kind::Shape, "matrix sum shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error(Error::Kind::Shape, "matrix difference shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    ComplexMatrix out = *this;
    out += rhs;
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    ComplexMatrix out = *this;
    out -= rhs;
    return out;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    simd::scale_store(data(), data(), s, entries_.size());
    return *this;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = std::conj(entries_[i]);
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) throw Error(Error::Kind::Shape, "trace of non-square matrix");
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(simd::norm2(data(), entries_.size()));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) throw Error(Error::Kind::Shape, "hermiticity defect of non-square matrix");
    double d = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > ComplexMatrix::kMaxSide || cols > ComplexMatrix::kMaxSide)
        throw Error(Error::Kind::Size, "kron result exceeds supported side");
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij.real() == 0.0 && aij.imag() == 0.0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                cplx* dst = out.data() + (i * b.rows() + k) * cols + j * b.cols();
                simd::scale_store(dst, b.data() + k * b.cols(), aij, b.cols());
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
    if (!rho.is_square()) throw Error(Error::Kind::Shape, "partial trace of non-square matrix");
    std::size_t side = 1;
    for (int d : dims) {
        if (d < 1) throw Error(Error::Kind::Shape, "non-positive subsystem dimension");
        side *= static_cast<std::size_t>(d);
    }
    if (side != rho.rows())
        throw Error(Error::Kind::Shape, "dims product does not match matrix side");
    if (keep.empty()) throw Error(Error::Kind::Shape, "keep set must be non-empty");

    const int m = static_cast<int>(dims.size());
    std::vector<bool> kept(m, false);
    for (int k : keep) {
        if (k < 1 || k > m) throw Error(Error::Kind::Index, "keep index out of range");
        kept[k - 1] = true;
    }

    std::size_t kept_side = 1, traced_side = 1;
    for (int s = 0; s < m; ++s)
        (kept[s] ? kept_side : traced_side) *= static_cast<std::size_t>(dims[s]);

    // Row-major flat index -> (kept flat, traced flat) split.
    std::vector<std::size_t> kept_of(side), traced_of(side);
    for (std::size_t f = 0; f < side; ++f) {
        std::size_t rem = f, kf = 0, tf = 0;
        for (int s = 0; s < m; ++s) {
            std::size_t stride = 1;
            for (int u = s + 1; u < m; ++u) stride *= static_cast<std::size_t>(dims[u]);
            const std::size_t digit = rem / stride;
            rem %= stride;
            if (kept[s]) kf = kf * static_cast<std::size_t>(dims[s]) + digit;
            else tf = tf * static_cast<std::size_t>(dims[s]) + digit;
        }
        kept_of[f] = kf;
        traced_of[f] = tf;
    }

    // Group indices by traced part so the inner loop only pairs matches.
    std::vector<std::vector<std::size_t>> by_traced(traced_side);
    for (std::size_t f = 0; f < side; ++f) by_traced[traced_of[f]].push_back(f);

    ComplexMatrix out(kept_side, kept_side);
    for (const auto& group : by_traced)
        for (std::size_t f : group)
            for (std::size_t g : group)
                out(kept_of[f], kept_of[g]) += rho(f, g);
    return out;
}

double trace_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(Error::Kind::Shape, "trace norm of non-square matrix");
    // Hermitian input: sum of absolute eigenvalues, computed directly so
    // near-zero singular values do not pass through a square root.
    if (m.hermiticity_defect() <= 1e-10) {
        const EigenSystem es = hermitian_eigs(m);
        double sum = 0.0;
        for (double v : es.values) sum += std::abs(v);
        return sum;
    }
    // general case: singular values from M^dagger M
    const ComplexMatrix gram = m.dagger() * m;
    const EigenSystem es = hermitian_eigs(gram);
    double sum = 0.0;
    for (double v : es.values) sum += std::sqrt(std::max(v, 0.0));
    return sum;
}

EigenSystem hermitian_eigs(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(Error::Kind::Shape, "eigendecomposition of non-square matrix");
    const std::size_t n = m.rows();
    if (n > ComplexMatrix::kMaxEigSide)
        throw Error(Error::Kind::Size,
                    "eigensolver supports side <= " + std::to_string(ComplexMatrix::kMaxEigSide));
    if (m.hermiticity_defect() > 1e-10)
        throw Error(Error::Kind::Symmetry, "matrix is not Hermitian within 1e-10");

    // Work on the symmetrized copy to kill the sub-tolerance defect.
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double fnorm = std::max(a.frobenius_norm(), 1.0);
    const double stop = 1e-12 * fnorm;

    auto offdiag_mass = [&]() {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c)
                s += 2.0 * std::norm(a(r, c));
        return std::sqrt(s);
    };

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && offdiag_mass() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= stop / (static_cast<double>(n) * 16.0)) continue;
                const cplx phase = apq / r;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx spq = s * phase;  // s * e^{i phi}

                // Columns: col_p' = c*col_p - conj(spq)*col_q ; col_q' = spq*col_p + c*col_q
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(spq) * akq;
                    a(k, q) = spq * akp + c * akq;
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(spq) * vkq;
                    v(k, q) = spq * vkp + c * vkq;
                }
                // Rows (U^dagger from the left).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - spq * aqk;
                    a(q, k) = std::conj(spq) * apk + c * aqk;
                }
                a(p, q) = cplx(0.0, 0.0);
                a(q, p) = cplx(0.0, 0.0);
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        es.values[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) es.vectors(r, c) = v(r, order[c]);
    }
    return es;
}

double min_eigenvalue(const ComplexMatrix& m) {
    const EigenSystem es = hermitian_eigs(m);
    return es.values.back();
}

bool is_psd_within(const ComplexMatrix& m, double tol) {
    if (m.rows() <= ComplexMatrix::kMaxEigSide) return min_eigenvalue(m) >= -tol;
    // Cholesky of M + tol*I succeeds iff min eig >= -tol (up to rounding)
    const std::size_t n = m.rows();
    ComplexMatrix l(n, n);
    const double pivot_floor = -1e-12 * std::max(1.0, m.max_abs());
    for (std::size_t j = 0; j < n; ++j) {
        double diag = m(j, j).real() + tol;
        for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
        if (diag < pivot_floor) return false;
        const double ljj = std::sqrt(std::max(diag, 0.0));
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx v = m(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
            l(i, j) = (ljj > 0.0) ? v / ljj : cplx(0.0, 0.0);
        }
    }
    return true;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a,
                                std::size_t dim_b, Side side) {
    if (!rho.is_square() || rho.rows() != dim_a * dim_b)
        throw Error(Error::Kind::Shape, "partial transpose dims mismatch");
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t a1 = 0; a1 < dim_a; ++a1)
        for (std::size_t b1 = 0; b1 < dim_b; ++b1)
            for (std::size_t a2 = 0; a2 < dim_a; ++a2)
                for (std::size_t b2 = 0; b2 < dim_b; ++b2) {
                    const std::size_t r = a1 * dim_b + b1;
                    const std::size_t c = a2 * dim_b + b2;
                    const std::size_t rt = (side == Side::A ? a2 * dim_b + b1 : a1 * dim_b + b2);
                    const std::size_t ct = (side == Side::A ? a1 * dim_b + b2 : a2 * dim_b + b1);
                    out(rt, ct) = rho(r, c);
                }
    return out;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw Error(Error::Kind::Shape, "trace product shape mismatch");
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            t += a(i, k) * b(k, i);
    return t;
}

cplx trace_product_hermitian(const ComplexMatrix& h, const ComplexMatrix& rho) {
    if (h.rows() != rho.rows() || h.cols() != rho.cols() || !h.is_square())
        throw Error(Error::Kind::Shape, "trace product shape mismatch");
    return simd::cdot_conj(rho.data(), h.data(), h.size());
}

} // namespace chshcert
