#include "chshcert/kernels.hpp"

namespace chshcert::simd::scalar {

void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a[i * k + p];
            if (aip.real() == 0.0 && aip.imag() == 0.0) continue;
            const cplx* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm2(const cplx* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += s * src[i];
}

void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = s * src[i];
}

} // namespace chshcert::simd::scalar
