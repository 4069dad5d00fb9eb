#include "chshcert/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// Complex doubles are interleaved (re, im), so one __m256d holds two of
// them. With bs = [br0, bi0, br1, bi1] and its in-lane swap
// [bi0, br0, bi1, br1], the product by the broadcast scalar (ar, ai) is
//   addsub(ar * bs, ai * swap(bs))
// which yields [ar*br - ai*bi, ar*bi + ai*br] per element.

namespace chshcert::simd::avx2 {

namespace {

inline __m256d cmul_broadcast(__m256d are, __m256d aim, __m256d bs) {
    const __m256d swapped = _mm256_permute_pd(bs, 0x5);
    return _mm256_addsub_pd(_mm256_mul_pd(are, bs), _mm256_mul_pd(aim, swapped));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a[i * k + p];
            if (aip.real() == 0.0 && aip.imag() == 0.0) continue;
            const __m256d are = _mm256_set1_pd(aip.real());
            const __m256d aim = _mm256_set1_pd(aip.imag());
            const double* brow = reinterpret_cast<const double*>(b + p * n);
            std::size_t j = 0;
            for (; j < n2; j += 2) {
                const __m256d bs = _mm256_loadu_pd(brow + 2 * j);
                const __m256d acc = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(acc, cmul_broadcast(are, aim, bs)));
            }
            if (j < n) {
                const cplx prod = aip * b[p * n + j];
                crow[2 * j] += prod.real();
                crow[2 * j + 1] += prod.imag();
            }
        }
    }
}

cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n) {
    const double* ap = reinterpret_cast<const double*>(a);
    const double* bp = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();  // ar*br and ai*bi partial sums
    __m256d acc_im = _mm256_setzero_pd();  // ai*br (even) and ar*bi (odd)
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d av = _mm256_loadu_pd(ap + 2 * i);
        const __m256d bv = _mm256_loadu_pd(bp + 2 * i);
        acc_re = _mm256_fmadd_pd(av, bv, acc_re);
        acc_im = _mm256_fmadd_pd(_mm256_permute_pd(av, 0x5), bv, acc_im);
    }
    double re = hsum(acc_re);
    // imag = sum over odd lanes - sum over even lanes
    double im = hsum(_mm256_addsub_pd(_mm256_setzero_pd(), acc_im));
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm2(const cplx* a, std::size_t n) {
    const double* ap = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d av = _mm256_loadu_pd(ap + 2 * i);
        acc = _mm256_fmadd_pd(av, av, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n) {
    const __m256d sre = _mm256_set1_pd(s.real());
    const __m256d sim = _mm256_set1_pd(s.imag());
    double* dp = reinterpret_cast<double*>(dst);
    const double* sp = reinterpret_cast<const double*>(src);
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d sv = _mm256_loadu_pd(sp + 2 * i);
        const __m256d dv = _mm256_loadu_pd(dp + 2 * i);
        _mm256_storeu_pd(dp + 2 * i, _mm256_add_pd(dv, cmul_broadcast(sre, sim, sv)));
    }
    for (; i < n; ++i) dst[i] += s * src[i];
}

void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n) {
    const __m256d sre = _mm256_set1_pd(s.real());
    const __m256d sim = _mm256_set1_pd(s.imag());
    double* dp = reinterpret_cast<double*>(dst);
    const double* sp = reinterpret_cast<const double*>(src);
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d sv = _mm256_loadu_pd(sp + 2 * i);
        _mm256_storeu_pd(dp + 2 * i, cmul_broadcast(sre, sim, sv));
    }
    for (; i < n; ++i) dst[i] = s * src[i];
}

} // namespace chshcert::simd::avx2

#endif // x86-64
