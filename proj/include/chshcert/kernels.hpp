#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops over interleaved complex<double> arrays.
// Every kernel exists as a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active lane is resolved once at startup from
// CPUID, overridable with CHSH_SIMD=scalar|avx2|auto (tests force lanes
// explicitly to compare outputs).

namespace chshcert::simd {

using cplx = std::complex<double>;

enum class Lane { scalar, avx2 };

const char* lane_name(Lane lane);

// Lane selected at startup (CPUID + CHSH_SIMD override).
Lane active_lane();

// Forces a lane; throws if the lane is unsupported on this CPU. Test hook.
void force_lane(Lane lane);

bool avx2_supported();

// c = a * b, row-major, a is m x k, b is k x n, c is m x n (overwritten).
void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n);

// sum_i conj(a[i]) * b[i]
cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n);

// sum_i |a[i]|^2
double norm2(const cplx* a, std::size_t n);

// dst[i] += s * src[i]
void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n);

// dst[i] = s * src[i]
void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n);

// Reference lane, always available. The dispatched entry points above
// resolve to these when AVX2 is absent or disabled.
namespace scalar {
void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n);
cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n);
double norm2(const cplx* a, std::size_t n);
void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n);
void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n);
cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n);
double norm2(const cplx* a, std::size_t n);
void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n);
void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n);
} // namespace avx2
#endif

} // namespace chshcert::simd
