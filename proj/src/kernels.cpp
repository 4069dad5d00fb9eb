#include "chshcert/kernels.hpp"

#include "chshcert/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace chshcert::simd {

bool avx2_supported() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Lane resolve_initial_lane() {
    if (const char* env = std::getenv("CHSH_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Lane::scalar;
        if (v == "avx2") {
            if (!avx2_supported())
                throw Error(Error::Kind::Input, "CHSH_SIMD=avx2 but AVX2 is unavailable on this CPU");
            return Lane::avx2;
        }
        // anything else, including "auto", falls through to detection
    }
    return avx2_supported() ? Lane::avx2 : Lane::scalar;
}

std::atomic<Lane>& lane_slot() {
    static std::atomic<Lane> lane{resolve_initial_lane()};
    return lane;
}

} // namespace

const char* lane_name(Lane lane) {
    return lane == Lane::avx2 ? "avx2" : "scalar";
}

Lane active_lane() { return lane_slot().load(std::memory_order_relaxed); }

void force_lane(Lane lane) {
    if (lane == Lane::avx2 && !avx2_supported())
        throw Error(Error::Kind::Input, "AVX2 lane unavailable on this CPU");
    lane_slot().store(lane, std::memory_order_relaxed);
}

void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_lane() == Lane::avx2) return avx2::cgemm(a, b, c, m, k, n);
#endif
    scalar::cgemm(a, b, c, m, k, n);
}

cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_lane() == Lane::avx2) return avx2::cdot_conj(a, b, n);
#endif
    return scalar::cdot_conj(a, b, n);
}

double norm2(const cplx* a, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_lane() == Lane::avx2) return avx2::norm2(a, n);
#endif
    return scalar::norm2(a, n);
}

void scale_add(cplx* dst, const cplx* src, cplx s, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_lane() == Lane::avx2) return avx2::scale_add(dst, src, s, n);
#endif
    scalar::scale_add(dst, src, s, n);
}

void scale_store(cplx* dst, const cplx* src, cplx s, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_lane() == Lane::avx2) return avx2::scale_store(dst, src, s, n);
#endif
    scalar::scale_store(dst, src, s, n);
}

} // namespace chshcert::simd
