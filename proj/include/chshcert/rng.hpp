#pragma once

#include <cstdint>

namespace chshcert {

// splitmix64; used to derive independent per-task seeds so parallel
// verification streams never depend on the thread schedule.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) {
    return splitmix64(seed ^ splitmix64(task + 1));
}

} // namespace chshcert
