#pragma once

#include <cstddef>
#include <functional>

namespace chshcert {

// Worker count resolved once from CHSH_THREADS (0 or unset = hardware).
unsigned thread_budget();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; the
// caller owns any output slots, so results are schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace chshcert
