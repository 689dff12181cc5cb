#ifndef CAPMAX_PARALLEL_HPP
#define CAPMAX_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace capmax {

/// Process-wide worker count for parallel loops (CLI --threads).
/// 0 means "use hardware concurrency".
void set_default_threads(int n);
int default_threads();

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks; each
/// index is processed exactly once, so writers into per-index slots stay
/// deterministic regardless of the thread count. Exceptions are captured
/// and the first one rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

} // namespace capmax

#endif
