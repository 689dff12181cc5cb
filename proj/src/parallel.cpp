#include "capmax/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace capmax {

namespace {
std::atomic<int> g_threads{0};
}

void set_default_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int default_threads() {
    int n = g_threads.load();
    if (n == 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads) {
    if (n == 0) return;
    int nt = threads > 0 ? threads : default_threads();
    nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nt), n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) break;
                    fn(i);
                }
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace capmax
