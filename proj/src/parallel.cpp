#include "gtau/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gtau {

static unsigned g_override = 0;

void set_thread_cap_override(unsigned n) { g_override = n; }

unsigned thread_cap() {
    if (g_override > 0) return g_override;
    if (const char* env = std::getenv("GELFOND_TAU_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return (unsigned)std::min<long>(v, 256);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn) {
    unsigned nt = thread_cap();
    if (nt <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    if (nt > n_chunks) nt = (unsigned)n_chunks;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr eptr;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n_chunks || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) eptr = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(eptr);
}

}  // namespace gtau
