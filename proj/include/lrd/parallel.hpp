#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lrd {

/// Run fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
/// Results must be written to preallocated slots so the outcome is
/// independent of the schedule.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    unsigned nt = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1u);
    nt = std::min<unsigned>(nt, static_cast<unsigned>(n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::atomic<bool> failed{false};
    std::exception_ptr eptr;
    std::mutex emtx;
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(emtx);
                    if (!eptr) eptr = std::current_exception();
                    failed.store(true);
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (eptr) std::rethrow_exception(eptr);
}

}  // namespace lrd
