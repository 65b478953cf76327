#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace expsieve {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

// Deterministic parallel map over [0, n): fn(i) writes only into slot i of
// whatever the caller owns, so the result is independent of the thread count.
// Reductions over the slots happen afterwards, sequentially, in index order.
template <typename Fn>
void parallel_for_ordered(size_t n, int threads, Fn&& fn) {
    int width = resolve_threads(threads);
    if (width <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (size_t(width) > n) width = int(n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(width);
    for (int w = 0; w < width; ++w) {
        pool.emplace_back([&, w]() {
            try {
                // strided assignment keeps per-thread work balanced when cost grows with i
                for (size_t i = size_t(w); i < n; i += size_t(width)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace expsieve
