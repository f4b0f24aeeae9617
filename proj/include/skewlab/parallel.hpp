#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace skewlab {

// Deterministic data-parallel loop. The chunk decomposition depends only on
// n, never on the thread count, and the body must write results keyed by
// index only. Reductions are done serially by the caller afterwards, so any
// output is bitwise independent of `threads`.
inline void parallel_for(size_t n, int threads,
                         const std::function<void(size_t, size_t)>& body) {
    if (n == 0) return;
    if (threads < 1) threads = 1;
    const size_t chunk = (n + 255) / 256 > 0 ? (n + 255) / 256 : 1;
    const size_t nchunks = (n + chunk - 1) / chunk;
    if (threads == 1 || nchunks == 1) {
        body(0, n);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= nchunks) break;
            size_t i0 = k * chunk;
            size_t i1 = std::min(n, i0 + chunk);
            body(i0, i1);
        }
    };
    std::vector<std::thread> pool;
    int nt = std::min<int>(threads, static_cast<int>(nchunks));
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace skewlab
