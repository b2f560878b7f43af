#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace qc {

/// Chunked parallel loop; results must go to preallocated slots indexed by i
/// so the outcome is deterministic regardless of scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    int nt = std::min<int>(threads, static_cast<int>(std::thread::hardware_concurrency()));
    nt = std::max(nt, 1);
    std::vector<std::thread> pool;
    std::size_t chunk = (n + nt - 1) / nt;
    for (int tindex = 0; tindex < nt; ++tindex) {
        std::size_t lo = tindex * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace qc
