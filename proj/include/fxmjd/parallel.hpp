#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace fxmjd {

// Static partition of [0, n) across hardware threads; fn(i) must only touch
// slot i of its output, so results match sequential execution exactly.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || n < 4096) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t n_threads = std::min<std::size_t>(hw, n);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace fxmjd
