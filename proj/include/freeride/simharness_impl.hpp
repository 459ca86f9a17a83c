#pragma once

#include <atomic>
#include <thread>

namespace freeride::sim {

template <typename Outcome, typename Fn>
std::vector<Outcome> parallel_map(std::uint64_t first, std::size_t count, std::size_t workers,
                                  const Fn& fn) {
    std::vector<Outcome> out(count);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count == 0 ? std::size_t{1} : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(first + i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            out[i] = fn(first + i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    return out;
}

} // namespace freeride::sim
