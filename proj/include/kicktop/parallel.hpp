// parallel.hpp: deterministic block-parallel execution and seeded block RNGs
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace kicktop {

// Work is cut into fixed-size blocks; block contents never depend on the worker count.
inline constexpr std::size_t kBlockSize = 4096;

inline std::size_t block_count(std::size_t items, std::size_t block = kBlockSize) noexcept {
    return (items + block - 1) / block;
}

// Resolves a requested worker count; 0 means hardware concurrency.
inline unsigned resolve_workers(unsigned requested) noexcept {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(task) for task in [0, tasks) on up to `workers` threads.
// Tasks are claimed dynamically; callers must write results into per-task slots.
template <class Body>
void parallel_for(std::size_t tasks, unsigned workers, Body&& body) {
    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks; ++t) body(t);
        return;
    }
    std::size_t next = 0;
    std::mutex mtx;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            std::size_t t;
            {
                std::lock_guard lock(mtx);
                if (next >= tasks || error) return;
                t = next++;
            }
            try {
                body(t);
            } catch (...) {
                std::lock_guard lock(mtx);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

// Engine for one (seed, stream, block) triple.
inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace kicktop
