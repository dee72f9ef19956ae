#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "cannonball/errors.hpp"

namespace cannonball {

// Deterministic block decomposition: an index range is cut into fixed-size
// blocks independent of the worker count, each block is reduced sequentially
// in index order, and the block partials are folded by a pairwise tree in
// block order.  Identical results for 1 worker and N workers, exact merges
// for integer accumulators, fixed rounding for floating accumulators.

inline constexpr std::uint64_t kBlockSize = 1u << 14;

// per_block(lo, hi) reduces the half-open index range [lo, hi).
// combine(a, b) must be associative on adjacent partials.
template <typename R, typename PerBlock, typename Combine>
R parallel_block_reduce(std::uint64_t lo, std::uint64_t hi, unsigned workers,
                        R identity, PerBlock per_block, Combine combine) {
    if (workers < 1) throw ParameterError("parallel_block_reduce: workers must be >= 1");
    if (lo >= hi) return identity;

    const std::uint64_t n_blocks = (hi - lo + kBlockSize - 1) / kBlockSize;
    std::vector<R> partial(static_cast<std::size_t>(n_blocks), identity);

    auto run_block = [&](std::uint64_t bi) {
        const std::uint64_t b_lo = lo + bi * kBlockSize;
        const std::uint64_t b_hi = std::min(hi, b_lo + kBlockSize);
        partial[static_cast<std::size_t>(bi)] = per_block(b_lo, b_hi);
    };

    if (workers == 1 || n_blocks == 1) {
        for (std::uint64_t bi = 0; bi < n_blocks; ++bi) run_block(bi);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::uint64_t bi = next.fetch_add(1);
                if (bi >= n_blocks) return;
                run_block(bi);
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::uint64_t>(workers, n_blocks);
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Pairwise fold in block order.
    while (partial.size() > 1) {
        std::size_t out = 0;
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2) {
            partial[out++] = combine(partial[i], partial[i + 1]);
        }
        if (partial.size() % 2 == 1) partial[out++] = partial.back();
        partial.resize(out);
    }
    return partial.empty() ? identity : partial.front();
}

// Parallel for over fixed blocks (no reduction); used to fill arrays whose
// slots are disjoint per block.
template <typename Body>
void parallel_block_for(std::uint64_t lo, std::uint64_t hi, unsigned workers, Body body) {
    parallel_block_reduce<int>(
        lo, hi, workers, 0,
        [&](std::uint64_t a, std::uint64_t b) {
            body(a, b);
            return 0;
        },
        [](int, int) { return 0; });
}

}  // namespace cannonball
