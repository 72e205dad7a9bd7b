#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hmeasure {

/// Number of samples handled by one Monte Carlo block. Fixed, so that block
/// boundaries (and therefore substreams) never depend on the worker count.
inline constexpr std::size_t mc_block_size = 4096;

/// Running first and second moments of a block of draws.
struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double v) noexcept {
        sum += v;
        sum_sq += v * v;
        ++count;
    }

    void merge(const MomentSums& o) noexcept {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }

    double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }

    /// Standard error of the mean, from the unbiased sample variance.
    double standard_error() const noexcept {
        if (count < 2)
            return 0.0;
        const double n = static_cast<double>(count);
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        return std::sqrt(var / n);
    }
};

/// Runs `fn(block_index, first, count)` for every block of `total` items and
/// returns the per-block results in block order. Workers pull blocks from a
/// shared counter; callers reduce the returned vector sequentially, which keeps
/// results bit-identical for any `workers`.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::size_t total, unsigned workers, Fn&& fn) {
    const std::size_t nblocks = (total + mc_block_size - 1) / mc_block_size;
    std::vector<Result> out(nblocks);
    if (nblocks == 0)
        return out;

    auto run_one = [&](std::size_t b) {
        const std::size_t first = b * mc_block_size;
        const std::size_t count = std::min(mc_block_size, total - first);
        out[b] = fn(b, first, count);
    };

    if (workers <= 1 || nblocks == 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            run_one(b);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, nblocks));
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        pool.emplace_back([&] {
            for (std::size_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
                try {
                    run_one(b);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace hmeasure
