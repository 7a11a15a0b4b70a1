#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "mlebound/rng.hpp"

namespace mlebound {

// Worker cap from BOUNDS_THREADS, else hardware concurrency.
unsigned worker_count();

// Replicates are grouped into fixed blocks of consecutive indices. Each block
// accumulates in index order, blocks are combined in block order, so sums do
// not depend on how many workers ran.
struct BlockSums {
    std::size_t nstat = 0;
    std::vector<std::vector<double>> sums;
    std::vector<std::size_t> counts;

    std::size_t total_count() const;
    std::vector<double> total() const;
    std::vector<double> means() const;
};

struct Estimate {
    double value = 0.0;
    double stderr = 0.0;
};

// fn(rep_index, rep_key, acc) adds this replicate's statistics into acc.
template <class Fn>
BlockSums run_replicates(std::size_t reps, std::uint64_t seed, std::size_t nstat, Fn&& fn,
                         std::size_t block = 64) {
    BlockSums out;
    out.nstat = nstat;
    const std::size_t nblocks = (reps + block - 1) / block;
    out.sums.assign(nblocks, std::vector<double>(nstat, 0.0));
    out.counts.assign(nblocks, 0);
    std::vector<std::exception_ptr> errors(nblocks);

    auto work = [&](std::size_t b) {
        try {
            const std::size_t lo = b * block, hi = std::min(reps, lo + block);
            for (std::size_t r = lo; r < hi; ++r) fn(r, stream_key(seed, r), out.sums[b].data());
            out.counts[b] = hi - lo;
        } catch (...) {
            errors[b] = std::current_exception();
        }
    };

    const unsigned nw = std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(nblocks)));
    if (nw <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) work(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nw; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < nblocks; b += nw) work(b);
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Delete-one-block jackknife of g(means).
Estimate jackknife(const BlockSums& bs, const std::function<double(const std::vector<double>&)>& g);

// Plain mean with stderr from sum (index i) and sum of squares (index j).
Estimate mean_estimate(const BlockSums& bs, std::size_t i, std::size_t j);

}  // namespace mlebound
