#pragma once

#include <cmath>
#include <cstdint>

namespace mlebound {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable per-replicate key from a base seed and an index.
inline std::uint64_t stream_key(std::uint64_t base, std::uint64_t index) {
    return mix64(mix64(base) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

// SplitMix64 in counter mode: output k is mix64(key + k*golden).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t key) : state_(key) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Open interval (0,1), 53-bit resolution.
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Box-Muller; the second variate of each pair is cached.
    double normal();
    double exponential() { return -std::log(uniform()); }
    // Marsaglia-Tsang squeeze/rejection; shape < 1 via the U^{1/a} boost.
    double gamma(double shape);
    // Beta(a,b) as G_a/(G_a+G_b).
    double beta(double a, double b);

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace mlebound
