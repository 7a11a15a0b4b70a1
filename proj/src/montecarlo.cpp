#include "mlebound/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "mlebound/errors.hpp"

namespace mlebound {

unsigned worker_count() {
    if (const char* env = std::getenv("BOUNDS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t BlockSums::total_count() const {
    std::size_t c = 0;
    for (std::size_t x : counts) c += x;
    return c;
}

std::vector<double> BlockSums::total() const {
    std::vector<double> t(nstat, 0.0);
    for (const auto& s : sums)
        for (std::size_t k = 0; k < nstat; ++k) t[k] += s[k];
    return t;
}

std::vector<double> BlockSums::means() const {
    std::vector<double> t = total();
    const double c = static_cast<double>(total_count());
    for (double& v : t) v /= c;
    return t;
}

Estimate jackknife(const BlockSums& bs, const std::function<double(const std::vector<double>&)>& g) {
    const std::size_t nb = bs.sums.size();
    const std::vector<double> tot = bs.total();
    const double n = static_cast<double>(bs.total_count());
    std::vector<double> m(bs.nstat);
    for (std::size_t k = 0; k < bs.nstat; ++k) m[k] = tot[k] / n;
    Estimate e;
    e.value = g(m);
    if (nb < 2) return e;
    std::vector<double> loo(nb);
    double avg = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const double nn = n - static_cast<double>(bs.counts[b]);
        for (std::size_t k = 0; k < bs.nstat; ++k) m[k] = (tot[k] - bs.sums[b][k]) / nn;
        loo[b] = g(m);
        avg += loo[b];
    }
    avg /= static_cast<double>(nb);
    double ss = 0.0;
    for (double v : loo) ss += (v - avg) * (v - avg);
    e.stderr = std::sqrt(ss * static_cast<double>(nb - 1) / static_cast<double>(nb));
    return e;
}

Estimate mean_estimate(const BlockSums& bs, std::size_t i, std::size_t j) {
    const std::vector<double> tot = bs.total();
    const double n = static_cast<double>(bs.total_count());
    Estimate e;
    e.value = tot[i] / n;
    if (n > 1) {
        const double var = std::max(0.0, (tot[j] - n * e.value * e.value) / (n - 1.0));
        e.stderr = std::sqrt(var / n);
    }
    return e;
}

}  // namespace mlebound
