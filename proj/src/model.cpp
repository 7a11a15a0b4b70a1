#include "mlebound/model.hpp"

#include <cmath>

#include "mlebound/errors.hpp"

namespace mlebound {

Dataset Model::sample(const Vec& theta, std::size_t n, std::uint64_t seed) const {
    if (auto fs = fixed_size(); fs && *fs != n)
        throw Error(ErrorKind::Domain, id() + ": design has " + std::to_string(*fs) + " rows, n=" +
                                           std::to_string(n));
    Dataset d;
    d.dim_obs = dim_obs();
    d.seed = seed;
    d.values.resize(n * d.dim_obs);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) sample_obs(i, theta, rng, d.values.data() + i * d.dim_obs);
    return d;
}

SymmetricPD Model::fisher_bar(const Vec& theta, std::size_t n) const {
    const std::size_t d = dim_param();
    Matrix acc(d, d);
    if (identically_distributed()) {
        acc = fisher_per_obs(0, theta);
    } else {
        for (std::size_t i = 0; i < n; ++i) acc += fisher_per_obs(i, theta);
        acc *= 1.0 / static_cast<double>(n);
    }
    return SymmetricPD(acc);
}

ReplicateFit Model::simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                                 bool with_k1) const {
    Dataset x = sample(theta0, n, key);
    ReplicateFit r;
    r.theta_hat = mle(x);
    if (with_k1) {
        const std::size_t d = dim_param();
        r.hessian_sum = Matrix(d, d);
        for (std::size_t i = 0; i < n; ++i) r.hessian_sum += hessian_per_obs(i, x.obs(i), theta0);
        r.envelope = data_envelope(theta0, eps, x, r.theta_hat);
    }
    return r;
}

std::size_t max_deviation_index(const Vec& theta_hat, const Vec& theta0) {
    std::size_t best = 0;
    double bv = -1.0;
    for (std::size_t j = 0; j < theta0.size(); ++j) {
        const double v = std::fabs(theta_hat[j] - theta0[j]);
        if (v > bv) {
            bv = v;
            best = j;
        }
    }
    return best;
}

}  // namespace mlebound
