#pragma once

#include <cmath>

#include "mlebound/errors.hpp"
#include "mlebound/model.hpp"
#include "mlebound/montecarlo.hpp"

namespace mlebound {

inline bool is_fit_failure(const Error& e) {
    return e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::NonInterior ||
           e.kind() == ErrorKind::DegenerateData;
}

// Fits one replicate, resampling with sub-seeds when the MLE fails or leaves
// the parameter space. Returns the number of rejected attempts.
inline std::size_t fit_with_resampling(const Model& model, const Vec& theta0, std::size_t n, double eps,
                                       std::uint64_t key, bool with_k1, ReplicateFit& out) {
    constexpr std::size_t kMaxAttempts = 64;
    std::size_t rejected = 0;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const std::uint64_t k = attempt == 0 ? key : stream_key(key, attempt);
        try {
            out = model.simulate_fit(theta0, n, eps, k, with_k1);
            bool ok = model.in_parameter_space(out.theta_hat);
            for (double v : out.theta_hat) ok = ok && std::isfinite(v);
            if (ok) return rejected;
        } catch (const Error& e) {
            if (!is_fit_failure(e)) throw;
        }
        ++rejected;
    }
    throw Error(ErrorKind::TooManyRejections, "replicate failed " + std::to_string(kMaxAttempts) + " fits");
}

// Stat slot nstat is appended for the rejection count.
// fn(rep, fit, acc) adds the replicate's statistics.
template <class Fn>
BlockSums run_fits(const Model& model, const Vec& theta0, std::size_t n, double eps, std::size_t reps,
                   std::uint64_t seed, bool with_k1, std::size_t nstat, Fn&& fn) {
    BlockSums bs = run_replicates(reps, seed, nstat + 1, [&](std::size_t r, std::uint64_t key, double* acc) {
        ReplicateFit fit;
        acc[nstat] += static_cast<double>(fit_with_resampling(model, theta0, n, eps, key, with_k1, fit));
        fn(r, fit, acc);
    });
    const double rejected = bs.total()[nstat];
    if (rejected > 0.01 * static_cast<double>(reps))
        throw Error(ErrorKind::TooManyRejections,
                    std::to_string(static_cast<long long>(rejected)) + " failed fits in " + std::to_string(reps) +
                        " replicates");
    return bs;
}

}  // namespace mlebound
