#include "mlebound/harness.hpp"

#include <cmath>

#include "mlebound/errors.hpp"
#include "mlebound/fit_replicates.hpp"
#include "mlebound/montecarlo.hpp"

namespace mlebound {

Vec standardized_mle(const Vec& theta_hat, const Vec& theta0, std::size_t n, const Matrix& fisher_sqrt) {
    Vec dev(theta0.size());
    for (std::size_t j = 0; j < dev.size(); ++j) dev[j] = theta_hat[j] - theta0[j];
    Vec w = fisher_sqrt * dev;
    const double rn = std::sqrt(static_cast<double>(n));
    for (double& v : w) v *= rn;
    return w;
}

std::vector<McEstimate> estimate_distances(const Model& model, const Vec& theta0, std::size_t n,
                                           const std::vector<TestFunction>& hs, std::size_t reps,
                                           std::uint64_t seed) {
    if (reps < 2) throw Error(ErrorKind::Domain, "need at least 2 replicates");
    for (const auto& h : hs)
        if (h.dim != model.dim_param())
            throw Error(ErrorKind::Domain, "test function " + h.id + " has the wrong dimension");
    const Matrix R = spd_sqrt(model.fisher_bar(theta0, n)).to_matrix();
    const std::size_t k = hs.size();
    // the pass does not need an eps-box; any positive value is ignored with with_k1 off
    BlockSums bs = run_fits(model, theta0, n, 1.0, reps, seed, false, 2 * k,
                            [&](std::size_t, const ReplicateFit& f, double* acc) {
                                const Vec w = standardized_mle(f.theta_hat, theta0, n, R);
                                for (std::size_t q = 0; q < k; ++q) {
                                    const double v = hs[q].evaluate(w);
                                    acc[2 * q] += v;
                                    acc[2 * q + 1] += v * v;
                                }
                            });
    const std::size_t rejected = static_cast<std::size_t>(bs.total()[2 * k]);
    std::vector<McEstimate> out;
    for (std::size_t q = 0; q < k; ++q) {
        const Estimate e = mean_estimate(bs, 2 * q, 2 * q + 1);
        McEstimate m;
        m.value = std::fabs(e.value - hs[q].gaussian_mean);
        m.stderr = std::hypot(e.stderr, hs[q].mean_stderr);
        m.reps = reps;
        m.seed = seed;
        m.rejected_replicates = rejected;
        out.push_back(m);
    }
    return out;
}

McEstimate estimate_distance(const Model& model, const Vec& theta0, std::size_t n, const TestFunction& h,
                             std::size_t reps, std::uint64_t seed) {
    return estimate_distances(model, theta0, n, {h}, reps, seed).front();
}

McEstimate estimate_mse(const Model& model, const Vec& theta0, std::size_t n, std::size_t reps,
                        std::uint64_t seed) {
    if (n < 2) throw Error(ErrorKind::Domain, "n must be at least 2");
    if (reps < 2) throw Error(ErrorKind::Domain, "need at least 2 replicates");
    BlockSums bs = run_fits(model, theta0, n, 1.0, reps, seed, false, 2,
                            [&](std::size_t, const ReplicateFit& f, double* acc) {
                                const double se = mse_value(f.theta_hat, theta0);
                                acc[0] += se;
                                acc[1] += se * se;
                            });
    const Estimate e = mean_estimate(bs, 0, 1);
    return {e.value, e.stderr, reps, seed, static_cast<std::size_t>(bs.total()[2])};
}

bool check_dominance(double bound, const McEstimate& est, double k_se) {
    if (!(k_se >= 0.0)) throw Error(ErrorKind::Domain, "k_se must be nonnegative");
    return est.value - k_se * est.stderr <= bound;
}

RateFit fit_rate(const std::vector<double>& n_grid, const std::vector<double>& values) {
    if (n_grid.size() != values.size()) throw Error(ErrorKind::Domain, "grid and values differ in length");
    if (n_grid.size() < 3) throw Error(ErrorKind::Domain, "rate fit needs at least 3 points");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (!(n_grid[i] > 0.0) || (i > 0 && !(n_grid[i] > n_grid[i - 1])))
            throw Error(ErrorKind::Domain, "n grid must be positive and strictly increasing");
        if (!(values[i] > 0.0))
            throw Error(ErrorKind::NonPositiveValue, "value at n=" + std::to_string(n_grid[i]) + " is not positive");
    }
    const std::size_t k = n_grid.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += std::log(n_grid[i]);
        my += std::log(values[i]);
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = std::log(n_grid[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(values[i]) - my);
    }
    RateFit r;
    r.n_grid = n_grid;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = std::log(values[i]) - (r.intercept + r.slope * std::log(n_grid[i]));
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / static_cast<double>(k));
    return r;
}

bool lemma_conditional_check(const FinitePmf& pmf, const std::function<double(const Vec&)>& f, double eps) {
    if (pmf.atoms.size() != pmf.probs.size()) throw Error(ErrorKind::Domain, "atoms and probabilities differ in length");
    double total = 0.0, all = 0.0, in_p = 0.0, in_f = 0.0;
    for (std::size_t a = 0; a < pmf.atoms.size(); ++a) {
        const double p = pmf.probs[a];
        if (p < 0.0) throw Error(ErrorKind::Domain, "negative probability");
        const double fv = f(pmf.atoms[a]);
        total += p;
        all += p * fv;
        bool inside = true;
        for (double m : pmf.atoms[a]) inside = inside && m < eps;
        if (inside) {
            in_p += p;
            in_f += p * fv;
        }
    }
    if (!(in_p > 0.0)) throw Error(ErrorKind::EmptyConditioningEvent, "no mass inside the conditioning event");
    const double lhs = in_f / in_p, rhs = all / total;
    return lhs <= rhs + 1e-12 * std::max(1.0, std::fabs(rhs));
}

}  // namespace mlebound
