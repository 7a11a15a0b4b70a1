#pragma once

#include <cmath>
#include <span>
#include <utility>

// Brute-force Beta likelihood maximizer: coarse grid, then nested golden
// sections (the log-likelihood is jointly concave). Uses only lgamma.
namespace oracle {

inline double beta_loglik(double a, double b, double mlx, double ml1mx) {
    return (a - 1.0) * mlx + (b - 1.0) * ml1mx - std::lgamma(a) - std::lgamma(b) + std::lgamma(a + b);
}

template <class F>
double golden_max(F f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    return (lo + hi) / 2.0;
}

inline std::pair<double, double> beta_mle_bruteforce(std::span<const double> x) {
    double mlx = 0.0, ml1mx = 0.0;
    for (double v : x) {
        mlx += std::log(v);
        ml1mx += std::log1p(-v);
    }
    mlx /= static_cast<double>(x.size());
    ml1mx /= static_cast<double>(x.size());
    double ba = 1.0, bb = 1.0, best = -INFINITY;
    for (double a = 0.05; a <= 30.0; a *= 1.05)
        for (double b = 0.05; b <= 30.0; b *= 1.05) {
            const double l = beta_loglik(a, b, mlx, ml1mx);
            if (l > best) {
                best = l;
                ba = a;
                bb = b;
            }
        }
    auto best_b = [&](double a) {
        return golden_max([&](double b) { return beta_loglik(a, b, mlx, ml1mx); }, bb / 1.2, bb * 1.2, 1e-11);
    };
    const double a = golden_max([&](double a) { return beta_loglik(a, best_b(a), mlx, ml1mx); }, ba / 1.2, ba * 1.2,
                                1e-11);
    return {a, best_b(a)};
}

}  // namespace oracle
