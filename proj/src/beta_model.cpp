#include "mlebound/beta_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"
#include "mlebound/specfun.hpp"

namespace mlebound {

namespace {

inline double mn(double a, double b) { return b < a ? b : a; }
inline double mx(double a, double b) { return a < b ? b : a; }

bool small_integer_shapes(double a, double b) {
    return a == std::floor(a) && b == std::floor(b) && a >= 1 && b >= 1 && a + b - 1 <= 32;
}

// a-th smallest of k = a+b-1 uniforms
double order_statistic(int a, int k, SplitMix64& rng) {
    if (k == 4 && (a == 2 || a == 3)) {
        const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform(), u4 = rng.uniform();
        const double lo1 = mn(u1, u2), hi1 = mx(u1, u2), lo2 = mn(u3, u4), hi2 = mx(u3, u4);
        return a == 2 ? mn(mx(lo1, lo2), mn(hi1, hi2)) : mx(mx(lo1, lo2), mn(hi1, hi2));
    }
    std::array<double, 32> u{};
    for (int i = 0; i < k; ++i) u[i] = rng.uniform();
    std::nth_element(u.begin(), u.begin() + (a - 1), u.begin() + k);
    return u[a - 1];
}

}  // namespace

BetaStats beta_stats(std::span<const double> x) {
    BetaStats s;
    s.n = x.size();
    for (double v : x) {
        if (!(v > 0.0 && v < 1.0)) throw Error(ErrorKind::NonInterior, "observation outside (0,1)");
        s.mean_log_x += std::log(v);
        s.mean_log_1mx += std::log1p(-v);
        s.mean_x += v;
        s.mean_x2 += v * v;
    }
    const double n = static_cast<double>(s.n);
    s.mean_log_x /= n;
    s.mean_log_1mx /= n;
    s.mean_x /= n;
    s.mean_x2 /= n;
    return s;
}

double beta_loglik_per_obs(double a, double b, const BetaStats& s) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * s.mean_log_x +
           (b - 1.0) * s.mean_log_1mx;
}

BetaMleResult beta_mle_from_stats(const BetaStats& s, double tol, int max_iter) {
    if (s.n < 2) throw Error(ErrorKind::Domain, "beta_mle needs n >= 2");
    double a = 1.0, b = 1.0;
    const double m = s.mean_x, v = s.mean_x2 - s.mean_x * s.mean_x;
    if (v > 0.0) {
        const double common = m * (1.0 - m) / v - 1.0;
        if (common > 0.0) {
            a = m * common;
            b = (1.0 - m) * common;
        }
    }
    auto grad = [&](double x, double y, double& g1, double& g2) {
        const double ds = digamma(x + y);
        g1 = ds - digamma(x) + s.mean_log_x;
        g2 = ds - digamma(y) + s.mean_log_1mx;
    };
    BetaMleResult r;
    double g1, g2;
    grad(a, b, g1, g2);
    double ll = beta_loglik_per_obs(a, b, s);
    for (int it = 0; it < max_iter; ++it) {
        const double gn = std::max(std::fabs(g1), std::fabs(g2));
        if (gn <= tol) {
            r = {a, b, it, gn};
            return r;
        }
        // Hessian of the per-observation log-likelihood, negative definite.
        const double tab = trigamma(a + b);
        const double h11 = tab - trigamma(a), h22 = tab - trigamma(b), h12 = tab;
        const double det = h11 * h22 - h12 * h12;
        const double da = -(h22 * g1 - h12 * g2) / det;
        const double db = -(-h12 * g1 + h11 * g2) / det;
        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 60; ++half, step *= 0.5) {
            const double na = a + step * da, nb = b + step * db;
            if (!(na > 0.0 && nb > 0.0)) continue;
            const double nll = beta_loglik_per_obs(na, nb, s);
            double n1, n2;
            grad(na, nb, n1, n2);
            const double ngn = std::max(std::fabs(n1), std::fabs(n2));
            // Near the optimum the log-likelihood change is below rounding,
            // so a smaller gradient also counts as progress.
            if (nll >= ll - 1e-14 * (1.0 + std::fabs(ll)) || ngn < gn) {
                a = na;
                b = nb;
                g1 = n1;
                g2 = n2;
                ll = nll;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    const double gn = std::max(std::fabs(g1), std::fabs(g2));
    if (gn <= tol) return {a, b, max_iter, gn};
    throw Error(ErrorKind::NoConvergence, "Beta Newton iteration did not reach tolerance");
}

BetaMleResult beta_mle(std::span<const double> x, double tol, int max_iter) {
    return beta_mle_from_stats(beta_stats(x), tol, max_iter);
}

SymmetricPD beta_fisher(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::Domain, "Beta shapes must be positive");
    const double tab = trigamma(a + b), ta = trigamma(a), tb = trigamma(b);
    const double delta = ta * tb - tab * (ta + tb);
    if (!(delta > 0.0)) throw Error(ErrorKind::NotPD, "delta_I <= 0");
    Matrix f(2, 2);
    f(0, 0) = ta - tab;
    f(0, 1) = f(1, 0) = -tab;
    f(1, 1) = tb - tab;
    return SymmetricPD(f);
}

double BetaModel::draw(double a, double b, SplitMix64& rng) {
    if (small_integer_shapes(a, b)) return order_statistic(static_cast<int>(a), static_cast<int>(a + b - 1), rng);
    return rng.beta(a, b);
}

void BetaModel::sample_obs(std::size_t, const Vec& theta, SplitMix64& rng, double* out) const {
    out[0] = draw(theta[0], theta[1], rng);
}

Vec BetaModel::score_per_obs(std::size_t, std::span<const double> x, const Vec& t) const {
    const double ds = digamma(t[0] + t[1]);
    return {ds - digamma(t[0]) + std::log(x[0]), ds - digamma(t[1]) + std::log1p(-x[0])};
}

Matrix BetaModel::hessian_per_obs(std::size_t, std::span<const double>, const Vec& t) const {
    Matrix f = fisher_per_obs(0, t);
    f *= -1.0;
    return f;
}

Matrix BetaModel::fisher_per_obs(std::size_t, const Vec& t) const { return beta_fisher(t[0], t[1]).to_matrix(); }

std::optional<Tensor3> BetaModel::constant_envelope(const Vec& t, double eps) const {
    const double a = t[0], b = t[1];
    if (!(eps > 0.0 && eps < std::min(a, b))) throw Error(ErrorKind::Domain, "Beta envelope needs 0 < eps < min(a,b)");
    const double pi4_15 = std::pow(std::numbers::pi, 4) / 15.0;
    Tensor3 m(2);
    const double m111 = 6.0 * b / std::pow(a - eps, 4) + b * pi4_15;
    const double m222 = 6.0 * a / std::pow(b - eps, 4) + a * pi4_15;
    const double cross = 2.0 / std::pow(a + b - 2.0 * eps, 3) + 2.0 * zeta3_upper();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) m(i, j, k) = cross;
    m(0, 0, 0) = m111;
    m(1, 1, 1) = m222;
    return m;
}

Tensor3 BetaModel::data_envelope(const Vec& theta0, double eps, const Dataset& x, const Vec&) const {
    Tensor3 m = *constant_envelope(theta0, eps);
    m *= static_cast<double>(x.size());
    return m;
}

Vec BetaModel::mle(const Dataset& x) const {
    BetaMleResult r = beta_mle(x.values);
    return {r.alpha, r.beta};
}

BetaStats BetaModel::simulate_stats(double a, double b, std::size_t n, SplitMix64& rng) {
    BetaStats s;
    s.n = n;
    double sx = 0.0, sx2 = 0.0;
    if (small_integer_shapes(a, b)) {
        // Sum of logs as the log of a running product, renormalised by frexp.
        // Every draw is >= 2^-54, so 16 factors cannot underflow.
        const int ia = static_cast<int>(a), k = static_cast<int>(a + b - 1);
        double pa = 1.0, pb = 1.0;
        long ea = 0, eb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = order_statistic(ia, k, rng);
            pa *= x;
            pb *= 1.0 - x;
            sx += x;
            sx2 += x * x;
            if ((i & 15) == 15) {
                int e;
                pa = std::frexp(pa, &e);
                ea += e;
                pb = std::frexp(pb, &e);
                eb += e;
            }
        }
        s.mean_log_x = (std::log(pa) + static_cast<double>(ea) * std::numbers::ln2) / static_cast<double>(n);
        s.mean_log_1mx = (std::log(pb) + static_cast<double>(eb) * std::numbers::ln2) / static_cast<double>(n);
    } else {
        double la = 0.0, lb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = rng.beta(a, b);
            if (!(x > 0.0 && x < 1.0)) throw Error(ErrorKind::NonInterior, "draw on the boundary");
            la += std::log(x);
            lb += std::log1p(-x);
            sx += x;
            sx2 += x * x;
        }
        s.mean_log_x = la / static_cast<double>(n);
        s.mean_log_1mx = lb / static_cast<double>(n);
    }
    s.mean_x = sx / static_cast<double>(n);
    s.mean_x2 = sx2 / static_cast<double>(n);
    return s;
}

ReplicateFit BetaModel::simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                                     bool with_k1) const {
    SplitMix64 rng(key);
    BetaStats s = simulate_stats(theta0[0], theta0[1], n, rng);
    BetaMleResult m = beta_mle_from_stats(s, 1e-13, 200);
    ReplicateFit r;
    r.theta_hat = {m.alpha, m.beta};
    if (with_k1) {
        r.hessian_sum = hessian_per_obs(0, {}, theta0);
        r.hessian_sum *= static_cast<double>(n);
        r.envelope = *constant_envelope(theta0, eps);
        r.envelope *= static_cast<double>(n);
    }
    return r;
}

std::optional<Matrix> BetaModel::hessian_variance(std::size_t, const Vec&) const { return Matrix(2, 2); }

}  // namespace mlebound
