#include "mlebound/normal_model.hpp"

#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"

namespace mlebound {

NormalMle normal_mle(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorKind::Domain, "normal_mle needs n >= 2");
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += v;
    NormalMle r;
    r.mu = s / n;
    double ss = 0.0;
    for (double v : x) ss += (v - r.mu) * (v - r.mu);
    r.sigma2 = ss / n;
    r.degenerate = !(r.sigma2 > 0.0);
    return r;
}

void NormalModel::sample_obs(std::size_t, const Vec& theta, SplitMix64& rng, double* out) const {
    out[0] = theta[0] + std::sqrt(theta[1]) * rng.normal();
}

Vec NormalModel::score_per_obs(std::size_t, std::span<const double> x, const Vec& t) const {
    const double r = x[0] - t[0], s2 = t[1];
    return {r / s2, -0.5 / s2 + r * r / (2.0 * s2 * s2)};
}

Matrix NormalModel::hessian_per_obs(std::size_t, std::span<const double> x, const Vec& t) const {
    const double r = x[0] - t[0], s2 = t[1];
    Matrix h(2, 2);
    h(0, 0) = -1.0 / s2;
    h(0, 1) = h(1, 0) = -r / (s2 * s2);
    h(1, 1) = 0.5 / (s2 * s2) - r * r / (s2 * s2 * s2);
    return h;
}

Matrix NormalModel::fisher_per_obs(std::size_t, const Vec& t) const {
    return Matrix::diagonal({1.0 / t[1], 0.5 / (t[1] * t[1])});
}

Tensor3 NormalModel::data_envelope(const Vec& theta0, double eps, const Dataset& x, const Vec& theta_hat) const {
    const double s2 = theta0[1];
    if (!(eps > 0.0 && eps < s2)) throw Error(ErrorKind::Domain, "normal envelope needs 0 < eps < sigma^2");
    const double n = static_cast<double>(x.size());
    const double g = s2 - eps;
    const double dev = theta_hat[0] - theta0[0];  // Xbar - mu
    Tensor3 m(2, 0.0);
    const double m112 = n / (g * g);
    const double m122 = 2.0 * n / (g * g * g) * (std::fabs(dev) + eps);
    const double m222 = n / (g * g * g) + 9.0 * n / (g * g * g * g) * (theta_hat[1] + dev * dev + eps * eps);
    m(0, 0, 1) = m(0, 1, 0) = m(1, 0, 0) = m112;
    m(0, 1, 1) = m(1, 0, 1) = m(1, 1, 0) = m122;
    m(1, 1, 1) = m222;
    return m;
}

Vec NormalModel::mle(const Dataset& x) const {
    NormalMle r = normal_mle(x.values);
    if (r.degenerate) throw Error(ErrorKind::DegenerateData, "all observations identical");
    return {r.mu, r.sigma2};
}

ReplicateFit NormalModel::simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                                       bool with_k1) const {
    // Everything needed is a function of (Xbar, sigma_hat^2).
    SplitMix64 rng(key);
    const double sd = std::sqrt(theta0[1]);
    double sum = 0.0, sum2 = 0.0;
    Vec xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = sd * rng.normal();
    for (double v : xs) sum += v;
    const double mean = sum / static_cast<double>(n);
    for (double v : xs) sum2 += (v - mean) * (v - mean);
    ReplicateFit r;
    r.theta_hat = {theta0[0] + mean, sum2 / static_cast<double>(n)};
    if (!(r.theta_hat[1] > 0.0)) throw Error(ErrorKind::DegenerateData, "all observations identical");
    if (with_k1) {
        const double s2 = theta0[1];
        const double nn = static_cast<double>(n);
        // sum (x - mu)^2 = n (sigma_hat^2 + (Xbar - mu)^2)
        const double ssq = nn * (r.theta_hat[1] + mean * mean);
        r.hessian_sum = Matrix(2, 2);
        r.hessian_sum(0, 0) = -nn / s2;
        r.hessian_sum(0, 1) = r.hessian_sum(1, 0) = -nn * mean / (s2 * s2);
        r.hessian_sum(1, 1) = nn / (2.0 * s2 * s2) - ssq / (s2 * s2 * s2);
        Dataset sized;
        sized.values.assign(n, 0.0);  // only size() is read
        r.envelope = data_envelope(theta0, eps, sized, r.theta_hat);
    }
    return r;
}

QuadratureRule gauss_hermite(std::size_t points) {
    Matrix j(points, points);
    for (std::size_t k = 1; k < points; ++k) j(k - 1, k) = j(k, k - 1) = std::sqrt(static_cast<double>(k));
    EigenSystem es = eigendecompose_symmetric(j);
    QuadratureRule q{es.values, Vec(points)};
    for (std::size_t k = 0; k < points; ++k) q.weights[k] = es.vectors(0, k) * es.vectors(0, k);
    return q;
}

std::optional<double> NormalModel::score_moment4(std::size_t, const Vec& t, const Vec& a, const Vec& b,
                                                 const Vec& c, const Vec& e) const {
    // Degree-8 polynomial in z; 8 nodes integrate degree 15 exactly.
    static const QuadratureRule q = gauss_hermite(8);
    const double sd = std::sqrt(t[1]);
    double acc = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const double z = q.nodes[k];
        const double s1 = z / sd, s2 = (z * z - 1.0) / (2.0 * t[1]);
        const double pa = a[0] * s1 + a[1] * s2, pb = b[0] * s1 + b[1] * s2;
        const double pc = c[0] * s1 + c[1] * s2, pe = e[0] * s1 + e[1] * s2;
        acc += q.weights[k] * pa * pb * pc * pe;
    }
    return acc;
}

std::optional<Matrix> NormalModel::hessian_variance(std::size_t, const Vec& t) const {
    const double s2 = t[1];
    Matrix v(2, 2);
    v(0, 1) = v(1, 0) = 1.0 / (s2 * s2 * s2);
    v(1, 1) = 2.0 / (s2 * s2 * s2 * s2);
    return v;
}

std::optional<double> NormalModel::score_difference_cube(std::size_t, const Vec& t, const Matrix& A) const {
    // sum_m |sum_l A_ml D_l| <= sum_l w_l |D_l| with column sums w_l, then the
    // power-mean step (sum of d terms)^3 <= d^2 sum of cubes, and for each
    // score difference |a - b|^3 <= 4(|a|^3 + |b|^3):
    //   E|D_mu|^3     <= 8 E|X - mu|^3 / sigma^6 = 8 (2 sqrt2/sqrt(pi)) / sigma^3
    //   E|D_sigma2|^3 <= 8 E(X - mu)^6 / (8 sigma^12)  = 15 / sigma^6
    const double s2 = t[1], sd = std::sqrt(s2);
    double w[2] = {0.0, 0.0};
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t m = 0; m < 2; ++m) w[l] += std::fabs(A(m, l));
    const double e1 = 8.0 * 2.0 * std::numbers::sqrt2 / std::sqrt(std::numbers::pi) / (sd * s2);
    const double e2 = 15.0 / (s2 * s2 * s2);
    return 4.0 * (w[0] * w[0] * w[0] * e1 + w[1] * w[1] * w[1] * e2);
}

std::optional<MleMoments> NormalModel::mle_moments(const Vec& t, std::size_t n) const {
    const double s2 = t[1], nn = static_cast<double>(n);
    const double v_mu = s2 / nn;
    const double v_s2 = s2 * s2 / nn * (2.0 - 1.0 / nn);
    MleMoments m{{v_mu, v_s2}, Matrix(2, 2)};
    m.mixed(0, 0) = 3.0 * s2 * s2 / (nn * nn);
    m.mixed(0, 1) = m.mixed(1, 0) = v_mu * v_s2;
    // sigma_hat^2 = sigma^2 G / n, G ~ chi2_{n-1}; E(G - n)^4 = 12n^2 + 4n - 15
    m.mixed(1, 1) = s2 * s2 * s2 * s2 / (nn * nn) * (12.0 + 4.0 / nn - 15.0 / (nn * nn));
    return m;
}

std::optional<double> NormalModel::k1_envelope_closed(const Vec& t, std::size_t n, double eps) const {
    // Envelope half of K1, general in eps; at eps = sigma^2/2 this is the
    // closed-form 4[...] + 32[...]^{1/2} used by bound_normal.
    const double s2 = t[1], sd = std::sqrt(s2), nn = static_cast<double>(n);
    if (!(eps > 0.0 && eps < s2)) throw Error(ErrorKind::Domain, "normal envelope needs 0 < eps < sigma^2");
    const double g = s2 - eps;
    const double r2 = std::numbers::sqrt2;
    const double first = s2 * s2 / (g * g) *
                         (r2 + std::sqrt(1.5) + 8.0 * r2 * sd / g * std::sqrt(s2 / nn + eps * eps));
    const double q = eps + eps * eps + s2;
    const double second = 4.0 * s2 * s2 * s2 / (g * g * g) *
                          std::sqrt(1.0 + 162.0 / (g * g) * (q * q + 3.0 * s2 * s2 / (nn * nn)));
    return first + second;
}

}  // namespace mlebound
