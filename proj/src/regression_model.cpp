#include "mlebound/regression_model.hpp"

#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"

namespace mlebound {

namespace {

Matrix gram(const Matrix& X) {
    const std::size_t d = X.cols();
    Matrix g(d, d);
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) g(a, b) += X(i, a) * X(i, b);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    return g;
}

SymmetricPD gram_pd(const Matrix& X) {
    try {
        return SymmetricPD(gram(X));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotPD) throw Error(ErrorKind::RankDeficient, "X'X is not positive definite");
        throw;
    }
}

}  // namespace

Vec linreg_mle(const Matrix& X, const Vec& y) {
    if (y.size() != X.rows()) throw Error(ErrorKind::Domain, "linreg_mle: response length mismatch");
    SymmetricPD g = gram_pd(X);
    Vec xty(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t a = 0; a < X.cols(); ++a) xty[a] += X(i, a) * y[i];
    return spd_solve(g, xty);
}

LinearRegressionModel::LinearRegressionModel(Matrix design, double sigma2, std::string id)
    : X_(std::move(design)), sigma2_(sigma2), id_(std::move(id)) {
    if (!(sigma2_ > 0.0)) throw Error(ErrorKind::Domain, "sigma^2 must be positive");
    if (X_.rows() < X_.cols()) throw Error(ErrorKind::RankDeficient, "fewer rows than parameters");
    gram_pd(X_);
}

LinearRegressionModel LinearRegressionModel::straight_line(const Vec& x, double sigma2) {
    if (x.size() < 2) throw Error(ErrorKind::DegenerateDesign, "need at least two covariate values");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    Matrix X(x.size(), 2);
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = x[i] - mean;
        sxx += X(i, 1) * X(i, 1);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateDesign, "all covariate values equal");
    return LinearRegressionModel(std::move(X), sigma2, "straight-line");
}

Vec LinearRegressionModel::tile(const Vec& pattern, std::size_t n) {
    if (pattern.empty()) throw Error(ErrorKind::DegenerateDesign, "empty covariate pattern");
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = pattern[i % pattern.size()];
    return x;
}

double LinearRegressionModel::row_dot(std::size_t i, const Vec& v) const {
    double s = 0.0;
    for (std::size_t a = 0; a < X_.cols(); ++a) s += X_(i, a) * v[a];
    return s;
}

void LinearRegressionModel::sample_obs(std::size_t i, const Vec& theta, SplitMix64& rng, double* out) const {
    out[0] = row_dot(i, theta) + std::sqrt(sigma2_) * rng.normal();
}

Vec LinearRegressionModel::score_per_obs(std::size_t i, std::span<const double> y, const Vec& theta) const {
    const double r = (y[0] - row_dot(i, theta)) / sigma2_;
    Vec s(X_.cols());
    for (std::size_t a = 0; a < s.size(); ++a) s[a] = X_(i, a) * r;
    return s;
}

Matrix LinearRegressionModel::hessian_per_obs(std::size_t i, std::span<const double>, const Vec&) const {
    Matrix h = fisher_per_obs(i, {});
    h *= -1.0;
    return h;
}

Matrix LinearRegressionModel::fisher_per_obs(std::size_t i, const Vec&) const {
    const std::size_t d = X_.cols();
    Matrix f(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) f(a, b) = X_(i, a) * X_(i, b) / sigma2_;
    return f;
}

SymmetricPD LinearRegressionModel::fisher_bar(const Vec&, std::size_t n) const {
    if (n != X_.rows()) throw Error(ErrorKind::Domain, "fisher_bar: n differs from design rows");
    Matrix g = gram(X_);
    g *= 1.0 / (static_cast<double>(n) * sigma2_);
    return SymmetricPD(g);
}

Tensor3 LinearRegressionModel::data_envelope(const Vec&, double, const Dataset&, const Vec&) const {
    return Tensor3(X_.cols(), 0.0);
}

Vec LinearRegressionModel::mle(const Dataset& y) const { return linreg_mle(X_, y.values); }

Vec LinearRegressionModel::standardized_score(const Dataset& y, const Vec& theta0) const {
    const std::size_t n = y.size(), d = X_.cols();
    Vec total(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Vec s = score_per_obs(i, y.obs(i), theta0);
        for (std::size_t a = 0; a < d; ++a) total[a] += s[a];
    }
    Matrix A = spd_invsqrt(fisher_bar(theta0, n)).to_matrix();
    Vec w = A * total;
    for (double& v : w) v /= std::sqrt(static_cast<double>(n));
    return w;
}

std::optional<double> LinearRegressionModel::score_moment4(std::size_t i, const Vec&, const Vec& a, const Vec& b,
                                                           const Vec& c, const Vec& e) const {
    // s = x_i eps / sigma^2 and E eps^4 = 3 sigma^4.
    return 3.0 * row_dot(i, a) * row_dot(i, b) * row_dot(i, c) * row_dot(i, e) / (sigma2_ * sigma2_);
}

std::optional<Matrix> LinearRegressionModel::hessian_variance(std::size_t, const Vec&) const {
    return Matrix(X_.cols(), X_.cols());
}

std::optional<double> LinearRegressionModel::score_difference_cube(std::size_t i, const Vec&, const Matrix& A) const {
    // sum_m |sum_l A_ml x_il| |Y' - Y| / sigma^2, E|Y' - Y|^3 = 8 sigma^3 / sqrt(pi)
    const std::size_t d = X_.cols();
    Vec c(d, 0.0);
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t l = 0; l < d; ++l) c[m] += A(m, l) * X_(i, l);
    const double sd = std::sqrt(sigma2_);
    return cube_of_sum_bound(c) * 8.0 / std::sqrt(std::numbers::pi) / (sigma2_ * sd);
}

std::optional<MleMoments> LinearRegressionModel::mle_moments(const Vec&, std::size_t n) const {
    if (n != X_.rows()) throw Error(ErrorKind::Domain, "mle_moments: n differs from design rows");
    // beta_hat - beta ~ N(0, sigma^2 (X'X)^{-1})
    Matrix cov = spd_inverse(SymmetricPD(gram(X_))).to_matrix();
    cov *= sigma2_;
    const std::size_t d = X_.cols();
    MleMoments m{Vec(d), Matrix(d, d)};
    for (std::size_t j = 0; j < d; ++j) m.second[j] = cov(j, j);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t v = 0; v < d; ++v) m.mixed(j, v) = cov(j, j) * cov(v, v) + 2.0 * cov(j, v) * cov(j, v);
    return m;
}

double cube_of_sum_bound(std::span<const double> a) {
    const double d = static_cast<double>(a.size());
    double s = 0.0;
    for (double v : a) s += std::fabs(v) * std::fabs(v) * std::fabs(v);
    return d * d * s;
}

}  // namespace mlebound
