#include "mlebound/testfun.hpp"

#include <cmath>

#include "mlebound/errors.hpp"

namespace mlebound {

std::vector<TestFunction> catalog(std::size_t d) {
    if (d == 0) throw Error(ErrorKind::Domain, "catalog dimension must be >= 1");
    const double dd = static_cast<double>(d);
    std::vector<TestFunction> out;

    out.push_back({"sine-sum", d,
                   [](std::span<const double> x) {
                       double s = 0.0;
                       for (double v : x) s += std::sin(v);
                       return s;
                   },
                   {dd, 1.0, 1.0, 1.0}, 0.0});

    out.push_back({"cosine-sum", d,
                   [](std::span<const double> x) {
                       double s = 0.0;
                       for (double v : x) s += std::cos(v);
                       return s;
                   },
                   {dd, 1.0, 1.0, 1.0}, dd * std::exp(-0.5)});

    // g(t) = 1 - exp(-t^2/2): |g'| peaks at t=1, |g''| at t=0,
    // |g'''| = |t^3 - 3t| e^{-t^2/2} peaks at t^2 = 3 - sqrt(6).
    const double t2 = 3.0 - std::sqrt(6.0);
    const double g3 = std::sqrt(t2) * (3.0 - t2) * std::exp(-0.5 * t2);
    out.push_back({"damped-quadratic", d,
                   [](std::span<const double> x) {
                       double s = 0.0;
                       for (double v : x) s += 1.0 - std::exp(-0.5 * v * v);
                       return s;
                   },
                   {dd, std::exp(-0.5), 1.0, g3}, dd * (1.0 - 1.0 / std::sqrt(2.0))});
    return out;
}

TestFunction find_test_function(const std::string& id, std::size_t d) {
    std::string known;
    for (auto& h : catalog(d)) {
        if (h.id == id) return h;
        known += (known.empty() ? "" : ", ") + h.id;
    }
    throw Error(ErrorKind::Config, "unknown test function '" + id + "' (known: " + known + ")");
}

NormSet MseTestFunction::norms() const {
    const double d = static_cast<double>(dim);
    return {d * d * s * s * M, 2.0 * d * M * s, 2.0 * M, 0.0};
}

double MseTestFunction::operator()(std::span<const double> x) const {
    double q = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) q += x[i] * fisher_inverse(i, j) * x[j];
    return q;
}

double mse_value(const Vec& theta_hat, const Vec& theta0) {
    if (theta_hat.size() != theta0.size()) throw Error(ErrorKind::Domain, "mse_value: dimension mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < theta0.size(); ++j) {
        const double e = theta_hat[j] - theta0[j];
        s += e * e;
    }
    return s;
}

}  // namespace mlebound
