#include "mlebound/bounds_closed.hpp"

#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"

namespace mlebound {

namespace {

constexpr double kPi = std::numbers::pi;

struct LineTerms {
    double k2_diag, k2_cross, k3;
};

LineTerms line_terms(std::size_t n, const Vec& x, const NormSet& h) {
    if (x.size() != n || n == 0) throw Error(ErrorKind::Domain, "covariate vector length must equal n");
    double xbar = 0.0;
    for (double v : x) xbar += v;
    xbar /= static_cast<double>(n);
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double v : x) {
        const double c = v - xbar, a = std::fabs(c);
        s2 += c * c;
        s3 += a * a * a;
        s4 += c * c * c * c;
    }
    if (!(s2 > 0.0)) throw Error(ErrorKind::DegenerateDesign, "all covariates equal");
    const double nn = static_cast<double>(n);
    LineTerms t;
    t.k2_diag = h.sup_2 / 4.0 * (std::sqrt(2.0 / nn) + std::sqrt(2.0 * s4) / s2);
    t.k2_cross = h.sup_2 / std::sqrt(2.0 * nn);
    t.k3 = 8.0 * h.sup_3 / (3.0 * std::sqrt(kPi)) * (1.0 / std::sqrt(nn) + s3 / std::pow(s2, 1.5));
    return t;
}

struct NormalTerms {
    double k2, k3, tail, k1_hessian, k1_envelope;
};

// 5/2 = (sqrt 2 + sqrt 14)/4 + sqrt 5/2 rounded up; 19 majorizes the
// Gaussian third absolute moment route; 4 sqrt 2 majorizes 3 sqrt(2-1/n) + sqrt 2.
// The two bracketed k1 pieces bound the conditional third-derivative envelope.
NormalTerms normal_terms(double n, double sigma2, const NormSet& h) {
    if (!(n >= 1.0)) throw Error(ErrorKind::Domain, "n must be >= 1");
    if (!(sigma2 > 0.0)) throw Error(ErrorKind::Domain, "sigma^2 must be positive");
    const double rn = std::sqrt(n);
    NormalTerms t;
    t.k2 = 2.5 * h.sup_2 / rn;
    t.k3 = 19.0 * h.sup_3 / rn;
    t.tail = 8.0 * h.sup_h * (1.0 + 2.0 * sigma2) / (n * sigma2);
    t.k1_hessian = 4.0 * std::sqrt(2.0) * h.sup_1 / rn;
    const double a = 1.5 + sigma2 / 4.0;
    t.k1_envelope = 4.0 * h.sup_1 / rn *
                        (std::sqrt(2.0) + std::sqrt(1.5) + 16.0 * std::sqrt(2.0) * std::sqrt(1.0 / n + sigma2 / 4.0)) +
                    32.0 * h.sup_1 / rn * std::sqrt(1.0 + 648.0 * (a * a + 3.0 / (n * n)));
    return t;
}

}  // namespace

double bound_straightline(std::size_t n, const Vec& x, const NormSet& norms) {
    const LineTerms t = line_terms(n, x, norms);
    return t.k2_diag + t.k2_cross + t.k3;
}

double bound_normal(double n, double sigma2, const NormSet& norms) {
    const NormalTerms t = normal_terms(n, sigma2, norms);
    return t.k2 + t.k3 + t.tail + t.k1_hessian + t.k1_envelope;
}

BoundReport straightline_report(const Vec& x, const NormSet& norms, const std::string& h_id) {
    const LineTerms t = line_terms(x.size(), x, norms);
    BoundReport r;
    r.model_id = "straight-line";
    r.h_id = h_id;
    r.n = x.size();
    r.add({"k1_hessian", "k1", 0.0});
    r.add({"k1_envelope", "k1", 0.0});
    r.add({"k2_diag", "k2", t.k2_diag});
    r.add({"k2_cross", "k2", t.k2_cross});
    r.add({"k3", "k3", t.k3});
    r.add({"tail", "tail", 0.0});
    return r;
}

BoundReport normal_report(std::size_t n, double mu, double sigma2, const NormSet& norms, const std::string& h_id) {
    const NormalTerms t = normal_terms(static_cast<double>(n), sigma2, norms);
    BoundReport r;
    r.model_id = "normal";
    r.h_id = h_id;
    r.n = n;
    r.theta0 = {mu, sigma2};
    r.add({"k1_hessian", "k1", t.k1_hessian});
    r.add({"k1_envelope", "k1", t.k1_envelope});
    r.add({"k2", "k2", t.k2});
    r.add({"k3", "k3", t.k3});
    r.add({"tail", "tail", t.tail});
    return r;
}

}  // namespace mlebound
