#include "mlebound/specfun.hpp"

#include <cmath>
#include <string>

#include "mlebound/errors.hpp"

namespace mlebound {

namespace {

// B_2, B_4, ..., B_24
constexpr double kBernoulli[] = {
    1.0 / 6.0,        -1.0 / 30.0,        1.0 / 42.0,       -1.0 / 30.0,
    5.0 / 66.0,       -691.0 / 2730.0,    7.0 / 6.0,        -3617.0 / 510.0,
    43867.0 / 798.0,  -174611.0 / 330.0,  854513.0 / 138.0, -236364091.0 / 2730.0,
};
constexpr int kTailOrder = 10;  // Bernoulli corrections used in the tail

// |j-th Euler-Maclaurin correction| times m!, in log form:
// |B_2j| (m+2j-1)! / (2j)! / w^(m+2j)
double log_em_term(int m, int j, double w) {
    return std::log(std::fabs(kBernoulli[j - 1])) + std::lgamma(m + 2.0 * j) -
           std::lgamma(2.0 * j + 1.0) - (m + 2.0 * j) * std::log(w);
}

}  // namespace

double polygamma(int m, double z, const PolyGammaConfig& cfg) {
    if (m < 1) throw Error(ErrorKind::Domain, "polygamma order m=" + std::to_string(m));
    if (!(z > 0.0) || !std::isfinite(z))
        throw Error(ErrorKind::Domain, "polygamma argument z=" + std::to_string(z));
    if (cfg.tail_terms < 1 || !(cfg.abs_tol > 0.0))
        throw Error(ErrorKind::Domain, "invalid PolyGammaConfig");

    // Sum K terms directly, then replace sum_{k>=K} by the Euler-Maclaurin
    // expansion at w = z + K. For f(x) = (w+x)^{-(m+1)} all derivatives
    // alternate in sign, so the remainder is bounded by the first omitted term.
    // K grows until that bound (times m!) is below abs_tol.
    const double log_tol = std::log(0.5 * cfg.abs_tol);
    long K = cfg.tail_terms;
    while (log_em_term(m, kTailOrder + 1, z + K) > log_tol ||
           z + static_cast<double>(K) < m + 2.0) {
        K = K < 64 ? K + 1 : K + K / 4;
    }
    const double w = z + static_cast<double>(K);

    const double mfact = std::tgamma(m + 1.0);
    double tail = std::tgamma(static_cast<double>(m)) / std::pow(w, m) + 0.5 * mfact / std::pow(w, m + 1);
    for (int j = kTailOrder; j >= 1; --j) {
        double t = std::exp(log_em_term(m, j, w));
        tail += kBernoulli[j - 1] > 0 ? t : -t;
    }

    double head = 0.0;
    for (long k = K - 1; k >= 0; --k) head += std::pow(z + static_cast<double>(k), -(m + 1));

    double s = mfact * head + tail;
    return (m % 2 == 1) ? s : -s;
}

double trigamma(double z) { return polygamma(1, z); }

double digamma(double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw Error(ErrorKind::Domain, "digamma argument z=" + std::to_string(z));
    double shift = 0.0;
    while (z < 10.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    const double z2 = 1.0 / (z * z);
    double series = 0.0;
    double p = z2;
    for (int k = 1; k <= 6; ++k) {
        series += kBernoulli[k - 1] / (2.0 * k) * p;
        p *= z2;
    }
    return shift + std::log(z) - 0.5 / z - series;
}

}  // namespace mlebound
