#include "mlebound/implicit_mle.hpp"

#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"
#include "mlebound/montecarlo.hpp"
#include "mlebound/specfun.hpp"

namespace mlebound {

namespace {

std::uint64_t first_integer_above(double rhs) {
    if (!std::isfinite(rhs) || rhs >= 1.8e19) throw Error(ErrorKind::Domain, "gate sample size overflows");
    if (rhs < 0.0) return 1;
    return static_cast<std::uint64_t>(std::floor(rhs)) + 1;
}

double abs_colsum_total(const Matrix& A, const std::vector<double>& weights) {
    double s = 0.0;
    for (std::size_t l = 0; l < A.rows(); ++l)
        for (std::size_t k = 0; k < A.cols(); ++k) s += std::fabs(A(l, k)) * weights[k];
    return s;
}

}  // namespace

ImplicitParts implicit_parts(const Model& model, const Vec& theta0, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorKind::Domain, "epsilon must be positive");
    if (!model.identically_distributed())
        throw Error(ErrorKind::Domain, "the implicit-MLE bound needs identically distributed observations");
    const std::size_t d = model.dim_param();
    SymmetricPD I(model.fisher_per_obs(0, theta0));
    const Matrix inv = spd_inverse(I).to_matrix();
    ImplicitParts p;
    p.invsqrt = spd_invsqrt(I).to_matrix();
    for (std::size_t i = 0; i < d; ++i) {
        p.trace_abs += std::fabs(inv(i, i));
        for (std::size_t j = 0; j < d; ++j) p.M = std::max(p.M, std::fabs(inv(i, j)));
    }
    auto env = model.constant_envelope(theta0, eps);
    if (!env) throw Error(ErrorKind::MissingClosedForm, model.id() + " has no constant third-derivative envelope");
    std::vector<double> w(d, 0.0);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t i = 0; i < d; ++i) w[k] += (*env)(k, m, i);
    p.envelope_sum = abs_colsum_total(p.invsqrt, w);
    return p;
}

std::uint64_t gate_sample_size(std::size_t d, double s, double eps, double M, double envelope_sum) {
    const double T = M * eps * envelope_sum;
    const double r = T + std::sqrt(T * T + 8.0 * M);
    const double dd = static_cast<double>(d);
    return first_integer_above(s * s * dd * dd / (4.0 * eps * eps) * r * r);
}

std::uint64_t gate_sample_size(const Model& model, const Vec& theta0, double s, double eps) {
    if (!(s > 0.0)) throw Error(ErrorKind::MissingSupportRadius, "support radius must be positive");
    const ImplicitParts p = implicit_parts(model, theta0, eps);
    return gate_sample_size(model.dim_param(), s, eps, p.M, p.envelope_sum);
}

double hessian_root_sum(const Model& model, const Vec& theta0, const Matrix& A, const McConfig& mc) {
    const std::size_t d = model.dim_param();
    Matrix var(d, d);
    std::optional<Matrix> hv;
    if (mc.mode == EstimationMode::Auto) hv = model.hessian_variance(0, theta0);
    if (hv) {
        var = *hv;
    } else {
        const std::size_t t = model.dim_obs();
        BlockSums bs = run_replicates(mc.reps, stream_key(mc.seed, 21), 2 * d * d,
                                      [&](std::size_t, std::uint64_t key, double* acc) {
                                          SplitMix64 rng(key);
                                          Vec x(t);
                                          model.sample_obs(0, theta0, rng, x.data());
                                          Matrix H = model.hessian_per_obs(0, x, theta0);
                                          for (std::size_t q = 0; q < d * d; ++q) {
                                              const double h = H.data()[q];
                                              acc[q] += h;
                                              acc[d * d + q] += h * h;
                                          }
                                      });
        const std::vector<double> m = bs.means();
        const double r = static_cast<double>(bs.total_count());
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t q = k * d + i;
                var(k, i) = std::max(0.0, (m[d * d + q] - m[q] * m[q]) * r / (r - 1.0));
            }
    }
    std::vector<double> w(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += var(k, i);
        w[k] = std::sqrt(s);
    }
    return abs_colsum_total(A, w);
}

GammaOmegaV gamma_omega_v(const Model& model, const Vec& theta0, std::uint64_t n, double s, double eps,
                          const McConfig& mc) {
    if (n == 0) throw Error(ErrorKind::Domain, "n must be positive");
    const ImplicitParts p = implicit_parts(model, theta0, eps);
    const double d = static_cast<double>(model.dim_param());
    const double nn = static_cast<double>(n), rn = std::sqrt(nn);
    const ScoreRootSums rs = score_root_sums(model, theta0, 1, p.invsqrt, mc);
    GammaOmegaV g;
    g.gamma = p.trace_abs + p.M / (2.0 * rn) * rs.diag.value + p.M / rn * rs.cross.value;
    g.omega = 1.0 - 2.0 * d * d * s * s * p.M / (nn * eps * eps) - d * s * p.M / rn * p.envelope_sum;
    g.v = 2.0 * std::pow(d, 1.5) * s * p.M * hessian_root_sum(model, theta0, p.invsqrt, mc);
    return g;
}

double mse_bound_u1(double gamma, double omega, double v, double n) {
    if (!(omega > 0.0)) throw Error(ErrorKind::NonAdmissible, "omega = " + std::to_string(omega) + " is not positive");
    if (!(n > 0.0)) throw Error(ErrorKind::Domain, "n must be positive");
    const double rn = std::sqrt(n);
    return (v / rn + std::sqrt(v * v / n + 4.0 * omega * gamma)) / (2.0 * omega) / rn;
}

MseCertificate certify(const Model& model, const Vec& theta0, std::uint64_t n, std::optional<double> eps,
                       const McConfig& mc) {
    auto s = model.support_radius();
    if (!s) throw Error(ErrorKind::MissingSupportRadius, model.id() + " has unbounded support");
    const double e = resolve_epsilon(model, theta0, eps);
    const ImplicitParts p = implicit_parts(model, theta0, e);
    MseCertificate c;
    c.model_id = model.id();
    c.theta0 = theta0;
    c.n = n;
    c.s = *s;
    c.epsilon = e;
    c.M = p.M;
    const GammaOmegaV g = gamma_omega_v(model, theta0, n, *s, e, mc);
    c.gamma = g.gamma;
    c.omega = g.omega;
    c.v = g.v;
    c.gate_n_min = gate_sample_size(model.dim_param(), *s, e, p.M, p.envelope_sum);
    c.admissible = n >= c.gate_n_min;
    if (c.admissible) {
        c.U1 = mse_bound_u1(g.gamma, g.omega, g.v, static_cast<double>(n));
        c.mse_bound = *c.U1 * *c.U1;
        c.mse_bound_as_stated = c.U1;
    }
    return c;
}

BoundReport implicit_distance_bound(const Model& model, const Vec& theta0, std::uint64_t n, const NormSet& h,
                                    const std::string& h_id, double s, double eps, const McConfig& mc) {
    const ImplicitParts p = implicit_parts(model, theta0, eps);
    const std::size_t dim = model.dim_param();
    const std::uint64_t n_min = gate_sample_size(dim, s, eps, p.M, p.envelope_sum);
    if (n < n_min) throw GateFailedError(n_min, n);
    const GammaOmegaV g = gamma_omega_v(model, theta0, n, s, eps, mc);
    const double nn = static_cast<double>(n), rn = std::sqrt(nn);
    const double U1 = mse_bound_u1(g.gamma, g.omega, g.v, nn);

    BoundReport r;
    r.model_id = model.id();
    r.h_id = h_id;
    r.n = n;
    r.theta0 = theta0;
    r.epsilon = eps;
    const ScoreRootSums rs = h.sup_2 > 0.0 ? score_root_sums(model, theta0, 1, p.invsqrt, mc) : ScoreRootSums{};
    const TermValue cube =
        h.sup_3 > 0.0 ? score_difference_cube_sum(model, theta0, 1, p.invsqrt, mc) : TermValue{};
    auto add = [&](const char* name, const char* group, double f, const TermValue& t) {
        r.add({name, group, f * t.value, f * t.stderr, t.closed_form, t.reps, t.seed});
    };
    add("d_diag", "k2", h.sup_2 / (4.0 * rn), rs.diag);
    add("d_cross", "k2", h.sup_2 / (2.0 * rn), rs.cross);
    add("d_cube", "k3", h.sup_3 / (12.0 * rn), cube);
    r.add({"tail", "tail", 2.0 * h.sup_h * U1 * U1 / (eps * eps)});
    const double hrs = h.sup_1 > 0.0 ? hessian_root_sum(model, theta0, p.invsqrt, mc) : 0.0;
    r.add({"k1_hessian", "k1", h.sup_1 * std::sqrt(static_cast<double>(dim)) * U1 * hrs});
    r.add({"k1_envelope", "k1", h.sup_1 * rn / 2.0 * U1 * U1 * p.envelope_sum});
    r.extras = {{"U1", U1}, {"gamma", g.gamma}, {"omega", g.omega}, {"v", g.v},
                {"gate_n_min", static_cast<double>(n_min)}};
    return r;
}

double beta_C1(double x, double y) {
    const double p1x = trigamma(x), p1xy = trigamma(x + y);
    return polygamma(3, x) + polygamma(3, x + y) + 3.0 * p1x * p1x + 3.0 * p1xy * p1xy;
}

double beta_C2(double x, double y, double delta_I) { return trigamma(x) - trigamma(x + y) + std::sqrt(delta_I); }

double beta_C4(double x, double y, double eps) {
    constexpr double pi4 = std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi;
    return 6.0 * x / std::pow(y - eps, 4) + x * pi4 / 15.0 + 6.0 / std::pow(x + y - eps, 3) + 7.26;
}

BetaConstants beta_constants(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0)) throw Error(ErrorKind::Domain, "Beta shapes must be positive");
    BetaConstants c;
    c.alpha = alpha;
    c.beta = beta;
    c.m = std::min(alpha, beta);
    c.epsilon = c.m / 2.0;
    c.psi1_a = trigamma(alpha);
    c.psi1_b = trigamma(beta);
    c.psi1_ab = trigamma(alpha + beta);
    c.delta_I = c.psi1_a * c.psi1_b - c.psi1_ab * (c.psi1_a + c.psi1_b);
    if (!(c.delta_I > 0.0)) throw Error(ErrorKind::NonPDFisher, "delta_I = " + std::to_string(c.delta_I));
    c.C1_ab = beta_C1(alpha, beta);
    c.C1_ba = beta_C1(beta, alpha);
    c.C2_ab = beta_C2(alpha, beta, c.delta_I);
    c.C2_ba = beta_C2(beta, alpha, c.delta_I);
    c.C3_ab = c.C1_ab * c.C2_ba * c.C2_ba;
    c.C3_ba = c.C1_ba * c.C2_ab * c.C2_ab;
    c.C4_ab = beta_C4(alpha, beta, c.epsilon);
    c.C4_ba = beta_C4(beta, alpha, c.epsilon);
    c.M_B = std::max(c.psi1_ab, trigamma(c.m) - c.psi1_ab) / c.delta_I;
    return c;
}

double BetaConstants::envelope_brace() const {
    const double sd = std::sqrt(delta_I);
    return (psi1_b + sd) * C4_ba + (psi1_a + sd) * C4_ab;
}

double BetaConstants::gamma_B(double n) const {
    const double rn = std::sqrt(n), c2 = C2_ab + C2_ba;
    const double p4 = std::pow(psi1_ab, 4);
    const double first = 4.0 * M_B / (rn * delta_I * c2) *
                         (std::sqrt(std::pow(C2_ba, 4) * C1_ab + p4 * C1_ba) +
                          std::sqrt(std::pow(C2_ab, 4) * C1_ba + p4 * C1_ab));
    const double second =
        M_B * std::sqrt(24.0) / (rn * delta_I * c2) *
        std::sqrt(psi1_ab * psi1_ab * (C3_ab + C3_ba) +
                  2.0 * std::sqrt(C1_ab * C1_ba) * (p4 + C2_ab * C2_ab * C2_ba * C2_ba));
    return first + second + (psi1_b + psi1_a - 2.0 * psi1_ab) / delta_I;
}

double BetaConstants::omega_B(double n) const {
    return 1.0 - 8.0 * M_B / (n * epsilon * epsilon) -
           2.0 * M_B * envelope_brace() / std::sqrt(n * delta_I * (C2_ab + C2_ba));
}

// m M_B multiplies the whole two-term brace, as in omega_B.
double BetaConstants::gate_rhs() const {
    const double T = m * M_B * envelope_brace() / (2.0 * std::sqrt(delta_I * (C2_ab + C2_ba)));
    const double r = T + std::sqrt(T * T + 8.0 * M_B);
    return 4.0 / (m * m) * r * r;
}

// At n equal to the right side omega_B is exactly 0, so the first admissible
// integer is strictly above it.
std::uint64_t BetaConstants::n_min() const { return first_integer_above(gate_rhs()); }

double beta_mse_bound(double alpha, double beta, std::uint64_t n) {
    const BetaConstants c = beta_constants(alpha, beta);
    const std::uint64_t nm = c.n_min();
    if (n < nm) throw GateFailedError(nm, n);
    const double nn = static_cast<double>(n);
    return std::sqrt(c.gamma_B(nn) / (nn * c.omega_B(nn)));
}

BoundReport beta_distance_bound(double alpha, double beta, std::uint64_t n, const NormSet& h,
                                const std::string& h_id) {
    const BetaConstants c = beta_constants(alpha, beta);
    const std::uint64_t nm = c.n_min();
    if (n < nm) throw GateFailedError(nm, n);
    const double nn = static_cast<double>(n), rn = std::sqrt(nn);
    const double dc = c.delta_I * (c.C2_ab + c.C2_ba);
    const double p4 = std::pow(c.psi1_ab, 4), p3 = std::pow(c.psi1_ab, 3);
    const double gB = c.gamma_B(nn), wB = c.omega_B(nn);

    const double t1 = 2.0 * h.sup_2 / (rn * dc) *
                      (std::sqrt(std::pow(c.C2_ba, 4) * c.C1_ab + p4 * c.C1_ba) +
                       std::sqrt(std::pow(c.C2_ab, 4) * c.C1_ba + p4 * c.C1_ab));
    const double t2 = h.sup_2 * std::sqrt(6.0) / (rn * dc) *
                      std::sqrt(c.psi1_ab * c.psi1_ab * (c.C3_ab + c.C3_ba) +
                                2.0 * std::sqrt(c.C1_ab * c.C1_ba) * (p4 + c.C2_ab * c.C2_ab * c.C2_ba * c.C2_ba));
    const double t3 = 32.0 * h.sup_3 * std::pow(8.0, 0.75) / (3.0 * rn * std::pow(dc, 1.5)) *
                      ((std::pow(c.C2_ba, 3) + p3) * std::pow(c.C1_ab, 0.75) +
                       (std::pow(c.C2_ab, 3) + p3) * std::pow(c.C1_ba, 0.75));
    const double t4 = 8.0 * h.sup_h * gB / (nn * c.m * c.m * wB);
    const double t5 = h.sup_1 * gB * c.envelope_brace() / (2.0 * rn * wB * std::sqrt(dc));

    BoundReport r;
    r.model_id = "beta";
    r.h_id = h_id;
    r.n = n;
    r.theta0 = {alpha, beta};
    r.epsilon = c.epsilon;
    r.add({"d_diag", "k2", t1});
    r.add({"d_cross", "k2", t2});
    r.add({"d_cube", "k3", t3});
    r.add({"tail", "tail", t4});
    r.add({"k1_envelope", "k1", t5});
    r.extras = {{"gamma_B", gB}, {"omega_B", wB}, {"gate_n_min", static_cast<double>(nm)}};
    return r;
}

MseCertificate certify_beta(double alpha, double beta, std::uint64_t n) {
    const BetaConstants c = beta_constants(alpha, beta);
    MseCertificate cert;
    cert.model_id = "beta";
    cert.theta0 = {alpha, beta};
    cert.n = n;
    cert.s = 1.0;
    cert.epsilon = c.epsilon;
    cert.M = c.M_B;
    const double nn = static_cast<double>(std::max<std::uint64_t>(n, 1));
    cert.gamma = c.gamma_B(nn);
    cert.omega = c.omega_B(nn);
    cert.v = 0.0;
    cert.gate_n_min = c.n_min();
    cert.admissible = n >= cert.gate_n_min;
    if (cert.admissible) {
        cert.U1 = mse_bound_u1(cert.gamma, cert.omega, 0.0, nn);
        cert.mse_bound = *cert.U1 * *cert.U1;
        cert.mse_bound_as_stated = cert.U1;
    }
    return cert;
}

}  // namespace mlebound
