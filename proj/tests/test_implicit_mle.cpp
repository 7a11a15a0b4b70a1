#include <doctest.h>

#include <cmath>

#include "mlebound/beta_model.hpp"
#include "mlebound/errors.hpp"
#include "mlebound/implicit_mle.hpp"
#include "mlebound/normal_model.hpp"
#include "mlebound/specfun.hpp"
#include "mlebound/symmat.hpp"

using namespace mlebound;

namespace {
bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }
}  // namespace

TEST_CASE("Beta(2,3) constants against the oracle") {
    // mpmath, oracles/beta_constants.py
    const BetaConstants c = beta_constants(2.0, 3.0);
    CHECK(c.epsilon == 1.0);
    CHECK(close_rel(c.delta_I, 0.02455974494279923616617283, 1e-12));
    CHECK(close_rel(c.C1_ab, 1.910138634412401370192026, 1e-12));
    CHECK(close_rel(c.C1_ba, 0.7552375341400617154834028, 1e-12));
    CHECK(close_rel(c.C2_ab, 0.5803266015477595112645069, 1e-12));
    CHECK(close_rel(c.C2_ba, 0.3303266015477595112645069, 1e-12));
    CHECK(close_rel(c.C3_ab, 0.2084260448339957092827687, 1e-12));
    CHECK(close_rel(c.C3_ba, 0.2543481146720137087754259, 1e-12));
    CHECK(close_rel(c.C4_ab, 21.09162880453365829819204, 1e-12));
    CHECK(close_rel(c.C4_ba, 44.83556820680048744728807, 1e-12));
    CHECK(close_rel(c.M_B, 17.24818853362364592890696, 1e-12));
    CHECK(close_rel(c.gate_rhs(), 92262783.95560386312947208, 1e-12));
    CHECK(c.n_min() == 92262784u);
    const double n2 = 2.0 * 92262784.0;
    CHECK(close_rel(c.gamma_B(n2), 24.51593688285656986787115, 1e-12));
    CHECK(close_rel(c.omega_B(n2), 0.2928935287263952302516883, 1e-12));
    CHECK(close_rel(beta_mse_bound(2, 3, 2 * 92262784ULL), 0.0006735054024079749453966927, 1e-12));
}

TEST_CASE("Beta(1,1) constants") {
    const BetaConstants c = beta_constants(1.0, 1.0);
    // the rounded value that is sometimes quoted is 0.58407
    CHECK(c.delta_I == doctest::Approx(0.58407).epsilon(1e-4));
    CHECK(close_rel(c.delta_I, 0.5840600494186073941548211, 1e-12));
    CHECK(close_rel(c.C1_ab, 16.35312290911137255209761, 1e-12));
    CHECK(close_rel(c.C2_ab, 1.764238215099590131818325, 1e-12));
    CHECK(close_rel(c.C3_ab, 50.8996916102825060417591, 1e-12));
    CHECK(close_rel(c.C4_ab, 111.5317171800446069268738, 1e-12));
    CHECK(close_rel(c.M_B, 1.712152716138405510256366, 1e-12));
    CHECK(c.n_min() == 1643319u);
    CHECK(c.C1_ab == c.C1_ba);
    CHECK(close_rel(beta_mse_bound(1, 1, 2 * 1643319ULL), 0.001910509720138337998936646, 1e-12));
}

TEST_CASE("omega_B changes sign at the gate") {
    for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{1.0, 1.0}, std::pair{4.0, 1.5}}) {
        const BetaConstants c = beta_constants(a, b);
        const std::uint64_t n0 = c.n_min();
        CHECK(c.omega_B(static_cast<double>(n0)) > 0.0);
        CHECK(c.omega_B(static_cast<double>(n0 - 1)) <= 0.0);
        for (double f : {0.01, 0.5, 0.9}) CHECK(c.omega_B(f * static_cast<double>(n0)) < 0.0);
        for (double f : {1.1, 3.0, 100.0}) CHECK(c.omega_B(f * static_cast<double>(n0)) > 0.0);
    }
}

TEST_CASE("Beta MSE bound below the gate") {
    try {
        beta_mse_bound(2, 3, 1000);
        FAIL("expected GateFailed");
    } catch (const GateFailedError& e) {
        CHECK(e.kind() == ErrorKind::GateFailed);
        CHECK(e.n_min() == 92262784u);
    }
    double prev = INFINITY;
    for (std::uint64_t n : {92262784ULL, 100000000ULL, 400000000ULL, 4000000000ULL}) {
        const double b = beta_mse_bound(2, 3, n);
        CHECK(b < prev);
        prev = b;
    }
    CHECK_THROWS_AS(beta_constants(-1.0, 2.0), Error);
}

TEST_CASE("Beta certificate and distance summands") {
    const MseCertificate lo = certify_beta(2, 3, 1);
    CHECK_FALSE(lo.admissible);
    CHECK(lo.gate_n_min == 92262784u);
    CHECK_FALSE(lo.mse_bound.has_value());
    const MseCertificate hi = certify_beta(2, 3, 1ULL << 40);
    CHECK(hi.admissible);
    REQUIRE(hi.mse_bound.has_value());
    CHECK(*hi.mse_bound_as_stated == *hi.U1);
    const BoundReport r = beta_distance_bound(2, 3, 2 * 92262784ULL, NormSet{1, 1, 1, 1}, "unit");
    const double want[] = {0.00300911530989772972005, 0.002754348544593707074018, 0.2717006971387183385247,
                           9.072190541454565267542e-7, 0.857866262934372434795};
    REQUIRE(r.terms.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(r.terms[i].contribution >= 0.0);
        CHECK(close_rel(r.terms[i].contribution, want[i], 1e-11));
    }
    CHECK_THROWS_AS(beta_distance_bound(2, 3, 5000, NormSet{1, 1, 1, 1}, "unit"), GateFailedError);
}

TEST_CASE("U1 algebra") {
    // v = 0 gives sqrt(gamma/(n omega))
    CHECK(mse_bound_u1(4.0, 0.25, 0.0, 100.0) == doctest::Approx(std::sqrt(4.0 / (100.0 * 0.25))));
    CHECK(mse_bound_u1(0.0, 0.5, 2.0, 100.0) == doctest::Approx(2.0 / (0.5 * 100.0)));
    // quadrupling n with v = 0 halves U1
    CHECK(mse_bound_u1(3.0, 0.7, 0.0, 400.0) == doctest::Approx(mse_bound_u1(3.0, 0.7, 0.0, 100.0) / 2.0));
    // U1 is the positive root of omega n x^2 - v sqrt(n) x... in the scaled variable
    const double g = 2.0, w = 0.3, v = 1.7, n = 50.0;
    const double u = mse_bound_u1(g, w, v, n);
    const double y = u * std::sqrt(n);
    CHECK(w * y * y - v / std::sqrt(n) * y - g == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(mse_bound_u1(1.0, 0.0, 1.0, 10.0), Error);
    CHECK_THROWS_AS(mse_bound_u1(1.0, -0.1, 1.0, 10.0), Error);
}

TEST_CASE("general gate") {
    BetaModel b;
    const ImplicitParts p = implicit_parts(b, {2.0, 3.0}, 1.0);
    const Matrix Finv = spd_inverse(beta_fisher(2.0, 3.0)).to_matrix();
    double M = 0.0, tr = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        tr += std::fabs(Finv(i, i));
        for (std::size_t j = 0; j < 2; ++j) M = std::max(M, std::fabs(Finv(i, j)));
    }
    CHECK(close_rel(p.M, M, 1e-12));
    CHECK(close_rel(p.trace_abs, tr, 1e-12));
    const std::uint64_t g = gate_sample_size(b, {2.0, 3.0}, 1.0, 1.0);
    CHECK(g == gate_sample_size(2, 1.0, 1.0, p.M, p.envelope_sum));
    CHECK(gate_sample_size(2, 1.0, 1.0, 1e-300, 1.0) == 1u);
    CHECK(gate_sample_size(2, 1.0, 0.5, p.M, p.envelope_sum) > g);
    CHECK_THROWS_AS(gate_sample_size(b, {2.0, 3.0}, 0.0, 1.0), Error);
    NormalModel nm;
    CHECK_THROWS_AS(certify(nm, {0.0, 1.0}, 100), Error);
}

TEST_CASE("general certificate for Beta") {
    BetaModel b;
    const MseCertificate c = certify(b, {2.0, 3.0}, 1ULL << 36);
    CHECK(c.admissible);
    CHECK(c.v == 0.0);
    CHECK(c.gamma >= (1.0 - 1e-12) * implicit_parts(b, {2.0, 3.0}, 1.0).trace_abs);
    CHECK(c.omega > 0.0);
    const MseCertificate d = certify(b, {2.0, 3.0}, 10);
    CHECK_FALSE(d.admissible);
    CHECK(d.gate_n_min == c.gate_n_min);
    try {
        implicit_distance_bound(b, {2.0, 3.0}, 10, NormSet{1, 1, 1, 1}, "unit", 1.0, 1.0);
        FAIL("expected GateFailed");
    } catch (const GateFailedError& e) {
        CHECK(e.n_min() == c.gate_n_min);
    }
    const BoundReport r = implicit_distance_bound(b, {2.0, 3.0}, 1ULL << 36, NormSet{1, 1, 1, 1}, "unit", 1.0, 1.0);
    for (const auto& t : r.terms) CHECK(t.contribution >= 0.0);
}

TEST_CASE("hessian root sum") {
    BetaModel b;
    const Matrix A = spd_invsqrt(beta_fisher(2, 3)).to_matrix();
    CHECK(hessian_root_sum(b, {2.0, 3.0}, A) == 0.0);
    NormalModel nm;
    const Matrix An = spd_invsqrt(nm.fisher_bar({0.0, 1.0}, 1)).to_matrix();
    const double exact = hessian_root_sum(nm, {0.0, 1.0}, An);
    CHECK(exact > 0.0);
    McConfig mc;
    mc.reps = 100000;
    mc.mode = EstimationMode::ForceMonteCarlo;
    CHECK(hessian_root_sum(nm, {0.0, 1.0}, An, mc) == doctest::Approx(exact).epsilon(0.03));
}
