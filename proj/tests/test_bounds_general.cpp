#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "mlebound/beta_model.hpp"
#include "mlebound/bounds_closed.hpp"
#include "mlebound/bounds_general.hpp"
#include "mlebound/errors.hpp"
#include "mlebound/normal_model.hpp"
#include "mlebound/regression_model.hpp"

using namespace mlebound;

namespace {

const NormSet kUnit{1, 1, 1, 1};

const TermReport& term(const BoundReport& r, const std::string& name) {
    for (const auto& t : r.terms)
        if (t.name == name) return t;
    FAIL("no term " << name);
    return r.terms.front();
}

bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("engine reproduces the straight-line closed form") {
    SplitMix64 rng(2024);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 4 + rng.next() % 30;
        Vec x(n);
        for (double& v : x) v = 4.0 * rng.normal();
        auto lm = LinearRegressionModel::straight_line(x, 0.5 + rng.uniform());
        const Vec t0{rng.normal(), rng.normal()};
        const double eps = resolve_epsilon(lm, t0, std::nullopt);
        CHECK(std::isinf(eps));
        const BoundReport e = assemble(lm, t0, n, eps, kUnit, "unit");
        CHECK(close_rel(e.total, bound_straightline(n, x, kUnit), 1e-9));
        CHECK(e.group_total("k1") == 0.0);
        CHECK(e.group_total("tail") == 0.0);
        const BoundReport c = straightline_report(x, kUnit, "unit");
        CHECK(close_rel(term(e, "k2_diag").contribution, term(c, "k2_diag").contribution, 1e-9));
        CHECK(close_rel(term(e, "k2_cross").contribution, term(c, "k2_cross").contribution, 1e-9));
        CHECK(close_rel(term(e, "k3").contribution, term(c, "k3").contribution, 1e-9));
    }
}

TEST_CASE("normal engine closed terms at eps = sigma^2/2") {
    NormalModel m;
    struct Row {
        std::size_t n;
        double k2d, k2c, k1h, k1e, k3, tail, total;
    };
    // mpmath, oracles/normal_terms.py
    const Row rows[] = {
        {50, 0.1822875655532295295251, 0.1581138830084189665999, 0.7969924622639719728407, 209.8341660074793782899,
         2.601802222450940039411, 0.4768, 214.0501621407559387983},
        {500, 0.0576443896275456740589, 0.05, 0.2528873207547168859112, 66.27171108081136407643,
         0.8227621044233047852839, 0.047968, 67.50297289561693142168},
    };
    for (const Row& w : rows) {
        const BoundReport r = assemble(m, {0.0, 1.0}, w.n, 0.5, kUnit, "unit");
        CHECK(close_rel(term(r, "k2_diag").contribution, w.k2d, 1e-12));
        CHECK(close_rel(term(r, "k2_cross").contribution, w.k2c, 1e-12));
        CHECK(close_rel(term(r, "k1_hessian").contribution, w.k1h, 1e-12));
        CHECK(close_rel(term(r, "k1_envelope").contribution, w.k1e, 1e-12));
        CHECK(close_rel(term(r, "k3").contribution, w.k3, 1e-12));
        CHECK(close_rel(term(r, "tail").contribution, w.tail, 1e-12));
        CHECK(close_rel(r.total, w.total, 1e-12));
        for (const auto& t : r.terms) CHECK(t.closed_form);
        CHECK(r.total <= bound_normal(static_cast<double>(w.n), 1.0, kUnit));
    }
    const BoundReport big = assemble(m, {3.0, 2.0}, 200, 1.0, kUnit, "unit");
    CHECK(close_rel(big.total, 122.4882911574441796796, 1e-12));
}

TEST_CASE("normal Monte Carlo terms agree with closed forms") {
    NormalModel m;
    McConfig mc;
    mc.reps = 4000;
    mc.seed = 5;
    mc.mode = EstimationMode::ForceMonteCarlo;
    const Vec t0{0.0, 1.0};
    const std::size_t n = 50;
    const K2Parts c2 = k2_parts(m, t0, n), s2 = k2_parts(m, t0, n, mc);
    CHECK_FALSE(s2.diag.closed_form);
    CHECK(std::fabs(s2.diag.value - c2.diag.value) <= 4 * s2.diag.stderr);
    CHECK(std::fabs(s2.cross.value - c2.cross.value) <= 4 * s2.cross.stderr);
    const TermValue c3 = k3_term(m, t0, n), s3 = k3_term(m, t0, n, mc);
    CHECK(s3.value - 4 * s3.stderr <= c3.value);
    const K1Parts c1 = k1_parts(m, t0, n, 0.5), s1 = k1_parts(m, t0, n, 0.5, mc);
    CHECK(std::fabs(s1.hessian.value - c1.hessian.value) <= 4 * s1.hessian.stderr);
    CHECK(s1.envelope.value - 4 * s1.envelope.stderr <= c1.envelope.value);
    CHECK(s1.kept > 3000);
    const TermValue cm = mse_moment(m, t0, n, 0.5), sm = mse_moment(m, t0, n, 0.5, mc);
    CHECK(std::fabs(sm.value - cm.value) <= 4 * sm.stderr);
}

TEST_CASE("zero norms give a zero bound") {
    NormalModel m;
    const BoundReport r = assemble(m, {0.0, 1.0}, 100, 0.5, NormSet{}, "zero");
    CHECK(r.total == 0.0);
    BetaModel b;
    CHECK(assemble(b, {2.0, 3.0}, 100, 1.0, NormSet{}, "zero").total == 0.0);
}

TEST_CASE("K2 and K3 contributions scale as n^{-1/2}") {
    auto a = LinearRegressionModel::straight_line(LinearRegressionModel::tile({-3, -1, 1, 3}, 40), 1.0);
    auto b = LinearRegressionModel::straight_line(LinearRegressionModel::tile({-3, -1, 1, 3}, 160), 1.0);
    const BoundReport ra = assemble(a, {1.0, 0.5}, 40, INFINITY, kUnit, "unit");
    const BoundReport rb = assemble(b, {1.0, 0.5}, 160, INFINITY, kUnit, "unit");
    CHECK(close_rel(rb.group_total("k2"), ra.group_total("k2") / 2.0, 1e-12));
    CHECK(close_rel(rb.group_total("k3"), ra.group_total("k3") / 2.0, 1e-12));
    NormalModel m;
    const BoundReport p = assemble(m, {0.0, 1.0}, 100, 0.5, kUnit, "unit");
    const BoundReport q = assemble(m, {0.0, 1.0}, 400, 0.5, kUnit, "unit");
    CHECK(close_rel(term(q, "k2_cross").contribution, term(p, "k2_cross").contribution / 2.0, 1e-12));
}

TEST_CASE("tail term") {
    CHECK(tail_term(0.5, 0.03, 1.0) == doctest::Approx(0.24));
    CHECK(tail_term(1.0, 0.03, 2.0) == doctest::Approx(0.12));
    NormalModel m;
    const BoundReport r1 = assemble(m, {0.0, 1.0}, 100, 0.5, NormSet{1, 0, 0, 0}, "h");
    const BoundReport r2 = assemble(m, {0.0, 1.0}, 100, 0.5, NormSet{2, 0, 0, 0}, "h");
    CHECK(close_rel(r2.total, 2.0 * r1.total, 1e-15));
    CHECK(r1.total == doctest::Approx(8.0 * (0.01 + 0.0199)));
}

TEST_CASE("conditioning starvation is reported") {
    NormalModel m;
    McConfig mc;
    mc.reps = 300;
    mc.mode = EstimationMode::ForceMonteCarlo;
    // n = 3 with eps = 0.05: almost no replicate stays inside the box
    try {
        k1_parts(m, {0.0, 1.0}, 3, 0.05, mc);
        FAIL("expected ConditioningStarved");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConditioningStarved);
    }
}

TEST_CASE("Beta engine uses simulation for K1 and the tail") {
    BetaModel b;
    McConfig mc;
    mc.reps = 500;
    const BoundReport r = assemble(b, {2.0, 3.0}, 400, 1.0, kUnit, "unit", mc);
    CHECK_FALSE(term(r, "k1_envelope").closed_form);
    CHECK_FALSE(term(r, "tail").closed_form);
    for (const auto& t : r.terms) CHECK(t.contribution >= 0.0);
    CHECK(r.conservative_total() >= r.total);
}

TEST_CASE("estimates do not depend on the worker count") {
    BetaModel b;
    McConfig mc;
    mc.reps = 700;
    mc.seed = 42;
    setenv("BOUNDS_THREADS", "1", 1);
    const BoundReport a = assemble(b, {2.0, 3.0}, 100, 1.0, kUnit, "unit", mc);
    setenv("BOUNDS_THREADS", "3", 1);
    const BoundReport c = assemble(b, {2.0, 3.0}, 100, 1.0, kUnit, "unit", mc);
    unsetenv("BOUNDS_THREADS");
    REQUIRE(a.terms.size() == c.terms.size());
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        CHECK(a.terms[i].contribution == c.terms[i].contribution);
        CHECK(a.terms[i].stderr == c.terms[i].stderr);
    }
}

TEST_CASE("epsilon resolution") {
    NormalModel m;
    CHECK(resolve_epsilon(m, {0.0, 3.0}, std::nullopt) == 1.5);
    CHECK(resolve_epsilon(m, {0.0, 3.0}, 0.2) == 0.2);
    BetaModel b;
    CHECK(resolve_epsilon(b, {2.0, 3.0}, std::nullopt) == 1.0);
}
