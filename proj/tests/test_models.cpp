#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "beta_oracle.hpp"
#include "mlebound/beta_model.hpp"
#include "mlebound/errors.hpp"
#include "mlebound/montecarlo.hpp"
#include "mlebound/normal_model.hpp"
#include "mlebound/regression_model.hpp"
#include "mlebound/specfun.hpp"

using namespace mlebound;

namespace {

ErrorKind kind_of(auto f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;
}

// E score = 0 and Cov score = Fisher, each within 4 SE, at observation i
void check_score_identities(const Model& m, const Vec& theta, std::size_t i, std::uint64_t seed) {
    const std::size_t d = m.dim_param(), t = m.dim_obs();
    const std::size_t ns = d + d * d;
    BlockSums bs = run_replicates(200000, seed, 2 * ns, [&](std::size_t, std::uint64_t key, double* acc) {
        SplitMix64 rng(key);
        Vec x(t);
        m.sample_obs(i, theta, rng, x.data());
        const Vec s = m.score_per_obs(i, x, theta);
        for (std::size_t j = 0; j < d; ++j) {
            acc[2 * j] += s[j];
            acc[2 * j + 1] += s[j] * s[j];
            for (std::size_t k = 0; k < d; ++k) {
                const double v = s[j] * s[k];
                acc[2 * (d + j * d + k)] += v;
                acc[2 * (d + j * d + k) + 1] += v * v;
            }
        }
    });
    const Matrix F = m.fisher_per_obs(i, theta);
    for (std::size_t j = 0; j < d; ++j) {
        const Estimate e = mean_estimate(bs, 2 * j, 2 * j + 1);
        CHECK(std::fabs(e.value) <= 4.0 * e.stderr + 1e-12);
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t q = d + j * d + k;
            const Estimate c = mean_estimate(bs, 2 * q, 2 * q + 1);
            CHECK(std::fabs(c.value - F(j, k)) <= 4.0 * c.stderr + 1e-12);
        }
    }
}

double normal_loglik(double x, double mu, double s2) {
    return -0.5 * std::log(2 * std::numbers::pi * s2) - (x - mu) * (x - mu) / (2 * s2);
}

}  // namespace

TEST_CASE("normal MLE") {
    const NormalMle r = normal_mle(std::vector<double>{1.0, 3.0});
    CHECK(r.mu == 2.0);
    CHECK(r.sigma2 == 1.0);
    CHECK_FALSE(r.degenerate);
    const NormalMle c = normal_mle(std::vector<double>{4.0, 4.0, 4.0});
    CHECK(c.mu == 4.0);
    CHECK(c.sigma2 == 0.0);
    CHECK(c.degenerate);
    NormalModel m;
    Dataset x;
    x.values = {4.0, 4.0, 4.0};
    CHECK(kind_of([&] { m.mle(x); }) == ErrorKind::DegenerateData);
}

TEST_CASE("normal derivatives against finite differences") {
    NormalModel m;
    SplitMix64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const double x = 3.0 * rng.normal(), mu = rng.normal(), s2 = 0.2 + 3.0 * rng.uniform();
        const Vec th{mu, s2};
        const double xs[1] = {x};
        const Vec s = m.score_per_obs(0, xs, th);
        const Matrix H = m.hessian_per_obs(0, xs, th);
        const double h = 1e-5;
        const double dmu = (normal_loglik(x, mu + h, s2) - normal_loglik(x, mu - h, s2)) / (2 * h);
        const double ds2 = (normal_loglik(x, mu, s2 + h) - normal_loglik(x, mu, s2 - h)) / (2 * h);
        CHECK(std::fabs(s[0] - dmu) <= 1e-6 * std::max(1.0, std::fabs(dmu)));
        CHECK(std::fabs(s[1] - ds2) <= 1e-6 * std::max(1.0, std::fabs(ds2)));
        const Vec sp = m.score_per_obs(0, xs, {mu, s2 + h}), sm = m.score_per_obs(0, xs, {mu, s2 - h});
        const Vec mp = m.score_per_obs(0, xs, {mu + h, s2}), mm = m.score_per_obs(0, xs, {mu - h, s2});
        CHECK(std::fabs(H(0, 0) - (mp[0] - mm[0]) / (2 * h)) <= 1e-6 * std::max(1.0, std::fabs(H(0, 0))));
        CHECK(std::fabs(H(0, 1) - (sp[0] - sm[0]) / (2 * h)) <= 1e-6 * std::max(1.0, std::fabs(H(0, 1))));
        CHECK(std::fabs(H(1, 1) - (sp[1] - sm[1]) / (2 * h)) <= 1e-6 * std::max(1.0, std::fabs(H(1, 1))));
        CHECK(H(0, 1) == H(1, 0));
    }
}

TEST_CASE("score identities by simulation") {
    NormalModel nm;
    check_score_identities(nm, {0.0, 1.0}, 0, 1);
    check_score_identities(nm, {-2.0, 3.5}, 0, 2);
    BetaModel bm;
    check_score_identities(bm, {2.0, 3.0}, 0, 3);
    check_score_identities(bm, {0.7, 1.6}, 0, 4);
    auto lm = LinearRegressionModel::straight_line({-3, -1, 1, 3}, 1.0);
    check_score_identities(lm, {1.0, 0.5}, 2, 5);
    auto lm2 = LinearRegressionModel::straight_line({0, 1, 5}, 2.0);
    check_score_identities(lm2, {-1.0, 2.0}, 0, 6);
}

TEST_CASE("normal moment identities") {
    NormalModel m;
    const std::size_t n = 100;
    BlockSums bs = run_replicates(100000, 17, 8, [&](std::size_t, std::uint64_t key, double* acc) {
        const ReplicateFit f = m.simulate_fit({0.0, 1.0}, n, 0.5, key, false);
        const double a = f.theta_hat[0], b = f.theta_hat[1] - 1.0;
        const double v[4] = {a * a * a * a, b * b * b * b, a * b, b};
        for (int i = 0; i < 4; ++i) {
            acc[2 * i] += v[i];
            acc[2 * i + 1] += v[i] * v[i];
        }
    });
    const Estimate m4 = mean_estimate(bs, 0, 1), s4 = mean_estimate(bs, 2, 3), cv = mean_estimate(bs, 4, 5);
    CHECK(std::fabs(m4.value - 3e-4) <= 4 * m4.stderr);
    CHECK(s4.value < 16.0 / (100.0 * 100.0));
    const double exact = (12.0 + 4.0 / 100 - 15.0 / 1e4) / 1e4;
    CHECK(std::fabs(s4.value - exact) <= 4 * s4.stderr);
    CHECK(std::fabs(cv.value) <= 4 * cv.stderr);
    const MleMoments mm = *m.mle_moments({0.0, 1.0}, n);
    CHECK(mm.second[0] == doctest::Approx(0.01));
    CHECK(mm.second[1] == doctest::Approx(0.0199));
    CHECK(mm.mixed(1, 1) == doctest::Approx(exact));
}

TEST_CASE("normal streaming fit matches the generic sample-and-fit path") {
    NormalModel m;
    const Vec t0{0.3, 2.0};
    for (std::uint64_t key : {1ULL, 99ULL, 12345ULL}) {
        const ReplicateFit s = m.simulate_fit(t0, 40, 1.0, key, true);
        const ReplicateFit g = m.Model::simulate_fit(t0, 40, 1.0, key, true);
        CHECK(s.theta_hat[0] == doctest::Approx(g.theta_hat[0]).epsilon(1e-12));
        CHECK(s.theta_hat[1] == doctest::Approx(g.theta_hat[1]).epsilon(1e-12));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(s.hessian_sum(i, j) == doctest::Approx(g.hessian_sum(i, j)).epsilon(1e-10));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 2; ++k)
                    CHECK(s.envelope(i, j, k) == doctest::Approx(g.envelope(i, j, k)).epsilon(1e-12));
    }
}

TEST_CASE("normal envelope dominates third derivatives on the eps-box") {
    NormalModel m;
    const Vec t0{0.0, 1.0};
    const double eps = 0.5;
    SplitMix64 rng(8);
    for (int rep = 0; rep < 40; ++rep) {
        Dataset x = m.sample(t0, 30, rng.next());
        const Vec th = m.mle(x);
        const Tensor3 env = m.data_envelope(t0, eps, x, th);
        for (int k = 0; k < 20; ++k) {
            const double mu = t0[0] + eps * (2 * rng.uniform() - 1), s2 = t0[1] + eps * (2 * rng.uniform() - 1);
            double d112 = 0, d122 = 0, d222 = 0;
            for (double xi : x.values) {
                const double r = xi - mu;
                d112 += 1.0 / (s2 * s2);
                d122 += 2.0 * r / (s2 * s2 * s2);
                d222 += -1.0 / std::pow(s2, 3) + 3.0 * r * r / std::pow(s2, 4);
            }
            CHECK(std::fabs(d112) <= env(0, 0, 1) * (1 + 1e-12));
            CHECK(std::fabs(d122) <= env(0, 1, 1) * (1 + 1e-12));
            CHECK(std::fabs(d222) <= env(1, 1, 1) * (1 + 1e-12));
            CHECK(env(0, 0, 0) == 0.0);
        }
    }
}

TEST_CASE("linear regression MLE") {
    auto lm = LinearRegressionModel::straight_line({-3, -1, 1, 3}, 1.0);
    const Vec y{0.3, 1.1, 2.4, 2.2};
    const Vec b = linreg_mle(lm.design(), y);
    const double ybar = (0.3 + 1.1 + 2.4 + 2.2) / 4.0;
    const double slope = (-3 * 0.3 - 1 * 1.1 + 1 * 2.4 + 3 * 2.2) / 20.0;
    CHECK(b[0] == doctest::Approx(ybar).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(slope).epsilon(1e-14));
    // residual orthogonality
    for (std::size_t j = 0; j < 2; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 4; ++i) s += lm.design()(i, j) * (y[i] - b[0] * lm.design()(i, 0) - b[1] * lm.design()(i, 1));
        CHECK(std::fabs(s) <= 1e-9);
    }
    // noiseless
    Matrix X(5, 3);
    SplitMix64 rng(4);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) X(i, j) = rng.normal();
    const Vec beta{1.5, -2.0, 0.25};
    const Vec y2 = X * beta;
    const Vec b2 = linreg_mle(X, y2);
    for (std::size_t j = 0; j < 3; ++j) CHECK(b2[j] == doctest::Approx(beta[j]).epsilon(1e-10));
    CHECK(kind_of([] { LinearRegressionModel::straight_line({2, 2, 2}, 1.0); }) == ErrorKind::DegenerateDesign);
    Matrix C(3, 2);
    for (std::size_t i = 0; i < 3; ++i) C(i, 0) = C(i, 1) = 1.0;
    CHECK(kind_of([&] { linreg_mle(C, {1, 2, 3}); }) == ErrorKind::RankDeficient);
}

TEST_CASE("regression fisher and standardized score") {
    auto lm = LinearRegressionModel::straight_line({-3, -1, 1, 3}, 2.0);
    const SymmetricPD F = lm.fisher_bar({0.0, 0.0}, 4);
    CHECK(F(0, 0) == doctest::Approx(1.0 / 2.0));
    CHECK(F(1, 1) == doctest::Approx(20.0 / 4.0 / 2.0));
    CHECK(F(0, 1) == doctest::Approx(0.0));
    CHECK(lm.third_derivatives_vanish());
    CHECK(LinearRegressionModel::tile({1, 2, 3}, 7) == Vec{1, 2, 3, 1, 2, 3, 1});
}

TEST_CASE("Beta Fisher information") {
    const double c = std::numbers::pi * std::numbers::pi / 6.0 - 1.0;
    const Matrix F = beta_fisher(1.0, 1.0).to_matrix();
    CHECK(F(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(F(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(F(0, 1) == doctest::Approx(-c).epsilon(1e-12));
    for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.4, 7.0}}) {
        const Matrix P = beta_fisher(a, b).to_matrix(), Q = beta_fisher(b, a).to_matrix();
        CHECK(P(0, 0) == Q(1, 1));
        CHECK(P(0, 1) == Q(1, 0));
        const double det = P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0);
        const double delta = trigamma(a) * trigamma(b) - trigamma(a + b) * (trigamma(a) + trigamma(b));
        CHECK(det == doctest::Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("Beta MLE") {
    // mirrored data gives equal shapes
    std::vector<double> x;
    SplitMix64 rng(21);
    for (int i = 0; i < 500; ++i) {
        const double u = BetaModel::draw(2.5, 1.5, rng);
        x.push_back(u);
        x.push_back(1.0 - u);
    }
    const BetaMleResult r = beta_mle(x);
    CHECK(r.alpha == doctest::Approx(r.beta).epsilon(1e-9));
    CHECK(r.gradient <= 1e-12);
    // stationarity
    const BetaStats s = beta_stats(x);
    CHECK(std::fabs(digamma(r.alpha + r.beta) - digamma(r.alpha) + s.mean_log_x) <= 1e-10);
    CHECK(std::fabs(digamma(r.alpha + r.beta) - digamma(r.beta) + s.mean_log_1mx) <= 1e-10);
    std::vector<double> bad{0.2, 0.0, 0.5};
    CHECK(kind_of([&] { beta_mle(bad); }) == ErrorKind::NonInterior);
    std::vector<double> bad2{0.2, 1.0};
    CHECK(kind_of([&] { beta_mle(bad2); }) == ErrorKind::NonInterior);
}

TEST_CASE("Beta MLE against the brute-force likelihood oracle") {
    BetaModel m;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Dataset x = m.sample({2.0, 3.0}, 10000, seed);
        const BetaMleResult r = beta_mle(x.values);
        const auto [a, b] = oracle::beta_mle_bruteforce(x.values);
        CHECK(std::fabs(r.alpha - a) <= 1e-4);
        CHECK(std::fabs(r.beta - b) <= 1e-4);
    }
    const Dataset y = m.sample({0.6, 4.5}, 3000, 77);
    const BetaMleResult r = beta_mle(y.values);
    const auto [a, b] = oracle::beta_mle_bruteforce(y.values);
    CHECK(std::fabs(r.alpha - a) <= 1e-4);
    CHECK(std::fabs(r.beta - b) <= 1e-4);
}

TEST_CASE("Beta sampler moments") {
    for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.5, 0.8}, std::pair{3.0, 1.0}, std::pair{2.5, 6.0}}) {
        BlockSums bs = run_replicates(200000, 31, 4, [&](std::size_t, std::uint64_t key, double* acc) {
            SplitMix64 rng(key);
            const double x = BetaModel::draw(a, b, rng);
            acc[0] += x;
            acc[1] += x * x;
            acc[2] += x * x;
            acc[3] += x * x * x * x;
        });
        const Estimate m1 = mean_estimate(bs, 0, 1), m2 = mean_estimate(bs, 2, 3);
        const double e1 = a / (a + b), e2 = a * (a + 1) / ((a + b) * (a + b + 1));
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::fabs(m1.value - e1) <= 4 * m1.stderr);
        CHECK(std::fabs(m2.value - e2) <= 4 * m2.stderr);
    }
}

TEST_CASE("Beta streamed statistics match stored draws") {
    SplitMix64 r1(55), r2(55);
    const BetaStats s = BetaModel::simulate_stats(2.0, 3.0, 1000, r1);
    std::vector<double> x;
    for (int i = 0; i < 1000; ++i) x.push_back(BetaModel::draw(2.0, 3.0, r2));
    const BetaStats t = beta_stats(x);
    CHECK(s.mean_log_x == doctest::Approx(t.mean_log_x).epsilon(1e-12));
    CHECK(s.mean_log_1mx == doctest::Approx(t.mean_log_1mx).epsilon(1e-12));
    CHECK(s.mean_x == doctest::Approx(t.mean_x).epsilon(1e-13));
}

TEST_CASE("Beta score and envelopes") {
    BetaModel m;
    const double h = 1e-5;
    const double xs[1] = {0.37};
    const Vec th{2.0, 3.0};
    const Vec s = m.score_per_obs(0, xs, th);
    auto ll = [&](double a, double b) { return oracle::beta_loglik(a, b, std::log(0.37), std::log1p(-0.37)); };
    CHECK(s[0] == doctest::Approx((ll(2 + h, 3) - ll(2 - h, 3)) / (2 * h)).epsilon(1e-7));
    CHECK(s[1] == doctest::Approx((ll(2, 3 + h) - ll(2, 3 - h)) / (2 * h)).epsilon(1e-7));
    const Tensor3 e = *m.constant_envelope(th, 1.0);
    // every third derivative on the box is -Psi_2 combinations; check at the box corners
    for (double da : {-0.999, 0.0, 0.999})
        for (double db : {-0.999, 0.0, 0.999}) {
            const double a = 2 + da, b = 3 + db;
            CHECK(std::fabs(polygamma(2, a + b) - polygamma(2, a)) <= e(0, 0, 0));
            CHECK(std::fabs(polygamma(2, a + b) - polygamma(2, b)) <= e(1, 1, 1));
            CHECK(std::fabs(polygamma(2, a + b)) <= e(0, 0, 1));
        }
    // true zeta(3) in place of 1.21 gives a smaller cross envelope
    const double cross_true = 2.0 / std::pow(5.0 - 2.0, 3) + 2.0 * 1.2020569031595942;
    CHECK(e(0, 1, 1) >= cross_true);
    CHECK(kind_of([&] { m.constant_envelope(th, 2.5); }) == ErrorKind::Domain);
}

TEST_CASE("max deviation index breaks ties low") {
    CHECK(max_deviation_index({1.0, 3.0}, {0.0, 1.0}) == 1);
    CHECK(max_deviation_index({2.0, 3.0}, {0.0, 1.0}) == 0);
    CHECK(max_deviation_index({0.0, 0.0, 5.0}, {0.0, 0.0, 0.0}) == 2);
}

TEST_CASE("dataset CSV round trip") {
    BetaModel m;
    Dataset d = m.sample({2.0, 3.0}, 25, 9);
    d.columns = {"x"};
    const std::string path = "models_roundtrip.csv";
    write_dataset_csv(path, d);
    const Dataset back = read_dataset_csv(path);
    CHECK(back.size() == 25);
    CHECK(back.values == d.values);
    std::remove(path.c_str());
    CHECK(kind_of([] { read_dataset_csv("does/not/exist.csv"); }) == ErrorKind::Io);
}
