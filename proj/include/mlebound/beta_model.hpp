#pragma once

#include "mlebound/model.hpp"

namespace mlebound {

struct BetaMleResult {
    double alpha = 0.0;
    double beta = 0.0;
    int iterations = 0;
    double gradient = 0.0;  // max |score equation| at the returned point
};

// Sufficient statistics of a Beta sample plus the two raw moments used for
// the method-of-moments start.
struct BetaStats {
    double mean_log_x = 0.0;
    double mean_log_1mx = 0.0;
    double mean_x = 0.0;
    double mean_x2 = 0.0;
    std::size_t n = 0;
};

BetaStats beta_stats(std::span<const double> x);
BetaMleResult beta_mle(std::span<const double> x, double tol = 1e-12, int max_iter = 200);
BetaMleResult beta_mle_from_stats(const BetaStats& s, double tol = 1e-12, int max_iter = 200);
double beta_loglik_per_obs(double a, double b, const BetaStats& s);

SymmetricPD beta_fisher(double alpha, double beta);

// Beta(alpha, beta), theta = (alpha, beta), support (0,1).
class BetaModel final : public Model {
public:
    std::string id() const override { return "beta"; }
    std::size_t dim_param() const override { return 2; }
    bool in_parameter_space(const Vec& t) const override { return t.size() == 2 && t[0] > 0 && t[1] > 0; }

    // Integer shapes with a+b-1 <= 32 use the order-statistic representation
    // X = U_(a) of a+b-1 uniforms; other shapes use G_a/(G_a+G_b).
    static double draw(double a, double b, SplitMix64& rng);

    void sample_obs(std::size_t, const Vec& theta, SplitMix64& rng, double* out) const override;
    Vec score_per_obs(std::size_t, std::span<const double> x, const Vec& theta) const override;
    Matrix hessian_per_obs(std::size_t, std::span<const double>, const Vec& theta) const override;
    Matrix fisher_per_obs(std::size_t, const Vec& theta) const override;

    Tensor3 data_envelope(const Vec& theta0, double eps, const Dataset& x, const Vec&) const override;
    std::optional<Tensor3> constant_envelope(const Vec& theta0, double eps) const override;
    std::optional<double> support_radius() const override { return 1.0; }
    std::optional<double> default_epsilon(const Vec& t) const override { return std::min(t[0], t[1]) / 2.0; }
    Vec mle(const Dataset& x) const override;
    ReplicateFit simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                              bool with_k1) const override;
    // Streams n draws into sufficient statistics without storing them.
    static BetaStats simulate_stats(double a, double b, std::size_t n, SplitMix64& rng);

    std::optional<Matrix> hessian_variance(std::size_t, const Vec&) const override;
};

}  // namespace mlebound
