#pragma once

#include "mlebound/model.hpp"

namespace mlebound {

struct NormalMle {
    double mu = 0.0;
    double sigma2 = 0.0;
    bool degenerate = false;  // all observations equal
};

NormalMle normal_mle(std::span<const double> x);

// N(mu, sigma^2) with theta = (mu, sigma^2).
class NormalModel final : public Model {
public:
    std::string id() const override { return "normal"; }
    std::size_t dim_param() const override { return 2; }
    bool in_parameter_space(const Vec& t) const override { return t.size() == 2 && t[1] > 0.0; }

    void sample_obs(std::size_t, const Vec& theta, SplitMix64& rng, double* out) const override;
    Vec score_per_obs(std::size_t, std::span<const double> x, const Vec& theta) const override;
    Matrix hessian_per_obs(std::size_t, std::span<const double> x, const Vec& theta) const override;
    Matrix fisher_per_obs(std::size_t, const Vec& theta) const override;

    Tensor3 data_envelope(const Vec& theta0, double eps, const Dataset& x, const Vec& theta_hat) const override;
    std::optional<double> default_epsilon(const Vec& t) const override { return t[1] / 2.0; }
    Vec mle(const Dataset& x) const override;
    ReplicateFit simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                              bool with_k1) const override;

    std::optional<double> score_moment4(std::size_t, const Vec& theta, const Vec& a, const Vec& b,
                                        const Vec& c, const Vec& e) const override;
    std::optional<Matrix> hessian_variance(std::size_t, const Vec& theta) const override;
    std::optional<double> score_difference_cube(std::size_t, const Vec& theta, const Matrix& A) const override;
    std::optional<MleMoments> mle_moments(const Vec& theta0, std::size_t n) const override;
    std::optional<double> k1_envelope_closed(const Vec& theta0, std::size_t n, double eps) const override;
};

// Probabilists' Gauss-Hermite rule (weights sum to 1), Golub-Welsch.
struct QuadratureRule {
    Vec nodes, weights;
};
QuadratureRule gauss_hermite(std::size_t points);

}  // namespace mlebound
