#pragma once

#include "mlebound/model.hpp"

namespace mlebound {

// beta_hat = (X'X)^{-1} X'Y. Throws RankDeficient when X'X is not PD.
Vec linreg_mle(const Matrix& X, const Vec& y);

// Y_i = x_i' beta + sigma Z_i with a fixed design and known sigma^2.
class LinearRegressionModel final : public Model {
public:
    LinearRegressionModel(Matrix design, double sigma2, std::string id = "linear-regression");

    // Rows (1, x_i - xbar). Throws DegenerateDesign if all x_i are equal.
    static LinearRegressionModel straight_line(const Vec& x, double sigma2);
    // pattern repeated to length n
    static Vec tile(const Vec& pattern, std::size_t n);

    std::string id() const override { return id_; }
    std::size_t dim_param() const override { return X_.cols(); }
    bool identically_distributed() const override { return false; }
    std::optional<std::size_t> fixed_size() const override { return X_.rows(); }
    bool in_parameter_space(const Vec& t) const override { return t.size() == X_.cols(); }
    const Matrix& design() const { return X_; }
    double sigma2() const { return sigma2_; }

    void sample_obs(std::size_t i, const Vec& theta, SplitMix64& rng, double* out) const override;
    Vec score_per_obs(std::size_t i, std::span<const double> y, const Vec& theta) const override;
    Matrix hessian_per_obs(std::size_t i, std::span<const double> y, const Vec& theta) const override;
    Matrix fisher_per_obs(std::size_t i, const Vec& theta) const override;
    SymmetricPD fisher_bar(const Vec& theta, std::size_t n) const override;

    Tensor3 data_envelope(const Vec&, double, const Dataset&, const Vec&) const override;
    bool third_derivatives_vanish() const override { return true; }
    Vec mle(const Dataset& y) const override;

    // W_n through the score path: n^{-1/2} Ibar^{-1/2} sum_i score_i(theta0).
    Vec standardized_score(const Dataset& y, const Vec& theta0) const;

    std::optional<double> score_moment4(std::size_t i, const Vec&, const Vec& a, const Vec& b, const Vec& c,
                                        const Vec& e) const override;
    std::optional<Matrix> hessian_variance(std::size_t, const Vec&) const override;
    std::optional<double> score_difference_cube(std::size_t i, const Vec&, const Matrix& A) const override;
    std::optional<MleMoments> mle_moments(const Vec&, std::size_t n) const override;

private:
    double row_dot(std::size_t i, const Vec& v) const;
    Matrix X_;
    double sigma2_;
    std::string id_;
};

// (sum of |a_m|)^3 <= d^2 sum |a_m|^3; for d = 2 this is (|a|+|b|)^3 <= 4(|a|^3+|b|^3).
double cube_of_sum_bound(std::span<const double> a);

}  // namespace mlebound
