#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlebound/dataset.hpp"
#include "mlebound/rng.hpp"
#include "mlebound/symmat.hpp"

namespace mlebound {

// d x d x d array, symmetric use only.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t d, double fill = 0.0) : d_(d), v_(d * d * d, fill) {}
    std::size_t dim() const { return d_; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return v_[(i * d_ + j) * d_ + k]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return v_[(i * d_ + j) * d_ + k]; }
    Tensor3& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }

private:
    std::size_t d_ = 0;
    std::vector<double> v_;
};

// Exact moments of theta_hat - theta0 at sample size n.
struct MleMoments {
    Vec second;    // E D_j^2
    Matrix mixed;  // E D_j^2 D_v^2
};

// What one simulated dataset contributes to the K1 and tail estimators.
struct ReplicateFit {
    Vec theta_hat;
    Matrix hessian_sum;  // sum_i d2 log f_i at theta0
    Tensor3 envelope;    // M_kjv(X) for the full log-likelihood
};

class Model {
public:
    virtual ~Model() = default;

    virtual std::string id() const = 0;
    virtual std::size_t dim_param() const = 0;
    virtual std::size_t dim_obs() const { return 1; }
    virtual bool identically_distributed() const { return true; }
    // Designs with a fixed number of rows report it here.
    virtual std::optional<std::size_t> fixed_size() const { return std::nullopt; }
    virtual bool in_parameter_space(const Vec& theta) const = 0;

    virtual void sample_obs(std::size_t i, const Vec& theta, SplitMix64& rng, double* out) const = 0;
    Dataset sample(const Vec& theta, std::size_t n, std::uint64_t seed) const;

    virtual Vec score_per_obs(std::size_t i, std::span<const double> x, const Vec& theta) const = 0;
    virtual Matrix hessian_per_obs(std::size_t i, std::span<const double> x, const Vec& theta) const = 0;
    // Symmetric PSD; a single regression row gives a rank-one matrix.
    virtual Matrix fisher_per_obs(std::size_t i, const Vec& theta) const = 0;
    virtual SymmetricPD fisher_bar(const Vec& theta, std::size_t n) const;

    // Bound on |d3 l(theta; X)| over the eps-box around theta0, full sample.
    virtual Tensor3 data_envelope(const Vec& theta0, double eps, const Dataset& x,
                                  const Vec& theta_hat) const = 0;
    // Per-observation constants M_kji when they exist (bounded support).
    virtual std::optional<Tensor3> constant_envelope(const Vec&, double) const { return std::nullopt; }
    virtual bool third_derivatives_vanish() const { return false; }
    virtual std::optional<double> support_radius() const { return std::nullopt; }
    virtual std::optional<double> default_epsilon(const Vec&) const { return std::nullopt; }

    virtual Vec mle(const Dataset& x) const = 0;

    // One simulated replicate. The default samples and fits; models with
    // sufficient statistics may stream instead.
    virtual ReplicateFit simulate_fit(const Vec& theta0, std::size_t n, double eps, std::uint64_t key,
                                      bool with_k1) const;

    // Closed-form hooks, by observation index.
    // E[(a.s)(b.s)(c.s)(e.s)] for the score s of observation i.
    virtual std::optional<double> score_moment4(std::size_t, const Vec&, const Vec&, const Vec&,
                                                const Vec&, const Vec&) const {
        return std::nullopt;
    }
    virtual std::optional<Matrix> hessian_variance(std::size_t, const Vec&) const { return std::nullopt; }
    // Exact value or majorant of E(sum_m |sum_l A_ml (s_l(X') - s_l(X))|)^3.
    virtual std::optional<double> score_difference_cube(std::size_t, const Vec&, const Matrix&) const {
        return std::nullopt;
    }
    virtual std::optional<MleMoments> mle_moments(const Vec&, std::size_t) const { return std::nullopt; }
    // Majorant of the envelope half of K1.
    virtual std::optional<double> k1_envelope_closed(const Vec&, std::size_t, double) const {
        return std::nullopt;
    }
};

// Index of max |theta_hat_j - theta0_j|, smallest index on ties.
std::size_t max_deviation_index(const Vec& theta_hat, const Vec& theta0);

}  // namespace mlebound
