#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mlebound/model.hpp"
#include "mlebound/testfun.hpp"

namespace mlebound {

struct McEstimate {
    double value = 0.0;
    double stderr = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t rejected_replicates = 0;
};

// W_n = sqrt(n) Ibar^{1/2} (theta_hat - theta0)
Vec standardized_mle(const Vec& theta_hat, const Vec& theta0, std::size_t n, const Matrix& fisher_sqrt);

// |mean h(W_n) - E h(Z)| for each h over one shared set of replicates.
std::vector<McEstimate> estimate_distances(const Model& model, const Vec& theta0, std::size_t n,
                                           const std::vector<TestFunction>& hs, std::size_t reps,
                                           std::uint64_t seed);
McEstimate estimate_distance(const Model& model, const Vec& theta0, std::size_t n, const TestFunction& h,
                             std::size_t reps, std::uint64_t seed);
McEstimate estimate_mse(const Model& model, const Vec& theta0, std::size_t n, std::size_t reps,
                        std::uint64_t seed);

bool check_dominance(double bound, const McEstimate& est, double k_se = 3.0);

struct RateFit {
    std::vector<double> n_grid;
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};
RateFit fit_rate(const std::vector<double>& n_grid, const std::vector<double>& values);

// Finite distribution on positive d-vectors.
struct FinitePmf {
    std::vector<Vec> atoms;
    std::vector<double> probs;
};
// E[f(M) | M_i < eps for all i] <= E f(M), both sides by enumeration.
bool lemma_conditional_check(const FinitePmf& pmf, const std::function<double(const Vec&)>& f, double eps);

}  // namespace mlebound
