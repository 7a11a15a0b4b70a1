#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlebound/model.hpp"
#include "mlebound/testfun.hpp"

namespace mlebound {

enum class EstimationMode { Auto, ForceMonteCarlo };

struct McConfig {
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::size_t min_kept = 200;
    EstimationMode mode = EstimationMode::Auto;
};

struct TermValue {
    double value = 0.0;
    double stderr = 0.0;
    bool closed_form = true;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

struct TermReport {
    std::string name;
    std::string group;  // k1, k2, k3 or tail
    double contribution = 0.0;
    double stderr = 0.0;
    bool closed_form = true;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

struct BoundReport {
    std::string model_id;
    std::string h_id;
    std::size_t n = 0;
    Vec theta0;
    double epsilon = 0.0;
    std::vector<TermReport> terms;
    double total = 0.0;
    std::vector<std::pair<std::string, double>> extras;  // path-specific scalars

    double group_total(const std::string& group) const;
    double conservative_total() const;  // each term + 3 SE
    void add(TermReport t);
};

double resolve_epsilon(const Model& model, const Vec& theta0, std::optional<double> eps);

// sum_j [sum_i Var(u_ij^2)]^{1/2} and sum_{k<j} [sum_i Var(u_ij u_ik)]^{1/2}, u_i = A s_i(theta).
struct ScoreRootSums {
    TermValue diag;
    TermValue cross;
};
ScoreRootSums score_root_sums(const Model& model, const Vec& theta, std::size_t n, const Matrix& A,
                              const McConfig& mc);

// K2 = diag/(4 sqrt n) + cross/(2 sqrt n); the contribution is ||h||_2 K2 / sqrt n.
struct K2Parts {
    TermValue diag;
    TermValue cross;
    double total() const { return diag.value + cross.value; }
};
K2Parts k2_parts(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc = {});
TermValue k2_term(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc = {});

// sum_i E(sum_m |sum_l A_ml (s_il(X') - s_il(X))|)^3
TermValue score_difference_cube_sum(const Model& model, const Vec& theta, std::size_t n, const Matrix& A,
                                    const McConfig& mc);
TermValue k3_term(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc = {});

struct K1Parts {
    TermValue hessian;   // sum_k sum_l |A_lk| sum_j sqrt(E D_j^2 E(d2_jk l + n Ibar_kj)^2)
    TermValue envelope;  // (1/2) sum .. sqrt(E D_j^2 D_v^2) sqrt(E[M_kjv^2 | cond])
    std::size_t kept = 0;
    double total() const { return hessian.value + envelope.value; }
};
K1Parts k1_parts(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc = {});
TermValue k1_term(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc = {});

// E sum_j (theta_hat_j - theta0_j)^2
TermValue mse_moment(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc = {});
double tail_term(double eps, double mse, double sup_h);

BoundReport assemble(const Model& model, const Vec& theta0, std::size_t n, double eps, const TestFunction& h,
                     const McConfig& mc = {});
BoundReport assemble(const Model& model, const Vec& theta0, std::size_t n, double eps, const NormSet& norms,
                     const std::string& h_id, const McConfig& mc = {});

}  // namespace mlebound
