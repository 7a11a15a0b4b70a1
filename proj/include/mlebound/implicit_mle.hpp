#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mlebound/bounds_general.hpp"

namespace mlebound {

struct MseCertificate {
    std::string model_id;
    Vec theta0;
    std::uint64_t n = 0;
    double s = 0.0;
    double epsilon = 0.0;
    double M = 0.0;  // max |[I^{-1}]_ij|
    double gamma = 0.0;
    double omega = 0.0;
    double v = 0.0;
    // U1 bounds the root MSE, so mse_bound = U1^2. The Beta closed form is
    // sometimes read as E sum D_j^2 <= U1 itself; that is mse_bound_as_stated.
    std::optional<double> U1;
    std::optional<double> mse_bound;
    std::optional<double> mse_bound_as_stated;
    std::uint64_t gate_n_min = 0;
    bool admissible = false;

    bool operator==(const MseCertificate&) const = default;
};

// Per-observation quantities shared by the gate, omega, v and the distance bound.
struct ImplicitParts {
    Matrix invsqrt;  // I(theta0)^{-1/2}, one observation
    double M = 0.0;
    double trace_abs = 0.0;     // sum_j |[I^{-1}]_jj|
    double envelope_sum = 0.0;  // sum_l sum_k |A_lk| sum_m sum_i M_kmi
};
ImplicitParts implicit_parts(const Model& model, const Vec& theta0, double eps);

// smallest n with n > (s^2 d^2 / 4 eps^2)(M eps T + [M^2 eps^2 T^2 + 8M]^{1/2})^2
std::uint64_t gate_sample_size(const Model& model, const Vec& theta0, double s, double eps);
std::uint64_t gate_sample_size(std::size_t d, double s, double eps, double M, double envelope_sum);

// sum_k sum_l |A_lk| sqrt(sum_i Var d2_ki log f(X_1))
double hessian_root_sum(const Model& model, const Vec& theta0, const Matrix& A, const McConfig& mc = {});

struct GammaOmegaV {
    double gamma = 0.0, omega = 0.0, v = 0.0;
};
GammaOmegaV gamma_omega_v(const Model& model, const Vec& theta0, std::uint64_t n, double s, double eps,
                          const McConfig& mc = {});

// U1 = n^{-1/2} (v/sqrt n + sqrt(v^2/n + 4 omega gamma)) / (2 omega)
double mse_bound_u1(double gamma, double omega, double v, double n);

MseCertificate certify(const Model& model, const Vec& theta0, std::uint64_t n, std::optional<double> eps = {},
                       const McConfig& mc = {});

BoundReport implicit_distance_bound(const Model& model, const Vec& theta0, std::uint64_t n, const NormSet& norms,
                                    const std::string& h_id, double s, double eps, const McConfig& mc = {});

// Beta(alpha, beta), eps = min(alpha, beta)/2.
struct BetaConstants {
    double alpha = 0.0, beta = 0.0, m = 0.0, epsilon = 0.0;
    double delta_I = 0.0;
    double C1_ab = 0.0, C1_ba = 0.0;
    double C2_ab = 0.0, C2_ba = 0.0;
    double C3_ab = 0.0, C3_ba = 0.0;
    double C4_ab = 0.0, C4_ba = 0.0;
    double M_B = 0.0;
    double psi1_a = 0.0, psi1_b = 0.0, psi1_ab = 0.0;

    double gamma_B(double n) const;
    double omega_B(double n) const;
    // (Psi1(b) + sqrt delta) C4(b,a) + (Psi1(a) + sqrt delta) C4(a,b)
    double envelope_brace() const;
    double gate_rhs() const;
    std::uint64_t n_min() const;
};

BetaConstants beta_constants(double alpha, double beta);
// C1..C4 as functions of (x, y) with the fixed eps and delta_I of c.
double beta_C1(double x, double y);
double beta_C2(double x, double y, double delta_I);
double beta_C4(double x, double y, double eps);

// sqrt(gamma_B / (n omega_B)); GateFailed below n_min.
double beta_mse_bound(double alpha, double beta, std::uint64_t n);
BoundReport beta_distance_bound(double alpha, double beta, std::uint64_t n, const NormSet& norms,
                                const std::string& h_id);
MseCertificate certify_beta(double alpha, double beta, std::uint64_t n);

}  // namespace mlebound
