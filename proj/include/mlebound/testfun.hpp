#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlebound/symmat.hpp"

namespace mlebound {

// sup|h|, and sup over coordinates of the first, second and third partials.
struct NormSet {
    double sup_h = 0.0;
    double sup_1 = 0.0;
    double sup_2 = 0.0;
    double sup_3 = 0.0;
};

struct TestFunction {
    std::string id;
    std::size_t dim = 0;
    std::function<double(std::span<const double>)> evaluate;
    NormSet norms;
    double gaussian_mean = 0.0;  // E h(Z), Z ~ N(0, I_d)
    bool mean_closed_form = true;
    double mean_stderr = 0.0;
};

std::vector<TestFunction> catalog(std::size_t d);
// Throws Config error listing known ids.
TestFunction find_test_function(const std::string& id, std::size_t d);

// h(x) = x' I^{-1} x on a model with support radius s and M = max |[I^{-1}]_ij|.
struct MseTestFunction {
    std::size_t dim;
    SymmetricPD fisher_inverse;
    double s;
    double M;

    NormSet norms() const;
    double operator()(std::span<const double> x) const;
};

double mse_value(const Vec& theta_hat, const Vec& theta0);

}  // namespace mlebound
