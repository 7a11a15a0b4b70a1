#pragma once

#include <string>

#include "mlebound/bounds_general.hpp"

namespace mlebound {

// Straight-line regression, covariates x of length n. Independent of sigma^2.
double bound_straightline(std::size_t n, const Vec& x, const NormSet& norms);
// N(mu, sigma^2) with both parameters unknown; n may be any real >= 1.
double bound_normal(double n, double sigma2, const NormSet& norms);

// Same numbers split into the k1/k2/k3/tail terms of the report format.
BoundReport straightline_report(const Vec& x, const NormSet& norms, const std::string& h_id);
BoundReport normal_report(std::size_t n, double mu, double sigma2, const NormSet& norms, const std::string& h_id);

}  // namespace mlebound
