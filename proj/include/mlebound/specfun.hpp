#pragma once

namespace mlebound {

struct PolyGammaConfig {
    int tail_terms = 8;     // terms summed directly before the tail expansion
    double abs_tol = 1e-12;
};

// Psi_m(z) = (-1)^{m+1} m! sum_{k>=0} (z+k)^{-(m+1)}, m >= 1, z > 0.
double polygamma(int m, double z, const PolyGammaConfig& cfg = {});
double trigamma(double z);
double digamma(double z);

// Upper value for zeta(3) used by the Beta third-derivative envelopes.
inline constexpr double zeta3_upper() { return 1.21; }

}  // namespace mlebound
