#pragma once

// Lower bounds on the expected distortion: the informed encoder (both gains
// known at the transmitter) and the partially informed encoder (channel gain
// only), plus the diagnostic for their convergence as the side-information
// gain becomes deterministic.

#include <vector>

#include "jscc/fading.hpp"

namespace jscc {

/// E[1/((1+H)(1+Gamma))] with H = rho H0, Gamma = rho Gamma0.
double informed_ed(const SystemConfig& cfg);

/// E_H[ED*_Q(C(H))], C(h) = 0.5 log2(1+h); the target gain is re-solved for
/// every channel gain visited by the outer quadrature.
double partially_informed_ed(const SystemConfig& cfg);

struct GapRow {
    double ls = 0.0;
    double informed = 0.0;
    double partially_informed = 0.0;
    double gap = 0.0;
    double appendix_bound = 0.0;  // sigma_L (1 + 2 E[H]), sigma_L = L_s^{-1/2}
};

std::vector<GapRow> bound_gap_report(double lc, double rho, const std::vector<double>& ls_list,
                                     const Tolerances& tol = {});

}  // namespace jscc
