#pragma once

// Single-layer Wyner-Ziv coding over an error-free link of rate R when the
// decoder's side-information gain is random with a quasiconcave density.
//
// Every function takes the canonical (unit-mean) law together with the SNR
// factor rho, so the side-information gain is rho * g with g ~ law. Gains
// passed in or returned (gamma_bar) are in actual units, i.e. after scaling.

#include <vector>

#include "jscc/fading.hpp"

namespace jscc {

class NotImplementedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct TargetState {
    double gamma_bar = 0.0;   // targeted side-information gain
    double alpha_star = 0.0;  // density of the gain at gamma_bar
    bool at_boundary = false; // gamma_bar clamped to zero
};

/// Expected distortion of a single-layer code of rate R designed for the
/// side-information gain gamma_bar.
double ed_q_given_target(const GammaLaw& law, double rate, double gamma_bar, const Tolerances& tol,
                         double snr = 1.0);

/// Stationarity residual of the target equation at gamma_bar. Positive means
/// the expected distortion still decreases when gamma_bar grows.
double target_residual(const GammaLaw& law, double rate, double gamma_bar, const Tolerances& tol,
                       double snr = 1.0);

/// Optimal target gain: zero when the residual is already nonpositive there,
/// otherwise the root on the rising edge [0, mode].
TargetState solve_target(const GammaLaw& law, double rate, const Tolerances& tol, double snr = 1.0);

/// Minimum expected distortion ED*_Q(R).
double ed_q_opt(const GammaLaw& law, double rate, const Tolerances& tol, double snr = 1.0);

/// Closed form for exponentially distributed gains of mean m:
/// (1/m) e^{2^{2R}/m} E1(2^{2R}/m).
double ed_rayleigh_closed(double mean_gain, double rate);

/// Finite-state side information. Only continuous laws are supported; the
/// multi-layer allocation needed for discrete states is not implemented.
struct DiscreteLaw {
    std::vector<double> states;
    std::vector<double> probabilities;
};

TargetState solve_target(const DiscreteLaw& law, double rate, const Tolerances& tol);

namespace detail {

// The same quantities with the rate given as K = 2^{2R} and gains in
// normalized units (gbar = gamma_bar / snr). Used by callers that already
// hold K in closed form, e.g. K = 1 + rho h for a channel of capacity C(rho h).
double ed_given_target_k(const GammaLaw& law, double k, double gbar, double snr, const Tolerances& tol);
double residual_k(const GammaLaw& law, double k, double gbar, double snr, const Tolerances& tol);
double solve_target_k(const GammaLaw& law, double k, double snr, const Tolerances& tol, bool* at_boundary = nullptr);
double ed_opt_k(const GammaLaw& law, double k, double snr, const Tolerances& tol, double* gbar_out = nullptr);

}  // namespace detail

}  // namespace jscc
