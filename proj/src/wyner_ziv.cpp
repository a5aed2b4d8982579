#include "jscc/wyner_ziv.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace jscc {

namespace detail {

double ed_given_target_k(const GammaLaw& law, double k, double gbar, double snr, const Tolerances& tol) {
    const double top = truncation_bound(law, tol.tail_mass, tol.root_tol);
    const double below = expect_graded(
        law, [snr](double g) { return 1.0 / (1.0 + snr * g); }, 0.0, std::min(gbar, top), 1.0 / snr, tol);
    if (gbar >= top) return below;
    const double a = (1.0 + snr * gbar) * k;
    const double above = expect_graded(
        law, [=](double g) { return 1.0 / (a + snr * (g - gbar)); }, gbar, top, a / snr, tol);
    return below + above;
}

namespace {

// a^2 times the residual, so the sign test is unaffected by the 1/a^2 decay.
double scaled_residual(const GammaLaw& law, double k, double gbar, double snr, const Tolerances& tol,
                       double* a_out = nullptr) {
    const double pbar = gamma_pdf(law, gbar);
    if (std::isinf(pbar)) return -std::numeric_limits<double>::infinity();
    const double a = (1.0 + snr * gbar) * k;
    if (a_out) *a_out = a;
    const double top = truncation_bound(law, tol.tail_mass, tol.root_tol);
    if (gbar >= top) return 0.0;
    // The constant part beyond `top` is added analytically; the density mass
    // beyond it (below tail_mass) is dropped.
    const double scale = a / snr;
    auto kernel = [=](double g) {
        const double d = 1.0 + (g - gbar) / scale;
        return (gamma_pdf(law, g) - pbar) / (d * d);
    };
    // The integrand cancels to zero near the root, so accuracy is measured
    // against the size of the subtracted term rather than the result.
    Tolerances local = tol;
    local.quad_abs = std::max(tol.quad_abs, tol.quad_rel * std::max(pbar, gamma_pdf(law, law.mode())) * scale);
    double sum = 0.0;
    double lo = gbar;
    double width = scale;
    while (lo < top) {
        const double hi = std::min(top, gbar + width);
        sum += integrate_adaptive(kernel, lo, hi, local);
        lo = hi;
        width *= 8.0;
    }
    return sum - pbar * scale / (1.0 + (top - gbar) / scale);
}

}  // namespace

double residual_k(const GammaLaw& law, double k, double gbar, double snr, const Tolerances& tol) {
    double a = 1.0;
    const double r = scaled_residual(law, k, gbar, snr, tol, &a);
    return r / (a * a);
}

double solve_target_k(const GammaLaw& law, double k, double snr, const Tolerances& tol, bool* at_boundary) {
    if (at_boundary) *at_boundary = false;
    const double r0 = scaled_residual(law, k, 0.0, snr, tol);
    if (r0 <= 0.0) {
        if (at_boundary) *at_boundary = true;
        return 0.0;
    }
    const double mode = law.mode();
    auto f = [&](double g) { return scaled_residual(law, k, g, snr, tol); };
    try {
        return find_root_bisect(f, 0.0, mode, tol.root_tol);
    } catch (const NoSignChange&) {
        std::ostringstream msg;
        msg << "solve_target: positive residual " << r0 << " at 0 but no root on [0, " << mode
            << "] (shape " << law.shape << ", 2^{2R} " << k << ", snr " << snr << ")";
        throw NumericalError(msg.str());
    }
}

double ed_opt_k(const GammaLaw& law, double k, double snr, const Tolerances& tol, double* gbar_out) {
    const double gbar = solve_target_k(law, k, snr, tol);
    if (gbar_out) *gbar_out = gbar;
    return ed_given_target_k(law, k, gbar, snr, tol);
}

}  // namespace detail

namespace {

double rate_factor(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rate must be finite and nonnegative");
    return std::exp2(2.0 * rate);
}

void check_snr(double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr must be positive");
}

}  // namespace

double ed_q_given_target(const GammaLaw& law, double rate, double gamma_bar, const Tolerances& tol, double snr) {
    check_snr(snr);
    if (!(gamma_bar >= 0.0)) throw DomainError("ed_q_given_target: gamma_bar must be nonnegative");
    return detail::ed_given_target_k(law, rate_factor(rate), gamma_bar / snr, snr, tol);
}

double target_residual(const GammaLaw& law, double rate, double gamma_bar, const Tolerances& tol, double snr) {
    check_snr(snr);
    if (!(gamma_bar >= 0.0)) throw DomainError("target_residual: gamma_bar must be nonnegative");
    return detail::residual_k(law, rate_factor(rate), gamma_bar / snr, snr, tol);
}

TargetState solve_target(const GammaLaw& law, double rate, const Tolerances& tol, double snr) {
    check_snr(snr);
    TargetState state;
    const double gbar = detail::solve_target_k(law, rate_factor(rate), snr, tol, &state.at_boundary);
    state.gamma_bar = snr * gbar;
    state.alpha_star = gamma_pdf(law, gbar) / snr;
    return state;
}

double ed_q_opt(const GammaLaw& law, double rate, const Tolerances& tol, double snr) {
    check_snr(snr);
    return detail::ed_opt_k(law, rate_factor(rate), snr, tol);
}

double ed_rayleigh_closed(double mean_gain, double rate) {
    if (!(mean_gain > 0.0)) throw DomainError("ed_rayleigh_closed: mean gain must be positive");
    const double x = rate_factor(rate) / mean_gain;
    return scaled_exp_integral_e1(x) / mean_gain;
}

TargetState solve_target(const DiscreteLaw&, double, const Tolerances&) {
    throw NotImplementedError("solve_target: discrete side-information laws need a multi-layer allocation");
}

}  // namespace jscc
