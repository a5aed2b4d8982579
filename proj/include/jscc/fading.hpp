#pragma once

// Gamma (Nakagami power) fading laws, the normalized average-SNR setup,
// reproducible counter-based random streams, and the high-SNR rate function.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "jscc/numerics.hpp"

namespace jscc {

/// Gamma law with shape L and scale theta: mean L*theta, variance L*theta^2.
struct GammaLaw {
    double shape = 1.0;
    double scale = 1.0;

    double mean() const { return shape * scale; }
    double variance() const { return shape * scale * scale; }
    /// Location of the density maximum; zero for shape <= 1.
    double mode() const { return shape > 1.0 ? scale * (shape - 1.0) : 0.0; }
    double cdf(double x) const { return gamma_inc_reg(shape, x / scale); }
    double ccdf(double x) const { return gamma_inc_reg_upper(shape, x / scale); }
};

/// Channel shape L_c, side-information shape L_s and average SNR rho (linear).
/// The instantaneous gains are rho*H0 and rho*Gamma0 with H0, Gamma0 of unit mean.
struct SystemConfig {
    double lc = 1.0;
    double ls = 1.0;
    double rho = 1.0;
    Tolerances tol{};

    void validate() const;
    GammaLaw channel_law() const;
    GammaLaw side_law() const;
};

double gamma_pdf(const GammaLaw& law, double x);

/// Unit-mean law {L, 1/L}.
GammaLaw make_normalized(double shape);

/// Smallest x with P(X <= x) >= 1 - tail_mass.
double truncation_bound(const GammaLaw& law, double tail_mass, double root_tol = 1e-12);

/// Rate function of the exponent variable alpha = -log(gain)/log(rho) for a
/// gamma law of shape L: L*alpha for alpha >= 0, +infinity otherwise.
double snr_rate_function(double shape, double alpha);

/// E[g(X)] restricted to lo <= X <= hi, X ~ law. Uses the declared
/// left-singularity path when the density is unbounded at lo = 0.
double expect_over(const GammaLaw& law, const RealFunction& g, double lo, double hi, const Tolerances& tol);

/// Same, with the upper limit at the law's truncation bound for tol.tail_mass.
double expect(const GammaLaw& law, const RealFunction& g, const Tolerances& tol);

/// expect_over for integrands with a feature of width `feature` at lo (for
/// instance 1/(c + rho x) with c/rho small). The range is cut at
/// lo + feature * 8^k so the quadrature sees the feature at every scale.
double expect_graded(const GammaLaw& law, const RealFunction& g, double lo, double hi, double feature,
                     const Tolerances& tol);

/// Fixed product rule for E[f(X); lo <= X < hi], X ~ law, on [0, top]. The
/// range is cut into 16-point Gauss-Legendre panels that grow geometrically
/// (ratio 4) from `min_scale` * 1e-6 and are never wider than 4 scale units.
/// Exact to rounding for integrands that are analytic on (0, top] with no
/// singularity in Re(x) > 0 and that vary on scales >= min_scale, such as
/// 1/(c + x/min_scale) with c >= 1. The first panel uses the substitution
/// x = x1 u^{1/L}, which absorbs the x^{L-1} factor of the density.
class PanelRule {
public:
    PanelRule(const GammaLaw& law, double min_scale, double top);

    /// E[f(X); X < t].
    template <class F>
    double expect_below(F&& f, double t) const;

    template <class F>
    double expect_range(F&& f, double lo, double hi) const {
        if (!(hi > lo)) return 0.0;
        return expect_below(f, hi) - expect_below(f, lo);
    }

    double top() const { return edges_.back(); }
    std::size_t size() const { return nodes_.size(); }

private:
    template <class F>
    double panel(F& f, std::size_t index, double right) const;

    GammaLaw law_;
    double log_norm_;
    std::vector<double> edges_;
    std::vector<double> nodes_;    // 16 per panel
    std::vector<double> weights_;  // density folded in
};

namespace detail {
struct GaussLegendre16 {
    std::array<double, 16> x;
    std::array<double, 16> w;
};
const GaussLegendre16& gauss_legendre16();
}  // namespace detail

template <class F>
double PanelRule::panel(F& f, std::size_t index, double right) const {
    const auto& gl = detail::gauss_legendre16();
    const double left = edges_[index];
    double sum = 0.0;
    if (index == 0) {
        // x = right u^{1/L}: density times Jacobian is C right^L / L e^{-x/theta}.
        const double L = law_.shape;
        const double scale = std::exp(log_norm_ + L * std::log(right)) / L;
        for (int i = 0; i < 16; ++i) {
            const double u = 0.5 * (gl.x[i] + 1.0);
            const double x = right * std::pow(u, 1.0 / L);
            sum += 0.5 * gl.w[i] * std::exp(-x / law_.scale) * f(x);
        }
        return sum * scale;
    }
    const double half = 0.5 * (right - left);
    const double mid = 0.5 * (right + left);
    for (int i = 0; i < 16; ++i) {
        const double x = mid + half * gl.x[i];
        sum += gl.w[i] * std::exp(log_norm_ + (law_.shape - 1.0) * std::log(x) - x / law_.scale) * f(x);
    }
    return sum * half;
}

template <class F>
double PanelRule::expect_below(F&& f, double t) const {
    if (!(t > 0.0)) return 0.0;
    double sum = 0.0;
    std::size_t full = 0;  // panels entirely below t
    const std::size_t panels = edges_.size() - 1;
    while (full < panels && edges_[full + 1] <= t) ++full;
    for (std::size_t i = 0; i < 16 * full; ++i) sum += weights_[i] * f(nodes_[i]);
    if (full < panels && t > edges_[full]) sum += panel(f, full, t);
    return sum;
}

// --- random streams ---------------------------------------------------------

/// Philox4x32-10 counter-based generator. Every (key, counter) pair maps to
/// an independent block of four 32-bit words, so streams can be split by key
/// without coordination. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint32_t;

    explicit CounterRng(std::uint64_t key = 0, std::uint64_t start_block = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform double in (0, 1).
    double uniform();

    std::uint64_t key() const { return key_; }
    std::uint64_t block() const { return counter_; }

private:
    void refill();

    std::uint64_t key_;
    std::uint64_t counter_;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

/// Key of an independent stream for (root seed, operation, point, replicate).
std::uint64_t derive_stream(std::uint64_t root_seed, std::uint64_t operation, std::uint64_t point,
                            std::uint64_t replicate);

/// Draws gains from one law. Holds the distribution object so consecutive
/// draws on the same stream reuse its cached normal variates.
class GainSampler {
public:
    explicit GainSampler(const GammaLaw& law);
    double operator()(CounterRng& stream) { return dist_(stream); }

private:
    std::gamma_distribution<double> dist_;
};

double sample_gain(const GammaLaw& law, CounterRng& stream);

}  // namespace jscc
