#include "jscc/fading.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jscc {

void SystemConfig::validate() const {
    if (!(lc > 0.0) || !std::isfinite(lc)) throw DomainError("channel shape L_c must be positive");
    if (!(ls > 0.0) || !std::isfinite(ls)) throw DomainError("side-information shape L_s must be positive");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("average SNR rho must be positive");
    tol.validate();
}

GammaLaw SystemConfig::channel_law() const { return make_normalized(lc); }
GammaLaw SystemConfig::side_law() const { return make_normalized(ls); }

double gamma_pdf(const GammaLaw& law, double x) {
    if (!(x >= 0.0)) throw DomainError("gamma_pdf: x must be nonnegative");
    const double L = law.shape;
    const double theta = law.scale;
    if (x == 0.0) {
        if (L < 1.0) return std::numeric_limits<double>::infinity();
        return L == 1.0 ? 1.0 / theta : 0.0;
    }
    if (std::isinf(x)) return 0.0;
    return std::exp(-L * std::log(theta) - std::lgamma(L) + (L - 1.0) * std::log(x) - x / theta);
}

GammaLaw make_normalized(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("make_normalized: shape must be positive");
    return {shape, 1.0 / shape};
}

double truncation_bound(const GammaLaw& law, double tail_mass, double root_tol) {
    if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw DomainError("truncation_bound: tail_mass must be in (0,1)");
    double lo = 0.0;
    double hi = std::max(law.mean(), law.scale);
    while (law.ccdf(hi) > tail_mass) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > root_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (law.ccdf(mid) > tail_mass)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double snr_rate_function(double shape, double alpha) {
    if (alpha < 0.0) return std::numeric_limits<double>::infinity();
    return shape * alpha;
}

double expect_over(const GammaLaw& law, const RealFunction& g, double lo, double hi, const Tolerances& tol) {
    if (!(hi > lo)) return 0.0;
    const double L = law.shape;
    const double theta = law.scale;
    const double log_norm = -L * std::log(theta) - std::lgamma(L);
    auto integrand = [&](double x) {
        if (x <= 0.0) return L == 1.0 ? g(0.0) / theta : 0.0;
        const double p = std::exp(log_norm + (L - 1.0) * std::log(x) - x / theta);
        return p == 0.0 ? 0.0 : g(x) * p;
    };
    Endpoints ends;
    if (lo == 0.0 && L < 1.0) ends.left_power = L - 1.0;
    return integrate_adaptive(integrand, lo, hi, tol, ends);
}

double expect(const GammaLaw& law, const RealFunction& g, const Tolerances& tol) {
    return expect_over(law, g, 0.0, truncation_bound(law, tol.tail_mass), tol);
}

double expect_graded(const GammaLaw& law, const RealFunction& g, double lo, double hi, double feature,
                     const Tolerances& tol) {
    if (!(hi > lo)) return 0.0;
    if (!(feature > 0.0) || feature >= hi - lo) return expect_over(law, g, lo, hi, tol);
    double sum = expect_over(law, g, lo, lo + feature, tol);
    double width = feature;
    while (lo + width < hi) {
        const double next = std::min(hi, lo + 8.0 * width);
        sum += expect_over(law, g, lo + width, next, tol);
        width *= 8.0;
    }
    return sum;
}

namespace detail {

const GaussLegendre16& gauss_legendre16() {
    static const GaussLegendre16 rule = [] {
        GaussLegendre16 r{};
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.x[i] = x;
            r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

}  // namespace detail

PanelRule::PanelRule(const GammaLaw& law, double min_scale, double top)
    : law_(law), log_norm_(-law.shape * std::log(law.scale) - std::lgamma(law.shape)) {
    if (!(min_scale > 0.0) || !(top > 0.0)) throw DomainError("PanelRule: scales must be positive");
    edges_.push_back(0.0);
    double x = std::min(top, 1e-6 * min_scale);
    edges_.push_back(x);
    const double max_width = 4.0 * law.scale;
    while (x < top) {
        x = std::min({top, 4.0 * x, x + max_width});
        edges_.push_back(x);
    }
    const auto& gl = detail::gauss_legendre16();
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        if (p == 0) {
            // Stored through the substituted form; see panel().
            const double L = law.shape;
            const double right = edges_[1];
            const double scale = std::exp(log_norm_ + L * std::log(right)) / L;
            for (int i = 0; i < 16; ++i) {
                const double u = 0.5 * (gl.x[i] + 1.0);
                const double xi = right * std::pow(u, 1.0 / L);
                nodes_.push_back(xi);
                weights_.push_back(0.5 * gl.w[i] * std::exp(-xi / law.scale) * scale);
            }
            continue;
        }
        const double half = 0.5 * (edges_[p + 1] - edges_[p]);
        const double mid = 0.5 * (edges_[p + 1] + edges_[p]);
        for (int i = 0; i < 16; ++i) {
            const double xi = mid + half * gl.x[i];
            nodes_.push_back(xi);
            weights_.push_back(half * gl.w[i] *
                               std::exp(log_norm_ + (law.shape - 1.0) * std::log(xi) - xi / law.scale));
        }
    }
}

// --- Philox4x32-10 ----------------------------------------------------------

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t key, std::uint64_t start_block) : key_(key), counter_(start_block) {}

void CounterRng::refill() {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter_),
                                              static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                              static_cast<std::uint32_t>(key_ >> 32)};
    buffer_ = philox(ctr, key);
    ++counter_;
    used_ = 0;
}

CounterRng::result_type CounterRng::operator()() {
    if (used_ == 4) refill();
    return buffer_[used_++];
}

double CounterRng::uniform() {
    const std::uint64_t a = (*this)() >> 5;
    const std::uint64_t b = (*this)() >> 6;
    return (static_cast<double>(a * 67108864ull + b) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_stream(std::uint64_t root_seed, std::uint64_t operation, std::uint64_t point,
                            std::uint64_t replicate) {
    std::uint64_t h = splitmix64(root_seed);
    h = splitmix64(h ^ operation);
    h = splitmix64(h ^ point);
    return splitmix64(h ^ replicate);
}

GainSampler::GainSampler(const GammaLaw& law) : dist_(law.shape, law.scale) {}

double sample_gain(const GammaLaw& law, CounterRng& stream) {
    GainSampler sampler(law);
    return sampler(stream);
}

}  // namespace jscc
