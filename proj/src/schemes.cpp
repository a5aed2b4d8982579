#include "jscc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jscc/wyner_ziv.hpp"

namespace jscc {

double Shda::rate() const {
    if (pd <= 0.0) return 0.0;
    return 0.5 * std::log2(1.0 + eta * eta / pd);
}

std::string scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Uncoded: return "uncoded";
        case SchemeKind::Sscc: return "sscc";
        case SchemeKind::Jds: return "jds";
        case SchemeKind::Hda: return "hda";
        case SchemeKind::Shda: return "shda";
    }
    return "unknown";
}

SchemeKind parse_scheme(const std::string& name) {
    for (SchemeKind k : {SchemeKind::Uncoded, SchemeKind::Sscc, SchemeKind::Jds, SchemeKind::Hda, SchemeKind::Shda})
        if (scheme_name(k) == name) return k;
    throw DomainError("unknown scheme '" + name + "'");
}

// --- conditional distortions -------------------------------------------------

namespace {

void check_gains(double h, double gamma) {
    if (!(h >= 0.0) || !(gamma >= 0.0)) throw DomainError("gains must be nonnegative");
}

// (sqrt(P_a) - eta)^2
double analog_residue(double pd, double eta) {
    const double d = std::sqrt(std::max(0.0, 1.0 - pd)) - eta;
    return d * d;
}

}  // namespace

ConditionalOutcome uncoded_conditional(double h, double gamma) {
    check_gains(h, gamma);
    return {false, 1.0 / (1.0 + h + gamma)};
}

ConditionalOutcome sscc_conditional(double h, double gamma, double rc, double rs) {
    check_gains(h, gamma);
    const double kc = std::exp2(2.0 * rc);
    const double k = std::exp2(2.0 * (rc + rs));
    // R_c >= C(h), or the Wyner-Ziv code needs more than R_c at this gamma.
    const bool outage = 1.0 + h <= kc || kc * (gamma + 1.0) <= gamma + k;
    if (outage) return {true, 1.0 / (1.0 + gamma)};
    return {false, 1.0 / (gamma + k)};
}

ConditionalOutcome jds_conditional(double h, double gamma, double rj) {
    check_gains(h, gamma);
    const double k = std::exp2(2.0 * rj);
    if (h * (gamma + 1.0) <= k - 1.0) return {true, 1.0 / (1.0 + gamma)};
    return {false, 1.0 / (gamma + k)};
}

ConditionalOutcome shda_conditional(double h, double gamma, double pd, double eta) {
    check_gains(h, gamma);
    const double pa = 1.0 - pd;
    const double res = analog_residue(pd, eta);
    const double eta2 = eta * eta;
    if (pd * h * (1.0 + pd * gamma) <= pd * h * res + eta2)
        return {true, 1.0 / (1.0 + h * pa / (1.0 + h * pd) + gamma)};
    return {false, pd / (eta2 + pd * (1.0 + gamma + h * res))};
}

ConditionalOutcome conditional(const SchemeParams& params, double h, double gamma) {
    struct Visitor {
        double h, gamma;
        ConditionalOutcome operator()(const Uncoded&) const { return uncoded_conditional(h, gamma); }
        ConditionalOutcome operator()(const Sscc& p) const { return sscc_conditional(h, gamma, p.rc, p.rs); }
        ConditionalOutcome operator()(const Jds& p) const { return jds_conditional(h, gamma, p.rj); }
        ConditionalOutcome operator()(const Shda& p) const { return shda_conditional(h, gamma, p.pd, p.eta); }
    };
    return std::visit(Visitor{h, gamma}, params);
}

void validate(const SchemeParams& params) {
    struct Visitor {
        void operator()(const Uncoded&) const {}
        void operator()(const Sscc& p) const {
            if (!(p.rc > 0.0) || !std::isfinite(p.rc)) throw DomainError("SSCC: R_c must be positive and finite");
            if (!(p.rs >= 0.0) || !std::isfinite(p.rs)) throw DomainError("SSCC: R_s must be nonnegative and finite");
        }
        void operator()(const Jds& p) const {
            if (!(p.rj > 0.0) || !std::isfinite(p.rj)) throw DomainError("JDS: R_j must be positive and finite");
        }
        void operator()(const Shda& p) const {
            if (!(p.pd >= 0.0 && p.pd <= 1.0)) throw DomainError("S-HDA: P_d must lie in [0, 1]");
            if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) throw DomainError("S-HDA: eta must be nonnegative");
        }
    };
    std::visit(Visitor{}, params);
}

// --- expected distortions ----------------------------------------------------

namespace {

// Shared pieces of the iterated expectations. All conditional distortions
// have the form 1/(c + gamma) with c >= 1, so the inner expectation over the
// side gain is side_part(c, lo, hi) = E[1/(c + rho G); lo <= G < hi] in
// normalized G. Its integrand has a pole at G = -c/rho < 0 only, which the
// panel rule resolves to rounding; the outer integral stays adaptive.
struct Expectations {
    GammaLaw channel;
    GammaLaw side;
    double rho;
    Tolerances tol;
    double top_h;
    double top_g;
    PanelRule side_rule;

    explicit Expectations(const SystemConfig& cfg)
        : channel(cfg.channel_law()),
          side(cfg.side_law()),
          rho(cfg.rho),
          tol(cfg.tol),
          top_h(truncation_bound(channel, tol.tail_mass, tol.root_tol)),
          top_g(truncation_bound(side, tol.tail_mass, tol.root_tol)),
          side_rule(side, 1.0 / cfg.rho, top_g) {}

    double side_part(double c, double lo, double hi) const {
        const double r = rho;
        return side_rule.expect_range([c, r](double g) { return 1.0 / (c + r * g); }, std::max(lo, 0.0),
                                      std::min(hi, top_g));
    }

    double channel_outer(const RealFunction& f, double lo, double hi) const {
        hi = std::min(hi, top_h);
        lo = std::max(lo, 0.0);
        if (!(hi > lo)) return 0.0;
        return expect_graded(channel, f, lo, hi, 1.0 / rho, tol);
    }
};

double uncoded_ed(const Expectations& ex) {
    return ex.channel_outer([&](double h0) { return ex.side_part(1.0 + ex.rho * h0, 0.0, ex.top_g); },
                            0.0, ex.top_h);
}

double sscc_ed(const Expectations& ex, const Sscc& p) {
    const double kc = std::exp2(2.0 * p.rc);
    const double k = std::exp2(2.0 * (p.rc + p.rs));
    const double no_code = ex.side_part(1.0, 0.0, ex.top_g);
    // Channel outage iff rho h0 <= kc - 1; source outage iff
    // gamma <= (k - 1)/(kc - 1) - 1. The two events are independent.
    const double h_thr = (kc - 1.0) / ex.rho;
    const double p_channel_ok = ex.channel.ccdf(h_thr);
    if (p_channel_ok <= 0.0 || kc <= 1.0) return no_code;
    const double g_thr = std::max(0.0, ((k - 1.0) / (kc - 1.0) - 1.0) / ex.rho);
    const double decoded = ex.side_part(1.0, 0.0, g_thr) + ex.side_part(k, g_thr, ex.top_g);
    return (1.0 - p_channel_ok) * no_code + p_channel_ok * decoded;
}

double jds_ed(const Expectations& ex, const Jds& p) {
    const double k = std::exp2(2.0 * p.rj);
    // For a fixed side gain, outage iff rho h0 <= (k - 1)/(gamma + 1).
    auto f = [&](double g0) {
        const double gamma = ex.rho * g0;
        const double h_thr = (k - 1.0) / ((gamma + 1.0) * ex.rho);
        const double q = ex.channel.ccdf(h_thr);
        return (1.0 - q) / (1.0 + gamma) + q / (k + gamma);
    };
    return expect_graded(ex.side, f, 0.0, ex.top_g, 1.0 / ex.rho, ex.tol);
}

double shda_ed(const Expectations& ex, const Shda& p) {
    const double pd = p.pd;
    const double pa = 1.0 - pd;
    const double eta2 = p.eta * p.eta;
    const double res = analog_residue(pd, p.eta);
    const double rho = ex.rho;
    if (pd <= 0.0) return uncoded_ed(ex);

    // For fixed h, outage iff gamma <= t(h) / (pd^2 h) with
    // t(h) = pd h (res - 1) + eta^2.
    auto inner = [&](double h0) {
        const double h = rho * h0;
        const double c_out = 1.0 + h * pa / (1.0 + h * pd);
        const double c_dec = eta2 / pd + 1.0 + h * res;
        if (h <= 0.0) return ex.side_part(c_out, 0.0, ex.top_g);
        const double t = pd * h * (res - 1.0) + eta2;
        const double g_thr = t / (pd * pd * h) / rho;
        if (g_thr <= 0.0) return ex.side_part(c_dec, 0.0, ex.top_g);
        if (g_thr >= ex.top_g) return ex.side_part(c_out, 0.0, ex.top_g);
        return ex.side_part(c_out, 0.0, g_thr) + ex.side_part(c_dec, g_thr, ex.top_g);
    };
    // t(h) changes sign at h* when res < 1; split the outer range there.
    if (res < 1.0) {
        const double h_star = eta2 / (pd * (1.0 - res)) / rho;
        if (h_star > 0.0 && h_star < ex.top_h)
            return ex.channel_outer(inner, 0.0, h_star) + ex.channel_outer(inner, h_star, ex.top_h);
    }
    return ex.channel_outer(inner, 0.0, ex.top_h);
}

}  // namespace

double expected_distortion(const SchemeParams& params, const SystemConfig& cfg) {
    cfg.validate();
    validate(params);
    const Expectations ex(cfg);
    struct Visitor {
        const Expectations& ex;
        double operator()(const Uncoded&) const { return uncoded_ed(ex); }
        double operator()(const Sscc& p) const { return sscc_ed(ex, p); }
        double operator()(const Jds& p) const { return jds_ed(ex, p); }
        double operator()(const Shda& p) const { return shda_ed(ex, p); }
    };
    return std::visit(Visitor{ex}, params);
}

double sscc_binning_rate(double rc, double gamma_bar) {
    if (!(rc >= 0.0) || !(gamma_bar >= 0.0)) throw DomainError("sscc_binning_rate: arguments must be nonnegative");
    const double v = 0.5 * std::log2(1.0 + (1.0 + gamma_bar) * std::expm1(2.0 * rc * std::log(2.0))) - rc;
    return std::max(0.0, v);
}

// --- optimization ------------------------------------------------------------

namespace {

// Objective wrapper: a quadrature that runs out of subdivisions still yields
// a usable estimate for ranking candidates.
template <class F>
double guarded(F&& f) {
    try {
        return f();
    } catch (const QuadratureError& e) {
        return e.partial();
    }
}

double rate_ceiling(double rho) { return 1.0 + std::log2(1.0 + rho); }

Axis eta2_axis(double rho) {
    return {std::min(1.0 / (rho * rho), 1e-3), std::max(rho * rho, 1e3), true};
}

// The search runs on looser quadrature; the winner is re-evaluated at the
// configured accuracy. Near an optimum the objective is flat to far below
// this level, so the ranking is unaffected.
SystemConfig search_config(const SystemConfig& cfg) {
    SystemConfig loose = cfg;
    loose.tol.quad_rel = std::max(cfg.tol.quad_rel, 1e-8);
    return loose;
}

OptimizedScheme optimize_hda(const SystemConfig& cfg, const Expectations& ex) {
    const Expectations search(search_config(cfg));
    const Axis box[] = {eta2_axis(cfg.rho)};
    auto f = [&](std::span<const double> x) {
        return guarded([&] { return shda_ed(search, Shda{1.0, std::sqrt(x[0])}); });
    };
    const MinimizeResult r = minimize_box(f, box, cfg.tol);
    const Shda best{1.0, std::sqrt(r.argmin[0])};
    return {best, shda_ed(ex, best)};
}

}  // namespace

OptimizedScheme optimize_scheme(SchemeKind kind, const SystemConfig& cfg) {
    cfg.validate();
    const Expectations ex(cfg);
    const double rmax = rate_ceiling(cfg.rho);
    switch (kind) {
        case SchemeKind::Uncoded:
            return {Uncoded{}, uncoded_ed(ex)};

        case SchemeKind::Jds: {
            const Axis box[] = {{1e-3, rmax, true}};
            auto f = [&](std::span<const double> x) { return guarded([&] { return jds_ed(ex, Jds{x[0]}); }); };
            MinimizeOptions opts;
            opts.grid_points = 65;
            const MinimizeResult r = minimize_box(f, box, cfg.tol, opts);
            const Jds best{r.argmin[0]};
            return {best, jds_ed(ex, best)};
        }

        case SchemeKind::Sscc: {
            const Axis box[] = {{1e-3, rmax, true}, {0.0, rmax, false}};
            MinimizeOptions opts;
            opts.grid_points = 33;
            // R_c grid paired with R_s = 0 and with the binning rate that is
            // optimal once the source code targets its solved gain.
            const GammaLaw side = cfg.side_law();
            for (int i = 0; i < 17; ++i) {
                const double rc = 1e-3 * std::pow(rmax / 1e-3, i / 16.0);
                opts.seeds.push_back({rc, 0.0});
                try {
                    const TargetState t = solve_target(side, rc, cfg.tol, cfg.rho);
                    opts.seeds.push_back({rc, sscc_binning_rate(rc, t.gamma_bar)});
                } catch (const NumericalError&) {
                }
            }
            auto f = [&](std::span<const double> x) {
                return guarded([&] { return sscc_ed(ex, Sscc{x[0], x[1]}); });
            };
            const MinimizeResult r = minimize_box(f, box, cfg.tol, opts);
            const Sscc best{r.argmin[0], r.argmin[1]};
            return {best, sscc_ed(ex, best)};
        }

        case SchemeKind::Hda:
            return optimize_hda(cfg, ex);

        case SchemeKind::Shda: {
            const OptimizedScheme hda = optimize_hda(cfg, ex);
            const double hda_eta2 = std::pow(std::get<Shda>(hda.params).eta, 2);
            const Axis box[] = {{0.0, 1.0, false}, eta2_axis(cfg.rho)};
            MinimizeOptions opts;
            opts.seeds = {{1.0, hda_eta2}, {0.0, 1.0}};
            const Expectations search(search_config(cfg));
            auto f = [&](std::span<const double> x) {
                return guarded([&] { return shda_ed(search, Shda{x[0], std::sqrt(x[1])}); });
            };
            const MinimizeResult r = minimize_box(f, box, cfg.tol, opts);
            Shda best{r.argmin[0], std::sqrt(r.argmin[1])};
            double value = shda_ed(ex, best);
            // The endpoints P_d = 0 (uncoded) and P_d = 1 (HDA) are always candidates.
            const double unc = uncoded_ed(ex);
            if (unc < value) {
                best = Shda{0.0, std::sqrt(r.argmin[1])};
                value = unc;
            }
            if (hda.distortion < value) {
                best = std::get<Shda>(hda.params);
                value = hda.distortion;
            }
            return {best, value};
        }
    }
    throw DomainError("optimize_scheme: unknown scheme");
}

}  // namespace jscc
