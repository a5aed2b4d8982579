#include "jscc/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jscc {

// --- Rational ---------------------------------------------------------------

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max())
        throw NumericalError("Rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

Rational make(Wide n, Wide d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Wide a = n < 0 ? -n : n;
    Wide b = d;
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    return Rational(narrow(n), narrow(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (d < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::from_double(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw DomainError("Rational: value is not finite");
    // Continued-fraction convergents until one reproduces x exactly.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(r);
        if (std::abs(a) > 9e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const Wide p2 = static_cast<Wide>(ai) * p1 + p0;
        const Wide q2 = static_cast<Wide>(ai) * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = narrow(p2);
        q1 = narrow(q2);
        if (static_cast<double>(p1) / static_cast<double>(q1) == x) return Rational(p1, q1);
        const double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
    }
    throw DomainError("Rational: " + std::to_string(x) + " is not a fraction with a small denominator");
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("Rational: division by zero");
    return make(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<Wide>(a.num_) * b.den_ < static_cast<Wide>(b.num_) * a.den_;
}

// --- names ------------------------------------------------------------------

namespace {

struct KindName {
    ExponentKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {ExponentKind::Pe, "pe"},           {ExponentKind::Inf, "inf"},   {ExponentKind::Upper, "upper"},
    {ExponentKind::Uncoded, "uncoded"}, {ExponentKind::Sscc, "sscc"}, {ExponentKind::Jds, "jds"},
    {ExponentKind::Shda, "shda"},       {ExponentKind::Optimal, "optimal"},
};

}  // namespace

std::string exponent_name(ExponentKind kind) {
    for (const auto& k : kKindNames)
        if (k.kind == kind) return k.name;
    return "?";
}

ExponentKind parse_exponent_kind(const std::string& name) {
    for (const auto& k : kKindNames)
        if (name == k.name) return k.kind;
    throw DomainError("unknown exponent kind '" + name + "'");
}

// --- piecewise formulas -----------------------------------------------------

namespace {

template <class T>
T min_of(const T& a, const T& b) {
    return b < a ? b : a;
}

template <class T>
T max_of(const T& a, const T& b) {
    return a < b ? b : a;
}

template <class T>
T positive(const T& a) {
    return max_of(a, T(0));
}

template <class T>
ExponentValue<T> make_value(ExponentKind kind, T value, std::string regime) {
    ExponentValue<T> v;
    v.kind = kind;
    v.value = value;
    v.regime = std::move(regime);
    return v;
}

template <class T>
T hda_rate(const T& ls, const T& lc) {
    if (ls <= T(1)) return T(0);
    return (ls - T(1)) / (ls - T(1) + min_of(T(1), lc));
}

template <class T>
ExponentValue<T> formula(ExponentKind kind, const T& ls, const T& lc) {
    const T one(1);
    switch (kind) {
        case ExponentKind::Pe: {
            if (ls <= one) return make_value(kind, one, "L_s <= 1");
            auto v = make_value(kind, T(2) - one / ls, "L_s > 1");
            v.params.kappa = (ls - one) / ls;
            return v;
        }
        case ExponentKind::Inf:
            return make_value(kind, min_of(lc, one) + min_of(ls, one),
                              std::string(lc <= one ? "L_c <= 1" : "L_c > 1") + (ls <= one ? ", L_s <= 1" : ", L_s > 1"));
        case ExponentKind::Upper:
            if (ls <= one) return make_value(kind, min_of(one, ls + lc), "L_s <= 1");
            if (one <= lc || ls * (one - lc) <= one) return make_value(kind, T(2) - one / ls, "1 < L_s <= 1/(1-L_c)^+");
            return make_value(kind, one + lc, "L_s > 1/(1-L_c)");
        case ExponentKind::Uncoded:
            return make_value(kind, min_of(ls + lc, one), ls + lc <= one ? "L_s + L_c <= 1" : "L_s + L_c > 1");
        case ExponentKind::Sscc: {
            if (ls <= one) {
                const T gap = one - ls;
                auto v = make_value(kind, one - gap * gap / (lc + one - ls), "L_s <= 1");
                v.params.rs = T(0);
                v.params.rc = lc / (one + lc - ls);
                return v;
            }
            const T den = ls * (lc + one) - one;
            auto v = make_value(kind, (ls * (T(2) * lc + one) - lc - one) / den, "L_s > 1");
            v.params.rs = (lc + one) * (ls - one) / den;
            v.params.rc = lc * ls / den;
            return v;
        }
        case ExponentKind::Jds: {
            if (ls <= one) {
                const T gap = one - ls;
                auto v = make_value(kind, one - gap * gap / (lc + one - ls), "L_s <= 1");
                v.params.rj = lc / (one + lc - ls);
                return v;
            }
            if (ls <= one + lc) {
                auto v = make_value(kind, T(2) - one / ls, "1 < L_s <= 1 + L_c");
                v.params.rj = T(2) - one / ls;
                return v;
            }
            auto v = make_value(kind, one + lc / (lc + one), "L_s > 1 + L_c");
            v.params.rj = one + lc / (lc + one);
            return v;
        }
        case ExponentKind::Shda: {
            const T mc = min_of(one, lc);
            T value = min_of(one, ls + lc);
            if (one < ls) value = value + mc * (ls - one) / (ls - one + mc);
            auto v = make_value(kind, value, ls <= one ? "L_s <= 1" : "L_s > 1");
            v.params.rh = hda_rate(ls, lc);
            return v;
        }
        case ExponentKind::Optimal: {
            if (one <= lc) {
                auto v = make_value(kind, one + positive(one - one / ls), "characterized: L_c >= 1");
                v.achievers = "HDA";
                v.params.rh = hda_rate(ls, lc);
                return v;
            }
            if (ls <= one) {
                auto v = make_value(kind, min_of(one, ls + lc), "characterized: L_c < 1, L_s <= 1");
                v.achievers = "uncoded & HDA";
                v.params.rh = T(0);
                return v;
            }
            if (ls <= one + lc) {
                auto v = make_value(kind, min_of(one, ls + lc) + one - one / ls,
                                    "characterized: L_c < 1, 1 < L_s <= 1 + L_c");
                v.achievers = "JDS";
                v.params.rj = formula(ExponentKind::Jds, ls, lc).params.rj;
                return v;
            }
            // Open regime: best achievable exponent with the upper bound attached.
            const std::pair<ExponentKind, const char*> schemes[] = {{ExponentKind::Uncoded, "uncoded"},
                                                                    {ExponentKind::Sscc, "SSCC"},
                                                                    {ExponentKind::Jds, "JDS"},
                                                                    {ExponentKind::Shda, "HDA"}};
            ExponentValue<T> best;
            bool first = true;
            for (const auto& [k, label] : schemes) {
                const ExponentValue<T> s = formula(k, ls, lc);
                if (first || best.value < s.value) {
                    best.value = s.value;
                    best.params = s.params;
                    best.achievers = label;
                    first = false;
                } else if (s.value == best.value) {
                    best.achievers += std::string(" & ") + label;
                }
            }
            best.kind = kind;
            best.regime = "uncharacterized: L_c < 1, L_s > 1 + L_c";
            best.characterized = false;
            best.upper = formula(ExponentKind::Upper, ls, lc).value;
            return best;
        }
    }
    throw DomainError("exponent_formula: unknown kind");
}

template <class T>
void check_shapes(const T& ls, const T& lc) {
    if (!(T(0) < ls) || !(T(0) < lc)) throw DomainError("exponent_formula: L_s and L_c must be positive");
}

}  // namespace

ExponentReport exponent_formula(ExponentKind kind, double ls, double lc) {
    if (!std::isfinite(ls) || !std::isfinite(lc)) throw DomainError("exponent_formula: shapes must be finite");
    check_shapes(ls, lc);
    return formula(kind, ls, lc);
}

ExponentValue<Rational> exponent_formula_exact(ExponentKind kind, const Rational& ls, const Rational& lc) {
    check_shapes(ls, lc);
    return formula(kind, ls, lc);
}

// --- empirical slope --------------------------------------------------------

EmpiricalExponent empirical_exponent(const std::vector<double>& snr, const std::vector<double>& ed, double window) {
    if (snr.size() != ed.size()) throw DomainError("empirical_exponent: SNR and ED lists differ in length");
    if (!(window > 0.0 && window <= 1.0)) throw DomainError("empirical_exponent: window must lie in (0, 1]");
    for (std::size_t i = 0; i < snr.size(); ++i) {
        if (!(snr[i] > 0.0) || !std::isfinite(snr[i])) throw DomainError("empirical_exponent: SNR must be positive");
        if (!(ed[i] > 0.0) || !std::isfinite(ed[i])) throw DomainError("empirical_exponent: ED must be positive");
        if (i > 0 && !(snr[i] > snr[i - 1])) throw DomainError("empirical_exponent: SNR must be strictly ascending");
    }
    if (snr.size() < 4) throw DomainError("empirical_exponent: fewer than 4 points");
    const double x_lo = std::log(snr.front());
    const double x_hi = std::log(snr.back());
    const double cut = x_hi - window * (x_hi - x_lo) - 1e-12 * std::max(1.0, std::abs(x_hi));

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < snr.size(); ++i) {
        const double x = std::log(snr[i]);
        if (x < cut) continue;
        xs.push_back(x);
        ys.push_back(-std::log(ed[i]));
    }
    if (xs.size() < 4) throw DomainError("empirical_exponent: fewer than 4 points in the tail window");
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); }))
        throw DomainError("empirical_exponent: ED is constant over the window");

    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    EmpiricalExponent out;
    out.slope = sxy / sxx;
    out.points = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.residual = std::max(out.residual, std::abs(ys[i] - my - out.slope * (xs[i] - mx)));
    return out;
}

// --- regime map -------------------------------------------------------------

std::vector<RegimeRow> regime_map(const std::vector<double>& ls_grid, const std::vector<double>& lc_grid) {
    std::vector<RegimeRow> rows;
    rows.reserve(ls_grid.size() * lc_grid.size());
    for (double ls : ls_grid) {
        for (double lc : lc_grid) {
            const ExponentReport opt = exponent_formula(ExponentKind::Optimal, ls, lc);
            RegimeRow row;
            row.ls = ls;
            row.lc = lc;
            row.achievers = opt.characterized ? opt.achievers : "uncharacterized";
            row.optimal = opt.value;
            const double uncoded = exponent_formula(ExponentKind::Uncoded, ls, lc).value;
            const double sscc = exponent_formula(ExponentKind::Sscc, ls, lc).value;
            const double jds = exponent_formula(ExponentKind::Jds, ls, lc).value;
            const double shda = exponent_formula(ExponentKind::Shda, ls, lc).value;
            row.best_scheme = std::max({uncoded, sscc, jds, shda});
            const double tol = 1e-12;
            if (opt.characterized) {
                auto attains = [&](double v) { return std::abs(v - opt.value) <= tol; };
                const std::string& a = opt.achievers;
                if (a.find("uncoded") != std::string::npos && !attains(uncoded)) row.consistent = false;
                if (a.find("HDA") != std::string::npos && !attains(shda)) row.consistent = false;
                if (a.find("JDS") != std::string::npos && !attains(jds)) row.consistent = false;
                if (row.best_scheme > opt.value + tol) row.consistent = false;
            } else if (std::abs(row.best_scheme - opt.value) > tol || *opt.upper < opt.value - tol) {
                row.consistent = false;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace jscc
