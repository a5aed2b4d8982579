#include "jscc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace jscc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace

void Tolerances::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("invalid tolerances: ") + what);
    };
    require(quad_rel > 0.0 && std::isfinite(quad_rel), "quad_rel must be positive");
    require(quad_abs > 0.0 && std::isfinite(quad_abs), "quad_abs must be positive");
    require(root_tol > 0.0 && std::isfinite(root_tol), "root_tol must be positive");
    require(opt_tol > 0.0 && std::isfinite(opt_tol), "opt_tol must be positive");
    require(tail_mass > 0.0, "tail_mass must be positive");
    require(tail_mass < 1e-6, "tail_mass must be below 1e-6");
}

// --- exponential integral ---------------------------------------------------

namespace {

// Power series, x <= 1.
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
}

// Modified Lentz evaluation of e^x E1(x), x > 1.
double scaled_e1_fraction(double x) {
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw DomainError("exp_integral_e1: x must be positive");
    if (x <= 1.0) return e1_series(x);
    return scaled_e1_fraction(x) * std::exp(-x);
}

double scaled_exp_integral_e1(double x) {
    if (!(x > 0.0)) throw DomainError("scaled_exp_integral_e1: x must be positive");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return scaled_e1_fraction(x);
}

// --- incomplete gamma -------------------------------------------------------

namespace {

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double shape, double x) {
    if (!(shape > 0.0)) throw DomainError("gamma_inc_reg: shape must be positive");
    if (!(x >= 0.0)) throw DomainError("gamma_inc_reg: x must be nonnegative");
}

}  // namespace

double gamma_inc_reg(double shape, double x) {
    check_gamma_args(shape, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < shape + 1.0) return gamma_p_series(shape, x);
    return 1.0 - gamma_q_fraction(shape, x);
}

double gamma_inc_reg_upper(double shape, double x) {
    check_gamma_args(shape, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < shape + 1.0) return 1.0 - gamma_p_series(shape, x);
    return gamma_q_fraction(shape, x);
}

// --- quadrature -------------------------------------------------------------

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// QUADPACK qk15 rule with its error heuristic.
Segment kronrod15(const RealFunction& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> fv1{}, fv2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    const double result = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    if (!std::isfinite(result)) err = std::numeric_limits<double>::infinity();
    return {a, b, result, err};
}

constexpr std::size_t kMaxSegments = 5000;

}  // namespace

QuadratureResult integrate_adaptive_detailed(const RealFunction& f, double a, double b,
                                             const Tolerances& tol, Endpoints ends) {
    if (!(a < b)) {
        if (a == b) return {};
        throw DomainError("integrate_adaptive: requires a < b");
    }
    std::size_t evaluations = 0;
    RealFunction g;
    double lo = a;
    double hi = b;
    if (ends.left_power) {
        const double p = *ends.left_power;
        if (!(p > -1.0)) throw DomainError("integrate_adaptive: left_power must exceed -1");
        const double k = 1.0 / (1.0 + p);
        const double width = b - a;
        g = [&f, &evaluations, a, width, k](double u) {
            ++evaluations;
            const double x = a + width * std::pow(u, k);
            return f(x) * width * k * std::pow(u, k - 1.0);
        };
        lo = 0.0;
        hi = 1.0;
    } else {
        g = [&f, &evaluations](double x) {
            ++evaluations;
            return f(x);
        };
    }

    std::priority_queue<Segment> heap;
    Segment first = kronrod15(g, lo, hi);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    std::vector<Segment> frozen;  // intervals too narrow to split further
    double frozen_err = 0.0;

    auto target = [&] { return std::max(tol.quad_abs, tol.quad_rel * std::abs(total)); };
    std::size_t segments = 1;
    while (total_err > target()) {
        if (heap.empty() || segments >= kMaxSegments) {
            std::ostringstream msg;
            msg << "integrate_adaptive: no convergence on [" << a << ", " << b << "], estimate " << total
                << " +/- " << total_err;
            throw QuadratureError(msg.str(), total, total_err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 64.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            frozen_err += worst.error;
            if (frozen_err > target()) {
                std::ostringstream msg;
                msg << "integrate_adaptive: roundoff limit on [" << a << ", " << b << "]";
                throw QuadratureError(msg.str(), total, total_err);
            }
            continue;
        }
        const Segment left = kronrod15(g, worst.a, mid);
        const Segment right = kronrod15(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
        if (segments % 64 == 0) {
            // Re-sum to keep the running totals from drifting.
            auto copy = heap;
            double v = 0.0;
            double e = 0.0;
            while (!copy.empty()) {
                v += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            for (const auto& s : frozen) {
                v += s.value;
                e += s.error;
            }
            total = v;
            total_err = e;
        }
    }
    if (!std::isfinite(total)) throw NumericalError("integrate_adaptive: non-finite integrand");
    return {total, total_err, evaluations};
}

double integrate_adaptive(const RealFunction& f, double a, double b, const Tolerances& tol, Endpoints ends) {
    return integrate_adaptive_detailed(f, a, b, tol, ends).value;
}

// --- bisection --------------------------------------------------------------

double find_root_bisect(const RealFunction& f, double lo, double hi, double root_tol) {
    if (!(lo <= hi)) throw DomainError("find_root_bisect: requires lo <= hi");
    double flo = f(lo);
    if (flo == 0.0) return lo;
    const double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        std::ostringstream msg;
        msg << "find_root_bisect: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", " << fhi
            << ")";
        throw NoSignChange(msg.str());
    }
    for (int it = 0; it < 400 && hi - lo > root_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// --- pattern search ---------------------------------------------------------

namespace {

struct Candidate {
    std::vector<double> s;  // search coordinates
    double value;
};

}  // namespace

MinimizeResult minimize_box(const Objective& f, std::span<const Axis> box, const Tolerances& tol,
                            const MinimizeOptions& options) {
    const std::size_t dims = box.size();
    if (dims < 1 || dims > 2) throw DomainError("minimize_box: supports 1 or 2 dimensions");
    if (options.grid_points < 17) throw DomainError("minimize_box: at least 17 grid points per axis");
    std::vector<double> slo(dims), shi(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        const Axis& ax = box[i];
        if (!(ax.lo <= ax.hi)) throw DomainError("minimize_box: axis with lo > hi");
        if (ax.log_scale && !(ax.lo > 0.0)) throw DomainError("minimize_box: log axis needs lo > 0");
        slo[i] = ax.log_scale ? std::log(ax.lo) : ax.lo;
        shi[i] = ax.log_scale ? std::log(ax.hi) : ax.hi;
    }

    std::size_t evaluations = 0;
    std::vector<double> x(dims);
    auto eval = [&](const std::vector<double>& s) {
        for (std::size_t i = 0; i < dims; ++i) {
            const double si = std::clamp(s[i], slo[i], shi[i]);
            x[i] = box[i].log_scale ? std::exp(si) : si;
            if (box[i].log_scale) x[i] = std::clamp(x[i], box[i].lo, box[i].hi);
        }
        ++evaluations;
        const double v = f(std::span<const double>(x));
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    const int n = options.grid_points;
    std::vector<Candidate> pool;
    std::vector<double> step(dims);
    for (std::size_t i = 0; i < dims; ++i) step[i] = (shi[i] - slo[i]) / (n - 1);
    auto grid_coord = [&](std::size_t axis, int k) {
        return k == n - 1 ? shi[axis] : slo[axis] + k * step[axis];
    };
    if (dims == 1) {
        for (int k = 0; k < n; ++k) {
            std::vector<double> s{grid_coord(0, k)};
            pool.push_back({s, eval(s)});
        }
    } else {
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                std::vector<double> s{grid_coord(0, k), grid_coord(1, l)};
                pool.push_back({s, eval(s)});
            }
    }
    for (const auto& seed : options.seeds) {
        if (seed.size() != dims) throw DomainError("minimize_box: seed dimension mismatch");
        std::vector<double> s(dims);
        for (std::size_t i = 0; i < dims; ++i) {
            const double xi = std::clamp(seed[i], box[i].lo, box[i].hi);
            s[i] = box[i].log_scale ? std::log(xi) : xi;
        }
        pool.push_back({s, eval(s)});
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Candidate& l, const Candidate& r) { return l.value < r.value; });

    Candidate best = pool.front();
    const double grid_best = best.value;

    const int starts = std::max(1, std::min<int>(options.local_starts, static_cast<int>(pool.size())));
    std::vector<std::vector<double>> started;
    for (const auto& cand : pool) {
        if (static_cast<int>(started.size()) >= starts) break;
        bool duplicate = false;
        for (const auto& s : started) duplicate = duplicate || s == cand.s;
        if (duplicate) continue;
        started.push_back(cand.s);

        Candidate cur = cand;
        std::vector<double> h = step;  // zero on a degenerate axis, which then stays fixed
        int budget = 4000;
        while (budget > 0) {
            bool any_active = false;
            for (std::size_t i = 0; i < dims; ++i) any_active = any_active || h[i] >= tol.opt_tol;
            if (!any_active) break;
            bool improved = false;
            for (std::size_t i = 0; i < dims && !improved; ++i) {
                if (h[i] < tol.opt_tol) continue;
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> trial = cur.s;
                    trial[i] = std::clamp(trial[i] + dir * h[i], slo[i], shi[i]);
                    if (trial[i] == cur.s[i]) continue;
                    const double v = eval(trial);
                    --budget;
                    if (v < cur.value) {
                        cur = {trial, v};
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved)
                for (auto& hi : h) hi *= 0.5;
        }
        if (cur.value < best.value) best = cur;
    }

    MinimizeResult out;
    out.argmin.resize(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        const double si = std::clamp(best.s[i], slo[i], shi[i]);
        out.argmin[i] = box[i].log_scale ? std::clamp(std::exp(si), box[i].lo, box[i].hi) : si;
    }
    out.value = best.value;
    out.grid_value = grid_best;
    out.evaluations = evaluations;
    return out;
}

}  // namespace jscc
