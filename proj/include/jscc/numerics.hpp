#pragma once

// Special functions, adaptive quadrature, bracketing root finder and a small
// box-constrained derivative-free minimizer. Everything here is a pure
// function of its arguments.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jscc {

/// Thrown when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver a result to the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate
/// reached so far together with its error estimate.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double partial, double error)
        : NumericalError(what), partial_(partial), error_(error) {}
    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_; }

private:
    double partial_;
    double error_;
};

class NoSignChange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct Tolerances {
    double quad_rel = 1e-10;   // relative quadrature accuracy
    double quad_abs = 1e-16;   // absolute floor
    double root_tol = 1e-12;   // final bracket width of the bisection
    double opt_tol = 1e-6;     // pattern-search step at which refinement stops
    double tail_mass = 1e-10;  // probability mass dropped from each gain law

    /// Throws DomainError naming the first violated constraint.
    void validate() const;
};

using RealFunction = std::function<double(double)>;

// --- special functions ------------------------------------------------------

/// E1(x) = \int_x^\infty e^{-t}/t dt for x > 0.
double exp_integral_e1(double x);

/// e^x E1(x), evaluated without forming e^x or E1(x) separately for large x.
double scaled_exp_integral_e1(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_inc_reg(double shape, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), accurate when
/// P is close to one.
double gamma_inc_reg_upper(double shape, double x);

// --- quadrature -------------------------------------------------------------

/// Integrand behaviour at the left endpoint. When `left_power` is set the
/// integrand is assumed to behave like (x - a)^p near a with p > -1; the
/// integrator then works in u with x = a + (b - a) u^{1/(1+p)}, which keeps
/// the transformed integrand bounded.
struct Endpoints {
    std::optional<double> left_power;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Stops when
/// the summed error estimate is below max(quad_abs, quad_rel |I|). Throws
/// QuadratureError if the subdivision budget runs out first.
QuadratureResult integrate_adaptive_detailed(const RealFunction& f, double a, double b,
                                             const Tolerances& tol, Endpoints ends = {});

double integrate_adaptive(const RealFunction& f, double a, double b, const Tolerances& tol,
                          Endpoints ends = {});

// --- root finding -----------------------------------------------------------

/// Bisection on [lo, hi]. Requires f(lo) f(hi) <= 0; returns an endpoint
/// exactly when f vanishes there. Throws NoSignChange otherwise.
double find_root_bisect(const RealFunction& f, double lo, double hi, double root_tol);

// --- minimization -----------------------------------------------------------

/// One search dimension. Log axes are gridded and searched in log(x) and
/// therefore need lo > 0.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log_scale = false;
};

struct MinimizeOptions {
    int grid_points = 17;      // per axis, at least 17
    int local_starts = 3;      // best grid points refined by pattern search
    std::vector<std::vector<double>> seeds;  // extra candidates (clamped to the box)
};

struct MinimizeResult {
    std::vector<double> argmin;
    double value = 0.0;
    double grid_value = 0.0;  // best value seen on the coarse grid and seeds
    std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Multistart grid plus compass search on a box of dimension 1 or 2.
MinimizeResult minimize_box(const Objective& f, std::span<const Axis> box, const Tolerances& tol,
                            const MinimizeOptions& options = {});

}  // namespace jscc
