#pragma once

// High-SNR distortion exponents Delta = -lim log E[D] / log rho for gamma
// fading of shapes (L_s, L_c), the parameters that attain them, and a
// regression estimate of the exponent from a computed distortion curve.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jscc/numerics.hpp"

namespace jscc {

/// Exact fraction with 64-bit terms, kept in lowest terms with den > 0.
/// Arithmetic throws NumericalError on overflow.
class Rational {
public:
    constexpr Rational(std::int64_t n = 0) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    /// Exact value of a double that is a fraction with denominator <= max_den;
    /// throws DomainError otherwise.
    static Rational from_double(double x, std::int64_t max_den = 1000000);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    std::int64_t num_;
    std::int64_t den_;
};

enum class ExponentKind { Pe, Inf, Upper, Uncoded, Sscc, Jds, Shda, Optimal };

std::string exponent_name(ExponentKind kind);
ExponentKind parse_exponent_kind(const std::string& name);

/// Exponent-optimal high-SNR parameters: R_c = (r_c/2) log2 rho,
/// eta^2 = rho^{r_h}, and the ergodic-relaxation level kappa.
template <class T>
struct ExponentParams {
    std::optional<T> kappa;
    std::optional<T> rc;
    std::optional<T> rs;
    std::optional<T> rj;
    std::optional<T> rh;
};

template <class T>
struct ExponentValue {
    ExponentKind kind = ExponentKind::Optimal;
    T value{};
    std::string regime;           // branch of the piecewise formula
    ExponentParams<T> params;
    bool characterized = true;    // kind == Optimal only
    std::optional<T> upper;       // upper bound, set when not characterized
    std::string achievers;        // kind == Optimal only
};

using ExponentReport = ExponentValue<double>;

ExponentReport exponent_formula(ExponentKind kind, double ls, double lc);
ExponentValue<Rational> exponent_formula_exact(ExponentKind kind, const Rational& ls, const Rational& lc);

struct EmpiricalExponent {
    double slope = 0.0;
    double residual = 0.0;  // max |fit error| of -log ED over the window
    std::size_t points = 0;
};

/// Least-squares slope of -log ED against log rho over the top `window`
/// fraction of the log-SNR range. Needs at least 4 points there.
EmpiricalExponent empirical_exponent(const std::vector<double>& snr, const std::vector<double>& ed,
                                     double window = 0.4);

struct RegimeRow {
    double ls = 0.0;
    double lc = 0.0;
    std::string achievers;  // labels for the optimal exponent
    double optimal = 0.0;
    double best_scheme = 0.0;
    bool consistent = true;  // every labelled achiever attains `optimal`
};

std::vector<RegimeRow> regime_map(const std::vector<double>& ls_grid, const std::vector<double>& lc_grid);

}  // namespace jscc
