#include "doctest.h"

#include <cmath>
#include <random>

#include "jscc/wyner_ziv.hpp"

using namespace jscc;

namespace {

const Tolerances kTol{};

double e1_series_oracle(double x) {
    long double sum = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= 30; ++k) {
        term *= -static_cast<long double>(x) / k;
        sum += term / k;
    }
    return static_cast<double>(-0.5772156649015328606065120900824L - std::log(static_cast<long double>(x)) - sum);
}

}  // namespace

TEST_CASE("zero rate collapses both branches to E[1/(1+gamma)]") {
    const GammaLaw law = make_normalized(2.0);
    const double ref = expect(law, [](double g) { return 1.0 / (1.0 + 3.0 * g); }, kTol);
    for (double gbar : {0.0, 0.3, 1.5, 6.0}) CHECK(std::abs(ed_q_given_target(law, 0.0, gbar, kTol, 3.0) - ref) < 1e-10);
}

TEST_CASE("exponential law with gamma_bar = 0 matches the closed form") {
    const GammaLaw law = make_normalized(1.0);
    for (double m : {0.5, 1.0, 10.0, 1e3, 1e6}) {
        for (double rate : {0.0, 0.5, 1.0, 3.0}) {
            CHECK(std::abs(ed_q_given_target(law, rate, 0.0, kTol, m) - ed_rayleigh_closed(m, rate)) < 1e-8);
        }
    }
}

TEST_CASE("L=2, R=1, gamma_bar=0.5 against a sampled oracle") {
    const GammaLaw law = make_normalized(2.0);
    const double gbar = 0.5;
    const double k = 4.0;
    std::mt19937_64 gen(20240501);
    std::gamma_distribution<double> dist(2.0, 0.5);
    const int n = 10000000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = dist(gen);
        const double d = g < gbar ? 1.0 / (1.0 + g) : 1.0 / ((gbar + 1.0) * k + g - gbar);
        s += d;
        s2 += d * d;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(ed_q_given_target(law, 1.0, gbar, kTol) - mean) <= 4.0 * se);
}

TEST_CASE("target residual signs") {
    for (double L : {0.4, 0.8, 1.0}) {
        for (double rate : {0.1, 1.0, 4.0}) CHECK(target_residual(make_normalized(L), rate, 0.0, kTol, 5.0) <= 0.0);
    }
    const GammaLaw law = make_normalized(2.0);
    for (double rate : {0.1, 1.0, 4.0}) CHECK(target_residual(law, rate, law.mode(), kTol) <= 0.0);
}

TEST_CASE("L=2, R=1: residual changes sign on [0, mode] (dense scan oracle)") {
    const GammaLaw law = make_normalized(2.0);
    const double mode = law.mode();
    double prev = target_residual(law, 1.0, 0.0, kTol);
    bool changed = false;
    for (int i = 1; i <= 200; ++i) {
        const double r = target_residual(law, 1.0, mode * i / 200.0, kTol);
        if ((prev > 0.0) != (r > 0.0)) changed = true;
        prev = r;
    }
    CHECK(changed);
    const TargetState t = solve_target(law, 1.0, kTol);
    CHECK(t.gamma_bar > 0.0);
    CHECK(t.gamma_bar < mode);
    CHECK_FALSE(t.at_boundary);
}

TEST_CASE("solve_target returns zero for monotone densities") {
    for (double L : {0.5, 1.0}) {
        for (double rate : {0.0, 0.3, 1.0, 2.0, 5.0}) {
            for (double snr : {1.0, 100.0}) {
                const TargetState t = solve_target(make_normalized(L), rate, kTol, snr);
                CHECK(t.gamma_bar == 0.0);
                CHECK(t.at_boundary);
            }
        }
    }
}

TEST_CASE("L=2, R=1: solved target attains the grid minimum") {
    const GammaLaw law = make_normalized(2.0);
    const TargetState t = solve_target(law, 1.0, kTol);
    const double solved = ed_q_given_target(law, 1.0, t.gamma_bar, kTol);
    double grid_min = 1.0;
    const int n = 10000;
    const double span = 3.0 * law.mode();
    for (int i = 0; i <= n; ++i) grid_min = std::min(grid_min, ed_q_given_target(law, 1.0, span * i / n, kTol));
    CHECK(solved <= grid_min + 1e-8);
    CHECK(std::abs(ed_q_opt(law, 1.0, kTol) - solved) < 1e-14);
}

TEST_CASE("ed_q_opt is nonincreasing in R, bounded, and optimal over random targets") {
    std::mt19937_64 gen(5);
    for (double L : {0.5, 1.0, 2.0, 4.0}) {
        const GammaLaw law = make_normalized(L);
        const double snr = 10.0;
        const double at_zero = expect(law, [snr](double g) { return 1.0 / (1.0 + snr * g); }, kTol);
        CHECK(std::abs(ed_q_opt(law, 0.0, kTol, snr) - at_zero) < 1e-10);
        double prev = 1.0;
        for (int i = 0; i <= 12; ++i) {
            const double rate = 0.25 * i;
            const double v = ed_q_opt(law, rate, kTol, snr);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        std::uniform_real_distribution<double> u(0.0, 3.0 * snr);
        const double best = ed_q_opt(law, 1.0, kTol, snr);
        for (int i = 0; i < 20; ++i) CHECK(best <= ed_q_given_target(law, 1.0, u(gen), kTol, snr) + 1e-12);
    }
}

TEST_CASE("Rayleigh closed form") {
    CHECK(std::abs(ed_rayleigh_closed(1.0, 0.0) - std::exp(1.0) * e1_series_oracle(1.0)) < 1e-12);
    CHECK(std::abs(ed_rayleigh_closed(1.0, 0.0) - 0.59635) < 1e-5);
    CHECK(ed_rayleigh_closed(1e12, 0.0) < 1e-10);
    for (double m : {0.1, 1.0, 30.0, 1e4}) {
        for (double rate : {0.0, 0.7, 2.0}) {
            const double k = std::exp2(2.0 * rate);
            auto f = [=](double g) { return std::exp(-g / m) / m / (k + g); };
            const double ref = integrate_adaptive(f, 0.0, k, kTol) + integrate_adaptive(f, k, k + m, kTol) +
                               integrate_adaptive(f, k + m, k + 60.0 * m, kTol);
            CHECK(std::abs(ed_rayleigh_closed(m, rate) - ref) < 1e-8);
        }
    }
}

TEST_CASE("discrete laws are not implemented") {
    DiscreteLaw law{{1.0, 4.0}, {0.5, 0.5}};
    CHECK_THROWS_AS(solve_target(law, 1.0, kTol), NotImplementedError);
}

TEST_CASE("argument checks") {
    const GammaLaw law = make_normalized(2.0);
    CHECK_THROWS_AS(ed_q_given_target(law, -0.1, 0.0, kTol), DomainError);
    CHECK_THROWS_AS(ed_q_given_target(law, 1.0, -1.0, kTol), DomainError);
    CHECK_THROWS_AS(ed_rayleigh_closed(0.0, 1.0), DomainError);
}
