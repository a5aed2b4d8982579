#include "doctest.h"

#include <cmath>

#include "jscc/bounds.hpp"
#include "jscc/schemes.hpp"

using namespace jscc;

namespace {

double e1_series_oracle(double x) {
    long double sum = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= 40; ++k) {
        term *= -static_cast<long double>(x) / k;
        sum += term / k;
    }
    return static_cast<double>(-0.5772156649015328606065120900824L - std::log(static_cast<long double>(x)) - sum);
}

// E[1/(1 + G)] for an exponential gain of mean rho.
double exponential_inverse_oracle(double rho) { return std::exp(1.0 / rho) * e1_series_oracle(1.0 / rho) / rho; }

}  // namespace

TEST_CASE("informed bound, exponential gains") {
    const double v = informed_ed({1.0, 1.0, 1.0});
    CHECK(std::abs(v - std::pow(std::exp(1.0) * e1_series_oracle(1.0), 2)) < 1e-9);
    CHECK(std::abs(v - 0.35563) < 1e-5);
    for (double rho : {0.5, 2.0, 10.0}) {
        const double e = exponential_inverse_oracle(rho);
        CHECK(std::abs(informed_ed({1.0, 1.0, rho}) - e * e) < 1e-9);
    }
}

TEST_CASE("informed bound factorizes across shapes") {
    for (double rho : {1.0, 30.0}) {
        const double a = informed_ed({1.0, 1.0, rho});
        const double b = informed_ed({3.0, 3.0, rho});
        const double mixed = informed_ed({1.0, 3.0, rho});
        CHECK(std::abs(mixed * mixed - a * b) < 1e-10);
    }
}

TEST_CASE("both bounds tend to one at vanishing SNR") {
    for (double ls : {0.5, 2.0}) {
        const SystemConfig cfg{1.0, ls, 1e-9};
        CHECK(std::abs(informed_ed(cfg) - 1.0) < 1e-8);
        CHECK(std::abs(partially_informed_ed(cfg) - 1.0) < 1e-8);
    }
}

TEST_CASE("partially informed bound equals uncoded for L_s <= 1") {
    for (double ls : {0.5, 1.0}) {
        for (double lc : {0.5, 1.0, 2.0}) {
            for (double rho : {1.0, 100.0, 1e4}) {
                const SystemConfig cfg{lc, ls, rho};
                CHECK(std::abs(partially_informed_ed(cfg) - expected_distortion(Uncoded{}, cfg)) <= 1e-5);
            }
        }
    }
}

TEST_CASE("L_s=2, L_c=1, rho=100: bracketed by the informed bound and every scheme") {
    const SystemConfig cfg{1.0, 2.0, 100.0};
    const double inf = informed_ed(cfg);
    const double pi = partially_informed_ed(cfg);
    CHECK(inf < pi);
    for (const SchemeParams& p : {SchemeParams{Uncoded{}}, SchemeParams{Sscc{1.5, 0.5}}, SchemeParams{Jds{2.0}},
                                  SchemeParams{Shda{1.0, 3.0}}, SchemeParams{Shda{0.4, 2.0}}})
        CHECK(pi <= expected_distortion(p, cfg) + 1e-7);
}

TEST_CASE("bounds are nonincreasing in SNR") {
    for (auto [lc, ls] : {std::pair{1.0, 1.0}, {0.5, 1.5}, {2.0, 3.0}}) {
        double prev_inf = 1.0;
        double prev_pi = 1.0;
        for (double db = 0.0; db <= 40.0; db += 5.0) {
            const SystemConfig cfg{lc, ls, std::pow(10.0, db / 10.0)};
            const double inf = informed_ed(cfg);
            const double pi = partially_informed_ed(cfg);
            CHECK(inf <= prev_inf);
            CHECK(pi <= prev_pi);
            CHECK(inf <= pi + 1e-7);
            prev_inf = inf;
            prev_pi = pi;
        }
    }
}

TEST_CASE("gap report") {
    const auto rows = bound_gap_report(1.0, 10.0, {1.0, 2.0, 5.0, 20.0, 100.0});
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].gap >= 0.0);
        CHECK(rows[i].gap == doctest::Approx(rows[i].partially_informed - rows[i].informed));
        CHECK(rows[i].gap <= rows[i].appendix_bound);
        CHECK(rows[i].appendix_bound == doctest::Approx(21.0 / std::sqrt(rows[i].ls)));
        if (i > 0) CHECK(rows[i].gap <= rows[i - 1].gap);
    }
    CHECK(rows.back().gap < rows[1].gap);
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(informed_ed({0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(partially_informed_ed({1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(informed_ed({1.0, 1.0, 0.0}), DomainError);
}
