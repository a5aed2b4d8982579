#include "doctest.h"

#include <cmath>
#include <random>

#include "jscc/exponents.hpp"
#include "varadhan.hpp"

using namespace jscc;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

Rational exact(ExponentKind kind, Rational ls, Rational lc) { return exponent_formula_exact(kind, ls, lc).value; }

double value(ExponentKind kind, double ls, double lc) { return exponent_formula(kind, ls, lc).value; }

}  // namespace

TEST_CASE("rational arithmetic") {
    CHECK(q(2, 4) == q(1, 2));
    CHECK(q(1, -3) == q(-1, 3));
    CHECK(q(1, 2) + q(1, 3) == q(5, 6));
    CHECK(q(1, 2) - q(1, 3) == q(1, 6));
    CHECK(q(2, 3) * q(3, 4) == q(1, 2));
    CHECK(q(2, 3) / q(4, 9) == q(3, 2));
    CHECK(q(1, 3) < q(1, 2));
    CHECK(q(3, 2).str() == "3/2");
    CHECK(q(4).str() == "4");
    CHECK(Rational::from_double(1.5) == q(3, 2));
    CHECK(Rational::from_double(0.3) == q(3, 10));
    CHECK(Rational::from_double(-2.0) == q(-2));
    CHECK_THROWS_AS(Rational::from_double(M_PI), DomainError);
    CHECK_THROWS_AS(q(1, 0), DomainError);
    CHECK_THROWS_AS(q(1) / q(0), DomainError);
    CHECK_THROWS_AS(q(INT64_MAX / 2) * q(4), NumericalError);
}

TEST_CASE("spot values as exact fractions") {
    CHECK(exact(ExponentKind::Optimal, q(1), q(1)) == q(1));
    CHECK(exact(ExponentKind::Inf, q(1), q(1)) == q(2));
    CHECK(exact(ExponentKind::Optimal, q(2), q(1)) == q(3, 2));
    CHECK(exact(ExponentKind::Sscc, q(2), q(1)) == q(4, 3));
    CHECK(exact(ExponentKind::Uncoded, q(2), q(1)) == q(1));
    CHECK(exact(ExponentKind::Optimal, q(3, 2), q(1, 2)) == q(4, 3));
    CHECK(exact(ExponentKind::Shda, q(3, 2), q(1, 2)) == q(5, 4));
}

TEST_CASE("optimal parameters at (L_s, L_c) = (2, 1)") {
    const auto pe = exponent_formula_exact(ExponentKind::Pe, q(2), q(1));
    CHECK(pe.value == q(3, 2));
    CHECK(*pe.params.kappa == q(1, 2));
    const auto s = exponent_formula_exact(ExponentKind::Sscc, q(2), q(1));
    CHECK(*s.params.rs == q(2, 3));
    CHECK(*s.params.rc == q(2, 3));
    const auto j = exponent_formula_exact(ExponentKind::Jds, q(2), q(1));
    CHECK(j.value == q(3, 2));
    CHECK(*j.params.rj == q(3, 2));
    const auto h = exponent_formula_exact(ExponentKind::Shda, q(2), q(1));
    CHECK(*h.params.rh == q(1, 2));
    const auto o = exponent_formula_exact(ExponentKind::Optimal, q(2), q(1));
    CHECK(o.achievers == "HDA");
    CHECK(*o.params.rh == q(1, 2));
    // No binning at L_s = 1.
    CHECK(*exponent_formula_exact(ExponentKind::Sscc, q(1), q(1, 3)).params.rs == q(0));
    CHECK(!exponent_formula_exact(ExponentKind::Pe, q(1, 2), q(1)).params.kappa.has_value());
}

TEST_CASE("optimal regimes and the open region") {
    const auto a = exponent_formula(ExponentKind::Optimal, 1.5, 0.5);
    CHECK(a.characterized);
    CHECK(a.achievers == "JDS");
    const auto b = exponent_formula(ExponentKind::Optimal, 3.0, 0.5);
    CHECK_FALSE(b.characterized);
    CHECK(b.regime.find("uncharacterized") != std::string::npos);
    REQUIRE(b.upper.has_value());
    CHECK(*b.upper >= b.value);
    const double best = std::max({value(ExponentKind::Uncoded, 3.0, 0.5), value(ExponentKind::Sscc, 3.0, 0.5),
                                  value(ExponentKind::Jds, 3.0, 0.5), value(ExponentKind::Shda, 3.0, 0.5)});
    CHECK(b.value == best);
    // Breakpoint L_s = 1 + L_c belongs to the JDS branch.
    CHECK(exponent_formula_exact(ExponentKind::Optimal, q(3, 2), q(1, 2)).characterized);
    CHECK(exponent_formula_exact(ExponentKind::Jds, q(3, 2), q(1, 2)).regime == "1 < L_s <= 1 + L_c");
}

TEST_CASE("SSCC exponent is 1 at L_s = 1") {
    for (auto lc : {q(1, 10), q(1, 2), q(1), q(7, 3), q(20)}) CHECK(exact(ExponentKind::Sscc, q(1), lc) == q(1));
}

TEST_CASE("ordering on a 50x50 grid") {
    const double eps = 1e-12;
    for (int i = 1; i <= 50; ++i) {
        for (int j = 1; j <= 50; ++j) {
            const double ls = 0.08 * i;
            const double lc = 0.08 * j;
            const double upper = value(ExponentKind::Upper, ls, lc);
            const double sscc = value(ExponentKind::Sscc, ls, lc);
            const double jds = value(ExponentKind::Jds, ls, lc);
            CHECK(value(ExponentKind::Uncoded, ls, lc) <= upper + eps);
            CHECK(sscc <= jds + eps);
            CHECK(jds <= upper + eps);
            CHECK(value(ExponentKind::Shda, ls, lc) <= upper + eps);
            CHECK(upper <= value(ExponentKind::Pe, ls, lc) + eps);
            CHECK(upper <= value(ExponentKind::Inf, ls, lc) + eps);
            CHECK(value(ExponentKind::Optimal, ls, lc) <= upper + eps);
            for (auto k : {ExponentKind::Pe, ExponentKind::Inf, ExponentKind::Upper, ExponentKind::Uncoded,
                           ExponentKind::Sscc, ExponentKind::Jds, ExponentKind::Shda, ExponentKind::Optimal})
                CHECK(value(k, ls, lc) >= 0.0);
        }
    }
}

TEST_CASE("piecewise formulas are continuous at their breakpoints") {
    const double d = 1e-14;
    const ExponentKind kinds[] = {ExponentKind::Pe,   ExponentKind::Inf,  ExponentKind::Upper,
                                  ExponentKind::Uncoded, ExponentKind::Sscc, ExponentKind::Jds,
                                  ExponentKind::Shda, ExponentKind::Optimal};
    for (double lc : {0.2, 0.5, 0.9, 1.0, 1.7}) {
        std::vector<double> bps = {1.0, 1.0 + lc};
        if (lc < 1.0) bps.push_back(1.0 / (1.0 - lc));
        if (lc < 1.0) bps.push_back(1.0 - lc);
        for (double bp : bps) {
            for (auto k : kinds) {
                const double left = value(k, bp - d, lc);
                const double at = value(k, bp, lc);
                const double right = value(k, bp + d, lc);
                CHECK(std::abs(left - at) <= 1e-12);
                CHECK(std::abs(right - at) <= 1e-12);
            }
        }
    }
    // L_c = 1 boundary of the optimal regimes.
    for (double ls : {0.5, 1.5, 3.0}) {
        CHECK(std::abs(value(ExponentKind::Optimal, ls, 1.0 - d) - value(ExponentKind::Optimal, ls, 1.0)) <= 1e-12);
        CHECK(std::abs(value(ExponentKind::Shda, ls, 1.0 - d) - value(ExponentKind::Shda, ls, 1.0)) <= 1e-12);
    }
}

TEST_CASE("achievability meets the upper bound where characterized") {
    for (double lc : {0.2, 0.6, 0.95}) {
        for (double ls = 1.01; ls <= 1.0 + lc; ls += 0.01)
            CHECK(value(ExponentKind::Jds, ls, lc) == doctest::Approx(value(ExponentKind::Upper, ls, lc)).epsilon(1e-12));
    }
    for (double lc : {1.0, 1.5, 4.0}) {
        for (double ls : {0.2, 0.7, 1.0, 1.3, 2.0, 10.0})
            CHECK(value(ExponentKind::Shda, ls, lc) == doctest::Approx(value(ExponentKind::Upper, ls, lc)).epsilon(1e-12));
    }
}

TEST_CASE("large L_s limits") {
    for (double lc : {0.25, 0.5, 1.0}) CHECK(std::abs(value(ExponentKind::Shda, 1e6, lc) - (1.0 + lc)) <= 1e-3);
    for (double lc : {0.25, 0.5, 1.0, 3.0})
        CHECK(std::abs(value(ExponentKind::Jds, 1e6, lc) - (1.0 + lc / (lc + 1.0))) <= 1e-3);
}

TEST_CASE("closed forms agree with brute-force infimum problems") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.25, 2.5);
    for (int t = 0; t < 5; ++t) {
        const double ls = u(gen);
        const double lc = u(gen);
        const auto j = exponent_formula(ExponentKind::Jds, ls, lc);
        CHECK(std::abs(varadhan::jds(ls, lc, *j.params.rj, 1000) - j.value) <= 1e-2);
        const auto h = exponent_formula(ExponentKind::Shda, ls, lc);
        const double rh = ls > 1.0 ? *h.params.rh : -1e-6;
        CHECK(std::abs(varadhan::hda(ls, lc, rh, 1000) - h.value) <= 1e-2);
    }
}

TEST_CASE("regime map labels") {
    auto one = [](double ls, double lc) { return regime_map({ls}, {lc}).front(); };
    CHECK(one(1.0, 2.0).achievers == "HDA");
    const RegimeRow tie = one(0.5, 0.5);
    CHECK(tie.achievers == "uncoded & HDA");
    CHECK(tie.optimal == 1.0);
    CHECK(one(1.5, 0.5).achievers == "JDS");
    CHECK(one(3.0, 0.5).achievers == "uncharacterized");

    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.1 * i);
    const auto rows = regime_map(grid, grid);
    CHECK(rows.size() == 1600);
    for (const auto& r : rows) CHECK(r.consistent);
}

TEST_CASE("empirical exponent on synthetic curves") {
    std::vector<double> snr;
    std::vector<double> ed;
    for (int i = 0; i <= 30; ++i) {
        const double rho = std::pow(10.0, 4.0 + 0.1 * i);
        snr.push_back(rho);
        ed.push_back(0.3 / rho);
    }
    const EmpiricalExponent e = empirical_exponent(snr, ed);
    CHECK(std::abs(e.slope - 1.0) <= 1e-9);
    CHECK(e.residual <= 1e-9);
    CHECK(e.points == 13);

    snr.clear();
    ed.clear();
    for (int i = 0; i <= 200; ++i) {
        const double rho = std::pow(10.0, 2.0 + 0.1 * i);
        snr.push_back(rho);
        ed.push_back(2.0 * std::pow(rho, -1.5) * (1.0 + std::pow(rho, -0.25)));
    }
    double prev_err = 1.0;
    for (double w : {0.8, 0.4, 0.1}) {
        const double err = std::abs(empirical_exponent(snr, ed, w).slope - 1.5);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-2);
}

TEST_CASE("empirical exponent rejects degenerate input") {
    const std::vector<double> snr = {1e4, 1e5, 1e6, 1e7};
    CHECK_THROWS_AS(empirical_exponent(snr, {1e-3, 1e-3, 1e-3, 1e-3}, 1.0), DomainError);
    CHECK_THROWS_AS(empirical_exponent(snr, {1e-3, 1e-4, 1e-5, 1e-6}, 0.4), DomainError);
    CHECK_THROWS_AS(empirical_exponent({1e4, 1e4, 1e4, 1e4}, {1e-3, 1e-4, 1e-5, 1e-6}, 1.0), DomainError);
    CHECK_THROWS_AS(empirical_exponent(snr, {1e-3, 0.0, 1e-5, 1e-6}, 1.0), DomainError);
    CHECK_THROWS_AS(empirical_exponent(snr, {1e-3, 1e-4}, 1.0), DomainError);
    CHECK(empirical_exponent(snr, {1e-4, 1e-5, 1e-6, 1e-7}, 1.0).slope == doctest::Approx(1.0));
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(exponent_formula(ExponentKind::Optimal, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(exponent_formula(ExponentKind::Sscc, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(parse_exponent_kind("best"), DomainError);
    CHECK(parse_exponent_kind("shda") == ExponentKind::Shda);
    CHECK(exponent_name(ExponentKind::Upper) == "upper");
}
