#include "doctest.h"

#include <cmath>
#include <random>

#include "jscc/bounds.hpp"
#include "jscc/montecarlo.hpp"
#include "jscc/wyner_ziv.hpp"

using namespace jscc;

namespace {

double e1_series_oracle(double x) {
    long double sum = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= 30; ++k) {
        term *= -static_cast<long double>(x) / k;
        sum += term / k;
    }
    return static_cast<double>(-0.5772156649015328606065120900824L - std::log(static_cast<long double>(x)) - sum);
}

bool within(const McResult& r, double reference, double k = 4.0) {
    return std::abs(r.mean - reference) <= k * r.std_error;
}

}  // namespace

TEST_CASE("uncoded at vanishing SNR") {
    const McResult r = mc_ed(SchemeParams{Uncoded{}}, {1.0, 1.0, 1e-12}, 10000, 3);
    CHECK(std::abs(r.mean - 1.0) < 1e-10);
    CHECK(r.std_error < 1e-10);
    CHECK(r.n == 10000);
}

TEST_CASE("informed bound, exponential gains, 1e7 samples") {
    const double exact = std::pow(std::exp(1.0) * e1_series_oracle(1.0), 2);
    const McResult r = mc_ed(BoundKind::Informed, {1.0, 1.0, 1.0}, 10000000, 5);
    CHECK(within(r, exact));
}

TEST_CASE("SSCC at fixed parameters, 1e7 samples") {
    const SystemConfig cfg{1.0, 2.0, 100.0};
    const Sscc p{1.5, 0.6};
    const McResult r = mc_ed(SchemeParams{p}, cfg, 10000000, 6);
    CHECK(within(r, expected_distortion(p, cfg)));
}

TEST_CASE("other schemes and the partially informed bound") {
    const SystemConfig cfg{0.5, 1.5, 1000.0};
    for (const SchemeParams& p : {SchemeParams{Uncoded{}}, SchemeParams{Jds{3.0}}, SchemeParams{Shda{0.7, 2.0}}})
        CHECK(within(mc_ed(p, cfg, 2000000, 7), expected_distortion(p, cfg)));
    CHECK(within(mc_ed(BoundKind::PartiallyInformed, cfg, 2000000, 7), partially_informed_ed(cfg)));
}

TEST_CASE("target table reproduces the per-draw solve") {
    const SystemConfig cfg{1.0, 2.5, 300.0};
    const TargetTable table(cfg);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-9.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double h0 = std::pow(10.0, u(gen));
        const double direct = detail::solve_target_k(cfg.side_law(), 1.0 + cfg.rho * h0, cfg.rho, cfg.tol);
        CHECK(std::abs(table(h0) - direct) <= 1e-7 * std::max(1.0, direct));
    }
    const TargetTable flat({1.0, 0.8, 300.0});
    CHECK(flat(0.3) == 0.0);
}

TEST_CASE("reproducibility and thread independence") {
    const SystemConfig cfg{1.0, 2.0, 50.0};
    const SchemeParams p = Jds{2.0};
    const McResult a = mc_ed(p, cfg, 300000, 42, 0, 1);
    const McResult b = mc_ed(p, cfg, 300000, 42, 0, 1);
    const McResult c = mc_ed(p, cfg, 300000, 42, 0, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean == c.mean);
    CHECK(a.std_error == c.std_error);
    CHECK(mc_ed(p, cfg, 300000, 43).mean != a.mean);
    CHECK(mc_ed(p, cfg, 300000, 42, 1).mean != a.mean);
}

TEST_CASE("standard error scales as n^{-1/2}") {
    const SystemConfig cfg{1.0, 1.0, 10.0};
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const double s1 = mc_ed(SchemeParams{Uncoded{}}, cfg, 100000, seed).std_error;
        const double s4 = mc_ed(SchemeParams{Uncoded{}}, cfg, 400000, seed + 100).std_error;
        if (std::abs(s1 / s4 - 2.0) <= 0.4) ++good;
    }
    CHECK(good == 5);
}

TEST_CASE("pairwise combination matches a single pass") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MomentAccumulator all;
    MomentAccumulator a;
    MomentAccumulator b;
    for (int i = 0; i < 10000; ++i) {
        const double x = u(gen);
        all.add(x);
        (i < 3000 ? a : b).add(x);
    }
    const MomentAccumulator c = MomentAccumulator::combine(a, b);
    CHECK(c.n == all.n);
    CHECK(c.mean == doctest::Approx(all.mean).epsilon(1e-14));
    CHECK(c.m2 == doctest::Approx(all.m2).epsilon(1e-12));
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(mc_ed(SchemeParams{Uncoded{}}, {1.0, 1.0, 1.0}, 999, 1), DomainError);
    CHECK_THROWS_AS(mc_ed(SchemeParams{Jds{-1.0}}, {1.0, 1.0, 1.0}, 1000, 1), DomainError);
    CHECK_THROWS_AS(mc_ed(BoundKind::Informed, {1.0, 0.0, 1.0}, 1000, 1), DomainError);
}
