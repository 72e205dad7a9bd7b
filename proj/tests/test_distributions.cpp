#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "hmeasure/distributions.hpp"
#include "support/frozen.hpp"
#include "support/oracle.hpp"

using namespace hmeasure;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("beta_pdf known values") {
    CHECK(beta_pdf(0.5, BetaParams(1, 1)) == 1.0);
    CHECK_THAT(beta_pdf(0.5, BetaParams(2, 2)), WithinRel(1.5, 1e-14));
    CHECK_THAT(beta_pdf(0.3, BetaParams(1.7, 1.3)), WithinRel(frozen::beta_pdf_03_17_13, 1e-12));
}

TEST_CASE("beta_pdf rejects endpoints and bad shapes") {
    CHECK_THROWS_AS(beta_pdf(0.0, BetaParams(0.5, 0.5)), DomainError);
    CHECK_THROWS_AS(beta_pdf(1.0, BetaParams(2, 2)), DomainError);
    CHECK_THROWS_AS(beta_pdf(-0.1, BetaParams(2, 2)), DomainError);
    CHECK_THROWS_AS(BetaParams(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(BetaParams(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(BetaParams(NAN, 1.0), DomainError);
}

TEST_CASE("regularized incomplete beta known values") {
    CHECK(regularized_incomplete_beta(1.0, BetaParams(3.7, 0.4)) == 1.0);
    CHECK(regularized_incomplete_beta(0.0, BetaParams(3.7, 0.4)) == 0.0);
    for (double s : {0.3, 1.0, 2.5, 17.0})
        CHECK_THAT(regularized_incomplete_beta(0.5, BetaParams(s, s)), WithinAbs(0.5, 1e-14));
    CHECK_THAT(regularized_incomplete_beta(0.3, BetaParams(2.5, 1.5)), WithinRel(frozen::ibeta_03_25_15, 1e-12));
    CHECK_THROWS_AS(regularized_incomplete_beta(1.5, BetaParams(2, 2)), DomainError);
}

TEST_CASE("incomplete beta symmetry and monotonicity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0), shape(0.2, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), a = shape(rng), b = shape(rng);
        const double lhs = regularized_incomplete_beta(x, BetaParams(a, b));
        const double rhs = 1.0 - regularized_incomplete_beta(1.0 - x, BetaParams(b, a));
        CHECK_THAT(lhs, WithinAbs(rhs, 1e-12));
    }
    for (int i = 0; i < 20; ++i) {
        const BetaParams p(shape(rng), shape(rng));
        double prev = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double v = regularized_incomplete_beta(k / 1000.0, p);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("incomplete beta against adaptive quadrature") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.99), shape(1.0, 8.0);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), a = shape(rng), b = shape(rng);
        const double q = oracle::integrate([&](double c) { return oracle::beta_pdf(c, a, b); }, 0.0, x);
        CHECK_THAT(regularized_incomplete_beta(x, BetaParams(a, b)), WithinRel(q, 1e-10));
    }
}

TEST_CASE("partial moments at the endpoints") {
    const auto w = WeightFunction::beta(2.5, 4.0);
    auto m = weight_partial_moments(w, 0.0);
    CHECK(m.lower == 0.0);
    CHECK_THAT(m.upper, WithinRel(4.0 / 6.5, 1e-15));
    m = weight_partial_moments(w, 1.0);
    CHECK_THAT(m.lower, WithinRel(2.5 / 6.5, 1e-15));
    CHECK(m.upper == 0.0);
    CHECK_THROWS_AS(weight_partial_moments(w, 1.1), DomainError);
    CHECK_THROWS_AS(weight_partial_moments(w, -0.1), DomainError);
}

TEST_CASE("partial moments frozen value") {
    const auto m = weight_partial_moments(WeightFunction::beta(1.5, 1.5), 0.5);
    CHECK_THAT(m.lower, WithinRel(frozen::m0_05_15_15, 1e-12));
    CHECK_THAT(m.upper, WithinRel(frozen::m1_05_15_15, 1e-12));
}

TEST_CASE("beta partial moments agree with brute quadrature") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0), shape(0.5, 5.0);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), a = shape(rng), b = shape(rng);
        const auto m = weight_partial_moments(WeightFunction::beta(a, b), x);
        // Split near the endpoints so the integrable singularities for shapes < 1 are resolved.
        const std::vector<double> br{1e-12, 1e-8, 1e-4, 1 - 1e-4, 1 - 1e-8, 1 - 1e-12};
        const double lo = oracle::integrate([&](double c) { return c * oracle::beta_pdf(c, a, b); }, 0.0, x, br);
        const double hi = oracle::integrate([&](double c) { return (1 - c) * oracle::beta_pdf(c, a, b); }, x, 1.0, br);
        CHECK_THAT(m.lower, WithinRel(lo, 1e-8));
        CHECK_THAT(m.upper, WithinRel(hi, 1e-8));
    }
}

TEST_CASE("partial moments deep in the tails") {
    const auto w = WeightFunction::beta(3.0, 2.0);
    for (double x : {1e-6, 1e-4, 1 - 1e-4, 1 - 1e-6}) {
        const auto m = weight_partial_moments(w, x);
        const double lo = oracle::integrate([](double c) { return c * oracle::beta_pdf(c, 3.0, 2.0); }, 0.0, x);
        const double hi = oracle::integrate([](double c) { return (1 - c) * oracle::beta_pdf(c, 3.0, 2.0); }, x, 1.0);
        CHECK_THAT(m.lower, WithinRel(lo, 1e-9));
        CHECK_THAT(m.upper, WithinRel(hi, 1e-9));
    }
}

TEST_CASE("partial moments are monotone and continuous") {
    for (const auto& w : {WeightFunction::beta(0.7, 2.0), WeightFunction::beta(1.5, 1.5), WeightFunction::beta(6, 3)}) {
        double prev_lo = -1, prev_hi = 2;
        double prev_sum = weight_partial_moments(w, 0.0).lower + weight_partial_moments(w, 0.0).upper;
        for (int k = 0; k <= 2000; ++k) {
            const auto m = weight_partial_moments(w, k / 2000.0);
            CHECK(m.lower >= prev_lo);
            CHECK(m.upper <= prev_hi);
            CHECK(std::fabs(m.lower + m.upper - prev_sum) < 2e-2);
            prev_lo = m.lower;
            prev_hi = m.upper;
            prev_sum = m.lower + m.upper;
        }
    }
}

TEST_CASE("beta sampling moments") {
    RandomStream rng(1234);
    const std::size_t n = 100000;
    auto check = [&](const WeightFunction& w, double mean, double var) {
        const auto xs = sample_weight(w, n, rng);
        double s = 0, ss = 0;
        for (double x : xs) {
            REQUIRE(x > 0.0);
            REQUIRE(x < 1.0);
            s += x;
        }
        const double m = s / n;
        for (double x : xs)
            ss += (x - m) * (x - m);
        const double v = ss / (n - 1);
        CHECK(std::fabs(m - mean) < 3.0 * std::sqrt(var / n));
        return v;
    };
    check(WeightFunction::uniform(), 0.5, 1.0 / 12.0);
    const double v = check(WeightFunction::beta(2, 2), 0.5, 0.05);
    // Var of the sample variance: (mu4 - sigma^4) / n with mu4 = 3/112 for Beta(2, 2).
    CHECK(std::fabs(v - 0.05) < 3.0 * std::sqrt((3.0 / 112.0 - 0.0025) / n));
    CHECK_THROWS_AS(sample_weight(WeightFunction::uniform(), 0, rng), DomainError);
}

TEST_CASE("sampling is deterministic given the stream") {
    RandomStream a(77), b(77);
    CHECK(sample_weight(WeightFunction::beta(1.2, 3.4), 1000, a) == sample_weight(WeightFunction::beta(1.2, 3.4), 1000, b));
}

namespace {

std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return g;
}

} // namespace

TEST_CASE("tabulated Beta(3,1) sampling passes a KS check") {
    const auto grid = uniform_grid(4096);
    const auto tab = TabulatedWeight::from_function([](double c) { return 3.0 * c * c; }, grid,
                                                    MassPolicy::rescale_to_unit);
    const WeightFunction w(tab);
    RandomStream rng(99);
    auto xs = sample_weight(w, 100000, rng);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const BetaParams p(3, 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = regularized_incomplete_beta(xs[i], p);
        ks = std::max({ks, std::fabs(f - static_cast<double>(i) / xs.size()),
                       std::fabs(f - static_cast<double>(i + 1) / xs.size())});
    }
    CHECK(ks < 0.01);
}

TEST_CASE("tabulated weight validation") {
    std::vector<GridPoint> few{{0.25, 1.0}, {0.75, 1.0}};
    CHECK_THROWS_AS(TabulatedWeight(few), DomainError);

    const auto grid = uniform_grid(1024);
    std::vector<GridPoint> pts;
    for (double c : grid)
        pts.push_back({c, 1.0});
    // Linear interpolation between the first and last grid points loses the end cells.
    CHECK_THROWS_AS(TabulatedWeight(pts, MassPolicy::require_unit), DomainError);
    CHECK_NOTHROW(TabulatedWeight(pts, MassPolicy::rescale_to_unit));

    auto bad = pts;
    bad[10].density = -1.0;
    CHECK_THROWS_AS(TabulatedWeight(bad, MassPolicy::keep), DomainError);
    bad = pts;
    std::swap(bad[3], bad[4]);
    CHECK_THROWS_AS(TabulatedWeight(bad, MassPolicy::keep), DomainError);
    bad = pts;
    bad.back().c = 1.0;
    CHECK_THROWS_AS(TabulatedWeight(bad, MassPolicy::keep), DomainError);
}

TEST_CASE("tabulated partial moments are exact for the interpolant") {
    const auto grid = uniform_grid(2048);
    const auto tab = TabulatedWeight::from_function([](double c) { return 6 * c * (1 - c); }, grid,
                                                    MassPolicy::rescale_to_unit);
    const WeightFunction w(tab);
    CHECK_THAT(w.mass(), WithinAbs(1.0, 1e-12));
    for (double x : {0.0, 0.0001, 0.1, 0.37, 0.5, 0.9, 0.99999, 1.0}) {
        const auto m = weight_partial_moments(w, x);
        const double lo = oracle::integrate([&](double c) { return c * tab.density(c); }, 0.0, x, grid, 1e-15);
        const double hi = oracle::integrate([&](double c) { return (1 - c) * tab.density(c); }, x, 1.0, grid, 1e-15);
        CHECK_THAT(m.lower, WithinAbs(lo, 1e-13));
        CHECK_THAT(m.upper, WithinAbs(hi, 1e-13));
        // And close to the Beta(2, 2) values it approximates.
        const auto exact = weight_partial_moments(WeightFunction::beta(2, 2), x);
        CHECK_THAT(m.lower, WithinAbs(exact.lower, 1e-6));
    }
    CHECK(w.density(0.5 * grid.front()) == 0.0);
}

TEST_CASE("empirical mixture weight moments use strict and non-strict sides") {
    const std::vector<double> s{0.1, 0.3, 0.3, 0.9};
    const WeightFunction w(EmpiricalMixtureWeight{s});
    CHECK(w.is_atomic());
    const auto m = weight_partial_moments(w, 0.3);
    CHECK_THAT(m.lower, WithinAbs(0.1 / 4, 1e-15));
    CHECK_THAT(m.upper, WithinAbs((0.7 + 0.7 + 0.1) / 4, 1e-15));
    CHECK_THAT(w.mean(), WithinAbs(0.4, 1e-15));
    CHECK_THROWS_AS(w.density(0.5), DomainError);
}

TEST_CASE("weight mean and description") {
    CHECK_THAT(WeightFunction::beta(2, 6).mean(), WithinRel(0.25, 1e-15));
    CHECK(WeightFunction::beta(1.5, 1.5).describe() == "beta(1.5, 1.5)");
    CHECK(WeightFunction::uniform().is_beta());
}
