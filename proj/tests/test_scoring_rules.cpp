#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "hmeasure/loss.hpp"
#include "hmeasure/scoring_rules.hpp"
#include "support/frozen.hpp"
#include "support/oracle.hpp"

using namespace hmeasure;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("pointwise loss examples") {
    const auto w15 = WeightFunction::beta(1.5, 1.5);
    CHECK(pointwise_loss(1e-12, 0, w15) < 1e-17);
    CHECK_THAT(pointwise_loss(0.5, 1, WeightFunction::uniform()), WithinAbs(0.125, 1e-15));
    CHECK_THAT(pointwise_loss(0.3, 0, w15), WithinRel(frozen::pointwise_03_y0_15_15, 1e-12));
    CHECK_THROWS_AS(pointwise_loss(0.0, 0, w15), DomainError);
    CHECK_THROWS_AS(pointwise_loss(0.5, 2, w15), DomainError);
}

TEST_CASE("expected loss examples") {
    const auto u = WeightFunction::uniform();
    CHECK_THAT(expected_loss(0.5, 0.5, u), WithinAbs(0.125, 1e-15));
    CHECK(expected_loss(0.3, 0.0, u) == weight_partial_moments(u, 0.3).lower);
    CHECK(expected_loss(0.01, 0.0, u) < expected_loss(0.02, 0.0, u));
    CHECK_THROWS_AS(expected_loss(0.5, 1.5, u), DomainError);

    const auto w = WeightFunction::beta(1.5, 1.5);
    double best = 1e300, arg = 0;
    for (int k = 1; k <= 999; ++k) {
        const double v = expected_loss(k / 1000.0, 0.7, w);
        if (v < best) {
            best = v;
            arg = k / 1000.0;
        }
    }
    CHECK(std::fabs(arg - 0.7) <= 1e-3 + 1e-12);
}

TEST_CASE("expected loss is minimized at eta") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (const auto& w : {WeightFunction::beta(2, 2), WeightFunction::beta(1.2, 3.1), WeightFunction::uniform()}) {
        for (int i = 0; i < 30; ++i) {
            const double eta = u(rng);
            const double at_eta = expected_loss(eta, eta, w);
            for (int k = 1; k < 200; ++k) {
                const double q = k / 200.0;
                const double v = expected_loss(q, eta, w);
                CHECK(v >= at_eta - 1e-15);
                if (std::fabs(q - eta) > 1e-3)
                    CHECK(v > at_eta);
            }
        }
    }
}

TEST_CASE("derivative of the expected loss is (q - eta) w(q)") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.01, 0.99), e(0.0, 1.0);
    const auto w = WeightFunction::beta(1.5, 1.5);
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
        const double q = u(rng), eta = e(rng);
        const double fd = (expected_loss(q + h, eta, w) - expected_loss(q - h, eta, w)) / (2 * h);
        CHECK_THAT(fd, WithinAbs((q - eta) * w.density(q), 1e-6));
    }
}

TEST_CASE("properness check on beta weights") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<double> etas;
    for (int i = 0; i < 20; ++i)
        etas.push_back(u(rng));
    const auto rep = properness_check(WeightFunction::beta(2, 2), etas, 1e-3);
    CHECK(rep.all_strict());
    for (const auto& e : rep.entries)
        CHECK(std::fabs(e.argmin - e.eta) <= 1e-3 + 1e-12);

    const std::vector<double> half{0.5};
    const auto flat = properness_check(WeightFunction::uniform(), half, 1e-3);
    CHECK(flat.entries[0].argmin == 0.5);
    CHECK(flat.entries[0].status == PropernessStatus::strict);
    CHECK_THROWS_AS(properness_check(WeightFunction::uniform(), half, 0.01), DomainError);
}

TEST_CASE("properness check flags flat stretches off the support") {
    // Density 5 on (0.4, 0.6), zero elsewhere.
    std::vector<GridPoint> pts;
    for (int i = 1; i < 4000; ++i) {
        const double c = i / 4000.0;
        pts.push_back({c, (c > 0.4 && c < 0.6) ? 5.0 : 0.0});
    }
    const WeightFunction w(TabulatedWeight(pts, MassPolicy::rescale_to_unit));
    const std::vector<double> etas{0.1, 0.5};
    const auto rep = properness_check(w, etas, 1e-3);
    CHECK(rep.entries[0].status == PropernessStatus::proper_not_strict_off_support);
    CHECK(rep.entries[0].flat_lo < 0.1);
    CHECK(rep.entries[0].flat_hi >= 0.399);
    CHECK(rep.entries[1].status == PropernessStatus::strict);
    CHECK(rep.all_proper());
    CHECK_FALSE(rep.all_strict());
}

TEST_CASE("properness check on a concentrated weight") {
    const std::vector<double> etas{0.3};
    const auto rep = properness_check(WeightFunction::beta(5, 5), etas, 1e-3);
    CHECK(rep.entries[0].status == PropernessStatus::strict);
    CHECK(std::fabs(rep.entries[0].argmin - 0.3) <= 1e-3 + 1e-12);
}

TEST_CASE("constant weight gives squared error") {
    const auto rule = rule_from_weight(squared_error_weight());
    for (int k = 1; k <= 999; ++k) {
        const double q = k / 1000.0;
        CHECK_THAT(rule.loss_class0(q), WithinAbs(q * q, 1e-10));
        CHECK_THAT(rule.loss_class1(1 - q), WithinAbs((1 - q) * (1 - q), 1e-10));
    }
}

TEST_CASE("logit weight gives log loss up to truncation") {
    const double eps = 1e-6;
    const auto rule = rule_from_weight(log_loss_weight(eps));
    const double bound = log_loss_truncation_bound(eps);
    for (int k = 1; k <= 999; ++k) {
        const double q = k / 1000.0;
        CHECK(std::fabs(rule.loss_class0(q) - (-std::log1p(-q))) <= bound + 1e-6);
        CHECK(std::fabs(rule.loss_class1(1 - q) - (-std::log(q))) <= bound + 1e-6);
    }
}

TEST_CASE("rules from weights recombine to the pointwise loss") {
    for (const auto& w : {WeightFunction::beta(1.5, 1.5), WeightFunction::beta(1.1, 1.9), WeightFunction::beta(4, 0.8)}) {
        const auto rule = rule_from_weight(w);
        for (int k = 1; k < 100; ++k) {
            const double q = k / 100.0;
            for (int y : {0, 1})
                CHECK_THAT(rule.loss(q, y), WithinAbs(pointwise_loss(q, y, w), 1e-10));
            CHECK_THAT(rule.expected(q, 0.3), WithinAbs(expected_loss(q, 0.3, w), 1e-10));
        }
    }
}

TEST_CASE("rule losses grow with confidence in the wrong class") {
    const auto rule = rule_from_weight(WeightFunction::beta(2, 3));
    double prev0 = -1, prev1 = 2;
    for (int k = 1; k < 1000; ++k) {
        const double q = k / 1000.0;
        CHECK(rule.loss_class0(q) >= prev0);
        CHECK(rule.loss_class1(1 - q) <= prev1);
        prev0 = rule.loss_class0(q);
        prev1 = rule.loss_class1(1 - q);
    }
}

TEST_CASE("named rules") {
    const auto sq = named_rule(NamedRule::squared_error);
    CHECK(sq.loss(0.3, 0) == 0.09);
    CHECK_THAT(sq.loss(0.3, 1), WithinAbs(0.49, 1e-15));
    const auto ll = named_rule(NamedRule::log_loss);
    CHECK_THAT(ll.loss(0.25, 1), WithinAbs(-std::log(0.25), 1e-15));
    CHECK_THAT(ll.loss(0.25, 0), WithinAbs(-std::log(0.75), 1e-15));
}

TEST_CASE("averaged pointwise loss equals the calibrated expected loss") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto d = oracle::random_dataset(seed, 60);
        const auto data = LabeledScores::ingest(d.scores, d.labels);
        const auto pri = empirical_priors(data);
        const auto cdfs = empirical_cdfs(data);
        for (const auto& w : {WeightFunction::beta(1 + pri.pi1(), 1 + pri.pi0()), WeightFunction::beta(0.7, 2.2)}) {
            double avg = 0.0;
            for (std::size_t i = 0; i < d.scores.size(); ++i)
                avg += pointwise_loss(d.scores[i], d.labels[i], w);
            avg /= static_cast<double>(d.scores.size());
            CHECK_THAT(avg, WithinAbs(expected_min_loss(pri, cdfs, w, ThresholdMode::calibrated).value, 1e-10));
        }
    }
}
