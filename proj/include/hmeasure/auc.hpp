#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hmeasure/distributions.hpp"
#include "hmeasure/empirical.hpp"
#include "hmeasure/loss.hpp"

namespace hmeasure {

struct AucResult {
    double auc;
    std::uint64_t n_pairs;
    /// Cross-class pairs with equal scores; each earns half credit.
    std::uint64_t tie_pairs;
    /// 2 pi0 pi1 (1 - auc) at the empirical priors.
    double l_a;
};

namespace detail {

// Twice the Mann-Whitney U statistic of class 1 over class 0:
// 2 * #{s0 < s1} + #{s0 == s1}. Kept integral so different routes to the
// AUC divide the same numerator.
struct TwiceU {
    std::uint64_t value;
    std::uint64_t tie_pairs;
};

inline TwiceU twice_u_by_ranks(const LabeledScores& data) {
    const auto scores = data.scores();
    const auto labels = data.labels();
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Doubled midranks keep everything in integers: a tie group occupying
    // ranks i+1..j has midrank (i + 1 + j) / 2.
    std::uint64_t rank_sum_x2 = 0;
    std::uint64_t ties = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::uint64_t ones = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            ones += labels[order[j]];
            ++j;
        }
        const std::uint64_t zeros = (j - i) - ones;
        rank_sum_x2 += ones * static_cast<std::uint64_t>(i + 1 + j);
        ties += ones * zeros;
        i = j;
    }
    const std::uint64_t n1 = data.count(1);
    return {rank_sum_x2 - n1 * (n1 + 1), ties};
}

// twice_u / (2 pairs), evaluated so that swapping the classes (twice_u ->
// 2 pairs - twice_u) gives exactly 1 - auc: below one half the value is 1 minus
// a quotient in [1/2, 1], a subtraction that is exact in binary floating point.
inline double auc_from_twice_u(std::uint64_t twice_u, std::uint64_t pairs) {
    const double denom = 2.0 * static_cast<double>(pairs);
    if (twice_u >= pairs)
        return static_cast<double>(twice_u) / denom;
    return 1.0 - static_cast<double>(2 * pairs - twice_u) / denom;
}

} // namespace detail

/// AUC as the Mann-Whitney statistic with half credit for ties, via rank sums.
inline AucResult auc_mann_whitney(const LabeledScores& data) {
    data.require_both_classes("AUC");
    const auto u = detail::twice_u_by_ranks(data);
    const std::uint64_t n0 = data.count(0);
    const std::uint64_t n1 = data.count(1);
    const std::uint64_t pairs = n0 * n1;
    const double auc = detail::auc_from_twice_u(u.value, pairs);
    const ClassPriors priors = empirical_priors(data);
    return {auc, pairs, u.tie_pairs, 2.0 * priors.pi0() * priors.pi1() * (1.0 - auc)};
}

/// Expected minimum loss (calibrated thresholds, empirical priors) with the
/// cost weight replaced by the classifier's own mixture score distribution.
/// In the continuous, calibrated limit this equals 2 pi0 pi1 (1 - AUC).
inline double l_a_by_weight_substitution(const LabeledScores& data) {
    data.require_both_classes("L_A by weight substitution");
    const ClassPriors priors = empirical_priors(data);
    const EmpiricalCdfPair cdfs(data);
    const WeightFunction mixture = EmpiricalMixtureWeight(data.scores());
    return expected_min_loss(priors, cdfs, mixture, ThresholdMode::calibrated).value;
}

} // namespace hmeasure
