#pragma once

// Threshold-choice methods where the threshold is not derived from the cost:
// thresholds drawn independently of the cost, rank-based choices that
// reproduce the AUC, and screening a fixed proportion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "hmeasure/auc.hpp"
#include "hmeasure/distributions.hpp"
#include "hmeasure/empirical.hpp"
#include "hmeasure/errors.hpp"

namespace hmeasure {

/// Distribution u(t) of a threshold chosen independently of the cost.
struct ThresholdDistribution {
    struct PointMass {
        double t;
    };
    /// Atoms at every pooled test score: u = f.
    struct EmpiricalMixture {};
    /// Atoms at every class-1 test score.
    struct RankUniformClass1 {};
    struct Tabulated {
        TabulatedWeight density;
    };

    std::variant<PointMass, EmpiricalMixture, RankUniformClass1, Tabulated> kind;

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, PointMass>)
                    os << "point(" << k.t << ")";
                else if constexpr (std::is_same_v<K, EmpiricalMixture>)
                    os << "mixture";
                else if constexpr (std::is_same_v<K, RankUniformClass1>)
                    os << "rank1";
                else
                    os << "tabulated(" << k.density.size() << " points)";
            },
            kind);
        return os.str();
    }
};

/// Expected loss with cost c ~ w and threshold t ~ u drawn independently:
/// E(c) pi0 E_u[1 - F0(t)] + (1 - E(c)) pi1 E_u[F1(t)].
inline double independent_threshold_loss(const LabeledScores& data, const ClassPriors& priors,
                                         const WeightFunction& w, const ThresholdDistribution& u) {
    const EmpiricalCdfPair cdfs(data);
    const double mean_cost = w.mean();
    const double pi0 = priors.pi0();
    const double pi1 = priors.pi1();

    // E_u[1 - F0(t)] and E_u[F1(t)]
    double upper0 = 0.0;
    double lower1 = 0.0;
    auto average_over = [&](std::span<const double> thresholds) {
        for (double t : thresholds) {
            upper0 += 1.0 - cdfs.F0(t);
            lower1 += cdfs.F1(t);
        }
        upper0 /= static_cast<double>(thresholds.size());
        lower1 /= static_cast<double>(thresholds.size());
    };

    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ThresholdDistribution::PointMass>) {
                if (!(k.t >= 0.0 && k.t <= 1.0))
                    throw DomainError("threshold point mass must lie in [0, 1]");
                upper0 = 1.0 - cdfs.F0(k.t);
                lower1 = cdfs.F1(k.t);
            } else if constexpr (std::is_same_v<K, ThresholdDistribution::EmpiricalMixture>) {
                average_over(data.scores());
            } else if constexpr (std::is_same_v<K, ThresholdDistribution::RankUniformClass1>) {
                average_over(cdfs.sorted_class1());
            } else {
                // The CDFs are constant between pooled scores, so only the mass of u
                // on each such interval matters.
                const double total = k.density.mass();
                double prev = 0.0, f0 = 0.0, f1 = 0.0;
                for (const auto& s : cdfs.steps()) {
                    const double m = k.density.cdf(s.score) / total;
                    upper0 += (m - prev) * (1.0 - f0);
                    lower1 += (m - prev) * f1;
                    prev = m;
                    f0 = s.f0;
                    f1 = s.f1;
                }
                upper0 += (1.0 - prev) * (1.0 - f0);
                lower1 += (1.0 - prev) * f1;
            }
        },
        u.kind);
    return mean_cost * pi0 * upper0 + (1.0 - mean_cost) * pi1 * lower1;
}

/// Each class-1 score in turn is the threshold (with equal probability); the
/// score is the mean fraction of class-0 objects below it, ties counting half.
/// Equals the Mann-Whitney AUC.
inline double rank_uniform_evaluation(const LabeledScores& data) {
    data.require_both_classes("rank-uniform evaluation");
    const EmpiricalCdfPair cdfs(data);
    const auto s0 = cdfs.sorted_class0();
    std::uint64_t twice_u = 0;
    for (double t : cdfs.sorted_class1()) {
        const auto below = std::lower_bound(s0.begin(), s0.end(), t);
        const auto at_or_below = std::upper_bound(below, s0.end(), t);
        twice_u += 2 * static_cast<std::uint64_t>(std::distance(s0.begin(), below)) +
                   static_cast<std::uint64_t>(std::distance(below, at_or_below));
    }
    return detail::auc_from_twice_u(twice_u, static_cast<std::uint64_t>(cdfs.n0()) * cdfs.n1());
}

/// Weighted generalization of rank_uniform_evaluation: `rank_weights[r]` is the
/// probability of using the class-1 score of ascending rank r as the threshold.
/// Weights are normalized to sum to one.
inline double rank_weighted_evaluation(const LabeledScores& data, std::span<const double> rank_weights) {
    data.require_both_classes("rank-weighted evaluation");
    const EmpiricalCdfPair cdfs(data);
    if (rank_weights.size() != cdfs.n1())
        throw DomainError("rank weights must have one entry per class-1 object");
    double total = 0.0;
    for (double r : rank_weights) {
        if (!(r >= 0.0) || !std::isfinite(r))
            throw DomainError("rank weights must be finite and nonnegative");
        total += r;
    }
    if (!(total > 0.0))
        throw DomainError("rank weights must not all be zero");

    const auto s0 = cdfs.sorted_class0();
    const auto s1 = cdfs.sorted_class1();
    const double n0 = static_cast<double>(cdfs.n0());
    double acc = 0.0;
    for (std::size_t r = 0; r < s1.size(); ++r) {
        const auto below = std::lower_bound(s0.begin(), s0.end(), s1[r]);
        const auto at_or_below = std::upper_bound(below, s0.end(), s1[r]);
        const double credit = static_cast<double>(std::distance(s0.begin(), below)) +
                              0.5 * static_cast<double>(std::distance(below, at_or_below));
        acc += rank_weights[r] * credit / n0;
    }
    return acc / total;
}

enum class ScreeningBasis {
    all_objects,     ///< the proportion counts all test objects
    class0_objects,  ///< the proportion counts class-0 test objects only
};

inline std::string_view to_string(ScreeningBasis b) noexcept {
    return b == ScreeningBasis::all_objects ? "all_objects" : "class0_objects";
}

struct ConfusionCounts {
    std::size_t tn = 0;  ///< class 0 classified 0
    std::size_t fp = 0;  ///< class 0 classified 1
    std::size_t fn = 0;  ///< class 1 classified 0
    std::size_t tp = 0;  ///< class 1 classified 1

    std::size_t total() const noexcept { return tn + fp + fn + tp; }
};

struct ScreeningResult {
    double proportion;
    ScreeningBasis basis;
    /// Rank (1-based, ascending) within the basis set of the cut score.
    std::size_t threshold_rank;
    double threshold;
    ConfusionCounts confusion;
    double class0_recall;
    double misclassification_rate;
};

/// Classifies as class 0 every object scoring at or below the ceil(p m)-th
/// lowest score of the basis set (m objects). Every object tied with the cut
/// score lands on the class-0 side, so the selected set depends only on the
/// score multiset.
inline ScreeningResult screen_at_proportion(const LabeledScores& data, double p, ScreeningBasis basis) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("screening proportion must lie in (0, 1)");
    data.require_both_classes("screening");

    std::vector<double> pool = basis == ScreeningBasis::all_objects
                                   ? std::vector<double>(data.scores().begin(), data.scores().end())
                                   : data.class_scores(0);
    std::sort(pool.begin(), pool.end());
    // Absorb rounding in p * m so that e.g. 0.3 * 10 selects 3, not 4.
    const double target = p * static_cast<double>(pool.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
    rank = std::clamp<std::size_t>(rank, 1, pool.size());
    const double cut = pool[rank - 1];

    ConfusionCounts cm;
    const auto scores = data.scores();
    const auto labels = data.labels();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool as_zero = scores[i] <= cut;
        if (labels[i] == 0)
            (as_zero ? cm.tn : cm.fp)++;
        else
            (as_zero ? cm.fn : cm.tp)++;
    }
    return {p,
            basis,
            rank,
            cut,
            cm,
            static_cast<double>(cm.tn) / static_cast<double>(data.count(0)),
            static_cast<double>(cm.fp + cm.fn) / static_cast<double>(data.size())};
}

} // namespace hmeasure
