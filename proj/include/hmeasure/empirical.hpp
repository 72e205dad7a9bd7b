#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmeasure/errors.hpp"

namespace hmeasure {

/// How scores outside [0, 1] are handled at ingestion.
enum class Normalization {
    reject,    ///< out-of-range scores are an input error
    minmax,    ///< affine map of [min, max] onto [0, 1]; constant vectors map to 0.5
    logistic,  ///< standard sigmoid
};

inline std::string_view to_string(Normalization n) noexcept {
    switch (n) {
    case Normalization::reject: return "reject";
    case Normalization::minmax: return "minmax";
    case Normalization::logistic: return "logistic";
    }
    return "reject";
}

/// Test-set scores (estimated class-1 probabilities) with 0/1 labels.
class LabeledScores {
public:
    static LabeledScores ingest(std::span<const double> scores, std::span<const int> labels,
                                Normalization normalization = Normalization::reject) {
        if (scores.empty())
            throw InputError("no scores supplied");
        if (scores.size() != labels.size())
            throw InputError("scores and labels differ in length (" + std::to_string(scores.size()) + " vs " +
                             std::to_string(labels.size()) + ")");
        LabeledScores out;
        out.normalization_ = normalization;
        out.scores_.assign(scores.begin(), scores.end());
        out.labels_.reserve(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != 0 && labels[i] != 1)
                throw InputError("label at row " + std::to_string(i + 1) + " is not 0 or 1");
            if (!std::isfinite(scores[i]))
                throw InputError("score at row " + std::to_string(i + 1) + " is not finite");
            out.labels_.push_back(static_cast<std::uint8_t>(labels[i]));
            ++out.counts_[labels[i]];
        }

        switch (normalization) {
        case Normalization::reject:
            for (std::size_t i = 0; i < out.scores_.size(); ++i)
                if (out.scores_[i] < 0.0 || out.scores_[i] > 1.0)
                    throw InputError("score at row " + std::to_string(i + 1) +
                                     " lies outside [0, 1]; pass a normalization mode to rescale");
            break;
        case Normalization::minmax: {
            const auto [lo, hi] = std::minmax_element(out.scores_.begin(), out.scores_.end());
            const double a = *lo;
            const double span = *hi - *lo;
            for (auto& s : out.scores_)
                s = span > 0.0 ? (s - a) / span : 0.5;
            break;
        }
        case Normalization::logistic:
            for (auto& s : out.scores_)
                s = 1.0 / (1.0 + std::exp(-s));
            break;
        }
        return out;
    }

    std::span<const double> scores() const noexcept { return scores_; }
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return scores_.size(); }
    std::size_t count(int label) const noexcept { return counts_[label == 0 ? 0 : 1]; }
    bool has_both_classes() const noexcept { return counts_[0] > 0 && counts_[1] > 0; }
    Normalization normalization() const noexcept { return normalization_; }

    /// Scores of one class, in input order.
    std::vector<double> class_scores(int label) const {
        std::vector<double> out;
        out.reserve(count(label));
        for (std::size_t i = 0; i < scores_.size(); ++i)
            if (labels_[i] == label)
                out.push_back(scores_[i]);
        return out;
    }

    void require_both_classes(std::string_view what) const {
        if (!has_both_classes())
            throw DegenerateDataError(std::string(what) + " needs objects from both classes (got " +
                                      std::to_string(counts_[0]) + " of class 0, " + std::to_string(counts_[1]) +
                                      " of class 1)");
    }

private:
    LabeledScores() = default;

    std::vector<double> scores_;
    std::vector<std::uint8_t> labels_;
    std::size_t counts_[2] = {0, 0};
    Normalization normalization_ = Normalization::reject;
};

/// Class sizes pi0, pi1 = 1 - pi0, both strictly inside (0, 1).
class ClassPriors {
public:
    explicit ClassPriors(double pi0) : pi0_(pi0) {
        if (!(pi0 > 0.0 && pi0 < 1.0))
            throw DomainError("class prior pi0 must lie strictly inside (0, 1)");
    }

    double pi0() const noexcept { return pi0_; }
    double pi1() const noexcept { return 1.0 - pi0_; }

    /// Priors with the class roles exchanged.
    ClassPriors swapped() const { return ClassPriors(1.0 - pi0_); }

private:
    double pi0_;
};

inline ClassPriors empirical_priors(const LabeledScores& data) {
    data.require_both_classes("empirical priors");
    return ClassPriors(static_cast<double>(data.count(0)) / static_cast<double>(data.size()));
}

/// Right-continuous empirical CDFs of the two class score distributions:
/// F_k(c) is the fraction of class-k scores <= c.
class EmpiricalCdfPair {
public:
    /// Value of both CDFs on [score, next score).
    struct Step {
        double score;
        double f0;
        double f1;
    };

    explicit EmpiricalCdfPair(const LabeledScores& data) {
        data.require_both_classes("empirical CDFs");
        class0_ = data.class_scores(0);
        class1_ = data.class_scores(1);
        std::sort(class0_.begin(), class0_.end());
        std::sort(class1_.begin(), class1_.end());

        const double n0 = static_cast<double>(class0_.size());
        const double n1 = static_cast<double>(class1_.size());
        std::size_t i = 0, j = 0;
        while (i < class0_.size() || j < class1_.size()) {
            double s;
            if (j == class1_.size() || (i < class0_.size() && class0_[i] <= class1_[j]))
                s = class0_[i];
            else
                s = class1_[j];
            while (i < class0_.size() && class0_[i] == s)
                ++i;
            while (j < class1_.size() && class1_[j] == s)
                ++j;
            steps_.push_back({s, static_cast<double>(i) / n0, static_cast<double>(j) / n1});
        }
    }

    double F0(double c) const noexcept { return fraction_le(class0_, c); }
    double F1(double c) const noexcept { return fraction_le(class1_, c); }

    std::size_t n0() const noexcept { return class0_.size(); }
    std::size_t n1() const noexcept { return class1_.size(); }

    std::span<const double> sorted_class0() const noexcept { return class0_; }
    std::span<const double> sorted_class1() const noexcept { return class1_; }

    /// One entry per distinct pooled score, ascending. Below the first score both CDFs are 0.
    std::span<const Step> steps() const noexcept { return steps_; }

private:
    static double fraction_le(const std::vector<double>& sorted, double c) noexcept {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), c);
        return static_cast<double>(std::distance(sorted.begin(), it)) / static_cast<double>(sorted.size());
    }

    std::vector<double> class0_;
    std::vector<double> class1_;
    std::vector<Step> steps_;
};

inline EmpiricalCdfPair empirical_cdfs(const LabeledScores& data) {
    return EmpiricalCdfPair(data);
}

} // namespace hmeasure
