#pragma once

// Per-object scoring rules induced by a cost weight. For a weight w,
//
//     L0(q) = ∫_0^q c w(c) dc          (true class 0, reported q)
//     L1(1 - q) = ∫_q^1 (1 - c) w(c) dc   (true class 1)
//
// and the expected loss at true class-1 probability eta is
// (1 - eta) L0(q) + eta L1(1 - q), minimized at q = eta wherever w > 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hmeasure/distributions.hpp"
#include "hmeasure/errors.hpp"

namespace hmeasure {

/// Loss of reporting q for an object whose true class is y.
inline double pointwise_loss(double q, int y, const WeightFunction& w) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("pointwise_loss: q must lie in (0, 1)");
    if (y != 0 && y != 1)
        throw DomainError("pointwise_loss: y must be 0 or 1");
    const PartialMoments m = w.partial_moments(q);
    return y == 0 ? m.lower : m.upper;
}

/// (1 - eta) ∫_0^q c w(c) dc + eta ∫_q^1 (1 - c) w(c) dc
inline double expected_loss(double q, double eta, const WeightFunction& w) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("expected_loss: q must lie in (0, 1)");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw DomainError("expected_loss: eta must lie in [0, 1]");
    const PartialMoments m = w.partial_moments(q);
    return (1.0 - eta) * m.lower + eta * m.upper;
}

enum class NamedRule { log_loss, squared_error };

inline std::string_view to_string(NamedRule r) noexcept {
    return r == NamedRule::log_loss ? "log_loss" : "squared_error";
}

/// A proper scoring rule L(q, y) = (1 - y) L0(q) + y L1(1 - q).
class ScoringRule {
public:
    using Origin = std::variant<WeightFunction, NamedRule>;

    explicit ScoringRule(Origin origin) : origin_(std::move(origin)) {}

    const Origin& origin() const noexcept { return origin_; }

    /// L0(q): loss when the true class is 0 and q was reported.
    double loss_class0(double q) const {
        if (const auto* w = std::get_if<WeightFunction>(&origin_))
            return w->partial_moments(q).lower;
        return named_partial(std::get<NamedRule>(origin_), q);
    }

    /// L1(p) with p = 1 - q: loss when the true class is 1.
    double loss_class1(double p) const {
        if (const auto* w = std::get_if<WeightFunction>(&origin_))
            return w->partial_moments(1.0 - p).upper;
        return named_partial(std::get<NamedRule>(origin_), p);
    }

    double loss(double q, int y) const { return y == 0 ? loss_class0(q) : loss_class1(1.0 - q); }

    double expected(double q, double eta) const {
        return (1.0 - eta) * loss_class0(q) + eta * loss_class1(1.0 - q);
    }

private:
    // Both named rules are symmetric: L0 and L1 share one form.
    static double named_partial(NamedRule r, double x) {
        if (r == NamedRule::squared_error)
            return x * x;
        return -std::log1p(-x);
    }

    Origin origin_;
};

/// The scoring rule whose derivatives are L0'(q) = q w(q), L1'(1 - q) = (1 - q) w(q),
/// normalized so both losses vanish at a perfect report.
inline ScoringRule rule_from_weight(const WeightFunction& w) {
    const PartialMoments whole = w.partial_moments(0.0);
    const PartialMoments top = w.partial_moments(1.0);
    if (!std::isfinite(whole.upper) || !std::isfinite(top.lower))
        throw DomainError("weight is not integrable against c and 1 - c");
    return ScoringRule(w);
}

inline ScoringRule named_rule(NamedRule r) {
    return ScoringRule(r);
}

/// w(c) = 2, the weight of squared-error loss, tabulated on (eps, 1 - eps).
inline WeightFunction squared_error_weight(double eps = 1e-6, std::size_t points = 2048) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = eps + (1.0 - 2.0 * eps) * static_cast<double>(i) / static_cast<double>(points - 1);
    return TabulatedWeight::from_function([](double) { return 2.0; }, grid, MassPolicy::keep);
}

/// w(c) = 1 / (c (1 - c)), the weight of log loss, tabulated on (eps, 1 - eps).
/// The grid is geometric towards both ends, where the weight diverges.
/// Truncation drops -log(1 - eps) from each of L0 and L1.
inline WeightFunction log_loss_weight(double eps = 1e-6, std::size_t points_per_half = 20000) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("log_loss_weight: eps must lie in (0, 0.5)");
    std::vector<double> half(points_per_half);
    const double ratio = std::pow(0.5 / eps, 1.0 / static_cast<double>(points_per_half - 1));
    for (std::size_t i = 0; i < points_per_half; ++i)
        half[i] = eps * std::pow(ratio, static_cast<double>(i));
    half.back() = 0.5;
    std::vector<double> grid;
    grid.reserve(2 * points_per_half - 1);
    grid.insert(grid.end(), half.begin(), half.end());
    for (std::size_t i = points_per_half - 1; i-- > 0;)
        grid.push_back(1.0 - half[i]);
    return TabulatedWeight::from_function([](double c) { return 1.0 / (c * (1.0 - c)); }, grid, MassPolicy::keep);
}

/// Bound on |L0(q) - (-log(1 - q))| introduced by truncating the log-loss weight at eps.
inline double log_loss_truncation_bound(double eps) {
    return -std::log1p(-eps);
}

enum class PropernessStatus {
    strict,                    ///< unique minimum at eta, monotone on either side
    proper_not_strict_off_support,  ///< minimum attained at eta but on a flat stretch where w = 0
    not_proper,                ///< minimum away from eta, or non-monotone
};

inline std::string_view to_string(PropernessStatus s) noexcept {
    switch (s) {
    case PropernessStatus::strict: return "strict";
    case PropernessStatus::proper_not_strict_off_support: return "proper_not_strict_off_support";
    case PropernessStatus::not_proper: return "not_proper";
    }
    return "not_proper";
}

struct PropernessEntry {
    double eta;
    double argmin;
    /// Extent of the grid points attaining the minimum.
    double flat_lo;
    double flat_hi;
    PropernessStatus status;
};

struct PropernessReport {
    double grid_step;
    std::vector<PropernessEntry> entries;

    bool all_strict() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const PropernessEntry& e) { return e.status == PropernessStatus::strict; });
    }
    bool all_proper() const {
        return std::none_of(entries.begin(), entries.end(),
                            [](const PropernessEntry& e) { return e.status == PropernessStatus::not_proper; });
    }
};

/// Grid search of the expected loss for each eta. Failures are reported, never thrown.
inline PropernessReport properness_check(const WeightFunction& w, std::span<const double> etas, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 1e-3))
        throw DomainError("properness_check: grid_step must lie in (0, 1e-3]");
    const std::size_t k = static_cast<std::size_t>(std::llround(1.0 / grid_step));
    std::vector<double> grid;
    grid.reserve(k - 1);
    for (std::size_t i = 1; i < k; ++i)
        grid.push_back(static_cast<double>(i) * grid_step);

    std::vector<PartialMoments> moments(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        moments[i] = w.partial_moments(grid[i]);

    PropernessReport report{grid_step, {}};
    std::vector<double> v(grid.size());
    for (double eta : etas) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            v[i] = (1.0 - eta) * moments[i].lower + eta * moments[i].upper;
        const auto best = std::min_element(v.begin(), v.end());
        const std::size_t at = static_cast<std::size_t>(std::distance(v.begin(), best));
        const double tol = 1e-14 * std::max(1.0, std::fabs(*best));

        std::size_t lo = at, hi = at;
        while (lo > 0 && v[lo - 1] <= *best + tol)
            --lo;
        while (hi + 1 < v.size() && v[hi + 1] <= *best + tol)
            ++hi;

        bool monotone = true;
        for (std::size_t i = 0; i < lo; ++i)
            monotone = monotone && v[i] + tol >= v[i + 1];
        for (std::size_t i = hi; i + 1 < v.size(); ++i)
            monotone = monotone && v[i + 1] + tol >= v[i];

        const double slack = grid_step * (1.0 + 1e-9);
        const bool hits_eta = eta >= grid[lo] - slack && eta <= grid[hi] + slack;
        PropernessStatus status = PropernessStatus::not_proper;
        if (monotone && hits_eta)
            status = (hi - lo <= 1) ? PropernessStatus::strict : PropernessStatus::proper_not_strict_off_support;
        report.entries.push_back({eta, grid[at], grid[lo], grid[hi], status});
    }
    return report;
}

} // namespace hmeasure
