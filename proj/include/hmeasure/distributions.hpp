#pragma once

// Cost-weight machinery: beta densities, the regularized incomplete beta
// function, tabulated densities, and the empirical score mixture used for the
// AUC equivalence. Everything the loss integrals need reduces to the two
// partial moments
//
//     lower(x) = ∫_0^x c w(c) dc      upper(x) = ∫_x^1 (1 - c) w(c) dc
//
// which each weight kind evaluates exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hmeasure/errors.hpp"
#include "hmeasure/random.hpp"

namespace hmeasure {

/// Shape parameters of a beta distribution, both strictly positive.
class BetaParams {
public:
    BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
            throw DomainError("beta shape parameters must be finite and positive");
        log_beta_ = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    /// log B(alpha, beta), the log of the complete Euler beta function.
    double log_beta() const noexcept { return log_beta_; }

    double mean() const noexcept { return alpha_ / (alpha_ + beta_); }

    /// Mode of the density; only meaningful for alpha, beta > 1.
    double mode() const noexcept { return (alpha_ - 1.0) / (alpha_ + beta_ - 2.0); }

    bool operator==(const BetaParams& o) const noexcept { return alpha_ == o.alpha_ && beta_ == o.beta_; }

private:
    double alpha_;
    double beta_;
    double log_beta_;
};

inline double log_beta_function(double a, double b) {
    return BetaParams(a, b).log_beta();
}

/// Density b(c; alpha, beta) on the open interval. Endpoints are rejected even
/// where the density would be finite.
inline double beta_pdf(double c, const BetaParams& p) {
    if (!(c > 0.0 && c < 1.0))
        throw DomainError("beta_pdf: c must lie in (0, 1)");
    return std::exp((p.alpha() - 1.0) * std::log(c) + (p.beta() - 1.0) * std::log1p(-c) - p.log_beta());
}

/// I_x(a, b) together with its complement. Whichever side the continued fraction
/// produced directly carries full relative precision.
struct IncompleteBeta {
    double lower;  ///< I_x(a, b)
    double upper;  ///< 1 - I_x(a, b)
};

namespace detail {

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
inline double beta_continued_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            return h;
    }
    throw DomainError("incomplete beta continued fraction failed to converge");
}

// x^a (1-x)^b / B(a, b)
inline double beta_kernel(double x, double a, double b, double log_beta) {
    return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta);
}

} // namespace detail

inline IncompleteBeta incomplete_beta(double x, const BetaParams& p) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0)
        return {0.0, 1.0};
    if (x == 1.0)
        return {1.0, 0.0};
    const double a = p.alpha();
    const double b = p.beta();
    const double front = detail::beta_kernel(x, a, b, p.log_beta());
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = front * detail::beta_continued_fraction(x, a, b) / a;
        return {lower, 1.0 - lower};
    }
    const double upper = front * detail::beta_continued_fraction(1.0 - x, b, a) / b;
    return {1.0 - upper, upper};
}

/// Regularized incomplete beta I_x(alpha, beta): the beta CDF at x.
inline double regularized_incomplete_beta(double x, const BetaParams& p) {
    return incomplete_beta(x, p).lower;
}

/// Lower and upper partial moments of a weight at a split point.
struct PartialMoments {
    double lower;  ///< ∫_0^x c w(c) dc
    double upper;  ///< ∫_x^1 (1 - c) w(c) dc
};

/// Beta cost density.
class BetaWeight {
public:
    explicit BetaWeight(BetaParams p) : params_(p) {}

    const BetaParams& params() const noexcept { return params_; }

    double density(double c) const { return beta_pdf(c, params_); }
    double mass() const noexcept { return 1.0; }
    double mean() const noexcept { return params_.mean(); }
    double cdf(double x) const { return regularized_incomplete_beta(std::clamp(x, 0.0, 1.0), params_); }

    // c b(c; a, b) = a/(a+b) b(c; a+1, b) and (1-c) b(c; a, b) = b/(a+b) b(c; a, b+1);
    // both shifted CDFs follow from I_x(a, b) by the one-step recurrences.
    PartialMoments partial_moments(double x) const {
        const double a = params_.alpha();
        const double b = params_.beta();
        const double s = a + b;
        if (x <= 0.0)
            return {0.0, b / s};
        if (x >= 1.0)
            return {a / s, 0.0};
        const IncompleteBeta ib = incomplete_beta(x, params_);
        const double kernel = detail::beta_kernel(x, a, b, params_.log_beta());
        double lower = ib.lower - kernel / a;
        double upper = ib.upper - kernel / b;
        // Deep in a tail the recurrence cancels; evaluate the shifted shapes directly.
        if (lower < cancellation_guard * ib.lower)
            lower = incomplete_beta(x, BetaParams(a + 1.0, b)).lower;
        if (upper < cancellation_guard * ib.upper)
            upper = incomplete_beta(x, BetaParams(a, b + 1.0)).upper;
        return {(a / s) * lower, (b / s) * upper};
    }

    double sample(RandomStream& rng) const { return rng.beta(params_.alpha(), params_.beta()); }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "beta(" << params_.alpha() << ", " << params_.beta() << ")";
        return os.str();
    }

private:
    static constexpr double cancellation_guard = 1e-3;

    BetaParams params_;
};

struct GridPoint {
    double c;
    double density;
};

/// How a tabulated density's total mass is treated at construction.
enum class MassPolicy {
    require_unit,     ///< reject unless the interpolant integrates to 1 within 1e-9
    rescale_to_unit,  ///< divide by the computed mass
    keep,             ///< arbitrary nonnegative weight (scoring-rule construction)
};

/// Density tabulated on a grid inside (0, 1), linearly interpolated between
/// grid points and zero outside the grid. All integrals are exact for the
/// piecewise-linear interpolant.
class TabulatedWeight {
public:
    static constexpr std::size_t min_points = 1024;
    static constexpr double unit_mass_tolerance = 1e-9;

    explicit TabulatedWeight(std::span<const GridPoint> points, MassPolicy policy = MassPolicy::require_unit) {
        if (points.size() < min_points)
            throw DomainError("tabulated weight needs at least " + std::to_string(min_points) + " grid points");
        c_.reserve(points.size());
        d_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (!(p.c > 0.0 && p.c < 1.0))
                throw DomainError("tabulated weight grid must lie inside (0, 1)");
            if (i > 0 && !(p.c > points[i - 1].c))
                throw DomainError("tabulated weight grid must be strictly increasing");
            if (!std::isfinite(p.density) || p.density < 0.0)
                throw DomainError("tabulated weight density must be finite and nonnegative");
            c_.push_back(p.c);
            d_.push_back(p.density);
        }
        accumulate();
        if (!(mass_ > 0.0))
            throw DomainError("tabulated weight has zero mass");
        switch (policy) {
        case MassPolicy::require_unit:
            if (std::fabs(mass_ - 1.0) > unit_mass_tolerance)
                throw DomainError("tabulated weight must integrate to 1 (got " + std::to_string(mass_) + ")");
            break;
        case MassPolicy::rescale_to_unit: {
            const double k = 1.0 / mass_;
            for (auto& v : d_)
                v *= k;
            accumulate();
            break;
        }
        case MassPolicy::keep:
            break;
        }
    }

    /// Tabulates `f` at the given abscissae.
    template <class F>
    static TabulatedWeight from_function(F&& f, std::span<const double> grid, MassPolicy policy) {
        std::vector<GridPoint> pts;
        pts.reserve(grid.size());
        for (double c : grid)
            pts.push_back({c, f(c)});
        return TabulatedWeight(pts, policy);
    }

    std::size_t size() const noexcept { return c_.size(); }
    double grid_min() const noexcept { return c_.front(); }
    double grid_max() const noexcept { return c_.back(); }
    double mass() const noexcept { return mass_; }
    double mean() const noexcept { return first_.back() / mass_; }

    std::vector<GridPoint> points() const {
        std::vector<GridPoint> out(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            out[i] = {c_[i], d_[i]};
        return out;
    }

    double density(double c) const {
        if (!(c > 0.0 && c < 1.0))
            throw DomainError("tabulated density: c must lie in (0, 1)");
        if (c < c_.front() || c > c_.back())
            return 0.0;
        const std::size_t i = cell(c);
        const double t = (c - c_[i]) / (c_[i + 1] - c_[i]);
        return d_[i] + t * (d_[i + 1] - d_[i]);
    }

    /// ∫_0^x w(c) dc
    double cdf(double x) const { return integrate_to(x).first; }

    PartialMoments partial_moments(double x) const {
        const auto [m, first] = integrate_to(x);
        const double lower = first;
        const double tail_mass = mass_ - m;
        const double tail_first = first_.back() - first;
        return {lower, std::max(0.0, tail_mass - tail_first)};
    }

    /// Inverse-CDF draw, exact for the piecewise-linear density.
    double sample(RandomStream& rng) const {
        const double target = rng.uniform() * mass_;
        auto it = std::upper_bound(mass_cum_.begin(), mass_cum_.end(), target);
        std::size_t i = static_cast<std::size_t>(std::distance(mass_cum_.begin(), it));
        i = std::clamp<std::size_t>(i, 1, c_.size() - 1) - 1;
        const double r = target - mass_cum_[i];
        const double h = c_[i + 1] - c_[i];
        const double d0 = d_[i];
        const double slope = (d_[i + 1] - d0) / h;
        // Solve d0 v + slope v^2 / 2 = r for v in [0, h].
        const double disc = std::max(0.0, d0 * d0 + 2.0 * slope * r);
        const double denom = d0 + std::sqrt(disc);
        double v = denom > 0.0 ? 2.0 * r / denom : 0.0;
        v = std::clamp(v, 0.0, h);
        return c_[i] + v;
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "tabulated(" << c_.size() << " points on [" << c_.front() << ", " << c_.back() << "], mass "
           << mass_ << ")";
        return os.str();
    }

private:
    std::size_t cell(double c) const {
        auto it = std::upper_bound(c_.begin(), c_.end(), c);
        std::size_t i = static_cast<std::size_t>(std::distance(c_.begin(), it));
        return std::clamp<std::size_t>(i, 1, c_.size() - 1) - 1;
    }

    // Mass and first moment of the linear piece on cell i over [c_i, c_i + u].
    std::pair<double, double> cell_integrals(std::size_t i, double u) const {
        const double h = c_[i + 1] - c_[i];
        const double s = (d_[i + 1] - d_[i]) / h;
        const double m = d_[i] * u + 0.5 * s * u * u;
        const double f = c_[i] * d_[i] * u + 0.5 * (c_[i] * s + d_[i]) * u * u + s * u * u * u / 3.0;
        return {m, f};
    }

    std::pair<double, double> integrate_to(double x) const {
        if (x <= c_.front())
            return {0.0, 0.0};
        if (x >= c_.back())
            return {mass_, first_.back()};
        const std::size_t i = cell(x);
        const auto [m, f] = cell_integrals(i, x - c_[i]);
        return {mass_cum_[i] + m, first_[i] + f};
    }

    void accumulate() {
        mass_cum_.assign(c_.size(), 0.0);
        first_.assign(c_.size(), 0.0);
        for (std::size_t i = 0; i + 1 < c_.size(); ++i) {
            const auto [m, f] = cell_integrals(i, c_[i + 1] - c_[i]);
            mass_cum_[i + 1] = mass_cum_[i] + m;
            first_[i + 1] = first_[i] + f;
        }
        mass_ = mass_cum_.back();
    }

    std::vector<double> c_;
    std::vector<double> d_;
    std::vector<double> mass_cum_;
    std::vector<double> first_;
    double mass_ = 0.0;
};

/// The mixture score distribution of a test set: an atom of mass 1/n at every
/// pooled score. Lower moments include atoms strictly below the split point,
/// upper moments atoms at or above it, matching the indicators 1[q > c] and
/// 1[q <= c] of the per-object loss.
class EmpiricalMixtureWeight {
public:
    explicit EmpiricalMixtureWeight(std::span<const double> scores) {
        if (scores.empty())
            throw DomainError("empirical mixture weight needs at least one score");
        auto sorted = std::make_shared<std::vector<double>>(scores.begin(), scores.end());
        std::sort(sorted->begin(), sorted->end());
        auto prefix = std::make_shared<std::vector<double>>(sorted->size() + 1, 0.0);
        for (std::size_t i = 0; i < sorted->size(); ++i)
            (*prefix)[i + 1] = (*prefix)[i] + (*sorted)[i];
        scores_ = std::move(sorted);
        prefix_ = std::move(prefix);
    }

    std::span<const double> atoms() const noexcept { return *scores_; }
    double mass() const noexcept { return 1.0; }
    double mean() const noexcept { return prefix_->back() / static_cast<double>(scores_->size()); }

    double density(double) const {
        throw DomainError("empirical mixture weight is atomic and has no density");
    }

    /// Mass of atoms strictly below x.
    double cdf(double x) const {
        return static_cast<double>(count_below(x)) / static_cast<double>(scores_->size());
    }

    PartialMoments partial_moments(double x) const {
        const std::size_t k = count_below(x);
        const double n = static_cast<double>(scores_->size());
        const double lower = (*prefix_)[k] / n;
        const double above_count = static_cast<double>(scores_->size() - k);
        const double above_sum = prefix_->back() - (*prefix_)[k];
        return {lower, (above_count - above_sum) / n};
    }

    double sample(RandomStream& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, scores_->size() - 1);
        return (*scores_)[pick(rng.engine())];
    }

    std::string describe() const { return "empirical_mixture(" + std::to_string(scores_->size()) + " atoms)"; }

private:
    std::size_t count_below(double x) const {
        return static_cast<std::size_t>(
            std::distance(scores_->begin(), std::lower_bound(scores_->begin(), scores_->end(), x)));
    }

    std::shared_ptr<const std::vector<double>> scores_;
    std::shared_ptr<const std::vector<double>> prefix_;
};

/// A cost density w(c) on (0, 1). Immutable value type, cheap to copy.
class WeightFunction {
    using TabulatedPtr = std::shared_ptr<const TabulatedWeight>;
    std::variant<BetaWeight, TabulatedPtr, EmpiricalMixtureWeight> kind_;

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit(
            [&](const auto& k) -> decltype(auto) {
                if constexpr (std::is_same_v<std::decay_t<decltype(k)>, TabulatedPtr>)
                    return f(*k);
                else
                    return f(k);
            },
            kind_);
    }

public:
    WeightFunction(BetaWeight w) : kind_(std::move(w)) {}
    WeightFunction(TabulatedWeight w) : kind_(std::make_shared<const TabulatedWeight>(std::move(w))) {}
    WeightFunction(EmpiricalMixtureWeight w) : kind_(std::move(w)) {}

    static WeightFunction beta(double alpha, double beta) { return BetaWeight(BetaParams(alpha, beta)); }
    static WeightFunction uniform() { return beta(1.0, 1.0); }

    bool is_beta() const noexcept { return std::holds_alternative<BetaWeight>(kind_); }
    bool is_tabulated() const noexcept { return std::holds_alternative<TabulatedPtr>(kind_); }
    bool is_atomic() const noexcept { return std::holds_alternative<EmpiricalMixtureWeight>(kind_); }

    const BetaWeight* as_beta() const noexcept { return std::get_if<BetaWeight>(&kind_); }
    const TabulatedWeight* as_tabulated() const noexcept {
        auto p = std::get_if<TabulatedPtr>(&kind_);
        return p ? p->get() : nullptr;
    }

    double density(double c) const {
        return visit([&](const auto& w) { return w.density(c); });
    }
    double mass() const {
        return visit([](const auto& w) { return w.mass(); });
    }
    /// Mean cost E(c) under the normalized weight.
    double mean() const {
        return visit([](const auto& w) { return w.mean(); });
    }
    /// Weight mass on [0, x) (normalized weights: the CDF).
    double cdf(double x) const {
        return visit([&](const auto& w) { return w.cdf(x); });
    }
    PartialMoments partial_moments(double x) const {
        return visit([&](const auto& w) { return w.partial_moments(x); });
    }
    double sample(RandomStream& rng) const {
        return visit([&](const auto& w) { return w.sample(rng); });
    }
    std::string describe() const {
        return visit([](const auto& w) { return w.describe(); });
    }

};

/// n i.i.d. draws from w. For tabulated weights, inverse-CDF sampling on the grid.
inline std::vector<double> sample_weight(const WeightFunction& w, std::size_t n, RandomStream& rng) {
    if (n == 0)
        throw DomainError("sample_weight: n must be at least 1");
    std::vector<double> out(n);
    for (auto& v : out)
        v = w.sample(rng);
    return out;
}

/// (∫_0^upper c w(c) dc, ∫_upper^1 (1-c) w(c) dc).
inline PartialMoments weight_partial_moments(const WeightFunction& w, double upper) {
    if (!(upper >= 0.0 && upper <= 1.0))
        throw DomainError("weight_partial_moments: upper must lie in [0, 1]");
    return w.partial_moments(upper);
}

} // namespace hmeasure
