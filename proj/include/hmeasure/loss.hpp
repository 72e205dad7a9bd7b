#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hmeasure/distributions.hpp"
#include "hmeasure/empirical.hpp"
#include "hmeasure/errors.hpp"
#include "hmeasure/parallel.hpp"
#include "hmeasure/random.hpp"

namespace hmeasure {

/// How the classification threshold follows the cost.
enum class ThresholdMode {
    calibrated,  ///< threshold t = c, optimal when scores are calibrated probabilities
    optimal,     ///< threshold minimizing the loss over all observed cut points
};

inline std::string_view to_string(ThresholdMode m) noexcept {
    return m == ThresholdMode::calibrated ? "calibrated" : "optimal";
}

/// c pi0 (1 - F0(t)) + (1 - c) pi1 F1(t)
inline double threshold_loss(double c, double t, const ClassPriors& priors, const EmpiricalCdfPair& cdfs) {
    if (!(c >= 0.0 && c <= 1.0) || !(t >= 0.0 && t <= 1.0))
        throw DomainError("threshold_loss: c and t must lie in [0, 1]");
    return c * priors.pi0() * (1.0 - cdfs.F0(t)) + (1.0 - c) * priors.pi1() * cdfs.F1(t);
}

/// A straight piece of a loss integrand: on [lo, hi] the class CDFs are
/// constant at (f0, f1), so the integrand is c pi0 (1 - f0) + (1 - c) pi1 f1.
struct LossPiece {
    double lo;
    double hi;
    double f0;
    double f1;
};

/// Lower envelope over c of the candidate-threshold losses. Candidates are
/// "everything to class 1" (F0 = F1 = 0) and a cut at every distinct pooled
/// score; the last of these is "everything to class 0".
class ThresholdEnvelope {
public:
    ThresholdEnvelope(const ClassPriors& priors, const EmpiricalCdfPair& cdfs)
        : pi0_(priors.pi0()), pi1_(priors.pi1()) {
        const double pi0 = pi0_;
        const double pi1 = pi1_;
        // Candidates in threshold order have nonincreasing slope; that is the
        // order the convex-hull sweep for a minimum needs.
        std::vector<Line> lines;
        lines.reserve(cdfs.steps().size() + 1);
        lines.push_back(make_line(0.0, 0.0, pi0, pi1));
        for (const auto& s : cdfs.steps())
            lines.push_back(make_line(s.f0, s.f1, pi0, pi1));

        for (const Line& l : lines) {
            if (!hull_.empty() && hull_.back().slope == l.slope) {
                if (hull_.back().intercept <= l.intercept)
                    continue;
                hull_.pop_back();
            }
            while (hull_.size() >= 2 && redundant(hull_[hull_.size() - 2], hull_.back(), l))
                hull_.pop_back();
            hull_.push_back(l);
        }

        // Clip to [0, 1].
        double lo = 0.0;
        for (std::size_t k = 0; k < hull_.size(); ++k) {
            double hi = 1.0;
            if (k + 1 < hull_.size())
                hi = std::clamp(crossing(hull_[k], hull_[k + 1]), 0.0, 1.0);
            if (hi > lo)
                pieces_.push_back({lo, hi, hull_[k].f0, hull_[k].f1});
            lo = std::max(lo, hi);
            if (lo >= 1.0)
                break;
        }
    }

    std::span<const LossPiece> pieces() const noexcept { return pieces_; }

    double operator()(double c) const {
        auto it = std::lower_bound(pieces_.begin(), pieces_.end(), c,
                                   [](const LossPiece& p, double x) { return p.hi < x; });
        if (it == pieces_.end())
            it = std::prev(pieces_.end());
        // Evaluate every hull line near the boundary so the result is the true minimum.
        double best = value_at(*it, c);
        if (it != pieces_.begin())
            best = std::min(best, value_at(*std::prev(it), c));
        if (std::next(it) != pieces_.end())
            best = std::min(best, value_at(*std::next(it), c));
        return best;
    }

private:
    struct Line {
        double intercept;  // value at c = 0
        double slope;
        double f0;
        double f1;
    };

    double value_at(const LossPiece& p, double c) const {
        return c * pi0_ * (1.0 - p.f0) + (1.0 - c) * pi1_ * p.f1;
    }

    static Line make_line(double f0, double f1, double pi0, double pi1) {
        return {pi1 * f1, pi0 * (1.0 - f0) - pi1 * f1, f0, f1};
    }

    static double crossing(const Line& a, const Line& b) {
        return (b.intercept - a.intercept) / (a.slope - b.slope);
    }

    // b never attains the minimum between a and c.
    static bool redundant(const Line& a, const Line& b, const Line& c) {
        return (c.intercept - a.intercept) * (a.slope - b.slope) <= (b.intercept - a.intercept) * (a.slope - c.slope);
    }

    double pi0_;
    double pi1_;
    std::vector<Line> hull_;
    std::vector<LossPiece> pieces_;
};

/// Minimum loss at cost c under the given threshold mode.
inline double min_loss(double c, const ClassPriors& priors, const EmpiricalCdfPair& cdfs, ThresholdMode mode) {
    if (!(c >= 0.0 && c <= 1.0))
        throw DomainError("min_loss: c must lie in [0, 1]");
    if (mode == ThresholdMode::calibrated)
        return threshold_loss(c, c, priors, cdfs);
    // Direct scan of the candidate set; ThresholdEnvelope serves bulk evaluation.
    const double pi0 = priors.pi0();
    const double pi1 = priors.pi1();
    double best = c * pi0;
    for (const auto& s : cdfs.steps())
        best = std::min(best, c * pi0 * (1.0 - s.f0) + (1.0 - c) * pi1 * s.f1);
    return best;
}

/// Pieces of the calibrated-mode integrand: CDFs are constant between pooled scores.
inline std::vector<LossPiece> calibrated_pieces(const EmpiricalCdfPair& cdfs) {
    std::vector<LossPiece> out;
    const auto steps = cdfs.steps();
    out.reserve(steps.size() + 1);
    double lo = 0.0, f0 = 0.0, f1 = 0.0;
    for (const auto& s : steps) {
        const double hi = std::min(s.score, 1.0);
        if (hi > lo)
            out.push_back({lo, hi, f0, f1});
        lo = std::max(lo, hi);
        f0 = s.f0;
        f1 = s.f1;
    }
    // Always closed by [last score, 1], possibly of zero width, so atoms at c = 1 are covered.
    out.push_back({lo, 1.0, f0, f1});
    return out;
}

inline std::vector<LossPiece> loss_pieces(const ClassPriors& priors, const EmpiricalCdfPair& cdfs,
                                          ThresholdMode mode) {
    if (mode == ThresholdMode::calibrated)
        return calibrated_pieces(cdfs);
    const ThresholdEnvelope env(priors, cdfs);
    return {env.pieces().begin(), env.pieces().end()};
}

/// ∫ integrand(c) w(c) dc over consecutive pieces covering [0, 1], each done
/// exactly with partial moments. For atomic weights every piece is half-open
/// [lo, hi) except the last, which is closed, matching the step CDFs.
inline double integrate_pieces(std::span<const LossPiece> pieces, const ClassPriors& priors,
                               const WeightFunction& w) {
    const double pi0 = priors.pi0();
    const double pi1 = priors.pi1();
    const double closing = std::numeric_limits<double>::infinity();
    double total = 0.0;
    PartialMoments at_lo = w.partial_moments(pieces.empty() ? 0.0 : pieces.front().lo);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const LossPiece& p = pieces[k];
        const PartialMoments at_hi = w.partial_moments(k + 1 == pieces.size() ? closing : p.hi);
        const double lower = at_hi.lower - at_lo.lower;
        const double upper = at_lo.upper - at_hi.upper;
        total += pi0 * (1.0 - p.f0) * lower + pi1 * p.f1 * upper;
        at_lo = at_hi;
    }
    return total;
}

/// Exact piecewise integration of the loss against the weight.
struct Quadrature {};

/// Plain Monte Carlo over costs drawn from the weight.
struct MonteCarlo {
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

using IntegrationMethod = std::variant<Quadrature, MonteCarlo>;

struct LossEstimate {
    double value;
    std::optional<double> standard_error;
};

/// L = ∫ min_loss(c) w(c) dc.
inline LossEstimate expected_min_loss(const ClassPriors& priors, const EmpiricalCdfPair& cdfs,
                                      const WeightFunction& w, ThresholdMode mode,
                                      const IntegrationMethod& method = Quadrature{}) {
    if (std::holds_alternative<Quadrature>(method)) {
        const auto pieces = loss_pieces(priors, cdfs, mode);
        return {integrate_pieces(pieces, priors, w), std::nullopt};
    }

    const auto& mc = std::get<MonteCarlo>(method);
    if (mc.samples == 0)
        throw DomainError("Monte Carlo needs at least one sample");
    const std::optional<ThresholdEnvelope> env =
        mode == ThresholdMode::optimal ? std::optional<ThresholdEnvelope>(std::in_place, priors, cdfs) : std::nullopt;
    auto blocks = run_blocks<MomentSums>(mc.samples, mc.workers, [&](std::size_t b, std::size_t, std::size_t count) {
        RandomStream rng = RandomStream::substream(mc.seed, streams::cost_samples, b);
        MomentSums acc;
        for (std::size_t i = 0; i < count; ++i) {
            const double c = w.sample(rng);
            acc.add(env ? (*env)(c) : threshold_loss(c, c, priors, cdfs));
        }
        return acc;
    });
    MomentSums total;
    for (const auto& b : blocks)
        total.merge(b);
    std::optional<double> se;
    if (total.count >= 2)
        se = total.standard_error();
    return {total.mean(), se};
}

enum class ReferenceMethod { quadrature, closed_form };

/// Closed form of the reference loss for a beta weight, built from complete
/// and incomplete beta functions of shifted shapes:
///
///   pi0 I_{pi1}(a+1, b) B(a+1, b)/B(a, b) + pi1 (1 - I_{pi1}(a, b+1)) B(a, b+1)/B(a, b)
inline double reference_loss_closed_form(const ClassPriors& priors, const BetaParams& p) {
    const double a = p.alpha();
    const double b = p.beta();
    const BetaParams lower_shape(a + 1.0, b);
    const BetaParams upper_shape(a, b + 1.0);
    const double pi1 = priors.pi1();
    const double lower_ratio = std::exp(lower_shape.log_beta() - p.log_beta());
    const double upper_ratio = std::exp(upper_shape.log_beta() - p.log_beta());
    return priors.pi0() * incomplete_beta(pi1, lower_shape).lower * lower_ratio +
           pi1 * incomplete_beta(pi1, upper_shape).upper * upper_ratio;
}

/// Expected minimum loss of a classifier whose class score distributions coincide:
/// pi0 ∫_0^{pi1} c w(c) dc + pi1 ∫_{pi1}^1 (1 - c) w(c) dc.
inline double reference_loss(const ClassPriors& priors, const WeightFunction& w,
                             ReferenceMethod method = ReferenceMethod::quadrature) {
    if (method == ReferenceMethod::closed_form) {
        const BetaWeight* beta = w.as_beta();
        if (!beta)
            throw ConfigError("closed-form reference loss needs a beta weight");
        return reference_loss_closed_form(priors, beta->params());
    }
    const PartialMoments m = weight_partial_moments(w, priors.pi1());
    return priors.pi0() * m.lower + priors.pi1() * m.upper;
}

/// min_loss sampled on a uniform open grid, for plotting.
struct LossCurve {
    std::vector<double> grid;
    std::vector<double> loss;
    ThresholdMode mode;
};

inline LossCurve loss_curve(const ClassPriors& priors, const EmpiricalCdfPair& cdfs, ThresholdMode mode,
                            std::size_t grid_size) {
    if (grid_size < 2)
        throw DomainError("loss_curve: grid_size must be at least 2");
    LossCurve out{{}, {}, mode};
    out.grid.reserve(grid_size);
    out.loss.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double c = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        out.grid.push_back(c);
        out.loss.push_back(min_loss(c, priors, cdfs, mode));
    }
    return out;
}

} // namespace hmeasure
