#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hmeasure/config.hpp"
#include "hmeasure/distributions.hpp"
#include "hmeasure/empirical.hpp"
#include "hmeasure/loss.hpp"
#include "hmeasure/parallel.hpp"
#include "hmeasure/random.hpp"

namespace hmeasure {

/// How the class sizes are set.
struct PriorSpec {
    struct Fixed {
        ClassPriors priors;
    };
    struct Empirical {};
    struct BetaDistributed {
        BetaParams distribution{2.0, 2.0};
    };

    std::variant<Fixed, Empirical, BetaDistributed> kind = Empirical{};

    static PriorSpec fixed(double pi0) { return {Fixed{ClassPriors(pi0)}}; }
    static PriorSpec empirical() { return {Empirical{}}; }
    static PriorSpec beta(double a = 2.0, double b = 2.0) { return {BetaDistributed{BetaParams(a, b)}}; }

    bool is_distributed() const noexcept { return std::holds_alternative<BetaDistributed>(kind); }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        if (const auto* f = std::get_if<Fixed>(&kind))
            os << "fixed(pi0=" << f->priors.pi0() << ")";
        else if (const auto* b = std::get_if<BetaDistributed>(&kind))
            os << "beta(" << b->distribution.alpha() << ", " << b->distribution.beta() << ")";
        else
            os << "empirical";
        return os.str();
    }
};

/// Warning tags attached to an HResult.
namespace warnings {
inline constexpr const char* negative_h = "h_negative_miscalibrated_scores";
} // namespace warnings

struct HResult {
    double h = 0.0;
    /// Expected minimum loss; the mean over prior draws for the prior-uncertain form.
    double loss = 0.0;
    /// Reference loss; the mean over prior draws for the prior-uncertain form.
    double reference_loss = 0.0;
    /// Prior-uncertain form only: mean of L(pi0) / L_ref(pi0); h = 1 - mean_loss_ratio.
    std::optional<double> mean_loss_ratio;
    std::string weight_used;
    std::string prior_used;
    std::optional<double> mc_standard_error;
    std::size_t mc_samples = 0;
    std::vector<std::string> warnings;
};

inline std::string describe_priors(const char* kind, const ClassPriors& priors) {
    std::ostringstream os;
    os.precision(17);
    os << kind << "(pi0=" << priors.pi0() << ")";
    return os.str();
}

/// Default cost weight Beta(1 + pi1, 1 + pi0), whose mode is pi1.
inline WeightFunction default_weight(const ClassPriors& priors) {
    return WeightFunction::beta(1.0 + priors.pi1(), 1.0 + priors.pi0());
}

/// H = 1 - L / L_ref at known class sizes.
inline HResult h_measure_fixed(const LabeledScores& data, const ClassPriors& priors,
                               const std::optional<WeightFunction>& weight, const EvalConfig& config) {
    config.validate(false);
    const EmpiricalCdfPair cdfs(data);
    const WeightFunction w = weight ? *weight : default_weight(priors);
    const LossEstimate est =
        expected_min_loss(priors, cdfs, w, config.mode, config.integration(config.seed.value_or(0)));
    const double ref = reference_loss(priors, w, config.reference);

    HResult r;
    r.loss = est.value;
    r.reference_loss = ref;
    r.h = 1.0 - r.loss / r.reference_loss;
    r.weight_used = w.describe();
    r.prior_used = describe_priors("fixed", priors);
    if (est.standard_error) {
        r.mc_standard_error = *est.standard_error / ref;
        r.mc_samples = config.mc_samples;
    }
    if (r.h < 0.0)
        r.warnings.emplace_back(warnings::negative_h);
    return r;
}

/// Loss pieces and reference loss at one value of pi0, with the cost weight
/// conditional on it: w(c | pi0) = Beta(2 - pi0, 1 + pi0).
struct PriorPoint {
    double loss;
    double reference_loss;

    double ratio() const noexcept { return loss / reference_loss; }
};

/// L(pi0) and L_ref(pi0) at one prior value. `rng` drives the inner Monte
/// Carlo when config.method is monte_carlo; quadrature ignores it.
inline PriorPoint evaluate_at_prior(const EmpiricalCdfPair& cdfs, double pi0, const EvalConfig& config,
                                    RandomStream* rng = nullptr) {
    const ClassPriors priors(pi0);
    const WeightFunction w = default_weight(priors);
    PriorPoint out{};
    out.reference_loss = reference_loss(priors, w, config.reference);
    if (config.method == EstimationMethod::quadrature) {
        out.loss = integrate_pieces(loss_pieces(priors, cdfs, config.mode), priors, w);
        return out;
    }
    if (!rng)
        throw ConfigError("inner Monte Carlo needs a random stream");
    std::optional<ThresholdEnvelope> env;
    if (config.mode == ThresholdMode::optimal)
        env.emplace(priors, cdfs);
    double sum = 0.0;
    for (std::size_t i = 0; i < config.mc_samples; ++i) {
        const double c = w.sample(*rng);
        sum += env ? (*env)(c) : threshold_loss(c, c, priors, cdfs);
    }
    out.loss = sum / static_cast<double>(config.mc_samples);
    return out;
}

/// H = 1 - E_v[L(pi0) / L_ref(pi0)] with pi0 ~ v, estimated by Monte Carlo
/// over pi0. The standard error is that of the mean of per-draw ratios
/// (L_ref(pi0) is exact, so the delta-method variance reduces to the sample
/// variance of the ratios).
inline HResult h_measure_uncertain_priors(const LabeledScores& data, const BetaParams& prior_dist,
                                          const EvalConfig& config) {
    config.validate(true);
    const EmpiricalCdfPair cdfs(data);
    const std::uint64_t seed = *config.seed;

    struct Block {
        MomentSums ratio;
        double loss = 0.0;
        double reference = 0.0;
    };
    auto blocks = run_blocks<Block>(config.outer_samples, config.workers,
                                    [&](std::size_t b, std::size_t first, std::size_t count) {
        RandomStream prior_rng = RandomStream::substream(seed, streams::prior_samples, b);
        Block acc;
        for (std::size_t i = 0; i < count; ++i) {
            const double pi0 = prior_rng.beta(prior_dist.alpha(), prior_dist.beta());
            std::optional<RandomStream> inner;
            if (config.uses_monte_carlo())
                inner = RandomStream::substream(seed, streams::inner_cost_samples, first + i);
            const PriorPoint p = evaluate_at_prior(cdfs, pi0, config, inner ? &*inner : nullptr);
            acc.ratio.add(p.ratio());
            acc.loss += p.loss;
            acc.reference += p.reference_loss;
        }
        return acc;
    });

    Block total;
    for (const auto& b : blocks) {
        total.ratio.merge(b.ratio);
        total.loss += b.loss;
        total.reference += b.reference;
    }
    const double n = static_cast<double>(total.ratio.count);

    HResult r;
    r.mean_loss_ratio = total.ratio.mean();
    r.h = 1.0 - *r.mean_loss_ratio;
    r.loss = total.loss / n;
    r.reference_loss = total.reference / n;
    r.weight_used = "beta(2 - pi0, 1 + pi0) conditional on pi0";
    std::ostringstream prior;
    prior.precision(17);
    prior << "beta(" << prior_dist.alpha() << ", " << prior_dist.beta() << ")";
    r.prior_used = prior.str();
    r.mc_standard_error = total.ratio.standard_error();
    r.mc_samples = config.outer_samples;
    if (r.h < 0.0)
        r.warnings.emplace_back(warnings::negative_h);
    return r;
}

/// Dispatch on the prior specification. A user weight is only meaningful at
/// fixed or empirical priors; the prior-uncertain form ties the weight to pi0.
inline HResult evaluate_h(const LabeledScores& data, const PriorSpec& prior,
                          const std::optional<WeightFunction>& weight, const EvalConfig& config) {
    if (const auto* b = std::get_if<PriorSpec::BetaDistributed>(&prior.kind)) {
        if (weight)
            throw ConfigError("a custom weight cannot be combined with beta-distributed priors; "
                              "the weight is tied to pi0 in that form");
        return h_measure_uncertain_priors(data, b->distribution, config);
    }
    const ClassPriors priors = std::holds_alternative<PriorSpec::Fixed>(prior.kind)
                                   ? std::get<PriorSpec::Fixed>(prior.kind).priors
                                   : empirical_priors(data);
    HResult r = h_measure_fixed(data, priors, weight, config);
    if (std::holds_alternative<PriorSpec::Empirical>(prior.kind))
        r.prior_used = describe_priors("empirical", priors);
    return r;
}

} // namespace hmeasure
