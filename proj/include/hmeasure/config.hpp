#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "hmeasure/empirical.hpp"
#include "hmeasure/errors.hpp"
#include "hmeasure/loss.hpp"

namespace hmeasure {

enum class EstimationMethod { quadrature, monte_carlo };

inline std::string_view to_string(EstimationMethod m) noexcept {
    return m == EstimationMethod::quadrature ? "quadrature" : "monte_carlo";
}

/// Numerical settings shared by every metric in one evaluation.
struct EvalConfig {
    ThresholdMode mode = ThresholdMode::calibrated;
    /// Integration over costs: exact piecewise quadrature or Monte Carlo.
    EstimationMethod method = EstimationMethod::quadrature;
    /// Cost draws per Monte Carlo estimate of L.
    std::size_t mc_samples = 10000;
    /// Draws of pi0 for the prior-uncertain H-measure.
    std::size_t outer_samples = 10000;
    /// Required whenever any Monte Carlo path runs; there is no default seed.
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    ReferenceMethod reference = ReferenceMethod::quadrature;

    bool uses_monte_carlo() const noexcept { return method == EstimationMethod::monte_carlo; }

    void validate(bool prior_sampling) const {
        if (mc_samples == 0)
            throw ConfigError("Monte Carlo sample count must be positive");
        if (outer_samples == 0)
            throw ConfigError("outer prior sample count must be positive");
        if ((uses_monte_carlo() || prior_sampling) && !seed)
            throw ConfigError("a seed is required when Monte Carlo estimation is active");
    }

    IntegrationMethod integration(std::uint64_t stream_seed) const {
        if (method == EstimationMethod::quadrature)
            return Quadrature{};
        return MonteCarlo{mc_samples, stream_seed, workers};
    }
};

} // namespace hmeasure
