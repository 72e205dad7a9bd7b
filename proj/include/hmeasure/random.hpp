#pragma once

#include <cstdint>
#include <random>

namespace hmeasure {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Deterministic random stream. Substreams are addressed by (seed, stream id, index)
/// so Monte Carlo work can be split into blocks whose draws do not depend on
/// which worker runs them.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed) : engine_(mix(seed, 0, 0)) {}

    static RandomStream substream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) {
        RandomStream s(0);
        s.engine_.seed(mix(seed, stream_id, index));
        return s;
    }

    /// Uniform draw on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Beta(alpha, beta) draw via the gamma ratio, strictly inside (0, 1).
    double beta(double alpha, double beta) {
        for (;;) {
            std::gamma_distribution<double> ga(alpha, 1.0);
            std::gamma_distribution<double> gb(beta, 1.0);
            const double x = ga(engine_);
            const double y = gb(engine_);
            const double v = x / (x + y);
            if (v > 0.0 && v < 1.0)
                return v;
        }
    }

    std::uint64_t next() noexcept { return engine_(); }

    engine_type& engine() noexcept { return engine_; }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) noexcept {
        std::uint64_t state = seed;
        std::uint64_t h = detail::splitmix64(state);
        state = h ^ (stream_id * 0xd1b54a32d192ed03ULL);
        h = detail::splitmix64(state);
        state = h ^ (index * 0x8cb92ba72f3d8dd7ULL);
        return detail::splitmix64(state);
    }

    engine_type engine_;
};

/// Well-known stream ids so independent Monte Carlo paths never share draws.
namespace streams {
inline constexpr std::uint64_t cost_samples = 1;
inline constexpr std::uint64_t prior_samples = 2;
inline constexpr std::uint64_t inner_cost_samples = 3;
} // namespace streams

} // namespace hmeasure
