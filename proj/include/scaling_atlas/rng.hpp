#pragma once

#include <cmath>
#include <cstdint>

namespace scaling_atlas {

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood, 2014).
///
/// Chosen as the toolkit-wide generator because its algorithm is four integer
/// operations per step, published, and produces identical streams on every
/// platform. All seeded behavior (restart initialization, synthetic noise,
/// chunk offsets) flows through this class, so any run is reproducible from
/// the seeds alone.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal draw via Box-Muller; consumes exactly two raw draws.
    /// The first uniform is shifted into (0, 1] so the log is always finite.
    double gaussian(double mean, double sd) {
        double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
        double u2 = next_double();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
        return mean + sd * z;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from a (seed, stream) pair by running
/// the SplitMix64 finalizer over their combination. Used to give each fit
/// restart and each sampling repeat its own deterministic stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace scaling_atlas
