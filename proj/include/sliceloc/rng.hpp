/**
 * @file rng.hpp
 * @brief Counter-based deterministic random streams.
 *
 * Every stream is keyed by (seed, trial index, stream tag) and produces the
 * i-th output purely from (key, i), so results are independent of thread
 * scheduling and identical across platforms. The generator is the splitmix64
 * finalizer over an additive counter sequence.
 */

#ifndef SLICELOC_RNG_HPP
#define SLICELOC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sliceloc {

namespace detail {

inline std::uint64_t splitmix64_fin(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t trial_index, std::uint64_t stream_tag) {
        key_ = detail::splitmix64_fin(seed + 0x9E3779B97F4A7C15ULL);
        key_ = detail::splitmix64_fin(key_ ^ (trial_index + 0xD1B54A32D192ED03ULL));
        key_ = detail::splitmix64_fin(key_ ^ (stream_tag + 0x2545F4914F6CDD1DULL));
    }

    std::uint64_t next_u64() {
        return detail::splitmix64_fin(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n > 0, via 128-bit multiply (unbiased enough
    /// for simulation use, exactly reproducible).
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Zero-mean Gaussian via Box-Muller; always consumes two uniforms.
    double gaussian(double sigma) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace sliceloc

#endif // SLICELOC_RNG_HPP
