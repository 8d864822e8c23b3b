#pragma once

#include <cmath>
#include <cstdint>

namespace kayasim {

// Deterministic random streams for the simulation engine.
//
// Uniform source: SplitMix64 used as a counter-based generator. Each
// stream is a pure function of (key, counter), so draw i of stream k is
// the same on every run, on any worker, in any execution order. Stream
// keys are derived by absorbing (unit_index, draw_index) into the run
// seed through the same finalizer, giving every draw of every simulated
// unit its own independent substream.
//
// Gaussian variates come from the basic form of the Box-Muller transform
// applied to consecutive uniforms (the sine partner is discarded).

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Derives the substream key for one (unit, draw) cell of a run.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t unit_index,
                                   std::uint64_t draw_index) {
    std::uint64_t h = detail::splitmix64_finalize(seed + detail::kGolden);
    h = detail::splitmix64_finalize(h + detail::kGolden * (unit_index + 1));
    h = detail::splitmix64_finalize(h + detail::kGolden * (draw_index + 1));
    return h;
}

/// Counter-based uniform stream: output(i) = finalize(key + (i+1)*golden).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    CounterRng(std::uint64_t seed, std::uint64_t unit_index, std::uint64_t draw_index)
        : key_(substream_key(seed, unit_index, draw_index)) {}

    std::uint64_t next_u64() {
        counter_ += detail::kGolden;
        return detail::splitmix64_finalize(key_ + counter_);
    }

    /// Uniform double in (0, 1]; never 0, so it is safe under log().
    double next_uniform_open0() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller: sqrt(-2 ln u1) * cos(2 pi u2).
    double next_gaussian() {
        const double u1 = next_uniform_open0();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        return radius * std::cos(two_pi * u2);
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace kayasim
