#pragma once

// Counter-based randomness: every word is a pure function of
// (seed, stream, counter), so per-point decisions do not depend on
// evaluation order or thread count.

#include <cstdint>

namespace nikodym {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// splitmix64 started at seed ⊕ mix(stream) and advanced counter+1 steps.
constexpr std::uint64_t rng_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept
{
    const std::uint64_t base = seed ^ splitmix64_mix(stream);
    return splitmix64_mix(base + (counter + 1) * kGoldenGamma);
}

/// Bernoulli threshold quantized to 64-bit fixed point: P(word < value).
/// `saturated` stands in for the unrepresentable value 2^64.
struct Threshold {
    std::uint64_t value = 0;
    bool saturated = false;
    double probability = 0.0;

    bool accept(std::uint64_t word) const noexcept { return saturated || word < value; }
};

Threshold quantize_probability(double p) noexcept;

/// Sub-seed for retry attempt / trial `tag` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

namespace streams {
inline constexpr std::uint64_t kRandomSet = 0x10;
inline constexpr std::uint64_t kWitnessSet = 0x20;
inline constexpr std::uint64_t kThinning = 0x30;
inline constexpr std::uint64_t kParabola = 0x40;
inline constexpr std::uint64_t kDerive = 0x50;
inline constexpr std::uint64_t kExperiment = 0x60;
inline constexpr std::uint64_t kQuadricBase = 0x1000; // + quadric slot
} // namespace streams

/// Sequential view over one stream; the counter is the only state.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0) noexcept
        : seed_(seed), stream_(stream), counter_(counter)
    {
    }

    std::uint64_t next() noexcept { return rng_word(seed_, stream_, counter_++); }

    /// Uniform in [0, n) by rejection against the largest multiple of n below 2^64.
    std::uint64_t uniform(std::uint64_t n) noexcept;

    bool bernoulli(const Threshold& t) noexcept { return t.accept(next()); }

    /// Uniform in [0, 1) from the top 53 bits.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

} // namespace nikodym
