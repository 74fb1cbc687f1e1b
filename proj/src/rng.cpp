#include "nikodym/rng.hpp"

#include <cmath>

namespace nikodym {

Threshold quantize_probability(double p) noexcept
{
    Threshold t;
    t.probability = p;
    if (!(p > 0.0))
        return t;
    if (p >= 1.0) {
        t.saturated = true;
        return t;
    }
    const double scaled = std::nearbyint(std::ldexp(p, 64));
    if (scaled >= 0x1.0p64) {
        t.saturated = true;
        return t;
    }
    t.value = static_cast<std::uint64_t>(scaled);
    return t;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept
{
    return rng_word(seed, streams::kDerive, tag);
}

std::uint64_t CounterRng::uniform(std::uint64_t n) noexcept
{
    if (n <= 1)
        return 0;
    // 2^64 mod n, computed without 128-bit arithmetic.
    const std::uint64_t rem = (0 - n) % n;
    const std::uint64_t limit = 0 - rem; // 2^64 - rem; wraps to 0 when rem == 0
    for (;;) {
        const std::uint64_t w = next();
        if (rem == 0 || w < limit)
            return w % n;
    }
}

} // namespace nikodym
