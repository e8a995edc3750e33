#ifndef LADDERBUS_RNG_HPP
#define LADDERBUS_RNG_HPP

#include <cstdint>
#include <random>

namespace ladderbus
{

// std::mt19937_64 is bit-exact across conforming implementations, the
// standard distributions are not. Everything that must be reproducible goes
// through this wrapper.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit)
        {
            x = engine_();
        }
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi)
    {
        return lo + below(hi - lo + 1);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Derive an independent stream seed from a root seed and a stage tag.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag)
{
    // splitmix64 finaliser
    std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (tag + 1);
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

} // namespace ladderbus

#endif // LADDERBUS_RNG_HPP
