#pragma once

#include <cstdint>
#include <random>

namespace geosat {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). A bijection on 64-bit
/// words.
[[nodiscard]] constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Per-instance seed for a batch: splitmix64_mix(master + (index + 1) * gamma).
/// Injective in `index` for a fixed master and in `master` for a fixed index.
[[nodiscard]] constexpr std::uint64_t derive_instance_seed(std::uint64_t master_seed,
                                                           std::uint64_t instance_index) noexcept
{
    return splitmix64_mix(master_seed + (instance_index + 1) * kGoldenGamma);
}

/// Deterministic generator used for all instance sampling: the standard
/// 64-bit Mersenne Twister, whose output sequence is fixed by the C++
/// standard. The distributions below are hand-rolled because the standard
/// library distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) from the top 53 bits of one draw.
    double unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection of the biased tail.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % bound;
    }

    /// Fair coin from the top bit of one draw.
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

} // namespace geosat
