#pragma once

#include <cstdint>
#include <limits>

namespace invcure {

/// SplitMix64: a counter-based 64-bit generator. Output k of the stream keyed
/// by `seed` is mix(seed + k * golden), so streams are cheap to derive and
/// fully determined by their key.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
    constexpr double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Key of substream `index` under `seed`. The parent key is scrambled before
/// the xor so that nested derivations (replicate, then subject) do not alias.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64::mix(seed) ^ index;
}

} // namespace invcure
