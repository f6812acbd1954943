#pragma once

#include <cstdint>
#include <limits>

namespace wva {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64 stream keyed by (master_seed, stream). The initial state is
/// mix64(master_seed ^ mix64(stream + golden)), so every trial index gets
/// its own reproducible, order-independent stream.
class StreamRng {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    StreamRng(std::uint64_t master_seed, std::uint64_t stream) noexcept
        : state_(mix64(master_seed ^ mix64(stream + golden))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        state_ += golden;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

} // namespace wva
