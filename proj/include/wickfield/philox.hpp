#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace wickfield {

/// Philox4x64 counter-based generator with 10 rounds.
///
/// A block of four 64-bit words is a pure function of a 256-bit counter and
/// a 128-bit key, so any draw can be addressed directly without sequential state.
struct Philox4x64 {
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static Counter block(Counter counter, Key key);
};

/// Standard normal variates addressed by (seed, stream) and a counter tuple.
///
/// Each call consumes one Philox block and returns four independent N(0,1)
/// values via the Box-Muller transform.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

    std::array<double, 4> normals(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2,
                                  std::uint64_t c3 = 0) const;

    std::uint64_t seed() const noexcept { return key_[0]; }
    std::uint64_t stream() const noexcept { return key_[1]; }

private:
    Philox4x64::Key key_;
};

/// Packs a frequency into one counter word (balanced digits of 64/d bits).
std::uint64_t pack_frequency(std::span<const int> n);

/// Counter word 2 values that separate independent families of draws.
namespace rng_family {
inline constexpr std::uint64_t kDataMultiplierG = 0x67;
inline constexpr std::uint64_t kDataMultiplierH = 0x68;
inline constexpr std::uint64_t kWaveNoise = 0x77;
inline constexpr std::uint64_t kHeatNoise = 0x74;
} // namespace rng_family

} // namespace wickfield
