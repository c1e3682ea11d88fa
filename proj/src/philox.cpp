#include "wickfield/philox.hpp"

#include "wickfield/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wickfield {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo)
{
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

// uniform in the open interval (0, 1)
inline double to_open_unit(std::uint64_t x)
{
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

Philox4x64::Counter Philox4x64::block(Counter c, Key k)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

std::array<double, 4> GaussianStream::normals(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2,
                                              std::uint64_t c3) const
{
    const auto bits = Philox4x64::block({c0, c1, c2, c3}, key_);
    std::array<double, 4> out{};
    for (int pair = 0; pair < 2; ++pair) {
        const double r = std::sqrt(-2.0 * std::log(to_open_unit(bits[2 * pair])));
        const double theta = 2.0 * std::numbers::pi * to_open_unit(bits[2 * pair + 1]);
        out[2 * pair] = r * std::cos(theta);
        out[2 * pair + 1] = r * std::sin(theta);
    }
    return out;
}

std::uint64_t pack_frequency(std::span<const int> n)
{
    const int d = static_cast<int>(n.size());
    if (d < 1 || d > 32)
        throw InvalidArgument("frequency packing supports 1 <= d <= 32");
    const int bits = std::min(62, 64 / d);
    const std::int64_t half = std::int64_t{1} << (bits - 1);
    std::uint64_t word = 0;
    for (int i = 0; i < d; ++i) {
        if (n[i] <= -half || n[i] >= half)
            throw InvalidArgument("frequency component too large to address the random stream");
        const auto digit = static_cast<std::uint64_t>(std::int64_t{n[i]} + half);
        word |= digit << (bits * i);
    }
    return word;
}

} // namespace wickfield
