#pragma once

#include "wickfield/coeffs.hpp"

#include <cstdint>

namespace wickfield {

/// Gaussian multipliers g_n, h_n with g_{-n} = conj(g_n).
///
/// For n != 0 the real and imaginary parts are independent N(0, 1/2), so
/// E|g_n|^2 = 1; g_0 is a real N(0, 1). Draws are addressed by the frequency
/// itself, so the same (seed, stream) gives the same g_n on every lattice
/// that stores n.
struct RandomizedMultipliers {
    HermitianCoeffs g;
    HermitianCoeffs h;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

RandomizedMultipliers sample_multipliers(const LatticePtr& lattice, std::uint64_t seed, std::uint64_t stream);

/// (g_n a_n, h_n b_n)
DataPair randomize_pair(const DataPair& pair, const RandomizedMultipliers& m);

/// One standard complex Gaussian per conjugate pair, drawn from the given
/// family tag and step word of the counter.
HermitianCoeffs complex_gaussian_field(const LatticePtr& lattice, std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t family, std::uint64_t step = 0);

} // namespace wickfield
