#include "wickfield/randomize.hpp"

#include "wickfield/error.hpp"
#include "wickfield/philox.hpp"

#include <cmath>
#include <numbers>

namespace wickfield {

HermitianCoeffs complex_gaussian_field(const LatticePtr& lattice, std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t family, std::uint64_t step)
{
    const GaussianStream rng(seed, stream);
    HermitianCoeffs out(lattice);
    const auto& lat = *lattice;
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k))
            continue;
        const auto z = rng.normals(pack_frequency(lat.frequency(k)), step, family);
        if (k == lat.conjugate_index(k))
            out.set(k, Complex(z[0], 0.0));
        else
            out.set(k, Complex(z[0], z[1]) * (std::numbers::sqrt2 / 2.0));
    }
    return out;
}

RandomizedMultipliers sample_multipliers(const LatticePtr& lattice, std::uint64_t seed, std::uint64_t stream)
{
    return {complex_gaussian_field(lattice, seed, stream, rng_family::kDataMultiplierG),
            complex_gaussian_field(lattice, seed, stream, rng_family::kDataMultiplierH), seed, stream};
}

DataPair randomize_pair(const DataPair& pair, const RandomizedMultipliers& m)
{
    if (!same_lattice(pair.lattice(), m.g.lattice()))
        throw InvalidArgument("multipliers and data live on different lattices");
    HermitianCoeffs u0(pair.lattice_ptr());
    HermitianCoeffs u1(pair.lattice_ptr());
    const auto& lat = pair.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k))
            continue;
        u0.set(k, m.g[k] * pair.u0[k]);
        u1.set(k, m.h[k] * pair.u1[k]);
    }
    return {std::move(u0), std::move(u1)};
}

} // namespace wickfield
