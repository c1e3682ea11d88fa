#pragma once

#include "wickfield/coeffs.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace wickfield {

using Metadata = std::map<std::string, std::string>;

struct LoadedCoeffs {
    HermitianCoeffs coeffs;
    Metadata metadata;
};

/// Column text format:
///
///     # wickfield-coeffs 1
///     # dim 2
///     # cutoff 4
///     # shape ball
///     # oversample 1
///     # count 49
///     # meta <key> <value>        (zero or more)
///     n1 n2 re im                 (one row per stored frequency, lattice order)
///
/// Numbers are written with 17 significant digits so the text round trip is exact.
void write_coeffs_text(std::ostream& out, const HermitianCoeffs& c, const Metadata& metadata = {});
LoadedCoeffs read_coeffs_text(std::istream& in);

/// Little-endian binary: magic "WFCOEF01", int32 dim, cutoff, shape, oversample,
/// uint64 count, uint32 metadata entries (length-prefixed key/value strings),
/// then per frequency int32[dim] followed by two float64.
void write_coeffs_binary(std::ostream& out, const HermitianCoeffs& c, const Metadata& metadata = {});
LoadedCoeffs read_coeffs_binary(std::istream& in);

} // namespace wickfield
