#pragma once

#include "wickfield/coeffs.hpp"

#include <vector>

namespace wickfield {

/// Real samples of a field on the uniform grid x_m = 2*pi*m/M, axis 0 fastest.
struct RealGrid {
    int dim = 0;
    int size = 0;
    std::vector<double> values;

    double mean() const;
    double mean_square() const;
};

/// Default for the imaginary residue of to_physical, relative to the l1 mass.
inline constexpr double kImagResidueTolerance = 1e-12;

/// u(x_m) = sum_n c_n e^{i n.x_m}. Throws SymmetryViolation when the
/// imaginary residue exceeds `tolerance` times sum |c_n|.
RealGrid to_physical(const HermitianCoeffs& c, double tolerance = kImagResidueTolerance);

/// Discrete Fourier coefficients (normalized measure) of a grid field,
/// restricted to the stored modes of `lattice` and made exactly Hermitian.
HermitianCoeffs to_spectral(const RealGrid& grid, const LatticePtr& lattice);

/// In-place multidimensional complex DFT of a cube array with `size` points
/// per axis. sign = -1 is the forward transform e^{-i k.x}; no normalization.
void fft_inplace(std::vector<Complex>& data, int dim, int size, int sign);

} // namespace wickfield
