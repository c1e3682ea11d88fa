#pragma once

#include "wickfield/linear_waves.hpp"

#include <span>
#include <vector>

namespace wickfield {

/// Highest Wick degree accepted unless a caller raises the cap.
inline constexpr int kDefaultMaxWickDegree = 8;

/// H_j(x; sigma) via H_{k+1} = x H_k - k sigma H_{k-1}, H_0 = 1, H_1 = x.
double hermite(int j, double x, double sigma);

struct WickPowerResult {
    int degree = 0;
    int cutoff = 0;
    double time = 0.0;
    double variance_used = 0.0;
    HermitianCoeffs coeffs;
};

/// :z_N^j:(t) = H_j(P_N z(t); alpha_N(t)), with alpha_N(t) taken from the
/// exact profile. Evaluated pointwise on the lattice grid and returned on the
/// lattice modes. Requires lattice oversample >= j + 1 for j >= 2 so that the
/// returned coefficients are free of aliasing.
WickPowerResult wick_power(const FieldSnapshot& z, const GammaProfile& profile, int radius, int j,
                           int max_degree = kDefaultMaxWickDegree);

/// :z^0: = 1 on the lattice of z.
WickPowerResult wick_unit(const FieldSnapshot& z, int radius);

/// N_k(v + z) = sum_j C(k, j) v^{k-j} :z^j:, with wick_powers[j] of degree j
/// for j = 0..k. Needs oversample >= k + 1.
FieldSnapshot wick_nonlinearity(const FieldSnapshot& v, std::span<const WickPowerResult> wick_powers);

/// Grid-level kernel of wick_nonlinearity; `wick_grids[j]` holds :z^j: on the grid.
RealGrid wick_nonlinearity_grid(const RealGrid& v, std::span<const RealGrid> wick_grids);

/// C(n, k) as a double.
double binomial(int n, int k);

} // namespace wickfield
