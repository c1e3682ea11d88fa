#include "wickfield/wick.hpp"

#include "wickfield/error.hpp"

#include <cmath>

namespace wickfield {

double hermite(int j, double x, double sigma)
{
    if (j < 0)
        throw InvalidArgument("Hermite degree must be >= 0");
    if (!(sigma >= 0.0))
        throw InvalidArgument("Hermite variance parameter must be >= 0");
    if (j == 0)
        return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < j; ++k) {
        const double next = x * cur - k * sigma * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return std::round(r);
}

WickPowerResult wick_power(const FieldSnapshot& z, const GammaProfile& profile, int radius, int j, int max_degree)
{
    if (j < 0 || j > max_degree)
        throw InvalidArgument("Wick degree " + std::to_string(j) + " outside [0, " + std::to_string(max_degree) + "]");
    const auto& lat = z.coeffs().lattice();
    if (!same_lattice(lat, profile.lattice()))
        throw InvalidArgument("field and variance profile live on different lattices");
    if (j >= 2 && lat.oversample() < j + 1)
        throw InvalidArgument("degree-" + std::to_string(j) + " Wick power needs oversample >= " +
                              std::to_string(j + 1) + " (lattice has " + std::to_string(lat.oversample()) + ")");

    const double variance = truncated_variance(profile, radius, z.time());
    if (j == 0)
        return {0, radius, z.time(), variance, wick_unit(z, radius).coeffs};

    auto zn = project(z.coeffs(), radius);
    if (j == 1)
        return {1, radius, z.time(), variance, std::move(zn)};

    RealGrid grid = to_physical(zn);
    for (double& x : grid.values)
        x = hermite(j, x, variance);
    return {j, radius, z.time(), variance, to_spectral(grid, z.coeffs().lattice_ptr())};
}

WickPowerResult wick_unit(const FieldSnapshot& z, int radius)
{
    HermitianCoeffs one(z.coeffs().lattice_ptr());
    one.set(one.lattice().zero_index(), 1.0);
    return {0, radius, z.time(), 0.0, std::move(one)};
}

RealGrid wick_nonlinearity_grid(const RealGrid& v, std::span<const RealGrid> wick_grids)
{
    if (wick_grids.empty())
        throw InvalidArgument("need Wick powers for j = 0..k");
    const int k = static_cast<int>(wick_grids.size()) - 1;
    for (const auto& w : wick_grids)
        if (w.values.size() != v.values.size())
            throw InvalidArgument("Wick power grids do not match the field grid");

    RealGrid out{v.dim, v.size, std::vector<double>(v.values.size(), 0.0)};
    std::vector<double> weights(static_cast<std::size_t>(k + 1));
    for (int j = 0; j <= k; ++j)
        weights[j] = binomial(k, j);
    for (std::size_t m = 0; m < v.values.size(); ++m) {
        // Horner in v: sum_j C(k,j) v^{k-j} W_j
        double acc = 0.0;
        for (int j = 0; j <= k; ++j)
            acc = acc * v.values[m] + weights[j] * wick_grids[j].values[m];
        out.values[m] = acc;
    }
    return out;
}

FieldSnapshot wick_nonlinearity(const FieldSnapshot& v, std::span<const WickPowerResult> wick_powers)
{
    if (wick_powers.empty())
        throw InvalidArgument("need Wick powers for j = 0..k");
    const int k = static_cast<int>(wick_powers.size()) - 1;
    const auto& lat = v.coeffs().lattice();
    if (k >= 1 && lat.oversample() < k + 1)
        throw InvalidArgument("degree-" + std::to_string(k) + " nonlinearity needs oversample >= " +
                              std::to_string(k + 1));
    std::vector<RealGrid> grids;
    grids.reserve(wick_powers.size());
    for (int j = 0; j <= k; ++j) {
        const auto& w = wick_powers[j];
        if (w.degree != j)
            throw InvalidArgument("wick_powers[" + std::to_string(j) + "] has degree " + std::to_string(w.degree));
        if (w.time != wick_powers[0].time || w.cutoff != wick_powers[0].cutoff)
            throw InvalidArgument("Wick powers are at mismatched times or cutoffs");
        if (!same_lattice(w.coeffs.lattice(), lat))
            throw InvalidArgument("Wick powers live on a different lattice");
        grids.push_back(to_physical(w.coeffs));
    }
    const RealGrid out = wick_nonlinearity_grid(v.grid(), grids);
    return {v.time(), to_spectral(out, v.coeffs().lattice_ptr())};
}

} // namespace wickfield
