#pragma once

#include "wickfield/randomize.hpp"
#include "wickfield/transform.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wickfield {

enum class ProfileKind { FromDataPair, PowerLaw, WaveConvolution, HeatConvolution, Custom };

std::string to_string(ProfileKind kind);

/// Per-mode variance gamma_n(t) = E|coefficient of the Gaussian field at n|^2.
///
/// The evaluator accepts arbitrary frequencies so closed-form families can be
/// queried off the lattice; tabulation and truncation use the attached lattice.
class GammaProfile {
public:
    using Evaluator = std::function<double(std::span<const int>, double)>;
    /// Per-axis factor f with gamma_n(t) = prod_i f(n_i, t).
    using CoordinateFactor = std::function<double(std::int64_t, double)>;

    GammaProfile(LatticePtr lattice, ProfileKind kind, Evaluator evaluator,
                 std::optional<CoordinateFactor> factor = std::nullopt, double alpha = 0.0);

    double operator()(std::span<const int> n, double t) const { return evaluator_(n, t); }

    /// gamma over the lattice modes, zero outside the truncation of radius N.
    std::vector<double> tabulate(int radius, double t) const;

    const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
    const FrequencyLattice& lattice() const noexcept { return *lattice_; }
    ProfileKind kind() const noexcept { return kind_; }
    /// Exponent of the power-law family (meaningful for ProfileKind::PowerLaw).
    double alpha() const noexcept { return alpha_; }
    const std::optional<CoordinateFactor>& coordinate_factor() const noexcept { return factor_; }

private:
    LatticePtr lattice_;
    ProfileKind kind_;
    Evaluator evaluator_;
    std::optional<CoordinateFactor> factor_;
    double alpha_;
};

/// gamma_n(t) = cos^2(t<n>)|a_n|^2 + sin^2(t<n>) <n>^{-2} |b_n|^2
GammaProfile gamma_from_pair(const DataPair& pair);

/// gamma_n = <n>^{-2(1+alpha)}, independent of t.
GammaProfile gamma_power_law(const LatticePtr& lattice, double alpha);

/// a_n = <n>^{-1-alpha}, b_n = <n>^{-alpha}: the pair whose randomization is
/// the canonical power-law family (massive free field at alpha = 0).
DataPair power_law_pair(const LatticePtr& lattice, double alpha);

/// A real field at a fixed time, with a lazily computed grid view.
/// The grid cache is not synchronized; share snapshots read-only after
/// calling grid() once, or copy them per thread.
class FieldSnapshot {
public:
    FieldSnapshot(double time, HermitianCoeffs coeffs);

    double time() const noexcept { return time_; }
    const HermitianCoeffs& coeffs() const noexcept { return coeffs_; }
    const RealGrid& grid() const;

private:
    double time_;
    HermitianCoeffs coeffs_;
    mutable std::optional<RealGrid> grid_;
};

/// z(t) = cos(t<nabla>) u0^w + sin(t<nabla>)/<nabla> u1^w
FieldSnapshot random_linear_solution(const DataPair& pair, const RandomizedMultipliers& m, double t);

/// Deterministic free evolution of a pair (no randomization).
HermitianCoeffs linear_solution(const DataPair& pair, double t);

/// alpha_N(t) = sum_{|n| <= N} gamma_n(t).
double truncated_variance(const GammaProfile& profile, int radius, double t);

} // namespace wickfield
