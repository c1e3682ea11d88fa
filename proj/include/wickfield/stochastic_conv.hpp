#pragma once

#include "wickfield/linear_waves.hpp"
#include "wickfield/norms.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace wickfield {

/// Fourier multiplier phi^_n of the noise operator Phi f = phi * f.
struct MultiplierSpec {
    HermitianCoeffs phi_hat;

    explicit MultiplierSpec(HermitianCoeffs phi);
    const LatticePtr& lattice_ptr() const noexcept { return phi_hat.lattice_ptr(); }
    const FrequencyLattice& lattice() const noexcept { return phi_hat.lattice(); }
};

/// phi^_n = <n>^{-alpha}
MultiplierSpec power_law_multiplier(const LatticePtr& lattice, double alpha);

/// E|I_n(t)|^2 = t/2 - sin(2 t <n>) / (4 <n>), with E|beta_n(t)|^2 = t.
double wave_mode_variance(std::span<const int> n, double t);
double wave_mode_variance_at(double bracket, double t);

/// E|J_n(t)|^2 = (1 - e^{-2 t <n>^2}) / (2 <n>^2).
double heat_mode_variance(std::span<const int> n, double t);
double heat_mode_variance_at(double bracket, double t);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Covariance of the exact increment of (X, Y) = (int sin((t-s)w) dbeta,
/// int cos((t-s)w) dbeta) over a step h, for real beta with E beta(t)^2 = t.
Matrix2 wave_increment_covariance(double omega, double h);

/// Deterministic part of the (X, Y) update over a step h.
Matrix2 wave_rotation(double omega, double h);

/// R S R^T + Q, the covariance after propagating S over one more step.
Matrix2 propagate_covariance(const Matrix2& rotation, const Matrix2& state, const Matrix2& increment);

/// Samples Psi(t) = sum phi^_n I_n(t)/<n> e^{in.x} at each time of an
/// increasing grid by exact Gaussian increments.
std::vector<FieldSnapshot> sample_wave_convolution(const MultiplierSpec& spec, const std::vector<double>& times,
                                                   std::uint64_t seed, std::uint64_t stream);

/// Samples Psi_heat(t) = sum phi^_n J_n(t) e^{in.x} by the exact AR(1) recursion.
std::vector<FieldSnapshot> sample_heat_convolution(const MultiplierSpec& spec, const std::vector<double>& times,
                                                   std::uint64_t seed, std::uint64_t stream);

enum class ConvolutionKind { Wave, Heat };

/// gamma_n(t) = |phi^_n|^2 E|I_n(t)|^2 / <n>^2 (wave) or |phi^_n|^2 E|J_n(t)|^2 (heat).
GammaProfile gamma_from_multiplier(const MultiplierSpec& spec, ConvolutionKind kind);

struct OperatorNormCheck {
    double order = 0.0;
    double p = 2.0;
    /// (K, partial sum over |n| <= K)
    std::vector<std::pair<int, double>> partial_sums;
    /// closed-form verdict for power-law multipliers
    std::optional<TailClass> classification;
};

/// sum_n <n>^{2(s-1)} |phi^_n|^2: Phi is Hilbert-Schmidt from L^2 into
/// H^{s-1} iff this is finite. `power_law_alpha` declares phi^_n = <n>^{-alpha}.
OperatorNormCheck hilbert_schmidt_check(const MultiplierSpec& spec, double s, const std::vector<int>& cutoffs,
                                        std::optional<double> power_law_alpha = std::nullopt);

/// FL^{s,p} norm of phi along the cutoffs (gamma-radonifying criterion).
OperatorNormCheck radonifying_check(const MultiplierSpec& spec, double s, double p, const std::vector<int>& cutoffs,
                                    std::optional<double> power_law_alpha = std::nullopt);

/// Per-time dump: comment lines with seed and stream, then rows
/// "t,n_1..n_d,re,im" for the canonical stored modes.
void write_path_csv(std::ostream& os, const std::vector<FieldSnapshot>& path, std::uint64_t seed,
                    std::uint64_t stream);

} // namespace wickfield
