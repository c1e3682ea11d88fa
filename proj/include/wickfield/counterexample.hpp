#pragma once

#include "wickfield/lattice.hpp"
#include "wickfield/linear_waves.hpp"
#include "wickfield/norms.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wickfield {

/// Largest exponent cap a profile accepts. Membership series run to the cap;
/// frequency arithmetic only ever touches exponents below 127.
inline constexpr int kMaxDyadicExponent = 1 << 24;
/// Largest exponent for which explicit frequencies fit in int64.
inline constexpr int kMaxSparseExponent = 62;

/// Tensor data a_n = prod_i a~(n_i), a~(n) = m^{-(j-1)/(2j)} when |n| = 2^m
/// with 1 <= m <= m_max, and 0 otherwise.
struct DyadicProfile {
    int dim = 1;
    int degree = 2;
    int max_exponent = 2;

    DyadicProfile(int d, int j, int m_max);

    /// Exponent m when |n| = 2^m is in the support, else 0.
    int exponent_of(__int128 n) const;
    double coordinate(__int128 n) const;
    double coefficient(std::span<const std::int64_t> n) const;
    /// gamma_n = |a_n|^2 (time independent).
    double gamma(std::span<const std::int64_t> n) const;
    /// Support points per coordinate: +-2^m, m = 1..m_max.
    std::vector<std::int64_t> coordinate_support() const;
};

/// Real coefficients on an explicit sparse frequency set, d values per row.
struct SparseCoeffs {
    int dim = 1;
    std::vector<std::int64_t> frequencies;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const std::int64_t> frequency(std::size_t i) const
    {
        return {frequencies.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

struct Counterexample {
    DyadicProfile profile;
    SparseCoeffs u0;
    SparseCoeffs u1; // <nabla> u0
};

/// Requires d >= 1, j >= 2, 2 <= m_max <= kMaxSparseExponent and a support of
/// at most 10^7 frequencies.
Counterexample build_counterexample(int d, int j, int m_max);

/// The data restricted to a lattice, as a deterministic pair.
DataPair counterexample_pair(const DyadicProfile& profile, const LatticePtr& lattice);

/// gamma_n = |a_n|^2 on a lattice, carrying the per-coordinate factor a~^2.
GammaProfile dyadic_gamma_profile(const DyadicProfile& profile, const LatticePtr& lattice);

struct SobolevMembership {
    double s = 0.0;
    /// sum_{m=1}^{m_max} (1 + 4^m)^{s/d} m^{-(j-1)/j}: one-sided coordinate series
    double partial_sum = 0.0;
    /// ratio q = 4^{s/d} of the geometric majorant of the terms
    double ratio = 0.0;
    /// bound on the remainder beyond m_max (infinite when q >= 1)
    double tail_bound = 0.0;
    /// upper bound for ||(u0,u1)||^2_{H^s} of the untruncated data
    double norm_sq_bound = 0.0;
    TailClass classification = TailClass::Divergent;
};

struct FourierLebesgueMembership {
    double p = 0.0;
    /// p-series exponent e with coordinate mass sum_m m^{-e}
    double exponent = 0.0;
    /// sum_{m=1}^{m_max} m^{-e}
    double partial_sum = 0.0;
    TailClass classification = TailClass::Divergent;
};

struct MembershipReport {
    std::vector<SobolevMembership> sobolev;
    std::vector<FourierLebesgueMembership> fourier_lebesgue;
};

/// Classifies the data in H^s (s in `sobolev_orders`) and FL^{0,p}; when
/// `fl_exponents` is empty the critical p = 2j/(j-1) alone is reported.
MembershipReport membership_report(const DyadicProfile& profile, const std::vector<double>& sobolev_orders,
                                   const std::vector<double>& fl_exponents = {});

/// E|F(:z_N^j:)(0)|^2 along a scan of cutoffs.
struct ZerothModeSeries {
    int dim = 1;
    int degree = 2;
    TruncationShape shape = TruncationShape::Cube;
    std::vector<double> log2_cutoffs;
    /// exact value for the requested truncation when `exact`, else the
    /// inscribed-cube lower bound
    std::vector<double> values;
    /// cube truncation max_i |n_i| <= N (an upper bound for the ball)
    std::vector<double> cube;
    /// inscribed cube max_i |n_i| <= N / sqrt(d) (a lower bound for the ball)
    std::vector<double> inscribed_cube;
    bool exact = true;

    /// Rows "log2_N,value,cube,inscribed_cube".
    void write_csv(std::ostream& os) const;
};

/// Dyadic cutoffs N = 2^K for K in `log2_cutoffs` (1 <= K <= 126 / j bits
/// of headroom), through the per-coordinate sparse convolution.
ZerothModeSeries zeroth_mode_moment(const DyadicProfile& profile, const std::vector<int>& log2_cutoffs,
                                    TruncationShape shape = TruncationShape::Cube);

/// Zeroth-mode moment of an arbitrary lattice profile at the given cutoffs.
ZerothModeSeries zeroth_mode_moment(const GammaProfile& profile, const std::vector<int>& cutoffs, int j,
                                    double t = 0.0);

struct DivergenceFit {
    std::vector<double> log2_cutoffs;
    std::vector<double> values;
    /// value / (log log N)^d, natural logarithms
    std::vector<double> ratios;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool strictly_increasing = false;
    /// min_ratio > 0 and max_ratio / min_ratio <= kDivergenceBand
    bool bounded_band = false;
    /// last increment / first increment of the series
    double increment_persistence = 0.0;
    bool divergence_asserted = false;

    /// Rows "log2_N,value,loglogN_pow_d,ratio".
    void write_csv(std::ostream& os) const;

    int dim = 1;
};

inline constexpr double kDivergenceBand = 10.0;
/// Increments must not decay below this fraction of the first one.
inline constexpr double kIncrementPersistence = 0.25;

/// Requires log2 N_max / log2 N_min >= 16 and at least 3 points.
DivergenceFit divergence_rate_fit(const ZerothModeSeries& series);

struct OkaSum {
    double sum = 0.0;
    /// (log2 n1)^{-1 + (j-1)/j}
    double comparison = 0.0;
    double ratio = 0.0;
};

/// c_j = prod_{k=3}^{j} 2^{-2^{j/(j-k+1)}}
double oka_constant(int j);

/// Restricted sum over ordered dyadic 4 <= n_2 <= ... <= n_{j-1} <= N/sqrt(d)
/// of prod a~(n_l)^2 times a~(n_1 + ... + n_{j-1})^2. Zero when n1 exceeds
/// c_j N / sqrt(d). Requires j >= 3 and n1 >= 4.
OkaSum oka_restricted_sum(const DyadicProfile& profile, std::int64_t n1, unsigned __int128 cutoff);

struct OkaScan {
    std::vector<int> log2_cutoffs;
    std::vector<OkaSum> sums;
    /// First log2 N from which the ratio moves by less than `tolerance`
    /// (relative) at every later step; empty when it never settles.
    std::optional<int> onset;
};

/// oka_restricted_sum along N = 2^K, reporting where the ratio stabilizes.
OkaScan oka_scan(const DyadicProfile& profile, std::int64_t n1, const std::vector<int>& log2_cutoffs,
                 double tolerance = 1e-2);

} // namespace wickfield
