#pragma once

#include "wickfield/coeffs.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wickfield {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_n <n>^{2s} |c_n|^2)^{1/2} over the stored modes.
double sobolev_norm(const HermitianCoeffs& c, double s);

/// l^p norm of <n>^s c_n over the stored modes; p = kInfinity is the supremum.
double fl_norm(const HermitianCoeffs& c, double s, double p);

/// Norm of (u0, u1) in FL^{s,p} x FL^{s-1,p}.
double pair_fl_norm(const DataPair& pair, double s, double p);

/// s(d, alpha) = alpha + 1 - d/2.
double regularity_threshold(int d, double alpha);

/// p_{d,j,sigma} = 2dj / (dj + 2 sigma); requires dj + 2 sigma > 0.
double p_critical(int d, int j, double sigma);

/// Which sufficient condition for convergence of the truncated Wick powers holds.
enum class AdmissibleBranch {
    None,
    /// sigma >= -d/2 and 2 < p < p_{d,j,sigma}
    ModerateSigma,
    /// sigma <= -d/2 and 2 < p <= 2j/(j-1)
    VeryNegativeSigma,
};

struct Admissibility {
    bool admissible = false;
    AdmissibleBranch branch = AdmissibleBranch::None;
    double p_upper = 0.0;
    std::string reason;
};

std::string to_string(AdmissibleBranch branch);

/// Requires j >= 2 and s < 0.
Admissibility admissible(int d, int j, double s, double sigma, double p);

enum class TailClass { Finite, Divergent };

std::string to_string(TailClass c);

/// Membership of coefficients |c_n| = <n>^{-decay} on Z^d in FL^{s,p}:
/// finite iff (decay - s) p > d, or decay >= s when p is infinite.
TailClass power_law_fl_class(int d, double decay, double s, double p);

/// Tail sums and Fourier-Lebesgue norms of a coefficient set.
struct RegularityReport {
    /// s -> [(K, sum_{|n| > K} <n>^{2s} |c_n|^2)]
    std::map<double, std::vector<std::pair<int, double>>> sobolev_tail;
    /// (s, p) -> FL^{s,p} norm over the stored modes
    std::map<std::pair<double, double>, double> fl_norms;
    /// (s, p) -> closed-form classification, filled for power-law families
    std::map<std::pair<double, double>, TailClass> fl_class;
};

/// `power_law_decay`, when given, declares |c_n| = <n>^{-decay} so the
/// infinite-lattice FL membership can be classified in closed form.
RegularityReport regularity_report(const HermitianCoeffs& c, const std::vector<double>& sobolev_orders,
                                   const std::vector<int>& tail_cutoffs,
                                   const std::vector<std::pair<double, double>>& fl_orders,
                                   std::optional<double> power_law_decay = std::nullopt);

} // namespace wickfield
