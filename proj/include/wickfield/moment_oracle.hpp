#pragma once

#include "wickfield/linear_waves.hpp"
#include "wickfield/norms.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wickfield {

enum class MomentMethod { Auto, DenseFFT, SparseEnumeration, ProductStructure };

std::string to_string(MomentMethod m);
MomentMethod parse_moment_method(const std::string& name);

struct MomentOptions {
    MomentMethod method = MomentMethod::Auto;
    std::size_t budget_bytes = kDefaultBudgetBytes;
    /// Auto picks sparse enumeration while |support|^j stays below this.
    std::size_t sparse_work_limit = 20'000'000;
};

/// Exact second moments E|F(:z_N^j:(t))(n)|^2 of a truncated Wick power.
///
/// per_mode vanishes outside |n| <= jN; all aggregates sum over that whole
/// support, so they carry no truncation error.
class MomentReport {
public:
    int dim = 0;
    int degree = 0;
    int cutoff = 0;
    double time = 0.0;
    MomentMethod method = MomentMethod::Auto;
    /// sigma -> E||:z_N^j:(t)||^2_{H^sigma}, for the orders requested so far.
    std::map<double, double> hsigma;

    double per_mode(std::span<const std::int64_t> n) const;
    double per_mode(std::span<const int> n) const;

    /// Computes (and records in `hsigma`) the H^sigma aggregate.
    double h_sigma(double sigma);
    double h_sigma(double sigma) const;

    /// Number of frequencies where per_mode may be nonzero.
    std::size_t support_size() const;

    /// Visits every frequency of the support with its value, in a fixed order.
    void for_each(const std::function<void(std::span<const std::int64_t>, double)>& visit) const;

    /// Writes one "n_1 .. n_d value" row per mode, preceded by a header row.
    void write_csv(std::ostream& os) const;

    // Storage; exactly one representation is populated.
    struct Dense {
        std::int64_t radius = 0;
        std::vector<double> box; // (2R+1)^d, axis 0 fastest
    };
    struct Sparse {
        std::int64_t base = 0;
        std::vector<std::int64_t> keys;
        std::vector<double> values;
    };
    struct Product {
        // per_mode(n) = scale * prod_i factor(n_i)
        double scale = 1.0;
        std::vector<std::int64_t> keys;
        std::vector<double> values;
    };
    std::optional<Dense> dense;
    std::optional<Sparse> sparse;
    std::optional<Product> product;

private:
    double compute_h_sigma(double sigma) const;
};

/// per_mode[n] = j! (gamma_N * ... * gamma_N)(n), gamma truncated to radius N.
MomentReport second_moment_per_mode(const GammaProfile& profile, int radius, int j, double t,
                                    const MomentOptions& options = {});

/// E<:z_N^j:(t), :z_M^j:(t)>_{H^sigma}: the covariance lives on min(N, M).
double cross_moment(const GammaProfile& profile, int n_cutoff, int m_cutoff, int j, double t, double sigma,
                    const MomentOptions& options = {});

/// E||:z_N^j:(t) - :z_M^j:(t)||^2_{H^sigma}, clamped at 0.
double tail_distance(const GammaProfile& profile, int n_cutoff, int m_cutoff, int j, double t, double sigma,
                     const MomentOptions& options = {});

struct FlBoundReport {
    std::vector<int> cutoffs;
    std::vector<double> sequence;
    double supremum = 0.0;
    double data_norm = 0.0;     // ||(u0,u1)||_{FL^{0,p}}
    double ratio = 0.0;         // supremum / data_norm^{2j}
    std::vector<double> increment_ratios;
    /// Successive increments shrink by at least a factor 2 (or vanish).
    bool plateau = false;
    std::optional<Admissibility> admissibility;
};

/// H^sigma moments of :z_N^j:(t) along the given cutoffs for the pair's
/// Gaussian profile. When `s` is given the (d, j, s, sigma, p) admissibility
/// verdict is attached; the scan itself runs regardless.
FlBoundReport fl_bound_check(const DataPair& pair, int j, double sigma, double p, const std::vector<int>& cutoffs,
                             std::optional<double> s = std::nullopt, double t = 0.0,
                             const MomentOptions& options = {});


double factorial(int j);

} // namespace wickfield
