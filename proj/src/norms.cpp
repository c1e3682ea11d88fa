#include "wickfield/norms.hpp"

#include "wickfield/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace wickfield {

double sobolev_norm(const HermitianCoeffs& c, double s)
{
    const auto& lat = c.lattice();
    double sum = 0.0;
    for (std::size_t k = 0; k < lat.size(); ++k)
        sum += std::pow(lat.bracket(k), 2.0 * s) * std::norm(c[k]);
    return std::sqrt(sum);
}

double fl_norm(const HermitianCoeffs& c, double s, double p)
{
    if (!(p >= 1.0))
        throw InvalidArgument("Fourier-Lebesgue exponent p must be >= 1");
    const auto& lat = c.lattice();
    std::vector<double> w(lat.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < lat.size(); ++k) {
        w[k] = std::pow(lat.bracket(k), s) * std::abs(c[k]);
        peak = std::max(peak, w[k]);
    }
    if (std::isinf(p) || peak == 0.0)
        return peak;
    double sum = 0.0;
    for (double x : w)
        sum += std::pow(x / peak, p);
    return peak * std::pow(sum, 1.0 / p);
}

double pair_fl_norm(const DataPair& pair, double s, double p)
{
    const double a = fl_norm(pair.u0, s, p);
    const double b = fl_norm(pair.u1, s - 1.0, p);
    if (std::isinf(p))
        return std::max(a, b);
    const double peak = std::max(a, b);
    if (peak == 0.0)
        return 0.0;
    return peak * std::pow(std::pow(a / peak, p) + std::pow(b / peak, p), 1.0 / p);
}

double regularity_threshold(int d, double alpha)
{
    if (d < 1)
        throw InvalidArgument("dimension must be >= 1");
    return alpha + 1.0 - 0.5 * d;
}

double p_critical(int d, int j, double sigma)
{
    if (d < 1 || j < 2)
        throw InvalidArgument("p_critical needs d >= 1 and j >= 2");
    const double denom = double(d) * j + 2.0 * sigma;
    if (!(denom > 0.0))
        throw InvalidArgument("p_critical undefined for dj + 2 sigma <= 0; use the sigma <= -d/2 branch");
    return 2.0 * d * j / denom;
}

std::string to_string(AdmissibleBranch branch)
{
    switch (branch) {
    case AdmissibleBranch::ModerateSigma: return "moderate-sigma";
    case AdmissibleBranch::VeryNegativeSigma: return "very-negative-sigma";
    case AdmissibleBranch::None: break;
    }
    return "none";
}

Admissibility admissible(int d, int j, double s, double sigma, double p)
{
    if (j < 2)
        throw InvalidArgument("admissibility needs j >= 2");
    if (!(s < 0.0))
        throw InvalidArgument("admissibility is stated for s < 0");

    Admissibility out;
    if (!(sigma <= j * s)) {
        out.reason = "sigma > j*s";
        return out;
    }
    if (!(p > 2.0)) {
        out.reason = "p must exceed 2";
        return out;
    }
    const double half_d = 0.5 * d;
    if (sigma >= -half_d) {
        const double pc = p_critical(d, j, sigma);
        if (p < pc) {
            out = {true, AdmissibleBranch::ModerateSigma, pc, "2 < p < p_{d,j,sigma}"};
            return out;
        }
        out.p_upper = pc;
    }
    if (sigma <= -half_d) {
        const double pmax = 2.0 * j / (j - 1.0);
        if (p <= pmax) {
            out = {true, AdmissibleBranch::VeryNegativeSigma, pmax, "2 < p <= 2j/(j-1)"};
            return out;
        }
        out.p_upper = pmax;
    }
    out.reason = "p above the admissible range";
    return out;
}

std::string to_string(TailClass c)
{
    return c == TailClass::Finite ? "finite" : "divergent";
}

TailClass power_law_fl_class(int d, double decay, double s, double p)
{
    if (std::isinf(p))
        return decay >= s ? TailClass::Finite : TailClass::Divergent;
    return (decay - s) * p > d ? TailClass::Finite : TailClass::Divergent;
}

RegularityReport regularity_report(const HermitianCoeffs& c, const std::vector<double>& sobolev_orders,
                                   const std::vector<int>& tail_cutoffs,
                                   const std::vector<std::pair<double, double>>& fl_orders,
                                   std::optional<double> power_law_decay)
{
    RegularityReport report;
    const auto& lat = c.lattice();
    for (double s : sobolev_orders) {
        auto& tails = report.sobolev_tail[s];
        for (int K : tail_cutoffs) {
            double sum = 0.0;
            for (std::size_t k = 0; k < lat.size(); ++k)
                if (!lat.within(k, K))
                    sum += std::pow(lat.bracket(k), 2.0 * s) * std::norm(c[k]);
            tails.emplace_back(K, sum);
        }
    }
    for (const auto& [s, p] : fl_orders) {
        report.fl_norms[{s, p}] = fl_norm(c, s, p);
        if (power_law_decay)
            report.fl_class[{s, p}] = power_law_fl_class(lat.dim(), *power_law_decay, s, p);
    }
    return report;
}

} // namespace wickfield
