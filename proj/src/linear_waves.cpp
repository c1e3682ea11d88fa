#include "wickfield/linear_waves.hpp"

#include "wickfield/error.hpp"

#include <cmath>
#include <memory>

namespace wickfield {

std::string to_string(ProfileKind kind)
{
    switch (kind) {
    case ProfileKind::FromDataPair: return "from-data-pair";
    case ProfileKind::PowerLaw: return "power-law";
    case ProfileKind::WaveConvolution: return "wave-convolution";
    case ProfileKind::HeatConvolution: return "heat-convolution";
    case ProfileKind::Custom: break;
    }
    return "custom";
}

GammaProfile::GammaProfile(LatticePtr lattice, ProfileKind kind, Evaluator evaluator,
                           std::optional<CoordinateFactor> factor, double alpha)
    : lattice_(std::move(lattice)), kind_(kind), evaluator_(std::move(evaluator)), factor_(std::move(factor)),
      alpha_(alpha)
{
    if (!lattice_ || !evaluator_)
        throw InvalidArgument("a variance profile needs a lattice and an evaluator");
}

std::vector<double> GammaProfile::tabulate(int radius, double t) const
{
    const auto& lat = *lattice_;
    if (radius > lat.cutoff())
        throw InvalidArgument("truncation radius " + std::to_string(radius) + " exceeds the lattice cutoff " +
                              std::to_string(lat.cutoff()));
    std::vector<double> out(lat.size(), 0.0);
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k) || !lat.within(k, radius))
            continue;
        const double g = evaluator_(lat.frequency(k), t);
        out[k] = g;
        out[lat.conjugate_index(k)] = g;
    }
    return out;
}

GammaProfile gamma_from_pair(const DataPair& pair)
{
    auto data = std::make_shared<const DataPair>(pair);
    auto eval = [data](std::span<const int> n, double t) {
        const auto k = data->lattice().index_of(n);
        if (!k)
            return 0.0;
        const double w = data->lattice().bracket(*k);
        const double c = std::cos(t * w);
        const double s = std::sin(t * w);
        return c * c * std::norm(data->u0[*k]) + s * s / (w * w) * std::norm(data->u1[*k]);
    };
    return {pair.lattice_ptr(), ProfileKind::FromDataPair, eval};
}

GammaProfile gamma_power_law(const LatticePtr& lattice, double alpha)
{
    auto eval = [alpha](std::span<const int> n, double) { return std::pow(bracket(n), -2.0 * (1.0 + alpha)); };
    return {lattice, ProfileKind::PowerLaw, eval, std::nullopt, alpha};
}

DataPair power_law_pair(const LatticePtr& lattice, double alpha)
{
    auto u0 = HermitianCoeffs::from_function(lattice, [alpha](std::span<const int> n) {
        return Complex(std::pow(bracket(n), -1.0 - alpha), 0.0);
    });
    auto u1 = HermitianCoeffs::from_function(lattice, [alpha](std::span<const int> n) {
        return Complex(std::pow(bracket(n), -alpha), 0.0);
    });
    return {std::move(u0), std::move(u1)};
}

FieldSnapshot::FieldSnapshot(double time, HermitianCoeffs coeffs) : time_(time), coeffs_(std::move(coeffs))
{
    if (!std::isfinite(time))
        throw InvalidArgument("snapshot time must be finite");
}

const RealGrid& FieldSnapshot::grid() const
{
    if (!grid_)
        grid_ = to_physical(coeffs_);
    return *grid_;
}

FieldSnapshot random_linear_solution(const DataPair& pair, const RandomizedMultipliers& m, double t)
{
    return {t, linear_solution(randomize_pair(pair, m), t)};
}

HermitianCoeffs linear_solution(const DataPair& pair, double t)
{
    HermitianCoeffs out(pair.lattice_ptr());
    const auto& lat = pair.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k))
            continue;
        const double w = lat.bracket(k);
        out.set(k, std::cos(t * w) * pair.u0[k] + std::sin(t * w) / w * pair.u1[k]);
    }
    return out;
}

double truncated_variance(const GammaProfile& profile, int radius, double t)
{
    double sum = 0.0;
    for (double g : profile.tabulate(radius, t))
        sum += g;
    return sum;
}

} // namespace wickfield
