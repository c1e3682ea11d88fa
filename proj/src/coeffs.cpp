#include "wickfield/coeffs.hpp"

#include "wickfield/error.hpp"

#include <algorithm>
#include <cmath>

namespace wickfield {

HermitianCoeffs::HermitianCoeffs(LatticePtr lattice)
    : lattice_(std::move(lattice)), values_(lattice_ ? lattice_->size() : 0)
{
    if (!lattice_)
        throw InvalidArgument("coefficients need a lattice");
}

HermitianCoeffs::HermitianCoeffs(LatticePtr lattice, std::vector<Complex> values, double tolerance)
    : lattice_(std::move(lattice)), values_(std::move(values))
{
    if (!lattice_)
        throw InvalidArgument("coefficients need a lattice");
    if (values_.size() != lattice_->size())
        throw InvalidArgument("coefficient count does not match lattice size");
    double scale = 0.0;
    for (const auto& v : values_)
        scale = std::max(scale, std::abs(v));
    const double defect = symmetry_defect();
    if (defect > tolerance * std::max(scale, 1e-300))
        throw SymmetryViolation("coefficients violate c(-n) = conj(c(n)) (defect " + std::to_string(defect) + ")");
    // snap to exact symmetry
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (lattice_->is_canonical(k))
            set(k, values_[k]);
}

HermitianCoeffs HermitianCoeffs::symmetrized(LatticePtr lattice, std::vector<Complex> values)
{
    HermitianCoeffs out(std::move(lattice));
    if (values.size() != out.size())
        throw InvalidArgument("coefficient count does not match lattice size");
    const auto& lat = out.lattice();
    for (std::size_t k = 0; k < values.size(); ++k)
        if (lat.is_canonical(k))
            out.set(k, 0.5 * (values[k] + std::conj(values[lat.conjugate_index(k)])));
    return out;
}

HermitianCoeffs HermitianCoeffs::from_function(LatticePtr lattice,
                                               const std::function<Complex(std::span<const int>)>& f)
{
    HermitianCoeffs out(std::move(lattice));
    const auto& lat = out.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k)
        if (lat.is_canonical(k))
            out.set(k, f(lat.frequency(k)));
    return out;
}

Complex HermitianCoeffs::at(std::span<const int> n) const
{
    const auto k = lattice_->index_of(n);
    return k ? values_[*k] : Complex{};
}

void HermitianCoeffs::set(std::size_t index, Complex value)
{
    const std::size_t partner = lattice_->conjugate_index(index);
    if (partner == index) {
        values_[index] = Complex(value.real(), 0.0);
        return;
    }
    values_[index] = value;
    values_[partner] = std::conj(value);
}

double HermitianCoeffs::symmetry_defect() const
{
    double defect = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const std::size_t partner = lattice_->conjugate_index(k);
        defect = std::max(defect, std::abs(values_[k] - std::conj(values_[partner])));
    }
    return defect;
}

namespace {

void require_same_lattice(const HermitianCoeffs& a, const HermitianCoeffs& b)
{
    if (!same_lattice(a.lattice(), b.lattice()))
        throw InvalidArgument("coefficients live on different lattices");
}

} // namespace

HermitianCoeffs& HermitianCoeffs::operator+=(const HermitianCoeffs& other)
{
    require_same_lattice(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += other.values_[k];
    return *this;
}

HermitianCoeffs& HermitianCoeffs::operator-=(const HermitianCoeffs& other)
{
    require_same_lattice(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] -= other.values_[k];
    return *this;
}

HermitianCoeffs& HermitianCoeffs::operator*=(double factor)
{
    for (auto& v : values_)
        v *= factor;
    return *this;
}

HermitianCoeffs operator+(HermitianCoeffs a, const HermitianCoeffs& b) { return a += b; }
HermitianCoeffs operator-(HermitianCoeffs a, const HermitianCoeffs& b) { return a -= b; }
HermitianCoeffs operator*(double factor, HermitianCoeffs a) { return a *= factor; }

HermitianCoeffs project(const HermitianCoeffs& c, int radius)
{
    HermitianCoeffs out(c.lattice_ptr());
    const auto& lat = c.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k)
        if (lat.is_canonical(k) && lat.within(k, radius))
            out.set(k, c[k]);
    return out;
}

HermitianCoeffs resample(const HermitianCoeffs& c, const LatticePtr& target)
{
    HermitianCoeffs out(target);
    for (std::size_t k = 0; k < target->size(); ++k)
        if (target->is_canonical(k))
            out.set(k, c.at(target->frequency(k)));
    return out;
}

DataPair::DataPair(HermitianCoeffs u0_, HermitianCoeffs u1_) : u0(std::move(u0_)), u1(std::move(u1_))
{
    if (!same_lattice(u0.lattice(), u1.lattice()))
        throw InvalidArgument("u0 and u1 must share a lattice");
}

HermitianCoeffs bracket_derivative(const HermitianCoeffs& u0)
{
    HermitianCoeffs out(u0.lattice_ptr());
    const auto& lat = u0.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k)
        if (lat.is_canonical(k))
            out.set(k, lat.bracket(k) * u0[k]);
    return out;
}

} // namespace wickfield
