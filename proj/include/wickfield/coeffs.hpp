#pragma once

#include "wickfield/lattice.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace wickfield {

using Complex = std::complex<double>;

/// Fourier coefficients of a real field on a truncated lattice.
///
/// Invariant: c(-n) == conj(c(n)) exactly and c(0) is real. Every mutator
/// writes both members of a conjugate pair.
class HermitianCoeffs {
public:
    explicit HermitianCoeffs(LatticePtr lattice);

    /// Takes ownership of `values`; throws SymmetryViolation when the
    /// conjugate defect exceeds `tolerance` times the largest magnitude.
    HermitianCoeffs(LatticePtr lattice, std::vector<Complex> values, double tolerance = 1e-12);

    /// Builds coefficients by averaging each value with the conjugate of its
    /// partner, so the result is Hermitian whatever the input.
    static HermitianCoeffs symmetrized(LatticePtr lattice, std::vector<Complex> values);

    /// Evaluates f on one member of each conjugate pair and mirrors it.
    static HermitianCoeffs from_function(LatticePtr lattice,
                                         const std::function<Complex(std::span<const int>)>& f);

    const FrequencyLattice& lattice() const noexcept { return *lattice_; }
    const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const Complex> values() const noexcept { return values_; }

    Complex operator[](std::size_t index) const { return values_[index]; }
    /// Coefficient at frequency n, zero when n is not stored.
    Complex at(std::span<const int> n) const;

    /// Sets c(n) and c(-n) = conj(value); the zero mode keeps the real part.
    void set(std::size_t index, Complex value);

    /// max |c(n) - conj(c(-n))| plus |Im c(0)|.
    double symmetry_defect() const;

    HermitianCoeffs& operator+=(const HermitianCoeffs& other);
    HermitianCoeffs& operator-=(const HermitianCoeffs& other);
    HermitianCoeffs& operator*=(double factor);

private:
    LatticePtr lattice_;
    std::vector<Complex> values_;
};

HermitianCoeffs operator+(HermitianCoeffs a, const HermitianCoeffs& b);
HermitianCoeffs operator-(HermitianCoeffs a, const HermitianCoeffs& b);
HermitianCoeffs operator*(double factor, HermitianCoeffs a);

/// Frequency projection P_N: zero every mode outside the truncation of radius N.
HermitianCoeffs project(const HermitianCoeffs& c, int radius);

/// Copies the modes shared with `target`; modes absent from `c` become zero.
HermitianCoeffs resample(const HermitianCoeffs& c, const LatticePtr& target);

/// Deterministic initial-data pair (u0, u1); both live on the same lattice.
struct DataPair {
    DataPair(HermitianCoeffs u0_, HermitianCoeffs u1_);

    HermitianCoeffs u0;
    HermitianCoeffs u1;

    const LatticePtr& lattice_ptr() const noexcept { return u0.lattice_ptr(); }
    const FrequencyLattice& lattice() const noexcept { return u0.lattice(); }
};

/// u1 = <nabla> u0, the velocity that makes the variance profile time independent.
HermitianCoeffs bracket_derivative(const HermitianCoeffs& u0);

} // namespace wickfield
