#include "wickfield/transform.hpp"

#include "wickfield/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace wickfield {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, int size, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, size, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        std::vector<int> dims(static_cast<std::size_t>(dim), size);
        std::size_t total = 1;
        for (int d = 0; d < dim; ++d)
            total *= static_cast<std::size_t>(size);
        auto* scratch = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(dim, dims.data(), scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (!plan)
            throw NumericFailure("FFTW could not create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

double RealGrid::mean() const
{
    double s = 0.0;
    for (double v : values)
        s += v;
    return values.empty() ? 0.0 : s / double(values.size());
}

double RealGrid::mean_square() const
{
    double s = 0.0;
    for (double v : values)
        s += v * v;
    return values.empty() ? 0.0 : s / double(values.size());
}

void fft_inplace(std::vector<Complex>& data, int dim, int size, int sign)
{
    fftw_plan plan = plan_cache().get(dim, size, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

RealGrid to_physical(const HermitianCoeffs& c, double tolerance)
{
    const auto& lat = c.lattice();
    std::vector<Complex> work(lat.grid_points());
    double mass = 0.0;
    for (std::size_t k = 0; k < lat.size(); ++k) {
        work[lat.grid_offset(k)] = c[k];
        mass += std::abs(c[k]);
    }
    fft_inplace(work, lat.dim(), lat.grid_size(), +1);

    RealGrid grid{lat.dim(), lat.grid_size(), std::vector<double>(work.size())};
    double residue = 0.0;
    for (std::size_t m = 0; m < work.size(); ++m) {
        grid.values[m] = work[m].real();
        residue = std::max(residue, std::abs(work[m].imag()));
    }
    if (residue > tolerance * std::max(mass, 1e-300))
        throw SymmetryViolation("physical field has imaginary residue " + std::to_string(residue));
    return grid;
}

HermitianCoeffs to_spectral(const RealGrid& grid, const LatticePtr& lattice)
{
    const auto& lat = *lattice;
    if (grid.dim != lat.dim() || grid.size != lat.grid_size())
        throw InvalidArgument("grid shape does not match the lattice grid");
    std::vector<Complex> work(grid.values.begin(), grid.values.end());
    fft_inplace(work, grid.dim, grid.size, -1);
    const double scale = 1.0 / double(work.size());

    HermitianCoeffs out(lattice);
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k))
            continue;
        const Complex a = work[lat.grid_offset(k)];
        const Complex b = work[lat.grid_offset(lat.conjugate_index(k))];
        out.set(k, 0.5 * scale * (a + std::conj(b)));
    }
    return out;
}

} // namespace wickfield
