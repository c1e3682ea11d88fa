#include "wickfield/lattice.hpp"

#include "wickfield/error.hpp"

#include <cmath>
#include <limits>

namespace wickfield {

std::string to_string(TruncationShape shape)
{
    return shape == TruncationShape::Cube ? "cube" : "ball";
}

TruncationShape parse_truncation_shape(const std::string& name)
{
    if (name == "ball" || name == "EuclideanBall")
        return TruncationShape::EuclideanBall;
    if (name == "cube" || name == "Cube")
        return TruncationShape::Cube;
    throw InvalidArgument("unknown truncation shape '" + name + "'");
}

int next_fft_size(int n)
{
    if (n <= 1)
        return 1;
    for (int m = n;; ++m) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

double bracket(std::span<const int> n)
{
    double s = 1.0;
    for (int c : n)
        s += double(c) * double(c);
    return std::sqrt(s);
}

FrequencyLattice::FrequencyLattice(int dim, int cutoff, TruncationShape shape, int oversample,
                                   std::size_t budget_bytes)
    : dim_(dim), cutoff_(cutoff), shape_(shape), oversample_(oversample)
{
    if (dim < 1)
        throw InvalidArgument("lattice dimension must be >= 1");
    if (cutoff < 0)
        throw InvalidArgument("lattice cutoff must be >= 0");
    if (oversample < 1)
        throw InvalidArgument("oversample factor must be >= 1");

    const double side = 2.0 * cutoff + 1.0;
    grid_size_ = next_fft_size(oversample * (2 * cutoff + 1));
    const double box = std::pow(side, dim);
    const double grid = std::pow(double(grid_size_), dim);
    // index map + per-mode tables + two complex work arrays on the grid
    const double bytes = box * 8.0 + box * (4.0 * dim + 40.0) + grid * 32.0;
    if (!(bytes <= double(budget_bytes)))
        throw BudgetExceeded("lattice (dim=" + std::to_string(dim) + ", cutoff=" + std::to_string(cutoff) +
                             ", oversample=" + std::to_string(oversample) + ") needs ~" +
                             std::to_string(static_cast<long long>(bytes / (1 << 20))) +
                             " MiB, budget is " + std::to_string(budget_bytes >> 20) + " MiB");
    grid_points_ = static_cast<std::size_t>(grid);

    const auto box_count = static_cast<std::size_t>(box);
    const auto w = static_cast<std::size_t>(2 * cutoff + 1);
    box_to_index_.assign(box_count, -1);

    std::vector<int> n(dim);
    for (std::size_t b = 0; b < box_count; ++b) {
        std::size_t rest = b;
        for (int i = 0; i < dim; ++i) {
            n[i] = static_cast<int>(rest % w) - cutoff;
            rest /= w;
        }
        if (!admits(n, cutoff))
            continue;
        const std::size_t index = norm_sq_.size();
        box_to_index_[b] = static_cast<std::int64_t>(index);
        std::int64_t nsq = 0;
        std::size_t offset = 0;
        std::size_t stride = 1;
        for (int i = 0; i < dim; ++i) {
            coords_.push_back(n[i]);
            nsq += std::int64_t(n[i]) * n[i];
            const int wrapped = ((n[i] % grid_size_) + grid_size_) % grid_size_;
            offset += stride * static_cast<std::size_t>(wrapped);
            stride *= static_cast<std::size_t>(grid_size_);
        }
        norm_sq_.push_back(nsq);
        bracket_.push_back(std::sqrt(1.0 + double(nsq)));
        grid_offset_.push_back(offset);
        if (nsq == 0)
            zero_index_ = index;
    }

    conjugate_.resize(norm_sq_.size());
    for (std::size_t k = 0; k < norm_sq_.size(); ++k) {
        // box order is symmetric: the box index of -n is box_count - 1 - b
        std::size_t b = 0;
        std::size_t stride = 1;
        for (int i = 0; i < dim; ++i) {
            b += stride * static_cast<std::size_t>(coords_[k * dim + i] + cutoff);
            stride *= w;
        }
        conjugate_[k] = static_cast<std::size_t>(box_to_index_[box_count - 1 - b]);
    }
}

std::span<const int> FrequencyLattice::frequency(std::size_t index) const
{
    return {coords_.data() + index * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::optional<std::size_t> FrequencyLattice::index_of(std::span<const int> n) const
{
    if (static_cast<int>(n.size()) != dim_)
        return std::nullopt;
    const auto w = static_cast<std::size_t>(2 * cutoff_ + 1);
    std::size_t b = 0;
    std::size_t stride = 1;
    for (int i = 0; i < dim_; ++i) {
        if (n[i] < -cutoff_ || n[i] > cutoff_)
            return std::nullopt;
        b += stride * static_cast<std::size_t>(n[i] + cutoff_);
        stride *= w;
    }
    const auto k = box_to_index_[b];
    if (k < 0)
        return std::nullopt;
    return static_cast<std::size_t>(k);
}

bool FrequencyLattice::within(std::size_t index, int radius) const
{
    if (shape_ == TruncationShape::EuclideanBall)
        return norm_sq_[index] <= std::int64_t(radius) * radius;
    return admits(frequency(index), radius);
}

bool FrequencyLattice::admits(std::span<const int> n, int radius) const
{
    if (shape_ == TruncationShape::EuclideanBall) {
        std::int64_t s = 0;
        for (int c : n)
            s += std::int64_t(c) * c;
        return s <= std::int64_t(radius) * radius;
    }
    for (int c : n)
        if (c < -radius || c > radius)
            return false;
    return true;
}

bool same_lattice(const FrequencyLattice& a, const FrequencyLattice& b)
{
    return &a == &b || (a.dim() == b.dim() && a.cutoff() == b.cutoff() && a.shape() == b.shape() &&
                        a.oversample() == b.oversample());
}

LatticePtr build_lattice(int dim, int cutoff, TruncationShape shape, int oversample, std::size_t budget_bytes)
{
    return std::make_shared<const FrequencyLattice>(dim, cutoff, shape, oversample, budget_bytes);
}

} // namespace wickfield
