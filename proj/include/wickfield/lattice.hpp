#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wickfield {

enum class TruncationShape { EuclideanBall, Cube };

std::string to_string(TruncationShape shape);
TruncationShape parse_truncation_shape(const std::string& name);

/// Default memory ceiling for lattice enumeration and dense spectral work.
inline constexpr std::size_t kDefaultBudgetBytes = std::size_t{2} << 30;

/// Smallest integer >= n whose only prime factors are 2, 3 and 5.
int next_fft_size(int n);

/// (1 + |n|^2)^(1/2)
double bracket(std::span<const int> n);

/// Frequencies of Z^d truncated to |n| <= N (ball) or max |n_i| <= N (cube).
///
/// Frequencies are enumerated once, in lexicographic box order with the first
/// axis varying fastest, and are closed under n -> -n. The physical grid has
/// `grid_size()` points per axis; it is large enough that products of
/// `oversample()` band-limited factors dealias exactly on the stored modes.
/// Instances are immutable and safe to share between threads.
class FrequencyLattice {
public:
    FrequencyLattice(int dim, int cutoff, TruncationShape shape, int oversample,
                     std::size_t budget_bytes = kDefaultBudgetBytes);

    int dim() const noexcept { return dim_; }
    int cutoff() const noexcept { return cutoff_; }
    TruncationShape shape() const noexcept { return shape_; }
    int oversample() const noexcept { return oversample_; }
    int grid_size() const noexcept { return grid_size_; }
    std::size_t grid_points() const noexcept { return grid_points_; }
    std::size_t size() const noexcept { return norm_sq_.size(); }

    std::span<const int> frequency(std::size_t index) const;
    std::optional<std::size_t> index_of(std::span<const int> n) const;
    std::size_t conjugate_index(std::size_t index) const { return conjugate_[index]; }
    std::size_t zero_index() const noexcept { return zero_index_; }

    /// |n|^2 of a stored frequency.
    std::int64_t norm_sq(std::size_t index) const { return norm_sq_[index]; }
    /// <n> of a stored frequency.
    double bracket(std::size_t index) const { return bracket_[index]; }

    /// Whether the frequency at `index` lies in the truncation of radius N.
    bool within(std::size_t index, int radius) const;
    /// Truncation predicate for an arbitrary frequency.
    bool admits(std::span<const int> n, int radius) const;

    /// True for exactly one member of each pair {n, -n} (the one whose last
    /// nonzero component is negative) and for n = 0. Independent of the cutoff.
    bool is_canonical(std::size_t index) const { return index <= conjugate_[index]; }

    /// Flat physical-grid offset of the frequency n reduced modulo grid_size().
    std::size_t grid_offset(std::size_t index) const { return grid_offset_[index]; }

private:
    int dim_;
    int cutoff_;
    TruncationShape shape_;
    int oversample_;
    int grid_size_;
    std::size_t grid_points_;
    std::size_t zero_index_ = 0;
    std::vector<int> coords_;
    std::vector<std::int64_t> box_to_index_;
    std::vector<std::size_t> conjugate_;
    std::vector<std::int64_t> norm_sq_;
    std::vector<double> bracket_;
    std::vector<std::size_t> grid_offset_;
};

using LatticePtr = std::shared_ptr<const FrequencyLattice>;

/// Same object, or same (dim, cutoff, shape, oversample).
bool same_lattice(const FrequencyLattice& a, const FrequencyLattice& b);

LatticePtr build_lattice(int dim, int cutoff, TruncationShape shape = TruncationShape::EuclideanBall,
                         int oversample = 1, std::size_t budget_bytes = kDefaultBudgetBytes);

} // namespace wickfield
