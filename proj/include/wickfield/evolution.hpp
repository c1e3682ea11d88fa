#pragma once

#include "wickfield/linear_waves.hpp"
#include "wickfield/wick.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace wickfield {

/// (v, dv/dt) at a time; both Hermitian on the same lattice.
struct WaveState {
    double time = 0.0;
    HermitianCoeffs v;
    HermitianCoeffs v_t;

    WaveState(double t, HermitianCoeffs position, HermitianCoeffs velocity);
    static WaveState zero(const LatticePtr& lattice, double t = 0.0);
};

/// Exact free evolution of (v, v_t) under v_tt + (1 - Delta) v = 0.
WaveState propagate_linear(const WaveState& s, double h);

enum class QuadratureRule { Trapezoid, Simpson };

struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::Simpson;
    /// Number of subintervals (even for Simpson).
    int intervals = 64;
    /// When set, a Richardson estimate against intervals/2 must stay below it.
    std::optional<double> tolerance;
};

using SourceProvider = std::function<HermitianCoeffs(double)>;

/// I(F)(t) = int_0^t sin((t - t')<nabla>)/<nabla> F(t') dt' by composite quadrature.
FieldSnapshot duhamel(const SourceProvider& F, double t, const LatticePtr& lattice,
                      const QuadratureConfig& quadrature = {});

/// Precomputed :z^j:(t) grids, j = 0..k, on the solver time grid.
class WickSource {
public:
    /// z = 0: :z^0: = 1 and every higher power vanishes, at all times.
    static WickSource zero(const LatticePtr& lattice, int k);

    /// :z_N^j:(t_i) for z the randomized linear solution of `pair`, with the
    /// exact variance of the pair's Gaussian profile.
    static WickSource from_linear_solution(const DataPair& pair, const RandomizedMultipliers& m, int radius, int k,
                                           const std::vector<double>& times);

    /// Builds a source from explicit per-time grids (grids[i][j]).
    WickSource(LatticePtr lattice, int k, std::vector<double> times, std::vector<std::vector<RealGrid>> grids);

    int degree() const noexcept { return k_; }
    const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
    /// Grids at solver step `step`, which must sit at time t.
    const std::vector<RealGrid>& at(std::size_t step, double t) const;

private:
    LatticePtr lattice_;
    int k_;
    std::vector<double> times_;
    std::vector<std::vector<RealGrid>> grids_;
    bool constant_ = false;
};

struct SolverConfig {
    int k = 3;
    double dt = 1e-3;
    double horizon = 1.0;
    double picard_tol = 1e-13;
    int max_iter = 60;
    /// Stop with a blow-up flag once the H^1 x L^2 norm exceeds this.
    double blowup_ceiling = 1e8;
    /// Keep every n-th state (the initial and final states are always kept).
    int record_every = 1;
    std::shared_ptr<const WickSource> wick_source;
};

struct SolveResult {
    std::vector<WaveState> trajectory;
    /// Per step: Picard iterations and the final fixed-point residual.
    std::vector<int> iterations;
    std::vector<double> residuals;
    /// Energy of the unrenormalized equation at each recorded state.
    std::vector<double> energy;
    bool blow_up = false;
    double final_time = 0.0;
};

/// v_tt + (1 - Delta) v + N_k(v + z) = 0 by exact linear propagation plus a
/// Picard-iterated Duhamel correction with F linear over each step.
SolveResult solve_wick_nlw(const WaveState& init, const SolverConfig& cfg);

/// 1/2 ||v_t||^2 + 1/2 ||v||_{H^1}^2 + 1/(k+1) mean(v^{k+1}), normalized measure.
double wave_energy(const WaveState& s, int k);

/// (||v||_{H^1}^2 + ||v_t||^2)^{1/2}
double energy_norm(const WaveState& s);

} // namespace wickfield
