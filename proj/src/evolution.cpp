#include "wickfield/evolution.hpp"

#include "wickfield/error.hpp"

#include <algorithm>
#include <cmath>

namespace wickfield {

namespace {

// (1 - cos x)/x^2, (sin x - x cos x)/x^3 and sin x / x, by series near 0
double one_minus_cos_over_sq(double x)
{
    if (std::abs(x) < 0.5) {
        double term = 0.5, sum = 0.0;
        const double x2 = x * x;
        for (int k = 1; k <= 10; ++k) {
            sum += term;
            term *= -x2 / ((2.0 * k + 1) * (2.0 * k + 2));
        }
        return sum;
    }
    return (1.0 - std::cos(x)) / (x * x);
}

double sin_minus_xcos_over_cube(double x)
{
    if (std::abs(x) < 0.5) {
        // sum_{k>=1} (-1)^{k+1} 2k x^{2k-2} / (2k+1)!
        double fact = 6.0, sum = 0.0, pw = 1.0, sign = 1.0;
        const double x2 = x * x;
        for (int k = 1; k <= 10; ++k) {
            sum += sign * 2.0 * k * pw / fact;
            pw *= x2;
            sign = -sign;
            fact *= (2.0 * k + 2) * (2.0 * k + 3);
        }
        return sum;
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

struct StepWeights {
    std::vector<double> c, s_over_w, w_s, p0, p1, q0, q1;
};

StepWeights step_weights(const FrequencyLattice& lat, double h)
{
    StepWeights sw;
    const std::size_t n = lat.size();
    for (auto* v : {&sw.c, &sw.s_over_w, &sw.w_s, &sw.p0, &sw.p1, &sw.q0, &sw.q1})
        v->resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = lat.bracket(k);
        const double x = w * h;
        const double g = one_minus_cos_over_sq(x);
        const double f = sin_minus_xcos_over_cube(x);
        const double sc = sinc(x);
        sw.c[k] = std::cos(x);
        sw.s_over_w[k] = h * sc;
        sw.w_s[k] = w * std::sin(x);
        sw.p0[k] = h * h * f;
        sw.p1[k] = h * h * (g - f);
        sw.q0[k] = h * (sc - g);
        sw.q1[k] = h * g;
    }
    return sw;
}

RealGrid ones_grid(const FrequencyLattice& lat)
{
    return {lat.dim(), lat.grid_size(), std::vector<double>(lat.grid_points(), 1.0)};
}

RealGrid zero_grid(const FrequencyLattice& lat)
{
    return {lat.dim(), lat.grid_size(), std::vector<double>(lat.grid_points(), 0.0)};
}

double max_abs(const std::vector<Complex>& v)
{
    double m = 0.0;
    for (const auto& c : v)
        m = std::max(m, std::abs(c));
    return m;
}

} // namespace

WaveState::WaveState(double t, HermitianCoeffs position, HermitianCoeffs velocity)
    : time(t), v(std::move(position)), v_t(std::move(velocity))
{
    if (!same_lattice(v.lattice(), v_t.lattice()))
        throw InvalidArgument("position and velocity live on different lattices");
}

WaveState WaveState::zero(const LatticePtr& lattice, double t)
{
    return {t, HermitianCoeffs(lattice), HermitianCoeffs(lattice)};
}

WaveState propagate_linear(const WaveState& s, double h)
{
    const auto& lat = s.v.lattice();
    std::vector<Complex> v(lat.size()), vt(lat.size());
    for (std::size_t k = 0; k < lat.size(); ++k) {
        const double w = lat.bracket(k);
        const double c = std::cos(w * h);
        const double sn = std::sin(w * h);
        v[k] = c * s.v[k] + sn / w * s.v_t[k];
        vt[k] = -w * sn * s.v[k] + c * s.v_t[k];
    }
    return {s.time + h, HermitianCoeffs::symmetrized(s.v.lattice_ptr(), std::move(v)),
            HermitianCoeffs::symmetrized(s.v.lattice_ptr(), std::move(vt))};
}

FieldSnapshot duhamel(const SourceProvider& F, double t, const LatticePtr& lattice, const QuadratureConfig& q)
{
    if (!(t >= 0.0))
        throw InvalidArgument("Duhamel time must be >= 0");
    const int n = q.intervals;
    const int order = q.rule == QuadratureRule::Simpson ? 4 : 2;
    if (n < 1 || (q.rule == QuadratureRule::Simpson && n % 2 != 0))
        throw InvalidArgument("Simpson quadrature needs an even, positive number of intervals");
    const auto& lat = *lattice;
    if (t == 0.0)
        return {0.0, HermitianCoeffs(lattice)};

    const double h = t / n;
    std::vector<Complex> fine(lat.size()), coarse(lat.size());
    const bool want_coarse = q.tolerance.has_value();
    const bool coarse_ok = q.rule == QuadratureRule::Simpson ? n % 4 == 0 : n % 2 == 0;
    if (want_coarse && !coarse_ok)
        throw InvalidArgument("Richardson check needs intervals divisible by " +
                              std::string(q.rule == QuadratureRule::Simpson ? "4" : "2"));

    auto weight = [&](int i, int m) {
        if (q.rule == QuadratureRule::Trapezoid)
            return (i == 0 || i == m) ? 0.5 : 1.0;
        if (i == 0 || i == m)
            return 1.0 / 3.0;
        return i % 2 == 1 ? 4.0 / 3.0 : 2.0 / 3.0;
    };

    for (int i = 0; i <= n; ++i) {
        const double s = i * h;
        const HermitianCoeffs f = F(s);
        if (!same_lattice(f.lattice(), lat))
            throw InvalidArgument("source lives on a different lattice");
        const double wf = weight(i, n) * h;
        const double wc = want_coarse && i % 2 == 0 ? weight(i / 2, n / 2) * 2.0 * h : 0.0;
        for (std::size_t k = 0; k < lat.size(); ++k) {
            const double w = lat.bracket(k);
            const Complex val = std::sin((t - s) * w) / w * f[k];
            fine[k] += wf * val;
            if (wc != 0.0)
                coarse[k] += wc * val;
        }
    }
    if (want_coarse) {
        double err = 0.0;
        for (std::size_t k = 0; k < lat.size(); ++k)
            err = std::max(err, std::abs(fine[k] - coarse[k]));
        err /= (std::pow(2.0, order) - 1.0);
        if (err > *q.tolerance * std::max(1.0, max_abs(fine)))
            throw NumericFailure("Duhamel quadrature error estimate " + std::to_string(err) +
                                 " exceeds the requested tolerance with " + std::to_string(n) + " intervals");
    }
    return {t, HermitianCoeffs::symmetrized(lattice, std::move(fine))};
}

WickSource::WickSource(LatticePtr lattice, int k, std::vector<double> times, std::vector<std::vector<RealGrid>> grids)
    : lattice_(std::move(lattice)), k_(k), times_(std::move(times)), grids_(std::move(grids))
{
    if (k_ < 0)
        throw InvalidArgument("nonlinearity degree must be >= 0");
    if (times_.size() != grids_.size() || times_.empty())
        throw InvalidArgument("need one set of Wick grids per time");
    for (const auto& g : grids_) {
        if (static_cast<int>(g.size()) != k_ + 1)
            throw InvalidArgument("need Wick grids for j = 0..k at every time");
        for (const auto& r : g)
            if (r.values.size() != lattice_->grid_points())
                throw InvalidArgument("Wick grid does not match the lattice grid");
    }
}

WickSource WickSource::zero(const LatticePtr& lattice, int k)
{
    std::vector<RealGrid> g;
    g.push_back(ones_grid(*lattice));
    for (int j = 1; j <= k; ++j)
        g.push_back(zero_grid(*lattice));
    WickSource src(lattice, k, {0.0}, {std::move(g)});
    src.constant_ = true;
    return src;
}

WickSource WickSource::from_linear_solution(const DataPair& pair, const RandomizedMultipliers& m, int radius, int k,
                                            const std::vector<double>& times)
{
    const auto profile = gamma_from_pair(pair);
    std::vector<std::vector<RealGrid>> grids;
    grids.reserve(times.size());
    for (double t : times) {
        const auto z = random_linear_solution(pair, m, t);
        std::vector<RealGrid> g;
        g.push_back(ones_grid(pair.lattice()));
        for (int j = 1; j <= k; ++j)
            g.push_back(to_physical(wick_power(z, profile, radius, j).coeffs));
        grids.push_back(std::move(g));
    }
    return {pair.lattice_ptr(), k, times, std::move(grids)};
}

const std::vector<RealGrid>& WickSource::at(std::size_t step, double t) const
{
    if (constant_)
        return grids_.front();
    if (step >= times_.size())
        throw InvalidArgument("Wick source has no snapshot for step " + std::to_string(step));
    if (std::abs(times_[step] - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw InvalidArgument("Wick source snapshot " + std::to_string(step) + " is at t=" +
                              std::to_string(times_[step]) + ", solver is at t=" + std::to_string(t));
    return grids_[step];
}

double wave_energy(const WaveState& s, int k)
{
    const auto& lat = s.v.lattice();
    double kinetic = 0.0, potential = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        kinetic += std::norm(s.v_t[i]);
        potential += static_cast<double>(1 + lat.norm_sq(i)) * std::norm(s.v[i]);
    }
    const RealGrid g = to_physical(s.v);
    double nonlinear = 0.0;
    for (double x : g.values)
        nonlinear += std::pow(x, k + 1);
    nonlinear /= static_cast<double>(g.values.size());
    return 0.5 * kinetic + 0.5 * potential + nonlinear / (k + 1);
}

double energy_norm(const WaveState& s)
{
    const auto& lat = s.v.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i)
        acc += static_cast<double>(1 + lat.norm_sq(i)) * std::norm(s.v[i]) + std::norm(s.v_t[i]);
    return std::sqrt(acc);
}

SolveResult solve_wick_nlw(const WaveState& init, const SolverConfig& cfg)
{
    if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || !(cfg.picard_tol > 0.0) || cfg.max_iter < 1 ||
        cfg.record_every < 1)
        throw InvalidArgument("solver needs dt > 0, horizon > 0, picard_tol > 0, max_iter >= 1, record_every >= 1");
    if (!cfg.wick_source)
        throw InvalidArgument("solver needs a Wick source");
    if (cfg.wick_source->degree() != cfg.k)
        throw InvalidArgument("Wick source degree does not match k");
    const auto& lat_ptr = init.v.lattice_ptr();
    const auto& lat = *lat_ptr;
    if (!same_lattice(lat, *cfg.wick_source->lattice_ptr()))
        throw InvalidArgument("Wick source lives on a different lattice");
    if (cfg.k >= 1 && lat.oversample() < cfg.k + 1)
        throw InvalidArgument("degree-" + std::to_string(cfg.k) + " nonlinearity needs oversample >= " +
                              std::to_string(cfg.k + 1));

    const long long steps = std::llround(cfg.horizon / cfg.dt);
    if (steps < 1 || std::abs(steps * cfg.dt - cfg.horizon) > 1e-9 * cfg.horizon)
        throw InvalidArgument("horizon must be a whole number of steps");
    const double h = cfg.horizon / static_cast<double>(steps);
    const auto W = step_weights(lat, h);
    const std::size_t n = lat.size();

    auto force = [&](const std::vector<Complex>& v, std::size_t step, double t) {
        const RealGrid grid = to_physical(HermitianCoeffs::symmetrized(lat_ptr, v));
        const auto& wick = cfg.wick_source->at(step, t);
        const RealGrid out = wick_nonlinearity_grid(grid, wick);
        const auto c = to_spectral(out, lat_ptr);
        return std::vector<Complex>(c.values().begin(), c.values().end());
    };

    SolveResult res;
    res.trajectory.push_back(init);
    res.energy.push_back(wave_energy(init, cfg.k));
    std::vector<Complex> v(init.v.values().begin(), init.v.values().end());
    std::vector<Complex> vt(init.v_t.values().begin(), init.v_t.values().end());
    std::vector<Complex> F0 = force(v, 0, init.time);
    std::vector<Complex> lin_v(n), lin_vt(n), v1(n), next(n);

    double t = init.time;
    for (long long step = 1; step <= steps; ++step) {
        const double t1 = init.time + static_cast<double>(step) * h;
        for (std::size_t k = 0; k < n; ++k) {
            lin_v[k] = W.c[k] * v[k] + W.s_over_w[k] * vt[k];
            lin_vt[k] = -W.w_s[k] * v[k] + W.c[k] * vt[k];
            v1[k] = lin_v[k] - (W.p0[k] + W.p1[k]) * F0[k];
        }
        std::vector<Complex> F1;
        double residual = 0.0;
        int it = 0;
        for (;;) {
            ++it;
            F1 = force(v1, static_cast<std::size_t>(step), t1);
            double diff = 0.0;
            bool finite = true;
            for (std::size_t k = 0; k < n; ++k) {
                next[k] = lin_v[k] - W.p0[k] * F0[k] - W.p1[k] * F1[k];
                const double d = std::abs(next[k] - v1[k]);
                finite = finite && std::isfinite(d);
                diff = std::max(diff, d);
            }
            v1.swap(next);
            residual = diff / std::max(1.0, max_abs(v1));
            if (!finite || !std::isfinite(residual))
                throw NumericFailure("Picard iteration produced non-finite values at t=" + std::to_string(t1));
            if (residual <= cfg.picard_tol)
                break;
            if (it >= cfg.max_iter)
                throw NumericFailure("Picard iteration did not converge at t=" + std::to_string(t1) + " after " +
                                     std::to_string(it) + " iterations (residual " + std::to_string(residual) +
                                     "); reduce dt");
        }
        F1 = force(v1, static_cast<std::size_t>(step), t1);
        for (std::size_t k = 0; k < n; ++k)
            vt[k] = lin_vt[k] - W.q0[k] * F0[k] - W.q1[k] * F1[k];
        v.swap(v1);
        F0.swap(F1);
        t = t1;
        res.iterations.push_back(it);
        res.residuals.push_back(residual);

        WaveState state(t, HermitianCoeffs::symmetrized(lat_ptr, v), HermitianCoeffs::symmetrized(lat_ptr, vt));
        const bool blow = !(energy_norm(state) <= cfg.blowup_ceiling);
        if (step % cfg.record_every == 0 || step == steps || blow) {
            res.energy.push_back(wave_energy(state, cfg.k));
            res.trajectory.push_back(std::move(state));
        }
        if (blow) {
            res.blow_up = true;
            break;
        }
    }
    res.final_time = t;
    return res;
}

} // namespace wickfield
