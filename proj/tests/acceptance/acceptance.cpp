// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "wickfield/cli.hpp"
#include "wickfield/counterexample.hpp"
#include "wickfield/error.hpp"
#include "wickfield/evolution.hpp"
#include "wickfield/moment_oracle.hpp"
#include "wickfield/stochastic_conv.hpp"
#include "wickfield/wick.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

using namespace wickfield;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances
constexpr double kBruteForceRel = 1e-12;
constexpr double kBruteForceSeconds = 1.0;
constexpr int kMcSamples = 20000;
constexpr double kMcModeSe = 4.0;
constexpr double kMcModeFraction = 0.95;
constexpr double kMcCrossSe = 5.0;
constexpr double kMcRoundOff = 1e-24;
constexpr double kMcSeconds = 120.0;
constexpr double kTotalMassRel = 1e-10;
constexpr double kTailDrop = 1e-3;
constexpr double kTailSeconds = 60.0;
constexpr double kDivergenceSeconds = 10.0;
constexpr double kRemarkBand = 10.0;
constexpr int kItoSamples = 10000;
constexpr double kItoSe = 5.0;
constexpr double kSplitAbs = 1e-12;
constexpr double kDuhamelOrderSlack = 0.2;
constexpr double kEnergyDrift = 1e-6;
constexpr double kSolverOrder = 2.0;
constexpr double kSolverSeconds = 300.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double factorial_int(int j)
{
    double f = 1.0;
    for (int i = 2; i <= j; ++i)
        f *= i;
    return f;
}

// ---------------------------------------------------------------- 1
Outcome criterion_brute_force()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int N = 1; N <= 4; ++N)
        for (int j : {2, 3}) {
            auto lat = build_lattice(1, N);
            std::vector<double> g(2 * N + 1);
            for (int n = 0; n <= N; ++n)
                g[N + n] = g[N - n] = u(rng);
            GammaProfile profile(lat, ProfileKind::Custom, [g, N](std::span<const int> n, double) {
                return std::abs(n[0]) <= N ? g[n[0] + N] : 0.0;
            });
            const auto r = second_moment_per_mode(profile, N, j, 0.0);
            // nested loops over n_1..n_j
            std::vector<double> direct(2 * j * N + 1, 0.0);
            std::vector<int> idx(j, -N);
            for (;;) {
                int sum = 0;
                double w = 1.0;
                for (int v : idx) {
                    sum += v;
                    w *= g[v + N];
                }
                direct[sum + j * N] += factorial_int(j) * w;
                int l = 0;
                while (l < j && ++idx[l] > N)
                    idx[l++] = -N;
                if (l == j)
                    break;
            }
            for (int n = -j * N; n <= j * N; ++n) {
                const std::int64_t key[] = {n};
                const double ref = direct[n + j * N];
                worst = std::max(worst, std::abs(r.per_mode(key) - ref) / std::max(ref, 1e-300));
            }
        }
    const double secs = seconds_since(t0);
    return {worst <= kBruteForceRel && secs < kBruteForceSeconds,
            "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s"};
}

// ---------------------------------------------------------------- 2
Outcome criterion_monte_carlo()
{
    const auto t0 = Clock::now();
    const int N = 8, jmax = 3;
    // lattice holds |n| <= jN so every mode of :z_N^j: is observed
    auto lat = build_lattice(1, jmax * N, TruncationShape::EuclideanBall, jmax + 1);
    auto u0 = power_law_pair(lat, 0.0).u0;
    auto u1 = power_law_pair(lat, -0.5).u1; // gamma depends on t
    const DataPair pair(project(u0, N), project(u1, N));
    const auto profile = gamma_from_pair(pair);

    const std::size_t M = lat->size();
    std::size_t modes_total = 0, modes_ok = 0;
    double worst_cross = 0.0;
    bool outside_ok = true;
    for (double t : {0.0, 0.37}) {
        std::vector<std::vector<double>> s1(jmax + 1, std::vector<double>(M, 0.0)), s2 = s1;
        std::map<std::pair<int, int>, std::pair<double, double>> cross;
        for (int k = 0; k < kMcSamples; ++k) {
            const auto z = random_linear_solution(pair, sample_multipliers(lat, 777, k), t);
            std::vector<HermitianCoeffs> w;
            for (int j = 1; j <= jmax; ++j)
                w.push_back(wick_power(z, profile, N, j).coeffs);
            for (int j = 1; j <= jmax; ++j)
                for (std::size_t i = 0; i < M; ++i) {
                    const double v = std::norm(w[j - 1][i]);
                    s1[j][i] += v;
                    s2[j][i] += v * v;
                }
            for (int a = 1; a <= jmax; ++a)
                for (int b = a + 1; b <= jmax; ++b) {
                    double ip = 0.0;
                    for (std::size_t i = 0; i < M; ++i)
                        ip += (w[a - 1][i] * std::conj(w[b - 1][i])).real();
                    cross[{a, b}].first += ip;
                    cross[{a, b}].second += ip * ip;
                }
        }
        for (int j : {2, 3}) {
            const auto oracle = second_moment_per_mode(profile, N, j, t);
            const double scale = oracle.per_mode(std::vector<int>{0});
            for (std::size_t i = 0; i < M; ++i) {
                const double mean = s1[j][i] / kMcSamples;
                const double se = std::sqrt(std::max(s2[j][i] / kMcSamples - mean * mean, 0.0) / kMcSamples);
                const double ref = oracle.per_mode(lat->frequency(i));
                if (ref == 0.0) {
                    // outside |n| <= jN the samples carry transform round-off only
                    outside_ok = outside_ok && mean <= kMcRoundOff * scale;
                    continue;
                }
                ++modes_total;
                if (std::abs(mean - ref) <= kMcModeSe * se)
                    ++modes_ok;
            }
        }
        for (const auto& [key, acc] : cross) {
            const double mean = acc.first / kMcSamples;
            const double se = std::sqrt(std::max(acc.second / kMcSamples - mean * mean, 0.0) / kMcSamples);
            worst_cross = std::max(worst_cross, std::abs(mean) / se);
        }
    }
    const double frac = double(modes_ok) / double(modes_total);
    const double secs = seconds_since(t0);
    return {frac >= kMcModeFraction && worst_cross <= kMcCrossSe && outside_ok && secs < kMcSeconds,
            fmt("%.4f", frac) + " of " + std::to_string(modes_total) + " modes within 4 SE, worst cross-degree " + fmt("%.2f", worst_cross) + " SE, " +
                fmt("%.1f", secs) + " s"};
}

// ---------------------------------------------------------------- 3
Outcome criterion_total_mass()
{
    double worst = 0.0;
    int checks = 0;
    for (int d = 1; d <= 3; ++d) {
        const int L = 16;
        auto ball = build_lattice(d, L);
        auto cube = build_lattice(d, L, TruncationShape::Cube);
        std::vector<std::pair<std::string, GammaProfile>> families;
        {
            auto u0 = power_law_pair(ball, 0.1).u0;
            auto u1 = power_law_pair(ball, -0.4).u1;
            families.emplace_back("pair", gamma_from_pair(DataPair(u0, u1)));
        }
        families.emplace_back("power-law", gamma_power_law(ball, -0.3));
        families.emplace_back("wave", gamma_from_multiplier(power_law_multiplier(ball, 0.2), ConvolutionKind::Wave));
        families.emplace_back("heat", gamma_from_multiplier(power_law_multiplier(ball, 0.0), ConvolutionKind::Heat));
        families.emplace_back("counterexample", dyadic_gamma_profile(DyadicProfile(d, 3, 4), cube));
        families.emplace_back("constant", GammaProfile(cube, ProfileKind::Custom,
                                                       [](std::span<const int>, double) { return 0.5; },
                                                       [d](std::int64_t, double) { return std::pow(0.5, 1.0 / d); }));
        for (auto& [name, g] : families)
            for (int N : {2, 7, 16})
                for (int j = 1; j <= 4; ++j)
                    for (double t : {0.0, 0.37}) {
                        if (name == "wave" || name == "heat")
                            if (t == 0.0)
                                continue;
                        auto r = second_moment_per_mode(g, N, j, t);
                        const double alpha = truncated_variance(g, N, t);
                        const double ref = factorial_int(j) * std::pow(alpha, j);
                        worst = std::max(worst, std::abs(r.h_sigma(0.0) - ref) / ref);
                        ++checks;
                    }
    }
    return {worst <= kTotalMassRel, std::to_string(checks) + " cases, max rel err " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 4
struct TailScan {
    std::vector<double> values;
    bool monotone = true;
    double drop = 0.0;
};

TailScan tail_scan(int d, double alpha, int j, double sigma)
{
    auto lat = build_lattice(d, 512);
    const auto g = gamma_power_law(lat, alpha);
    TailScan s;
    for (int N = 4; N <= 256; N *= 2)
        s.values.push_back(tail_distance(g, N, 2 * N, j, 0.0, sigma));
    for (std::size_t i = 1; i < s.values.size(); ++i)
        s.monotone = s.monotone && s.values[i] < s.values[i - 1];
    s.drop = s.values.back() / s.values.front();
    return s;
}

Outcome criterion_tail_distance()
{
    const auto t0 = Clock::now();
    const int j = 2;
    const double p = 3.0;
    // d = 2: alpha = s = -0.02; d = 1: alpha = -0.51, s = -0.01. sigma = -2 <= -d/2, p <= 4.
    struct Run {
        int d;
        double alpha;
    };
    bool pass = true;
    std::string detail;
    for (auto [d, alpha] : {Run{2, -0.02}, Run{1, -0.51}}) {
        const double s = regularity_threshold(d, alpha), sigma = -2.0;
        const bool adm = admissible(d, j, s, sigma, p).admissible && sigma < j * s;
        const auto scan = tail_scan(d, alpha, j, sigma);
        const bool ok = adm && scan.monotone && scan.drop < kTailDrop;
        pass = pass && ok;
        detail += "d=" + std::to_string(d) + " s=" + fmt("%.2f", s) + " monotone=" + (scan.monotone ? "yes" : "no") +
                  " drop " + fmt("%.2e", scan.drop) + (ok ? "" : "!") + "; ";
    }
    const double secs = seconds_since(t0);
    return {pass && secs < kTailSeconds, detail + fmt("%.1f", secs) + " s"};
}

// ---------------------------------------------------------------- 5
Outcome criterion_divergence()
{
    bool pass = true;
    std::string detail;
    double d3j3_secs = 0.0;
    for (int j : {2, 3})
        for (int d = 1; d <= 3; ++d) {
            const auto t0 = Clock::now();
            const DyadicProfile profile(d, j, 64);
            const auto series = zeroth_mode_moment(profile, {4, 8, 16, 32, 64});
            const auto fit = divergence_rate_fit(series);
            const double secs = seconds_since(t0);
            if (d == 3 && j == 3)
                d3j3_secs = secs;
            const bool ok = fit.strictly_increasing && fit.bounded_band && fit.min_ratio > 0.0;
            pass = pass && ok;
            detail += "j" + std::to_string(j) + "d" + std::to_string(d) + " [" + fmt("%.3g", fit.min_ratio) + "," +
                      fmt("%.3g", fit.max_ratio) + "]" + (ok ? "" : "!") + " ";
        }
    pass = pass && d3j3_secs < kDivergenceSeconds;
    return {pass, detail + "d3j3 " + fmt("%.2f", d3j3_secs) + " s"};
}

// ---------------------------------------------------------------- 6
Outcome criterion_generic_j2()
{
    const int top = 1 << 16;
    auto lat = build_lattice(1, top);
    const auto u0 = HermitianCoeffs::from_function(
        lat, [](std::span<const int> n) { return Complex(std::pow(bracket(n), -0.25), 0.0); });
    const auto profile = gamma_from_pair(DataPair(u0, bracket_derivative(u0)));
    std::vector<int> cutoffs;
    for (int k = 4; k <= 16; ++k)
        cutoffs.push_back(1 << k);
    const auto series = zeroth_mode_moment(profile, cutoffs, 2);

    bool increasing = true;
    double lo = 1e300, hi = 0.0, worst_partial = 0.0;
    double partial = 1.0; // <0>^{-1}
    int done = 0;
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        for (int n = done + 1; n <= cutoffs[i]; ++n)
            partial += 2.0 / std::sqrt(1.0 + double(n) * n);
        done = cutoffs[i];
        // j = 2 zeroth mode is 2 sum gamma_n^2 = 2 sum <n>^{-1}
        worst_partial = std::max(worst_partial, std::abs(series.values[i] - 2.0 * partial) / (2.0 * partial));
        const double ratio = series.values[i] / std::log(double(cutoffs[i]));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (i > 0)
            increasing = increasing && series.values[i] > series.values[i - 1];
    }
    const bool pass = increasing && lo > 0.0 && hi / lo <= kRemarkBand && worst_partial < 1e-10;
    return {pass, "ratio to log N in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], partial-sum match " +
                      fmt("%.1e", worst_partial)};
}

// ---------------------------------------------------------------- 7
Outcome criterion_membership()
{
    bool pass = true;
    int checks = 0;
    for (int d = 1; d <= 3; ++d)
        for (int j : {2, 3, 4}) {
            const double pc = 2.0 * j / (j - 1.0);
            const auto r = membership_report(DyadicProfile(d, j, 4096), {-0.05, -0.2, -1.0}, {pc, pc + 0.1, 2 * pc});
            for (const auto& s : r.sobolev) {
                pass = pass && s.classification == TailClass::Finite && std::isfinite(s.norm_sq_bound);
                ++checks;
            }
            pass = pass && r.fourier_lebesgue.at(0).classification == TailClass::Divergent;
            // p-series exponent p (j-1)/(2j): exactly 1 at the critical p
            pass = pass && r.fourier_lebesgue.at(0).exponent == 1.0;
            pass = pass && r.fourier_lebesgue.at(1).classification == TailClass::Finite;
            pass = pass && r.fourier_lebesgue.at(2).classification == TailClass::Finite;
            checks += 3;
        }
    return {pass, std::to_string(checks) + " classifications"};
}

// ---------------------------------------------------------------- 8
Outcome criterion_stochastic()
{
    auto lat = build_lattice(1, 4);
    const auto spec = power_law_multiplier(lat, 0.5);
    const double t = 0.9;
    const std::vector<double> times = {0.2, 0.55, t};
    const std::size_t M = lat->size();
    std::vector<double> w1(M, 0.0), w2(M, 0.0), h1(M, 0.0), h2(M, 0.0);
    for (int k = 0; k < kItoSamples; ++k) {
        const auto wave = sample_wave_convolution(spec, times, 31, k);
        const auto heat = sample_heat_convolution(spec, times, 32, k);
        for (std::size_t i = 0; i < M; ++i) {
            const double a = std::norm(wave.back().coeffs()[i]);
            const double b = std::norm(heat.back().coeffs()[i]);
            w1[i] += a;
            w2[i] += a * a;
            h1[i] += b;
            h2[i] += b * b;
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double br = lat->bracket(i);
        const double phi2 = std::norm(spec.phi_hat[i]);
        const double wave_ref = phi2 * (t / 2 - std::sin(2 * t * br) / (4 * br)) / (br * br);
        const double heat_ref = phi2 * (1 - std::exp(-2 * t * br * br)) / (2 * br * br);
        for (auto [s1, s2, ref] : {std::tuple{w1[i], w2[i], wave_ref}, std::tuple{h1[i], h2[i], heat_ref}}) {
            const double mean = s1 / kItoSamples;
            const double se = std::sqrt((s2 / kItoSamples - mean * mean) / kItoSamples);
            worst = std::max(worst, std::abs(mean - ref) / se);
        }
    }

    double split = 0.0;
    for (double w : {1.0, std::sqrt(2.0), 7.3, 60.0})
        for (double h : {1e-4, 0.05, 0.8, 3.0})
            for (double f : {0.1, 0.5, 0.77}) {
                const double a = f * h, b = h - a;
                const auto whole = wave_increment_covariance(w, h);
                const auto parts =
                    propagate_covariance(wave_rotation(w, b), wave_increment_covariance(w, a), wave_increment_covariance(w, b));
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        split = std::max(split, std::abs(whole[r][c] - parts[r][c]));
                const double hv = heat_mode_variance_at(w, h);
                const double hp = std::exp(-2 * b * w * w) * heat_mode_variance_at(w, a) + heat_mode_variance_at(w, b);
                split = std::max(split, std::abs(hv - hp));
            }
    return {worst <= kItoSe && split <= kSplitAbs,
            "worst mode " + fmt("%.2f", worst) + " SE, splitting defect " + fmt("%.1e", split)};
}

// ---------------------------------------------------------------- 9
Outcome criterion_duhamel()
{
    auto lat = build_lattice(1, 4);
    const int f[] = {3};
    const auto idx = *lat->index_of(f);
    const double w = std::sqrt(10.0), t = 1.1;
    auto single = [&](Complex v) {
        HermitianCoeffs c(lat);
        c.set(idx, v);
        return c;
    };
    const double exact = (1 - std::cos(t * w)) / (w * w);
    std::vector<double> err;
    for (int m : {16, 32, 64, 128}) {
        QuadratureConfig q;
        q.intervals = m;
        err.push_back(std::abs(duhamel([&](double) { return single(1.0); }, t, lat, q).coeffs()[idx].real() - exact));
    }
    double quad_order = 1e9;
    for (std::size_t i = 1; i < err.size(); ++i)
        quad_order = std::min(quad_order, std::log2(err[i - 1] / err[i]));

    const auto F = [&](double s) { return single(Complex(std::cos(1.5 * s), std::sin(0.5 * s))); };
    QuadratureConfig fine;
    fine.intervals = 4000;
    std::vector<double> res;
    const double t1 = 0.8;
    for (double h : {0.08, 0.04, 0.02, 0.01}) {
        const Complex up = duhamel(F, t1 + h, lat, fine).coeffs()[idx];
        const Complex mid = duhamel(F, t1, lat, fine).coeffs()[idx];
        const Complex dn = duhamel(F, t1 - h, lat, fine).coeffs()[idx];
        res.push_back(std::abs((up - 2.0 * mid + dn) / (h * h) + w * w * mid - F(t1)[idx]));
    }
    double res_order = 1e9;
    for (std::size_t i = 1; i < res.size(); ++i)
        res_order = std::min(res_order, std::log2(res[i - 1] / res[i]));
    const bool pass = quad_order >= 4.0 - kDuhamelOrderSlack && err.back() < 1e-8 &&
                      res_order >= 2.0 - kDuhamelOrderSlack;
    return {pass, "Simpson order " + fmt("%.2f", quad_order) + " (err " + fmt("%.1e", err.back()) +
                      "), residual order " + fmt("%.2f", res_order)};
}

// ---------------------------------------------------------------- 10
Outcome criterion_solver()
{
    const auto t0 = Clock::now();
    auto lat = build_lattice(1, 8, TruncationShape::EuclideanBall, 4);
    auto zero_src = std::make_shared<WickSource>(WickSource::zero(lat, 3));
    HermitianCoeffs u0(lat), u1(lat);
    const int m1[] = {1}, m2[] = {2};
    u0.set(*lat->index_of(m1), 0.3);
    u0.set(lat->zero_index(), 0.2);
    u1.set(*lat->index_of(m2), Complex(0.0, 0.15));
    const WaveState init(0.0, u0, u1);
    auto run = [&](double dt) {
        SolverConfig cfg;
        cfg.k = 3;
        cfg.dt = dt;
        cfg.horizon = 1.0;
        cfg.wick_source = zero_src;
        return solve_wick_nlw(init, cfg);
    };
    const auto fine = run(1e-3);
    double drift = 0.0;
    for (double e : fine.energy)
        drift = std::max(drift, std::abs(e - fine.energy.front()));

    const double dt = 0.05;
    const auto ref = run(dt / 16);
    auto error_at = [&](double h) {
        const auto r = run(h);
        double e = 0.0;
        for (std::size_t i = 0; i < lat->size(); ++i)
            e = std::max(e, std::abs(r.trajectory.back().v[i] - ref.trajectory.back().v[i]));
        return e;
    };
    const double order = std::log2(error_at(dt) / error_at(dt / 2));

    const auto zero_run = [&] {
        SolverConfig cfg;
        cfg.dt = 0.01;
        cfg.horizon = 1.0;
        cfg.wick_source = zero_src;
        return solve_wick_nlw(WaveState::zero(lat), cfg);
    }();
    bool exact_zero = true;
    for (const auto& s : zero_run.trajectory)
        for (std::size_t i = 0; i < lat->size(); ++i)
            exact_zero = exact_zero && s.v[i] == Complex(0.0) && s.v_t[i] == Complex(0.0);

    // randomized data in d = 3: a_n = <n>^{-1.45}, u1 = <nabla> u0
    bool smoke = false;
    std::string smoke_note;
    {
        const int d = 3, N = 8, k = 3;
        const double beta = 1.45, s = -0.1, sigma = k * s, p = 2.1;
        const auto adm = admissible(d, k, s, sigma, p);
        const bool data_in_fl = power_law_fl_class(d, beta, 0.0, p) == TailClass::Finite;
        const bool data_in_hs = beta - s > d / 2.0;
        auto l3 = build_lattice(d, N, TruncationShape::EuclideanBall, k + 1);
        const auto a = HermitianCoeffs::from_function(
            l3, [beta](std::span<const int> n) { return Complex(std::pow(bracket(n), -beta), 0.0); });
        const DataPair pair(a, bracket_derivative(a));
        const auto m = sample_multipliers(l3, 2718, 0);
        const double h = 0.01, T = 0.1;
        std::vector<double> times;
        for (int i = 0; i <= 10; ++i)
            times.push_back(i * h);
        SolverConfig cfg;
        cfg.k = k;
        cfg.dt = h;
        cfg.horizon = T;
        cfg.wick_source = std::make_shared<WickSource>(WickSource::from_linear_solution(pair, m, N, k, times));
        try {
            const auto r = solve_wick_nlw(WaveState::zero(l3), cfg);
            smoke = adm.admissible && data_in_fl && data_in_hs && !r.blow_up && std::abs(r.final_time - T) < 1e-12;
            smoke_note = "T=" + fmt("%.2f", r.final_time) + " max Picard " +
                         std::to_string(*std::max_element(r.iterations.begin(), r.iterations.end()));
        } catch (const NumericFailure& e) {
            smoke_note = std::string("Picard failure: ") + e.what();
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = drift < kEnergyDrift && order >= kSolverOrder && exact_zero && smoke && secs < kSolverSeconds;
    return {pass, "drift " + fmt("%.1e", drift) + ", order " + fmt("%.2f", order) + ", zero run " +
                      (exact_zero ? "exact" : "nonzero") + ", d=3 smoke " + smoke_note + ", " + fmt("%.1f", secs) + " s"};
}

// ---------------------------------------------------------------- 11
std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream is(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        files[e.path().filename().string()] = ss.str();
    }
    return files;
}

Outcome criterion_reproducibility()
{
    const fs::path root = WICKFIELD_TEST_TMP;
    fs::create_directories(root);
    const std::vector<std::pair<std::string, json>> runs = {
        {"sample",
         {{"seed", 99},
          {"ensemble", 8},
          {"workers", 4},
          {"lattice", {{"dim", 2}, {"cutoff", 4}, {"oversample", 4}}},
          {"times", {0.0, 0.25}},
          {"data", {{"family", "power-law"}, {"alpha", 0.0}}},
          {"wick_degrees", {2, 3}},
          {"noise", {{"kind", "wave"}, {"alpha", 0.5}}}}},
        {"moments",
         {{"lattice", {{"dim", 2}, {"cutoff", 8}}},
          {"profile", {{"family", "power-law"}, {"alpha", -0.1}}},
          {"j", 3},
          {"t", 0.3},
          {"sigma", {0.0, -1.0}},
          {"cutoffs", {2, 4, 8}}}},
        {"converge",
         {{"lattice", {{"dim", 1}, {"cutoff", 64}}},
          {"profile", {{"family", "power-law"}, {"alpha", -0.3}}},
          {"j", 2},
          {"sigma", -1.0},
          {"cutoffs", {4, 8, 16, 32}}}},
        {"counterexample", {{"dim", 2}, {"j", 3}, {"m_max", 40}}},
        {"solve",
         {{"seed", 5},
          {"lattice", {{"dim", 1}, {"cutoff", 6}, {"oversample", 4}}},
          {"dt", 0.01},
          {"horizon", 0.2},
          {"init", {{"family", "single-mode"}, {"mode", {1}}, {"amplitude", 0.3}}},
          {"wick", {{"enabled", true}, {"data", {{"family", "power-law"}, {"alpha", 0.5}}}}}}},
    };
    bool pass = true;
    std::size_t files = 0;
    for (auto [command, cfg] : runs) {
        const auto dir = root / command;
        fs::remove_all(dir);
        cfg["out"] = dir.string();
        const auto path = root / (command + ".json");
        std::ofstream(path) << cfg.dump(2);
        std::map<std::string, std::string> first;
        for (int rep = 0; rep < 2; ++rep) {
            std::ostringstream out, err;
            const int code = cli::run_cli({"wickfield", command, "--config", path.string()}, out, err);
            if (code != 0) {
                std::fprintf(stderr, "%s failed: %s\n", command.c_str(), err.str().c_str());
                pass = false;
                break;
            }
            auto snap = snapshot(dir);
            if (rep == 0)
                first = std::move(snap);
            else {
                pass = pass && snap == first;
                files += snap.size();
            }
        }
    }
    return {pass, std::to_string(files) + " output files compared across 5 subcommands"};
}

} // namespace

int main(int argc, char** argv)
{
    // --allow-fail 4,5: criteria whose failure is documented; they still print FAIL
    std::vector<int> allowed;
    for (int a = 1; a + 1 < argc; ++a)
        if (std::string(argv[a]) == "--allow-fail") {
            std::stringstream ss(argv[a + 1]);
            for (std::string item; std::getline(ss, item, ',');)
                allowed.push_back(std::stoi(item));
        }

    const std::vector<std::function<Outcome()>> criteria = {
        criterion_brute_force,  criterion_monte_carlo, criterion_total_mass, criterion_tail_distance,
        criterion_divergence,   criterion_generic_j2,  criterion_membership, criterion_stochastic,
        criterion_duhamel,      criterion_solver,      criterion_reproducibility,
    };
    int passed = 0, blocking = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        if (o.pass)
            ++passed;
        else if (std::find(allowed.begin(), allowed.end(), static_cast<int>(i + 1)) == allowed.end())
            ++blocking;
    }
    std::printf("summary: %d/%zu PASS, %d unexpected FAIL\n", passed, criteria.size(), blocking);
    return blocking == 0 ? 0 : 1;
}
