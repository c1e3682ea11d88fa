#include "commands.hpp"

#include "config.hpp"
#include "manifest.hpp"

#include "wickfield/coeff_io.hpp"
#include "wickfield/counterexample.hpp"
#include "wickfield/evolution.hpp"
#include "wickfield/moment_oracle.hpp"
#include "wickfield/norms.hpp"
#include "wickfield/randomize.hpp"
#include "wickfield/stochastic_conv.hpp"
#include "wickfield/wick.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <mutex>
#include <thread>

namespace wickfield::cli {

namespace {

/// Runs task(i) for i in [0, count) on `workers` threads; results are
/// collected by index so the output order never depends on scheduling.
template <class Task>
std::vector<std::string> run_indexed(int count, int workers, Task task)
{
    std::vector<std::string> results(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                results[static_cast<std::size_t>(i)] = task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    const int n = std::max(1, std::min(workers, count));
    std::vector<std::thread> pool;
    for (int w = 1; w < n; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

std::string freq_header(int dim)
{
    std::string h;
    for (int a = 1; a <= dim; ++a)
        h += ",n" + std::to_string(a);
    return h;
}

void append_modes(std::ostringstream& os, const std::string& prefix, const HermitianCoeffs& c)
{
    const auto& lat = c.lattice();
    for (std::size_t k = 0; k < lat.size(); ++k) {
        if (!lat.is_canonical(k))
            continue;
        os << prefix;
        for (int v : lat.frequency(k))
            os << ',' << v;
        os << ',' << fmt(c[k].real()) << ',' << fmt(c[k].imag()) << '\n';
    }
}

void check_sorted_times(const std::vector<double>& times, const std::string& field)
{
    if (times.empty())
        throw ConfigError(field, "must not be empty");
    if (!(times.front() >= 0.0))
        throw ConfigError(field, "times must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError(field, "times must be strictly increasing");
}

void check_cutoffs(const std::vector<int>& cutoffs, int limit, const std::string& field)
{
    if (cutoffs.empty())
        throw ConfigError(field, "must not be empty");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 0 || cutoffs[i] > limit)
            throw ConfigError(field, "cutoff " + std::to_string(cutoffs[i]) + " outside [0, " +
                                         std::to_string(limit) + "]");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw ConfigError(field, "cutoffs must be strictly increasing");
    }
}

json admissibility_json(const Admissibility& a)
{
    return {{"admissible", a.admissible}, {"branch", to_string(a.branch)}, {"p_upper", a.p_upper},
            {"reason", a.reason}};
}

} // namespace

int cmd_sample(const json& config, std::ostream& log)
{
    json resolved = json::object();
    Section root(config, resolved, "");
    const auto common = read_common(root);
    const auto lattice = read_lattice(root.child("lattice"), common.budget_bytes);
    const auto times = root.optional<std::vector<double>>("times", {0.0});
    check_sorted_times(times, root.field("times"));
    const int ensemble = root.optional<int>("ensemble", 1);
    if (ensemble < 1)
        throw ConfigError(root.field("ensemble"), "must be >= 1");
    std::optional<DataPair> pair;
    if (root.has("data"))
        pair = read_pair(root.child("data"), lattice);
    const auto degrees = root.optional<std::vector<int>>("wick_degrees", {});
    const int radius = root.optional<int>("wick_radius", lattice->cutoff());
    if (radius < 0 || radius > lattice->cutoff())
        throw ConfigError(root.field("wick_radius"), "must lie in [0, lattice.cutoff]");
    for (int j : degrees) {
        if (j < 1 || j > kDefaultMaxWickDegree)
            throw ConfigError(root.field("wick_degrees"), "degrees must lie in [1, 8]");
        if (j >= 2 && lattice->oversample() < j + 1)
            throw ConfigError("lattice.oversample", "degree " + std::to_string(j) + " needs oversample >= " +
                                                        std::to_string(j + 1));
    }
    if (!degrees.empty() && !pair)
        throw ConfigError(root.field("data"), "required when wick_degrees is given");
    auto noise = root.child_or_empty("noise");
    const auto noise_kind = noise.optional<std::string>("kind", "none");
    std::optional<MultiplierSpec> multiplier;
    if (noise_kind == "wave" || noise_kind == "heat") {
        multiplier = power_law_multiplier(lattice, noise.required<double>("alpha"));
    } else if (noise_kind != "none") {
        throw ConfigError(noise.field("kind"), "expected none, wave or heat");
    }
    noise.done();
    if (!pair && !multiplier)
        throw ConfigError(root.field("data"), "nothing to sample: give data and/or noise");
    root.done();

    OutputSet outputs(common.out, "sample", resolved);
    const int dim = lattice->dim();
    std::optional<GammaProfile> profile;
    if (pair)
        profile = gamma_from_pair(*pair);

    struct MemberText {
        std::string linear, wick, noise, summary;
    };
    std::vector<MemberText> members(static_cast<std::size_t>(ensemble));
    run_indexed(ensemble, common.workers, [&](int i) {
        const std::uint64_t stream = common.stream + static_cast<std::uint64_t>(i);
        std::ostringstream lin, wk, nz, sm;
        std::vector<double> noise_ms(times.size(), 0.0);
        if (multiplier) {
            const auto path = noise_kind == "wave" ? sample_wave_convolution(*multiplier, times, common.seed, stream)
                                                   : sample_heat_convolution(*multiplier, times, common.seed, stream);
            for (std::size_t s = 0; s < path.size(); ++s) {
                append_modes(nz, std::to_string(i) + "," + fmt(times[s]), path[s].coeffs());
                noise_ms[s] = path[s].grid().mean_square();
            }
        }
        std::optional<RandomizedMultipliers> m;
        if (pair)
            m = sample_multipliers(lattice, common.seed, stream);
        for (std::size_t s = 0; s < times.size(); ++s) {
            double lin_ms = 0.0;
            if (pair) {
                const auto z = random_linear_solution(*pair, *m, times[s]);
                append_modes(lin, std::to_string(i) + "," + fmt(times[s]), z.coeffs());
                lin_ms = z.grid().mean_square();
                for (int j : degrees) {
                    const auto w = wick_power(z, *profile, radius, j);
                    append_modes(wk, std::to_string(i) + "," + fmt(times[s]) + "," + std::to_string(j), w.coeffs);
                }
            }
            sm << i << ',' << stream << ',' << fmt(times[s]) << ',' << fmt(lin_ms) << ',' << fmt(noise_ms[s]) << '\n';
        }
        members[static_cast<std::size_t>(i)] = {lin.str(), wk.str(), nz.str(), sm.str()};
        return std::string();
    });

    auto gather = [&](std::string MemberText::*field) {
        std::string s;
        for (const auto& m : members)
            s += m.*field;
        return s;
    };
    if (pair)
        outputs.write_csv("linear.csv", "member,time" + freq_header(dim) + ",re,im\n" + gather(&MemberText::linear));
    if (!degrees.empty()) {
        outputs.write_csv("wick.csv", "member,time,j" + freq_header(dim) + ",re,im\n" + gather(&MemberText::wick));
        std::ostringstream var;
        var << "time,cutoff,variance\n";
        for (double t : times)
            var << fmt(t) << ',' << radius << ',' << fmt(truncated_variance(*profile, radius, t)) << '\n';
        outputs.write_csv("wick_variance.csv", var.str());
    }
    if (multiplier)
        outputs.write_csv("noise.csv", "member,time" + freq_header(dim) + ",re,im\n" + gather(&MemberText::noise));
    outputs.write_csv("summary.csv", "member,stream,time,linear_mean_square,noise_mean_square\n" +
                                         gather(&MemberText::summary));
    outputs.write_manifest();
    log << "sample: " << ensemble << " member(s) written to " << common.out << " (manifest " << outputs.hash()
        << ")\n";
    return kExitOk;
}

int cmd_moments(const json& config, std::ostream& log)
{
    json resolved = json::object();
    Section root(config, resolved, "");
    const auto common = read_common(root);
    const auto lattice = read_lattice(root.child("lattice"), common.budget_bytes);
    auto profile_section = root.child("profile");
    const bool power_law = config.contains("profile") && config["profile"].is_object() &&
                           config["profile"].value("family", "") == "power-law";
    const auto profile = read_profile(profile_section, lattice);
    const int j = root.required<int>("j");
    if (j < 1)
        throw ConfigError(root.field("j"), "must be >= 1");
    const double t = root.optional<double>("t", 0.0);
    const auto sigmas = root.optional<std::vector<double>>("sigma", {0.0});
    const auto cutoffs = root.optional<std::vector<int>>("cutoffs", {lattice->cutoff()});
    check_cutoffs(cutoffs, lattice->cutoff(), root.field("cutoffs"));
    const auto method_name = root.optional<std::string>("method", "auto");
    MomentOptions opts;
    try {
        opts.method = parse_moment_method(method_name);
    } catch (const InvalidArgument& e) {
        throw ConfigError(root.field("method"), e.what());
    }
    opts.budget_bytes = common.budget_bytes;
    const bool write_modes = root.optional<bool>("write_modes", true);
    std::optional<double> adm_p, adm_s;
    if (root.has("admissibility")) {
        auto adm = root.child("admissibility");
        adm_p = adm.required<double>("p");
        if (adm.has("s") || !power_law)
            adm_s = adm.required<double>("s");
        else
            adm_s = adm.optional<double>("s", regularity_threshold(lattice->dim(), profile.alpha()));
        adm.done();
    }
    root.done();

    OutputSet outputs(common.out, "moments", resolved);
    json report = {{"j", j}, {"t", t}, {"rows", json::array()}};
    std::ostringstream table;
    table << "cutoff,method,sigma,value\n";
    for (int N : cutoffs) {
        auto r = second_moment_per_mode(profile, N, j, t, opts);
        json row = {{"cutoff", N}, {"method", to_string(r.method)}, {"support_size", r.support_size()},
                    {"hsigma", json::object()}};
        for (double s : sigmas) {
            const double v = r.h_sigma(s);
            row["hsigma"][fmt(s)] = v;
            table << N << ',' << to_string(r.method) << ',' << fmt(s) << ',' << fmt(v) << '\n';
        }
        report["rows"].push_back(row);
        if (write_modes) {
            std::ostringstream csv;
            r.write_csv(csv);
            outputs.write_csv("modes_N" + std::to_string(N) + ".csv", csv.str());
        }
    }
    if (adm_p) {
        json verdicts = json::array();
        for (double s : sigmas) {
            json v = {{"sigma", s}, {"s", *adm_s}, {"p", *adm_p}};
            try {
                v["verdict"] = admissibility_json(admissible(lattice->dim(), j, *adm_s, s, *adm_p));
            } catch (const InvalidArgument& e) {
                v["verdict"] = admissibility_json({false, AdmissibleBranch::None, 0.0, e.what()});
            }
            verdicts.push_back(v);
        }
        report["admissibility"] = verdicts;
    }
    outputs.write_json("moments.json", report);
    outputs.write_csv("hsigma.csv", table.str());
    outputs.write_manifest();
    log << "moments: " << cutoffs.size() << " cutoff(s) written to " << common.out << " (manifest "
        << outputs.hash() << ")\n";
    return kExitOk;
}

int cmd_converge(const json& config, std::ostream& log)
{
    json resolved = json::object();
    Section root(config, resolved, "");
    const auto common = read_common(root);
    const auto lattice = read_lattice(root.child("lattice"), common.budget_bytes);
    const auto profile = read_profile(root.child("profile"), lattice);
    const int j = root.required<int>("j");
    if (j < 1)
        throw ConfigError(root.field("j"), "must be >= 1");
    const double t = root.optional<double>("t", 0.0);
    const double sigma = root.optional<double>("sigma", 0.0);
    const auto cutoffs = root.required<std::vector<int>>("cutoffs");
    check_cutoffs(cutoffs, lattice->cutoff() / 2, root.field("cutoffs"));
    root.done();

    OutputSet outputs(common.out, "converge", resolved);
    MomentOptions opts;
    opts.budget_bytes = common.budget_bytes;
    std::ostringstream csv;
    csv << "N,M,h_N,h_M,tail_distance\n";
    std::vector<double> tails;
    for (int N : cutoffs) {
        auto lo = second_moment_per_mode(profile, N, j, t, opts);
        auto hi = second_moment_per_mode(profile, 2 * N, j, t, opts);
        const double hn = lo.h_sigma(sigma);
        const double hm = hi.h_sigma(sigma);
        const double tail = std::max(0.0, hm - hn);
        tails.push_back(tail);
        csv << N << ',' << 2 * N << ',' << fmt(hn) << ',' << fmt(hm) << ',' << fmt(tail) << '\n';
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < tails.size(); ++i)
        if (!(tails[i] < tails[i - 1]))
            decreasing = false;
    outputs.write_csv("converge.csv", csv.str());
    outputs.write_json("converge.json", {{"j", j},
                                         {"sigma", sigma},
                                         {"t", t},
                                         {"strictly_decreasing", decreasing},
                                         {"last_over_first", tails.front() > 0.0 ? tails.back() / tails.front() : 0.0}});
    outputs.write_manifest();
    log << "converge: " << cutoffs.size() << " cutoff(s) written to " << common.out << " (manifest "
        << outputs.hash() << ")\n";
    return kExitOk;
}

int cmd_counterexample(const json& config, std::ostream& log)
{
    json resolved = json::object();
    Section root(config, resolved, "");
    const auto common = read_common(root);
    const int dim = root.required<int>("dim");
    const int j = root.required<int>("j");
    const int m_max = root.optional<int>("m_max", 64);
    if (dim < 1 || dim > 3)
        throw ConfigError(root.field("dim"), "must lie in [1, 3]");
    if (j < 2)
        throw ConfigError(root.field("j"), "must be >= 2");
    if (m_max < 2 || m_max > kMaxDyadicExponent)
        throw ConfigError(root.field("m_max"), "must lie in [2, " + std::to_string(kMaxDyadicExponent) + "]");
    const auto log2_cutoffs = root.optional<std::vector<int>>("log2_cutoffs", {4, 8, 16, 32, 64});
    TruncationShape shape;
    try {
        shape = parse_truncation_shape(root.optional<std::string>("shape", "cube"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(root.field("shape"), e.what());
    }
    const auto sobolev = root.optional<std::vector<double>>("sobolev_orders", {-0.05, -0.2, -1.0});
    const auto fl = root.optional<std::vector<double>>("fl_exponents", {2.0 * j / (j - 1.0)});
    for (double p : fl)
        if (!(p >= 1.0))
            throw ConfigError(root.field("fl_exponents"), "exponents must be >= 1");
    auto oka = root.child_or_empty("oka");
    const int n1 = oka.optional<int>("n1", 4);
    const auto oka_cutoffs = oka.optional<std::vector<int>>("log2_cutoffs", {10, 15, 20, 25, 30, 35, 40});
    if (n1 < 4)
        throw ConfigError(oka.field("n1"), "must be >= 4");
    for (int K : oka_cutoffs)
        if (K < 0 || K > 63)
            throw ConfigError(oka.field("log2_cutoffs"), "entries must lie in [0, 63]");
    oka.done();
    root.done();

    const DyadicProfile profile(dim, j, m_max);
    OutputSet outputs(common.out, "counterexample", resolved);

    const auto mem = membership_report(profile, sobolev, fl);
    json mj = {{"dim", dim}, {"j", j}, {"m_max", m_max}, {"sobolev", json::array()}, {"fourier_lebesgue", json::array()}};
    for (const auto& r : mem.sobolev)
        mj["sobolev"].push_back({{"s", r.s},
                                 {"partial_sum", r.partial_sum},
                                 {"ratio", r.ratio},
                                 {"tail_bound", std::isfinite(r.tail_bound) ? json(r.tail_bound) : json("inf")},
                                 {"norm_sq_bound", std::isfinite(r.norm_sq_bound) ? json(r.norm_sq_bound) : json("inf")},
                                 {"classification", to_string(r.classification)}});
    for (const auto& r : mem.fourier_lebesgue)
        mj["fourier_lebesgue"].push_back({{"p", r.p},
                                          {"exponent", r.exponent},
                                          {"partial_sum", r.partial_sum},
                                          {"classification", to_string(r.classification)}});
    outputs.write_json("membership.json", mj);

    ZerothModeSeries series;
    try {
        series = zeroth_mode_moment(profile, log2_cutoffs, shape);
    } catch (const InvalidArgument& e) {
        throw ConfigError(root.field("log2_cutoffs"), e.what());
    }
    std::ostringstream zs;
    series.write_csv(zs);
    outputs.write_csv("zeroth_mode.csv", zs.str());

    json fit_json = {{"exact", series.exact}, {"shape", to_string(shape)}};
    try {
        const auto fit = divergence_rate_fit(series);
        std::ostringstream fs;
        fit.write_csv(fs);
        outputs.write_csv("divergence_fit.csv", fs.str());
        fit_json["min_ratio"] = fit.min_ratio;
        fit_json["max_ratio"] = fit.max_ratio;
        fit_json["strictly_increasing"] = fit.strictly_increasing;
        fit_json["bounded_band"] = fit.bounded_band;
        fit_json["increment_persistence"] = fit.increment_persistence;
        fit_json["divergence_asserted"] = fit.divergence_asserted;
    } catch (const InvalidArgument& e) {
        fit_json["error"] = e.what();
    }
    outputs.write_json("fit.json", fit_json);

    if (j >= 3) {
        const auto scan = oka_scan(profile, n1, oka_cutoffs);
        std::ostringstream os;
        os << "log2_N,sum,comparison,ratio\n";
        for (std::size_t i = 0; i < scan.sums.size(); ++i)
            os << scan.log2_cutoffs[i] << ',' << fmt(scan.sums[i].sum) << ',' << fmt(scan.sums[i].comparison) << ','
               << fmt(scan.sums[i].ratio) << '\n';
        outputs.write_csv("oka.csv", os.str());
        outputs.write_json("oka.json", {{"n1", n1},
                                        {"c_j", oka_constant(j)},
                                        {"onset_log2_N", scan.onset ? json(*scan.onset) : json(nullptr)}});
    }
    outputs.write_manifest();
    log << "counterexample: d=" << dim << " j=" << j << " written to " << common.out << " (manifest "
        << outputs.hash() << ")\n";
    return kExitOk;
}

int cmd_solve(const json& config, std::ostream& log)
{
    json resolved = json::object();
    Section root(config, resolved, "");
    const auto common = read_common(root);
    const auto lattice = read_lattice(root.child("lattice"), common.budget_bytes);
    SolverConfig cfg;
    cfg.k = root.optional<int>("k", 3);
    cfg.dt = root.required<double>("dt");
    cfg.horizon = root.required<double>("horizon");
    cfg.picard_tol = root.optional<double>("picard_tol", 1e-12);
    cfg.max_iter = root.optional<int>("max_iter", 60);
    cfg.blowup_ceiling = root.optional<double>("blowup_ceiling", 1e8);
    cfg.record_every = root.optional<int>("record_every", 1);
    if (cfg.k < 0 || cfg.k > kDefaultMaxWickDegree)
        throw ConfigError(root.field("k"), "must lie in [0, 8]");
    if (!(cfg.dt > 0.0))
        throw ConfigError(root.field("dt"), "must be > 0");
    if (!(cfg.horizon > 0.0))
        throw ConfigError(root.field("horizon"), "must be > 0");
    const long long steps = std::llround(cfg.horizon / cfg.dt);
    if (steps < 1 || std::abs(steps * cfg.dt - cfg.horizon) > 1e-9 * cfg.horizon)
        throw ConfigError(root.field("horizon"), "must be a whole number of dt steps");
    if (!(cfg.picard_tol > 0.0))
        throw ConfigError(root.field("picard_tol"), "must be > 0");
    if (cfg.max_iter < 1)
        throw ConfigError(root.field("max_iter"), "must be >= 1");
    if (cfg.record_every < 1)
        throw ConfigError(root.field("record_every"), "must be >= 1");
    if (cfg.k >= 1 && lattice->oversample() < cfg.k + 1)
        throw ConfigError("lattice.oversample", "k=" + std::to_string(cfg.k) + " needs oversample >= " +
                                                    std::to_string(cfg.k + 1));
    const auto init_pair = read_pair(root.child("init"), lattice);
    auto wick = root.child_or_empty("wick");
    const bool wick_on = wick.optional<bool>("enabled", false);
    std::optional<DataPair> wick_pair;
    int radius = lattice->cutoff();
    if (wick_on) {
        wick_pair = read_pair(wick.child("data"), lattice);
        radius = wick.optional<int>("radius", lattice->cutoff());
        if (radius < 0 || radius > lattice->cutoff())
            throw ConfigError(wick.field("radius"), "must lie in [0, lattice.cutoff]");
    }
    wick.done();
    root.done();

    OutputSet outputs(common.out, "solve", resolved);
    if (wick_pair) {
        std::vector<double> times;
        for (long long i = 0; i <= steps; ++i)
            times.push_back(cfg.horizon * static_cast<double>(i) / static_cast<double>(steps));
        const auto m = sample_multipliers(lattice, common.seed, common.stream);
        cfg.wick_source = std::make_shared<const WickSource>(
            WickSource::from_linear_solution(*wick_pair, m, radius, cfg.k, times));
    } else {
        cfg.wick_source = std::make_shared<const WickSource>(WickSource::zero(lattice, cfg.k));
    }
    const WaveState init(0.0, init_pair.u0, init_pair.u1);
    const auto res = solve_wick_nlw(init, cfg);

    std::ostringstream traj;
    traj << "t,energy,energy_norm,v_l2,v_t_l2\n";
    double drift = 0.0;
    for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
        const auto& s = res.trajectory[i];
        drift = std::max(drift, std::abs(res.energy[i] - res.energy.front()));
        traj << fmt(s.time) << ',' << fmt(res.energy[i]) << ',' << fmt(energy_norm(s)) << ','
             << fmt(sobolev_norm(s.v, 0.0)) << ',' << fmt(sobolev_norm(s.v_t, 0.0)) << '\n';
    }
    std::ostringstream st;
    st << "step,iterations,residual\n";
    for (std::size_t i = 0; i < res.iterations.size(); ++i)
        st << i + 1 << ',' << res.iterations[i] << ',' << fmt(res.residuals[i]) << '\n';
    outputs.write_csv("trajectory.csv", traj.str());
    outputs.write_csv("steps.csv", st.str());
    const int max_it = res.iterations.empty() ? 0 : *std::max_element(res.iterations.begin(), res.iterations.end());
    outputs.write_json("summary.json", {{"blow_up", res.blow_up},
                                        {"final_time", res.final_time},
                                        {"steps", res.iterations.size()},
                                        {"max_iterations", max_it},
                                        {"energy_drift", drift},
                                        {"wick_source", wick_on}});
    outputs.write_manifest();
    log << "solve: " << res.iterations.size() << " step(s) to t=" << fmt(res.final_time)
        << (res.blow_up ? " (blow-up)" : "") << ", written to " << common.out << " (manifest " << outputs.hash()
        << ")\n";
    return kExitOk;
}

} // namespace wickfield::cli
