#include "wickfield/cli.hpp"

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <optional>

namespace wickfield::cli {

namespace {

using nlohmann::json;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> stream;
    std::optional<int> workers;
    std::optional<int> budget_mb;
    std::optional<std::string> out;
};

void add_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON configuration file")->required();
    sub->add_option("--seed", f.seed, "RNG seed (overrides config)");
    sub->add_option("--stream", f.stream, "base RNG stream (overrides config)");
    sub->add_option("--workers", f.workers, "worker threads (overrides config)");
    sub->add_option("--budget-mb", f.budget_mb, "memory budget in MiB (overrides config)");
    sub->add_option("--out", f.out, "output directory (overrides config)");
}

json load_config(const Flags& f)
{
    std::ifstream is(f.config);
    if (!is)
        throw ConfigError("--config", "cannot open '" + f.config + "'");
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (!cfg.is_object())
        throw ConfigError("--config", "top level must be an object");
    if (f.seed)
        cfg["seed"] = *f.seed;
    if (f.stream)
        cfg["stream"] = *f.stream;
    if (f.workers)
        cfg["workers"] = *f.workers;
    if (f.budget_mb)
        cfg["budget_mb"] = *f.budget_mb;
    if (f.out)
        cfg["out"] = *f.out;
    return cfg;
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& message,
           const std::string& field = {})
{
    json e = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    if (!field.empty())
        e["error"]["field"] = field;
    err << e.dump() << '\n';
    return code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Wick power moments, counterexamples and renormalized wave solver"};
    app.require_subcommand(1);
    Flags flags;
    using Command = std::function<int(const json&, std::ostream&)>;
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"sample", {"sample randomized data, Wick powers and stochastic convolutions", cmd_sample}},
        {"moments", {"exact second moments of truncated Wick powers", cmd_moments}},
        {"counterexample", {"divergence diagnostics for the dyadic data family", cmd_counterexample}},
        {"converge", {"tail-distance scans between cutoffs N and 2N", cmd_converge}},
        {"solve", {"Wick-renormalized nonlinear wave solver", cmd_solve}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        add_flags(sub, flags);
        subs[name] = sub;
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return report(err, kExitConfig, "usage", e.what());
    }

    try {
        for (const auto& [name, sub] : subs)
            if (sub->parsed())
                return commands.at(name).second(load_config(flags), out);
    } catch (const ConfigError& e) {
        return report(err, kExitConfig, "config", e.what(), e.field());
    } catch (const InvalidArgument& e) {
        return report(err, kExitConfig, "invalid-argument", e.what());
    } catch (const BudgetExceeded& e) {
        return report(err, kExitBudget, "budget", e.what());
    } catch (const NumericFailure& e) {
        return report(err, kExitNumeric, "numeric", e.what());
    } catch (const SymmetryViolation& e) {
        return report(err, kExitNumeric, "numeric", e.what());
    } catch (const std::exception& e) {
        return report(err, kExitFailure, "error", e.what());
    }
    return report(err, kExitConfig, "usage", "no subcommand given");
}

} // namespace wickfield::cli
