#include "config.hpp"

#include "wickfield/counterexample.hpp"
#include "wickfield/stochastic_conv.hpp"

#include <cmath>
#include <limits>

namespace wickfield::cli {

const json Section::kEmpty = json::object();

Section::Section(const json& source, json& resolved, std::string path)
    : src_(&source), res_(&resolved), path_(std::move(path))
{
    if (!src_->is_object())
        throw ConfigError(path_, "expected an object");
    if (!res_->is_object())
        *res_ = json::object();
}

std::string Section::field(const std::string& key) const
{
    return path_.empty() ? key : path_ + "." + key;
}

bool Section::has(const std::string& key) const
{
    return src_->contains(key);
}

template <class T>
T Section::convert(const json& v, const std::string& key) const
{
    const auto name = field(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
            throw ConfigError(name, "expected a boolean");
        return v.get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer())
            throw ConfigError(name, "expected an integer");
        const auto x = v.get<long long>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
            throw ConfigError(name, "integer out of range");
        return static_cast<int>(x);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (v.is_number_unsigned())
            return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0)
            return static_cast<std::uint64_t>(v.get<long long>());
        throw ConfigError(name, "expected a nonnegative integer");
    } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number())
            throw ConfigError(name, "expected a number");
        return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            throw ConfigError(name, "expected a string");
        return v.get<std::string>();
    } else {
        using E = typename T::value_type;
        if (!v.is_array())
            throw ConfigError(name, "expected an array");
        T out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(convert<E>(v[i], key + "[" + std::to_string(i) + "]"));
        return out;
    }
}

template <class T>
T Section::required(const std::string& key)
{
    seen_.insert(key);
    if (!src_->contains(key))
        throw ConfigError(field(key), "required field is missing");
    T v = convert<T>((*src_)[key], key);
    (*res_)[key] = v;
    return v;
}

template <class T>
T Section::optional(const std::string& key, T fallback)
{
    seen_.insert(key);
    T v = src_->contains(key) ? convert<T>((*src_)[key], key) : fallback;
    (*res_)[key] = v;
    return v;
}

Section Section::child(const std::string& key)
{
    seen_.insert(key);
    if (!src_->contains(key))
        throw ConfigError(field(key), "required section is missing");
    return Section((*src_)[key], (*res_)[key], field(key));
}

Section Section::child_or_empty(const std::string& key)
{
    seen_.insert(key);
    return Section(src_->contains(key) ? (*src_)[key] : kEmpty, (*res_)[key], field(key));
}

void Section::done()
{
    for (auto it = src_->begin(); it != src_->end(); ++it)
        if (!seen_.count(it.key()))
            throw ConfigError(field(it.key()), "unknown field");
}

template bool Section::required<bool>(const std::string&);
template int Section::required<int>(const std::string&);
template std::uint64_t Section::required<std::uint64_t>(const std::string&);
template double Section::required<double>(const std::string&);
template std::string Section::required<std::string>(const std::string&);
template std::vector<int> Section::required<std::vector<int>>(const std::string&);
template std::vector<double> Section::required<std::vector<double>>(const std::string&);
template bool Section::optional<bool>(const std::string&, bool);
template int Section::optional<int>(const std::string&, int);
template std::uint64_t Section::optional<std::uint64_t>(const std::string&, std::uint64_t);
template double Section::optional<double>(const std::string&, double);
template std::string Section::optional<std::string>(const std::string&, std::string);
template std::vector<int> Section::optional<std::vector<int>>(const std::string&, std::vector<int>);
template std::vector<double> Section::optional<std::vector<double>>(const std::string&, std::vector<double>);

CommonOptions read_common(Section& root)
{
    CommonOptions c;
    c.seed = root.optional<std::uint64_t>("seed", 0);
    c.stream = root.optional<std::uint64_t>("stream", 0);
    c.workers = root.optional<int>("workers", 1);
    if (c.workers < 1)
        throw ConfigError(root.field("workers"), "must be >= 1");
    const int mb = root.optional<int>("budget_mb", static_cast<int>(kDefaultBudgetBytes >> 20));
    if (mb < 1)
        throw ConfigError(root.field("budget_mb"), "must be >= 1");
    c.budget_bytes = static_cast<std::size_t>(mb) << 20;
    c.out = root.required<std::string>("out");
    if (c.out.empty())
        throw ConfigError(root.field("out"), "must not be empty");
    return c;
}

LatticePtr read_lattice(Section s, std::size_t budget)
{
    const int dim = s.required<int>("dim");
    const int cutoff = s.required<int>("cutoff");
    const std::string shape = s.optional<std::string>("shape", "ball");
    const int oversample = s.optional<int>("oversample", 1);
    s.done();
    TruncationShape ts;
    try {
        ts = parse_truncation_shape(shape);
    } catch (const InvalidArgument& e) {
        throw ConfigError(s.field("shape"), e.what());
    }
    if (dim < 1 || dim > 3)
        throw ConfigError(s.field("dim"), "must lie in [1, 3]");
    if (cutoff < 0)
        throw ConfigError(s.field("cutoff"), "must be >= 0");
    if (oversample < 1)
        throw ConfigError(s.field("oversample"), "must be >= 1");
    return build_lattice(dim, cutoff, ts, oversample, budget);
}

namespace {

HermitianCoeffs single_mode(const LatticePtr& lattice, const std::vector<int>& mode, double amplitude,
                            const std::string& field)
{
    HermitianCoeffs c(lattice);
    const auto k = lattice->index_of(mode);
    if (!k)
        throw ConfigError(field, "mode is not on the lattice");
    // amplitude * cos(n.x)
    const bool zero = *k == lattice->conjugate_index(*k);
    c.set(*k, Complex(zero ? amplitude : 0.5 * amplitude, 0.0));
    return c;
}

} // namespace

DataPair read_pair(Section s, const LatticePtr& lattice)
{
    const std::string family = s.required<std::string>("family");
    if (family == "power-law") {
        const double alpha = s.required<double>("alpha");
        s.done();
        return power_law_pair(lattice, alpha);
    }
    if (family == "bracket-power") {
        const double beta = s.required<double>("beta");
        s.done();
        auto u0 = HermitianCoeffs::from_function(
            lattice, [beta](std::span<const int> n) { return Complex(std::pow(bracket(n), -beta), 0.0); });
        auto u1 = bracket_derivative(u0);
        return {std::move(u0), std::move(u1)};
    }
    if (family == "counterexample") {
        const int j = s.required<int>("j");
        const int m_max = s.optional<int>("m_max", 30);
        s.done();
        if (j < 2)
            throw ConfigError(s.field("j"), "must be >= 2");
        if (m_max < 1 || m_max > 30)
            throw ConfigError(s.field("m_max"), "must lie in [1, 30]");
        return counterexample_pair(DyadicProfile(lattice->dim(), j, m_max), lattice);
    }
    if (family == "single-mode") {
        const auto mode = s.required<std::vector<int>>("mode");
        const double amplitude = s.optional<double>("amplitude", 1.0);
        const double velocity = s.optional<double>("velocity", 0.0);
        s.done();
        if (static_cast<int>(mode.size()) != lattice->dim())
            throw ConfigError(s.field("mode"), "needs one entry per dimension");
        return {single_mode(lattice, mode, amplitude, s.field("mode")),
                single_mode(lattice, mode, velocity, s.field("mode"))};
    }
    if (family == "zero") {
        s.done();
        return {HermitianCoeffs(lattice), HermitianCoeffs(lattice)};
    }
    throw ConfigError(s.field("family"),
                      "unknown data family '" + family +
                          "' (expected power-law, bracket-power, counterexample, single-mode or zero)");
}

GammaProfile read_profile(Section s, const LatticePtr& lattice)
{
    const std::string family = s.required<std::string>("family");
    if (family == "constant") {
        const double value = s.optional<double>("value", 1.0);
        s.done();
        if (!(value >= 0.0))
            throw ConfigError(s.field("value"), "must be >= 0");
        const double root = std::pow(value, 1.0 / lattice->dim());
        return {lattice, ProfileKind::Custom, [value](std::span<const int>, double) { return value; },
                GammaProfile::CoordinateFactor([root](std::int64_t, double) { return root; })};
    }
    if (family == "power-law") {
        const double alpha = s.required<double>("alpha");
        s.done();
        return gamma_power_law(lattice, alpha);
    }
    if (family == "pair") {
        auto pair = read_pair(s.child("data"), lattice);
        s.done();
        return gamma_from_pair(pair);
    }
    if (family == "wave-noise" || family == "heat-noise") {
        const double alpha = s.required<double>("alpha");
        s.done();
        return gamma_from_multiplier(power_law_multiplier(lattice, alpha),
                                     family == "wave-noise" ? ConvolutionKind::Wave : ConvolutionKind::Heat);
    }
    if (family == "counterexample") {
        const int j = s.required<int>("j");
        const int m_max = s.optional<int>("m_max", 30);
        s.done();
        if (j < 2)
            throw ConfigError(s.field("j"), "must be >= 2");
        if (m_max < 1 || m_max > 30)
            throw ConfigError(s.field("m_max"), "must lie in [1, 30]");
        return dyadic_gamma_profile(DyadicProfile(lattice->dim(), j, m_max), lattice);
    }
    throw ConfigError(s.field("family"), "unknown profile family '" + family +
                                             "' (expected constant, power-law, pair, wave-noise, heat-noise or "
                                             "counterexample)");
}

} // namespace wickfield::cli
