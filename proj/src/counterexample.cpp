#include "wickfield/counterexample.hpp"

#include "detail/sparse_conv.hpp"
#include "wickfield/error.hpp"
#include "wickfield/moment_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>

namespace wickfield {

namespace {

using Key = __int128;
using U128 = unsigned __int128;

U128 isqrt(U128 x)
{
    if (x == 0)
        return 0;
    U128 r = static_cast<U128>(std::sqrt(static_cast<long double>(x)));
    while (r > 0 && r * r > x)
        --r;
    while ((r + 1) * (r + 1) <= x)
        ++r;
    return r;
}

int ceil_log4(int d)
{
    int e = 0;
    for (long long p = 1; p < d; p *= 4)
        ++e;
    return e;
}

/// sum over zero-sum j-tuples of coordinates with exponents <= k of prod a~^2
double coordinate_zero_sum(const DyadicProfile& prof, int k)
{
    const int top = std::min(k, prof.max_exponent);
    if (top < 1)
        return 0.0;
    std::vector<std::pair<Key, double>> terms;
    for (int m = 1; m <= top; ++m) {
        const double g = std::pow(static_cast<double>(m), -static_cast<double>(prof.degree - 1) / prof.degree);
        terms.emplace_back(Key{1} << m, g);
        terms.emplace_back(-(Key{1} << m), g);
    }
    const auto base = detail::collect(terms);
    const auto partial = detail::convolution_power(base, prof.degree - 1, std::size_t{200'000'000});
    double total = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i)
        total += base.values[i] * partial.lookup(-base.keys[i]);
    return total;
}

} // namespace

DyadicProfile::DyadicProfile(int d, int j, int m_max) : dim(d), degree(j), max_exponent(m_max)
{
    if (d < 1)
        throw InvalidArgument("dimension must be >= 1");
    if (j < 2)
        throw InvalidArgument("counterexample degree must be >= 2");
    if (m_max < 1 || m_max > kMaxDyadicExponent)
        throw InvalidArgument("dyadic exponent cap must lie in [1, " + std::to_string(kMaxDyadicExponent) + "]");
}

int DyadicProfile::exponent_of(__int128 n) const
{
    U128 a = n < 0 ? static_cast<U128>(-n) : static_cast<U128>(n);
    if (a < 2 || (a & (a - 1)) != 0)
        return 0;
    int m = 0;
    while (a > 1) {
        a >>= 1;
        ++m;
    }
    return m <= max_exponent ? m : 0;
}

double DyadicProfile::coordinate(__int128 n) const
{
    const int m = exponent_of(n);
    if (m == 0)
        return 0.0;
    return std::pow(static_cast<double>(m), -static_cast<double>(degree - 1) / (2.0 * degree));
}

double DyadicProfile::coefficient(std::span<const std::int64_t> n) const
{
    if (static_cast<int>(n.size()) != dim)
        throw InvalidArgument("frequency has the wrong dimension");
    double v = 1.0;
    for (auto c : n) {
        v *= coordinate(c);
        if (v == 0.0)
            break;
    }
    return v;
}

double DyadicProfile::gamma(std::span<const std::int64_t> n) const
{
    const double a = coefficient(n);
    return a * a;
}

std::vector<std::int64_t> DyadicProfile::coordinate_support() const
{
    if (max_exponent > kMaxSparseExponent)
        throw InvalidArgument("coordinate support beyond 2^" + std::to_string(kMaxSparseExponent) +
                              " does not fit in 64-bit frequencies");
    std::vector<std::int64_t> out;
    for (int m = max_exponent; m >= 1; --m)
        out.push_back(-(std::int64_t{1} << m));
    for (int m = 1; m <= max_exponent; ++m)
        out.push_back(std::int64_t{1} << m);
    return out;
}

Counterexample build_counterexample(int d, int j, int m_max)
{
    if (m_max < 2 || m_max > kMaxSparseExponent)
        throw InvalidArgument("m_max must lie in [2, " + std::to_string(kMaxSparseExponent) + "]");
    DyadicProfile prof(d, j, m_max);
    const auto axis = prof.coordinate_support();
    const double count = std::pow(static_cast<double>(axis.size()), d);
    if (count > 1e7)
        throw BudgetExceeded("counterexample support of " + std::to_string(count) + " frequencies exceeds 10^7");

    Counterexample ce{prof, SparseCoeffs{d, {}, {}}, SparseCoeffs{d, {}, {}}};
    std::vector<std::size_t> pos(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> n(static_cast<std::size_t>(d));
    for (;;) {
        long double sq = 1.0L;
        for (int a = 0; a < d; ++a) {
            n[a] = axis[pos[a]];
            sq += static_cast<long double>(n[a]) * static_cast<long double>(n[a]);
        }
        const double a0 = prof.coefficient(n);
        ce.u0.frequencies.insert(ce.u0.frequencies.end(), n.begin(), n.end());
        ce.u0.values.push_back(a0);
        ce.u1.frequencies.insert(ce.u1.frequencies.end(), n.begin(), n.end());
        ce.u1.values.push_back(static_cast<double>(std::sqrt(sq) * a0));
        int a = 0;
        while (a < d && ++pos[a] == axis.size())
            pos[a++] = 0;
        if (a == d)
            break;
    }
    return ce;
}

DataPair counterexample_pair(const DyadicProfile& profile, const LatticePtr& lattice)
{
    if (lattice->dim() != profile.dim)
        throw InvalidArgument("lattice and counterexample dimensions differ");
    auto u0 = HermitianCoeffs::from_function(lattice, [&](std::span<const int> n) {
        std::vector<std::int64_t> w(n.begin(), n.end());
        return Complex(profile.coefficient(w), 0.0);
    });
    auto u1 = bracket_derivative(u0);
    return {std::move(u0), std::move(u1)};
}

GammaProfile dyadic_gamma_profile(const DyadicProfile& profile, const LatticePtr& lattice)
{
    if (lattice->dim() != profile.dim)
        throw InvalidArgument("lattice and counterexample dimensions differ");
    auto eval = [profile](std::span<const int> n, double) {
        std::vector<std::int64_t> w(n.begin(), n.end());
        return profile.gamma(w);
    };
    auto factor = [profile](std::int64_t m, double) {
        const double a = profile.coordinate(m);
        return a * a;
    };
    return {lattice, ProfileKind::Custom, eval, GammaProfile::CoordinateFactor(factor)};
}

MembershipReport membership_report(const DyadicProfile& profile, const std::vector<double>& sobolev_orders,
                                   const std::vector<double>& fl_exponents)
{
    const int d = profile.dim;
    const int j = profile.degree;
    const int M = profile.max_exponent;
    const double e = static_cast<double>(j - 1) / j;
    MembershipReport rep;

    for (double s : sobolev_orders) {
        SobolevMembership row;
        row.s = s;
        row.ratio = std::pow(4.0, s / d);
        for (int m = 1; m <= M; ++m) {
            const double log_bracket_sq = m * std::log(4.0) + std::log1p(std::pow(4.0, -m));
            row.partial_sum += std::exp((s / d) * log_bracket_sq - e * std::log(static_cast<double>(m)));
        }
        if (row.ratio < 1.0) {
            // (1 + 4^m)^{s/d} <= q^m and m^{-e} <= (M+1)^{-e} beyond M
            row.tail_bound = std::pow(row.ratio, M + 1) / (1.0 - row.ratio) * std::pow(M + 1.0, -e);
            row.classification = TailClass::Finite;
            // <n>^{2s} <= prod_i <n_i>^{2s/d} for s < 0; the pair norm doubles u0's
            row.norm_sq_bound = 2.0 * std::pow(2.0 * (row.partial_sum + row.tail_bound), d);
        } else {
            // terms are at least 2^{...} m^{-e} with e < 1: a divergent p-series
            row.tail_bound = kInfinity;
            row.classification = TailClass::Divergent;
            row.norm_sq_bound = kInfinity;
        }
        rep.sobolev.push_back(row);
    }

    std::vector<double> ps = fl_exponents;
    if (ps.empty())
        ps.push_back(2.0 * j / (j - 1.0));
    for (double p : ps) {
        if (!(p >= 1.0))
            throw InvalidArgument("Fourier-Lebesgue exponent must be >= 1");
        FourierLebesgueMembership row;
        row.p = p;
        if (std::isinf(p)) {
            row.exponent = kInfinity;
            row.partial_sum = 1.0;
            row.classification = TailClass::Finite;
        } else {
            row.exponent = p * (j - 1.0) / (2.0 * j);
            for (int m = M; m >= 1; --m)
                row.partial_sum += std::pow(static_cast<double>(m), -row.exponent);
            row.classification = row.exponent > 1.0 ? TailClass::Finite : TailClass::Divergent;
        }
        rep.fourier_lebesgue.push_back(row);
    }
    return rep;
}

void ZerothModeSeries::write_csv(std::ostream& os) const
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "log2_N,value,cube,inscribed_cube\n" << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << log2_cutoffs[i] << ',' << values[i] << ',';
        if (i < cube.size())
            os << cube[i];
        os << ',';
        if (i < inscribed_cube.size())
            os << inscribed_cube[i];
        os << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

ZerothModeSeries zeroth_mode_moment(const DyadicProfile& profile, const std::vector<int>& log2_cutoffs,
                                    TruncationShape shape)
{
    int headroom = 126;
    for (int j = profile.degree; j > 1; j = (j + 1) / 2)
        --headroom;
    ZerothModeSeries out;
    out.dim = profile.dim;
    out.degree = profile.degree;
    out.shape = shape;
    out.exact = shape == TruncationShape::Cube || profile.dim == 1;

    std::map<int, double> cache;
    auto coord = [&](int k) {
        auto it = cache.find(k);
        if (it != cache.end())
            return it->second;
        const double v = coordinate_zero_sum(profile, k);
        cache.emplace(k, v);
        return v;
    };
    const double jf = factorial(profile.degree);
    const int shrink = ceil_log4(profile.dim);
    for (int K : log2_cutoffs) {
        if (K < 0 || K > headroom)
            throw InvalidArgument("log2 cutoff " + std::to_string(K) + " outside [0, " + std::to_string(headroom) +
                                  "]");
        const double cube = jf * std::pow(coord(K), profile.dim);
        const double inner = jf * std::pow(coord(K - shrink), profile.dim);
        out.log2_cutoffs.push_back(K);
        out.cube.push_back(cube);
        out.inscribed_cube.push_back(inner);
        out.values.push_back(shape == TruncationShape::Cube || profile.dim == 1 ? cube : inner);
    }
    return out;
}

ZerothModeSeries zeroth_mode_moment(const GammaProfile& profile, const std::vector<int>& cutoffs, int j, double t)
{
    ZerothModeSeries out;
    out.dim = profile.lattice().dim();
    out.degree = j;
    out.shape = profile.lattice().shape();
    const std::vector<std::int64_t> zero(static_cast<std::size_t>(out.dim), 0);
    for (int N : cutoffs) {
        if (N < 1)
            throw InvalidArgument("cutoffs must be >= 1");
        const auto r = second_moment_per_mode(profile, N, j, t);
        out.log2_cutoffs.push_back(std::log2(static_cast<double>(N)));
        out.values.push_back(r.per_mode(zero));
    }
    return out;
}

void DivergenceFit::write_csv(std::ostream& os) const
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "log2_N,value,loglogN_pow_d,ratio\n" << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i)
        os << log2_cutoffs[i] << ',' << values[i] << ',' << values[i] / ratios[i] << ',' << ratios[i] << '\n';
    os.flags(flags);
    os.precision(prec);
}

DivergenceFit divergence_rate_fit(const ZerothModeSeries& series)
{
    const std::size_t n = series.values.size();
    if (n < 3 || series.log2_cutoffs.size() != n)
        throw InvalidArgument("divergence fit needs at least 3 points");
    for (std::size_t i = 1; i < n; ++i)
        if (series.log2_cutoffs[i] <= series.log2_cutoffs[i - 1])
            throw InvalidArgument("cutoffs must be strictly increasing");
    const double lo = series.log2_cutoffs.front();
    const double hi = series.log2_cutoffs.back();
    if (lo * std::log(2.0) <= 1.0)
        throw InvalidArgument("log log N must be positive at every cutoff (need log2 N > 1/ln 2)");
    if (hi / lo < 16.0)
        throw InvalidArgument("scan spans fewer than 4 doublings of log2 N");

    DivergenceFit fit;
    fit.dim = series.dim;
    fit.log2_cutoffs = series.log2_cutoffs;
    fit.values = series.values;
    for (std::size_t i = 0; i < n; ++i) {
        const double loglog = std::log(series.log2_cutoffs[i] * std::log(2.0));
        fit.ratios.push_back(series.values[i] / std::pow(loglog, series.dim));
    }
    fit.min_ratio = *std::min_element(fit.ratios.begin(), fit.ratios.end());
    fit.max_ratio = *std::max_element(fit.ratios.begin(), fit.ratios.end());
    fit.strictly_increasing = true;
    for (std::size_t i = 1; i < n; ++i)
        if (!(series.values[i] > series.values[i - 1]))
            fit.strictly_increasing = false;
    fit.bounded_band = fit.min_ratio > 0.0 && fit.max_ratio / fit.min_ratio <= kDivergenceBand;
    const double first = series.values[1] - series.values[0];
    const double last = series.values[n - 1] - series.values[n - 2];
    fit.increment_persistence = first > 0.0 ? last / first : 0.0;
    fit.divergence_asserted =
        fit.strictly_increasing && fit.bounded_band && fit.increment_persistence >= kIncrementPersistence;
    return fit;
}

double oka_constant(int j)
{
    double log2c = 0.0;
    for (int k = 3; k <= j; ++k)
        log2c -= std::pow(2.0, static_cast<double>(j) / (j - k + 1));
    return std::exp2(log2c);
}

OkaSum oka_restricted_sum(const DyadicProfile& profile, std::int64_t n1, unsigned __int128 cutoff)
{
    const int j = profile.degree;
    if (j < 3)
        throw InvalidArgument("restricted sum needs j >= 3");
    if (n1 < 4)
        throw InvalidArgument("restricted sum needs n1 >= 4");
    if (cutoff >> 64)
        throw InvalidArgument("cutoff must be below 2^64");
    OkaSum out;
    out.comparison = std::pow(std::log2(static_cast<double>(n1)), -1.0 + static_cast<double>(j - 1) / j);

    const long double bound = oka_constant(j) * static_cast<long double>(cutoff) / std::sqrt(static_cast<long double>(profile.dim));
    if (static_cast<long double>(n1) > bound)
        return out;

    const U128 L = isqrt(cutoff * cutoff / static_cast<U128>(profile.dim));
    int top = 0;
    while (top < profile.max_exponent && (U128{1} << (top + 1)) <= L)
        ++top;
    if (top < 2)
        return out;

    std::vector<double> g(static_cast<std::size_t>(top + 1), 0.0);
    for (int m = 2; m <= top; ++m) {
        const double a = profile.coordinate(Key{1} << m);
        g[m] = a * a;
    }
    double total = 0.0;
    // nondecreasing exponents m_2 <= ... <= m_{j-1} in [2, top]
    std::function<void(int, int, double, U128)> walk = [&](int depth, int from, double weight, U128 sum) {
        if (depth == j - 2) {
            const double a = profile.coordinate(static_cast<Key>(static_cast<U128>(n1) + sum));
            total += weight * a * a;
            return;
        }
        for (int m = from; m <= top; ++m)
            walk(depth + 1, m, weight * g[m], sum + (U128{1} << m));
    };
    walk(0, 2, 1.0, 0);
    out.sum = total;
    out.ratio = total / out.comparison;
    return out;
}

OkaScan oka_scan(const DyadicProfile& profile, std::int64_t n1, const std::vector<int>& log2_cutoffs,
                 double tolerance)
{
    OkaScan scan;
    scan.log2_cutoffs = log2_cutoffs;
    for (int K : log2_cutoffs) {
        if (K < 0 || K > 63)
            throw InvalidArgument("log2 cutoff must lie in [0, 63]");
        scan.sums.push_back(oka_restricted_sum(profile, n1, U128{1} << K));
    }
    for (std::size_t i = 0; i < scan.sums.size(); ++i) {
        if (scan.sums[i].ratio <= 0.0)
            continue;
        bool settled = true;
        for (std::size_t k = i + 1; k < scan.sums.size(); ++k) {
            const double prev = scan.sums[k - 1].ratio;
            if (prev <= 0.0 || std::abs(scan.sums[k].ratio - prev) > tolerance * prev) {
                settled = false;
                break;
            }
        }
        if (settled) {
            scan.onset = log2_cutoffs[i];
            break;
        }
    }
    return scan;
}

} // namespace wickfield
