#include "wickfield/moment_oracle.hpp"

#include "detail/sparse_conv.hpp"
#include "wickfield/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace wickfield {

namespace {

using detail::SparseSeries;

std::int64_t checked_pow(std::int64_t base, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / 4 / base)
            throw BudgetExceeded("frequency packing overflows 64 bits");
        r *= base;
    }
    return r;
}

template <class Int>
std::int64_t pack(std::span<const Int> n, std::int64_t base)
{
    std::int64_t key = 0;
    for (std::size_t i = n.size(); i-- > 0;)
        key = key * base + static_cast<std::int64_t>(n[i]);
    return key;
}

void unpack(std::int64_t key, std::int64_t base, std::span<std::int64_t> out)
{
    for (auto& digit : out) {
        std::int64_t r = key % base;
        if (r < 0)
            r += base;
        if (r > base / 2)
            r -= base;
        digit = r;
        key = (key - r) / base;
    }
}

double weight(std::span<const std::int64_t> n, double sigma)
{
    if (sigma == 0.0)
        return 1.0;
    double sq = 1.0;
    for (auto v : n)
        sq += static_cast<double>(v) * static_cast<double>(v);
    return std::pow(sq, sigma);
}

double product_size(std::size_t factor, int dim)
{
    return std::pow(static_cast<double>(factor), dim);
}

constexpr double kProductEnumerationLimit = 1e8;

struct Support {
    std::vector<std::size_t> indices;
    std::vector<double> gamma;
};

Support truncated_support(const GammaProfile& profile, int radius, double t)
{
    const auto table = profile.tabulate(radius, t);
    Support s;
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k] < 0.0 || !std::isfinite(table[k]))
            throw InvalidArgument("variance profile must be finite and nonnegative");
        if (table[k] > 0.0) {
            s.indices.push_back(k);
            s.gamma.push_back(table[k]);
        }
    }
    return s;
}

void sparse_moments(MomentReport& r, const GammaProfile& profile, int radius, int j, double t,
                    const MomentOptions& opt)
{
    const auto& lat = profile.lattice();
    const std::int64_t base = 2 * static_cast<std::int64_t>(j) * radius + 2;
    checked_pow(base, lat.dim());
    const Support sup = truncated_support(profile, radius, t);

    std::vector<std::pair<std::int64_t, double>> terms;
    terms.reserve(sup.indices.size());
    for (std::size_t i = 0; i < sup.indices.size(); ++i)
        terms.emplace_back(pack(lat.frequency(sup.indices[i]), base), sup.gamma[i]);
    const auto gamma = detail::collect(terms);

    const std::size_t max_terms = opt.budget_bytes / sizeof(std::pair<std::int64_t, double>);
    auto conv = detail::convolution_power(gamma, j, max_terms);
    detail::symmetrize(conv);
    const double jf = factorial(j);
    for (auto& v : conv.values)
        v *= jf;
    r.sparse = MomentReport::Sparse{base, std::move(conv.keys), std::move(conv.values)};
}

void dense_moments(MomentReport& r, const GammaProfile& profile, int radius, int j, double t,
                   const MomentOptions& opt)
{
    const auto& lat = profile.lattice();
    const int d = lat.dim();
    const std::int64_t R = static_cast<std::int64_t>(j) * radius;
    const int P = next_fft_size(static_cast<int>(2 * R + 1));
    const double grid = std::pow(static_cast<double>(P), d);
    const double box_pts = std::pow(static_cast<double>(2 * R + 1), d);
    const double bytes = grid * sizeof(Complex) + box_pts * sizeof(double);
    if (bytes > static_cast<double>(opt.budget_bytes))
        throw BudgetExceeded("dense transform needs " + std::to_string(static_cast<long long>(bytes)) +
                             " bytes, budget allows " + std::to_string(opt.budget_bytes));

    const Support sup = truncated_support(profile, radius, t);
    std::vector<Complex> data(static_cast<std::size_t>(grid), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < sup.indices.size(); ++i) {
        const auto n = lat.frequency(sup.indices[i]);
        std::size_t off = 0;
        for (int a = d; a-- > 0;)
            off = off * P + static_cast<std::size_t>(((n[a] % P) + P) % P);
        data[off] += sup.gamma[i];
    }
    fft_inplace(data, d, P, -1);
    for (auto& c : data) {
        Complex p(1.0, 0.0);
        for (int k = 0; k < j; ++k)
            p *= c;
        c = p;
    }
    fft_inplace(data, d, P, +1);

    const double scale = factorial(j) / grid;
    const std::int64_t side = 2 * R + 1;
    MomentReport::Dense dense{R, std::vector<double>(static_cast<std::size_t>(box_pts), 0.0)};
    std::vector<std::int64_t> n(static_cast<std::size_t>(d));
    const bool ball = lat.shape() == TruncationShape::EuclideanBall;
    for (std::size_t b = 0; b < dense.box.size(); ++b) {
        std::size_t rem = b;
        std::size_t off = 0;
        std::size_t stride = 1;
        std::int64_t sq = 0;
        for (int a = 0; a < d; ++a) {
            n[a] = static_cast<std::int64_t>(rem % side) - R;
            rem /= side;
            sq += n[a] * n[a];
            off += static_cast<std::size_t>(((n[a] % P) + P) % P) * stride;
            stride *= P;
        }
        if (ball && sq > R * R)
            continue;
        dense.box[b] = std::max(0.0, data[off].real() * scale);
    }
    // box index b and (size - 1 - b) are n and -n
    const std::size_t total = dense.box.size();
    for (std::size_t b = 0; b < total / 2; ++b) {
        const double avg = 0.5 * (dense.box[b] + dense.box[total - 1 - b]);
        dense.box[b] = avg;
        dense.box[total - 1 - b] = avg;
    }
    r.dense = std::move(dense);
}

void product_moments(MomentReport& r, const GammaProfile& profile, int radius, int j, double t,
                     const MomentOptions& opt)
{
    const auto& lat = profile.lattice();
    if (lat.shape() != TruncationShape::Cube || !profile.coordinate_factor())
        throw InvalidArgument("product structure needs a cube truncation and a per-coordinate factor");
    const auto& f = *profile.coordinate_factor();
    std::vector<std::pair<std::int64_t, double>> terms;
    for (int m = -radius; m <= radius; ++m) {
        const double v = f(m, t);
        if (v < 0.0 || !std::isfinite(v))
            throw InvalidArgument("coordinate factor must be finite and nonnegative");
        if (v > 0.0)
            terms.emplace_back(m, v);
    }
    const auto base = detail::collect(terms);
    const std::size_t max_terms = opt.budget_bytes / sizeof(std::pair<std::int64_t, double>);
    auto conv = detail::convolution_power(base, j, max_terms);
    detail::symmetrize(conv);
    r.product = MomentReport::Product{factorial(j), std::move(conv.keys), std::move(conv.values)};
}

MomentMethod choose_method(const GammaProfile& profile, int radius, int j, double t, const MomentOptions& opt)
{
    const auto& lat = profile.lattice();
    if (lat.shape() == TruncationShape::Cube && profile.coordinate_factor())
        return MomentMethod::ProductStructure;
    const auto table = profile.tabulate(radius, t);
    const double support = static_cast<double>(std::count_if(table.begin(), table.end(), [](double g) { return g != 0.0; }));
    const double work = std::pow(std::max(support, 1.0), j);
    const double base = 2.0 * j * radius + 2.0;
    const bool packable = std::pow(base, lat.dim()) < 1e18;
    if (packable && work <= static_cast<double>(opt.sparse_work_limit))
        return MomentMethod::SparseEnumeration;
    return MomentMethod::DenseFFT;
}

} // namespace

double factorial(int j)
{
    double f = 1.0;
    for (int k = 2; k <= j; ++k)
        f *= k;
    return f;
}

std::string to_string(MomentMethod m)
{
    switch (m) {
    case MomentMethod::Auto: return "auto";
    case MomentMethod::DenseFFT: return "dense-fft";
    case MomentMethod::SparseEnumeration: return "sparse-enumeration";
    case MomentMethod::ProductStructure: return "product-structure";
    }
    return "auto";
}

MomentMethod parse_moment_method(const std::string& name)
{
    for (auto m : {MomentMethod::Auto, MomentMethod::DenseFFT, MomentMethod::SparseEnumeration,
                   MomentMethod::ProductStructure})
        if (name == to_string(m))
            return m;
    throw InvalidArgument("unknown moment method '" + name + "'");
}

double MomentReport::per_mode(std::span<const std::int64_t> n) const
{
    if (static_cast<int>(n.size()) != dim)
        throw InvalidArgument("frequency has the wrong dimension");
    if (dense) {
        const std::int64_t R = dense->radius;
        std::size_t off = 0;
        for (int a = dim; a-- > 0;) {
            if (n[a] < -R || n[a] > R)
                return 0.0;
            off = off * static_cast<std::size_t>(2 * R + 1) + static_cast<std::size_t>(n[a] + R);
        }
        return dense->box[off];
    }
    if (sparse) {
        const std::int64_t half = sparse->base / 2;
        for (auto v : n)
            if (v >= half || v <= -half)
                return 0.0;
        const auto key = pack(n, sparse->base);
        auto it = std::lower_bound(sparse->keys.begin(), sparse->keys.end(), key);
        if (it == sparse->keys.end() || *it != key)
            return 0.0;
        return sparse->values[static_cast<std::size_t>(it - sparse->keys.begin())];
    }
    if (product) {
        double v = product->scale;
        for (auto c : n) {
            auto it = std::lower_bound(product->keys.begin(), product->keys.end(), c);
            if (it == product->keys.end() || *it != c)
                return 0.0;
            v *= product->values[static_cast<std::size_t>(it - product->keys.begin())];
        }
        return v;
    }
    return 0.0;
}

double MomentReport::per_mode(std::span<const int> n) const
{
    std::vector<std::int64_t> w(n.begin(), n.end());
    return per_mode(std::span<const std::int64_t>(w));
}

std::size_t MomentReport::support_size() const
{
    if (dense)
        return static_cast<std::size_t>(std::count_if(dense->box.begin(), dense->box.end(), [](double v) { return v != 0.0; }));
    if (sparse)
        return sparse->keys.size();
    if (product)
        return static_cast<std::size_t>(product_size(product->keys.size(), dim));
    return 0;
}

void MomentReport::for_each(const std::function<void(std::span<const std::int64_t>, double)>& visit) const
{
    std::vector<std::int64_t> n(static_cast<std::size_t>(dim));
    if (dense) {
        const std::int64_t side = 2 * dense->radius + 1;
        for (std::size_t b = 0; b < dense->box.size(); ++b) {
            if (dense->box[b] == 0.0)
                continue;
            std::size_t rem = b;
            for (int a = 0; a < dim; ++a) {
                n[a] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(side)) - dense->radius;
                rem /= static_cast<std::size_t>(side);
            }
            visit(n, dense->box[b]);
        }
    } else if (sparse) {
        for (std::size_t i = 0; i < sparse->keys.size(); ++i) {
            unpack(sparse->keys[i], sparse->base, n);
            visit(n, sparse->values[i]);
        }
    } else if (product) {
        const std::size_t m = product->keys.size();
        if (product_size(m, dim) > kProductEnumerationLimit)
            throw BudgetExceeded("product support of " + std::to_string(product_size(m, dim)) +
                                 " modes is too large to enumerate");
        if (m == 0)
            return;
        std::vector<std::size_t> pos(static_cast<std::size_t>(dim), 0);
        for (;;) {
            double v = product->scale;
            for (int a = 0; a < dim; ++a) {
                n[a] = product->keys[pos[a]];
                v *= product->values[pos[a]];
            }
            visit(n, v);
            int a = 0;
            while (a < dim && ++pos[a] == m)
                pos[a++] = 0;
            if (a == dim)
                break;
        }
    }
}

double MomentReport::compute_h_sigma(double sigma) const
{
    if (product && sigma == 0.0) {
        double s = 0.0;
        for (double v : product->values)
            s += v;
        return product->scale * std::pow(s, dim);
    }
    double total = 0.0;
    for_each([&](std::span<const std::int64_t> n, double v) { total += weight(n, sigma) * v; });
    return total;
}

double MomentReport::h_sigma(double sigma)
{
    auto it = hsigma.find(sigma);
    if (it != hsigma.end())
        return it->second;
    const double v = compute_h_sigma(sigma);
    hsigma.emplace(sigma, v);
    return v;
}

double MomentReport::h_sigma(double sigma) const
{
    auto it = hsigma.find(sigma);
    return it != hsigma.end() ? it->second : compute_h_sigma(sigma);
}

void MomentReport::write_csv(std::ostream& os) const
{
    for (int a = 0; a < dim; ++a)
        os << 'n' << a + 1 << ',';
    os << "second_moment\n";
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    for_each([&](std::span<const std::int64_t> n, double v) {
        for (auto c : n)
            os << c << ',';
        os << v << '\n';
    });
    os.flags(flags);
    os.precision(prec);
}

MomentReport second_moment_per_mode(const GammaProfile& profile, int radius, int j, double t,
                                    const MomentOptions& options)
{
    if (j < 1)
        throw InvalidArgument("Wick degree must be >= 1");
    if (radius < 0)
        throw InvalidArgument("cutoff must be >= 0");
    MomentReport r;
    r.dim = profile.lattice().dim();
    r.degree = j;
    r.cutoff = radius;
    r.time = t;
    r.method = options.method == MomentMethod::Auto ? choose_method(profile, radius, j, t, options) : options.method;
    try {
        switch (r.method) {
        case MomentMethod::DenseFFT: dense_moments(r, profile, radius, j, t, options); break;
        case MomentMethod::SparseEnumeration: sparse_moments(r, profile, radius, j, t, options); break;
        case MomentMethod::ProductStructure: product_moments(r, profile, radius, j, t, options); break;
        case MomentMethod::Auto: break;
        }
    } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(to_string(r.method) + ": " + e.what());
    }
    r.h_sigma(0.0);
    return r;
}

double cross_moment(const GammaProfile& profile, int n_cutoff, int m_cutoff, int j, double t, double sigma,
                    const MomentOptions& options)
{
    auto r = second_moment_per_mode(profile, std::min(n_cutoff, m_cutoff), j, t, options);
    return r.h_sigma(sigma);
}

double tail_distance(const GammaProfile& profile, int n_cutoff, int m_cutoff, int j, double t, double sigma,
                     const MomentOptions& options)
{
    if (n_cutoff == m_cutoff)
        return 0.0;
    // h_N + h_M - 2 h_min(N,M) = h_max - h_min
    auto hi = second_moment_per_mode(profile, std::max(n_cutoff, m_cutoff), j, t, options);
    const double cross = cross_moment(profile, n_cutoff, m_cutoff, j, t, sigma, options);
    return std::max(0.0, hi.h_sigma(sigma) - cross);
}

FlBoundReport fl_bound_check(const DataPair& pair, int j, double sigma, double p, const std::vector<int>& cutoffs,
                             std::optional<double> s, double t, const MomentOptions& options)
{
    if (cutoffs.empty())
        throw InvalidArgument("fl_bound_check needs at least one cutoff");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw InvalidArgument("cutoffs must be strictly increasing");

    FlBoundReport rep;
    rep.cutoffs = cutoffs;
    if (s) {
        try {
            rep.admissibility = admissible(pair.lattice().dim(), j, *s, sigma, p);
        } catch (const InvalidArgument& e) {
            rep.admissibility = Admissibility{false, AdmissibleBranch::None, 0.0, e.what()};
        }
    }
    const auto profile = gamma_from_pair(pair);
    for (int N : cutoffs) {
        auto r = second_moment_per_mode(profile, N, j, t, options);
        rep.sequence.push_back(r.h_sigma(sigma));
    }
    rep.supremum = *std::max_element(rep.sequence.begin(), rep.sequence.end());
    rep.data_norm = pair_fl_norm(pair, 0.0, p);
    rep.ratio = rep.data_norm > 0.0 ? rep.supremum / std::pow(rep.data_norm, 2 * j) : 0.0;

    // increments below this are rounding, not growth
    const double floor = 1e-13 * std::max(rep.supremum, 1e-300);
    std::vector<double> inc;
    for (std::size_t i = 1; i < rep.sequence.size(); ++i) {
        const double d = rep.sequence[i] - rep.sequence[i - 1];
        inc.push_back(std::abs(d) <= floor ? 0.0 : d);
    }
    std::size_t first = 0;
    while (first < inc.size() && inc[first] == 0.0)
        ++first;
    rep.plateau = true;
    for (std::size_t i = first + 1; i < inc.size(); ++i) {
        const double ratio = inc[i] == 0.0 ? 0.0 : inc[i - 1] == 0.0 ? kInfinity : inc[i] / inc[i - 1];
        rep.increment_ratios.push_back(ratio);
        if (!(ratio <= 0.5))
            rep.plateau = false;
    }
    return rep;
}

} // namespace wickfield
