#include <doctest.h>

#include "wickfield/counterexample.hpp"
#include "wickfield/error.hpp"
#include "wickfield/moment_oracle.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <vector>

using namespace wickfield;

namespace {

// j! * sum over j-tuples of lattice modes in the truncation, keyed by their sum
std::map<std::vector<int>, double> brute_force(const GammaProfile& g, int radius, int j, double t)
{
    const auto& lat = g.lattice();
    std::vector<std::size_t> modes;
    for (std::size_t i = 0; i < lat.size(); ++i)
        if (lat.within(i, radius))
            modes.push_back(i);
    std::map<std::vector<int>, double> out;
    std::vector<std::size_t> pick(j, 0);
    for (;;) {
        std::vector<int> n(lat.dim(), 0);
        double w = 1.0;
        for (int l = 0; l < j; ++l) {
            const auto f = lat.frequency(modes[pick[l]]);
            for (int a = 0; a < lat.dim(); ++a)
                n[a] += f[a];
            w *= g(f, t);
        }
        out[n] += w;
        int l = 0;
        while (l < j && ++pick[l] == modes.size())
            pick[l++] = 0;
        if (l == j)
            break;
    }
    for (auto& [n, v] : out)
        v *= factorial(j);
    return out;
}

GammaProfile random_profile(const LatticePtr& lat, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> table(lat->size());
    for (std::size_t i = 0; i < lat->size(); ++i)
        if (lat->is_canonical(i))
            table[i] = table[lat->conjugate_index(i)] = u(rng);
    auto shared = std::make_shared<std::vector<double>>(std::move(table));
    return GammaProfile(lat, ProfileKind::Custom, [lat, shared](std::span<const int> n, double) {
        const auto i = lat->index_of(n);
        return i ? (*shared)[*i] : 0.0;
    });
}

GammaProfile ones(const LatticePtr& lat)
{
    return GammaProfile(lat, ProfileKind::Custom, [](std::span<const int>, double) { return 1.0; },
                        [](std::int64_t, double) { return 1.0; });
}

double h_sigma_direct(const std::map<std::vector<int>, double>& modes, double sigma)
{
    double acc = 0.0;
    for (const auto& [n, v] : modes) {
        double sq = 1.0;
        for (int x : n)
            sq += double(x) * x;
        acc += std::pow(sq, sigma) * v;
    }
    return acc;
}

} // namespace

TEST_CASE("per-mode examples")
{
    auto lat = build_lattice(1, 3);
    auto r = second_moment_per_mode(ones(lat), 1, 2, 0.0);
    const std::int64_t zero[] = {0}, two[] = {2}, three[] = {3};
    CHECK(r.per_mode(zero) == doctest::Approx(6.0));
    CHECK(r.per_mode(two) == doctest::Approx(2.0));
    CHECK(r.per_mode(three) == 0.0);

    const auto g = gamma_power_law(lat, 0.3);
    auto r1 = second_moment_per_mode(g, 3, 1, 0.0);
    for (std::size_t i = 0; i < lat->size(); ++i)
        CHECK(r1.per_mode(lat->frequency(i)) == doctest::Approx(g(lat->frequency(i), 0.0)).epsilon(1e-14));
}

TEST_CASE("every backend agrees with brute-force enumeration")
{
    struct Case {
        int d, N, j;
    };
    for (auto [d, N, j] : {Case{1, 1, 2}, Case{1, 3, 3}, Case{1, 4, 4}, Case{2, 2, 2}, Case{2, 2, 3}, Case{3, 1, 3}}) {
        auto lat = build_lattice(d, N);
        const auto g = random_profile(lat, 100 * d + 10 * N + j);
        const auto oracle = brute_force(g, N, j, 0.0);
        for (auto method : {MomentMethod::DenseFFT, MomentMethod::SparseEnumeration, MomentMethod::Auto}) {
            MomentOptions opts;
            opts.method = method;
            auto r = second_moment_per_mode(g, N, j, 0.0, opts);
            double scale = 0.0;
            for (const auto& [n, v] : oracle)
                scale = std::max(scale, v);
            std::size_t visited = 0;
            r.for_each([&](std::span<const std::int64_t> n, double v) {
                std::vector<int> key(n.begin(), n.end());
                const auto it = oracle.find(key);
                CHECK(std::abs(v - (it == oracle.end() ? 0.0 : it->second)) <= 1e-12 * scale);
                ++visited;
            });
            CHECK(visited >= oracle.size());
            for (const auto& [n, v] : oracle) {
                std::vector<std::int64_t> key(n.begin(), n.end());
                CHECK(std::abs(r.per_mode(key) - v) <= 1e-12 * scale);
            }
            for (double sigma : {0.0, -0.5, -1.3})
                CHECK(r.h_sigma(sigma) == doctest::Approx(h_sigma_direct(oracle, sigma)).epsilon(1e-12));
        }
    }
}

TEST_CASE("product structure backend")
{
    auto lat = build_lattice(2, 6, TruncationShape::Cube);
    auto factor = [](std::int64_t n, double) { return 1.0 / (1.0 + 0.5 * std::abs(double(n))); };
    GammaProfile g(lat, ProfileKind::Custom,
                   [factor](std::span<const int> n, double t) { return factor(n[0], t) * factor(n[1], t); }, factor);
    MomentOptions product, dense;
    product.method = MomentMethod::ProductStructure;
    dense.method = MomentMethod::DenseFFT;
    for (int j : {2, 3}) {
        auto a = second_moment_per_mode(g, 4, j, 0.0, product);
        auto b = second_moment_per_mode(g, 4, j, 0.0, dense);
        CHECK(a.method == MomentMethod::ProductStructure);
        CHECK(a.support_size() == b.support_size());
        b.for_each([&](std::span<const std::int64_t> n, double v) {
            CHECK(a.per_mode(n) == doctest::Approx(v).epsilon(1e-12).scale(1.0));
        });
        CHECK(a.h_sigma(-0.7) == doctest::Approx(b.h_sigma(-0.7)).epsilon(1e-12));
    }
    auto ball = build_lattice(2, 6);
    GammaProfile gb(ball, ProfileKind::Custom, [](std::span<const int>, double) { return 1.0; }, factor);
    CHECK_THROWS_AS(second_moment_per_mode(gb, 4, 2, 0.0, product), InvalidArgument);
    CHECK(second_moment_per_mode(g, 4, 2, 0.0).method == MomentMethod::ProductStructure);
}

TEST_CASE("total mass identity")
{
    auto lat = build_lattice(2, 8);
    const auto pair = power_law_pair(lat, -0.3);
    const auto g = gamma_from_pair(pair);
    for (int j = 1; j <= 4; ++j) {
        auto r = second_moment_per_mode(g, 8, j, 0.4);
        const double alpha = truncated_variance(g, 8, 0.4);
        CHECK(r.h_sigma(0.0) == doctest::Approx(factorial(j) * std::pow(alpha, j)).epsilon(1e-12));
    }
}

TEST_CASE("cross moment and tail distance examples")
{
    auto lat = build_lattice(1, 4);
    const auto g = ones(lat);
    CHECK(cross_moment(g, 1, 2, 2, 0.0, 0.0) == doctest::Approx(18.0));
    CHECK(cross_moment(g, 2, 1, 2, 0.0, 0.0) == doctest::Approx(18.0));
    CHECK(tail_distance(g, 1, 2, 2, 0.0, 0.0) == doctest::Approx(32.0));
    CHECK(tail_distance(g, 3, 3, 2, 0.0, 0.0) == 0.0);

    const auto pl = gamma_power_law(lat, 0.2);
    auto r = second_moment_per_mode(pl, 3, 3, 0.0);
    CHECK(cross_moment(pl, 3, 3, 3, 0.0, -0.4) == doctest::Approx(r.h_sigma(-0.4)).epsilon(1e-13));
    const int zero[] = {0};
    CHECK(cross_moment(pl, 0, 4, 3, 0.0, 0.7) == doctest::Approx(6.0 * std::pow(pl(zero, 0.0), 3)));
}

TEST_CASE("tail distance decreases for admissible power-law data")
{
    auto lat = build_lattice(2, 64);
    const auto g = gamma_power_law(lat, -0.02);
    double prev = kInfinity;
    for (int N : {4, 8, 16, 32}) {
        const double t = tail_distance(g, N, 2 * N, 2, 0.0, -1.0);
        CHECK(t > 0.0);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("fl_bound_check examples")
{
    auto lat = build_lattice(1, 64);
    HermitianCoeffs u0(lat);
    const int three[] = {3};
    u0.set(*lat->index_of(three), 0.8);
    const auto single = fl_bound_check(DataPair(u0, bracket_derivative(u0)), 2, -1.0, 3.0, {1, 2, 4, 8, 16, 32, 64});
    CHECK(single.sequence[1] == 0.0);
    CHECK(single.sequence[2] > 0.0);
    for (std::size_t k = 3; k < single.sequence.size(); ++k)
        CHECK(single.sequence[k] == doctest::Approx(single.sequence[2]));
    CHECK(single.plateau);

    auto l2 = build_lattice(2, 128);
    const auto pl = fl_bound_check(power_law_pair(l2, -0.02), 2, -1.0, 3.0, {4, 8, 16, 32, 64, 128}, -0.02);
    REQUIRE(pl.admissibility.has_value());
    CHECK(pl.admissibility->admissible);
    for (std::size_t k = 1; k < pl.sequence.size(); ++k)
        CHECK(pl.sequence[k] > pl.sequence[k - 1]);
    CHECK(pl.plateau);
    CHECK(pl.ratio == doctest::Approx(pl.supremum / std::pow(pl.data_norm, 4)));

    const DyadicProfile dy(1, 2, 10);
    auto l3 = build_lattice(1, 1024);
    const auto ce = fl_bound_check(counterexample_pair(dy, l3), 2, -1.0, 4.0, {4, 16, 64, 256, 1024});
    for (std::size_t k = 1; k < ce.sequence.size(); ++k)
        CHECK(ce.sequence[k] > ce.sequence[k - 1]);
    CHECK_FALSE(ce.plateau);
}

TEST_CASE("budget failures name the attempted method")
{
    auto lat = build_lattice(2, 32);
    MomentOptions opts;
    opts.method = MomentMethod::DenseFFT;
    opts.budget_bytes = 4096;
    try {
        second_moment_per_mode(gamma_power_law(lat, 0.0), 32, 3, 0.0, opts);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(std::string(e.what()).find("dense-fft") != std::string::npos);
    }
    opts.method = MomentMethod::SparseEnumeration;
    opts.sparse_work_limit = 1000;
    CHECK_THROWS_AS(second_moment_per_mode(gamma_power_law(lat, 0.0), 32, 3, 0.0, opts), BudgetExceeded);
}

TEST_CASE("method names round trip and csv layout")
{
    for (auto m : {MomentMethod::Auto, MomentMethod::DenseFFT, MomentMethod::SparseEnumeration,
                   MomentMethod::ProductStructure})
        CHECK(parse_moment_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_moment_method("fft"), InvalidArgument);

    auto lat = build_lattice(2, 1);
    auto r = second_moment_per_mode(ones(lat), 1, 2, 0.0);
    std::ostringstream os;
    r.write_csv(os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "n1,n2,second_moment");
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);)
        ++rows;
    CHECK(rows == r.support_size());
}
