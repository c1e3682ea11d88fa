#include <doctest.h>

#include "wickfield/linear_waves.hpp"
#include "wickfield/norms.hpp"

#include <cmath>
#include <vector>

using namespace wickfield;

TEST_CASE("gamma_from_pair examples")
{
    auto lat = build_lattice(2, 4);
    const auto base = power_law_pair(lat, 0.2);
    DataPair stationary(base.u0, bracket_derivative(base.u0));
    const auto g = gamma_from_pair(stationary);
    const auto gb = gamma_from_pair(base);
    for (std::size_t i = 0; i < lat->size(); ++i) {
        const auto n = lat->frequency(i);
        const double a2 = std::norm(base.u0[i]);
        for (double t : {0.0, 0.3, 1.7, 12.0})
            CHECK(g(n, t) == doctest::Approx(a2).epsilon(1e-13));
        CHECK(gb(n, 0.0) == a2);
        std::vector<int> neg(n.begin(), n.end());
        for (auto& v : neg)
            v = -v;
        CHECK(gb(neg, 0.9) == gb(n, 0.9));
    }

    auto l1 = build_lattice(1, 2);
    HermitianCoeffs b(l1);
    b.set(l1->zero_index(), 1.0);
    const auto g1 = gamma_from_pair(DataPair(HermitianCoeffs(l1), b));
    const int zero[] = {0};
    for (double t : {0.0, 0.5, 2.0})
        CHECK(g1(zero, t) == doctest::Approx(std::sin(t) * std::sin(t)).epsilon(1e-15));
}

TEST_CASE("power-law profile")
{
    auto lat = build_lattice(3, 12);
    const auto g = gamma_power_law(lat, 0.0);
    const int zero[] = {0, 0, 0};
    CHECK(g(zero, 0.0) == 1.0);
    double prev = 0.0;
    for (int N : {2, 4, 8, 12}) {
        const double a = truncated_variance(g, N, 0.0);
        CHECK(a > prev * 1.3);
        prev = a;
    }
    CHECK(prev > 10.0);
    // the power-law pair randomizes to the same profile
    const auto gp = gamma_from_pair(power_law_pair(lat, 0.4));
    const auto gl = gamma_power_law(lat, 0.4);
    for (std::size_t i = 0; i < lat->size(); i += 37)
        CHECK(gp(lat->frequency(i), 0.61) == doctest::Approx(gl(lat->frequency(i), 0.61)).epsilon(1e-13));
}

TEST_CASE("truncated_variance examples")
{
    auto lat = build_lattice(1, 5);
    GammaProfile one(lat, ProfileKind::Custom, [](std::span<const int>, double) { return 1.0; });
    CHECK(truncated_variance(one, 2, 0.0) == 5.0);
    CHECK(truncated_variance(one, 0, 3.0) == 1.0);

    auto l2 = build_lattice(2, 6);
    const auto u0 = power_law_pair(l2, -0.1).u0;
    const auto g = gamma_from_pair(DataPair(u0, bracket_derivative(u0)));
    double expect = 0.0;
    for (std::size_t i = 0; i < l2->size(); ++i)
        if (l2->within(i, 4))
            expect += std::norm(u0[i]);
    for (double t : {0.0, 0.25, 3.0})
        CHECK(truncated_variance(g, 4, t) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("random_linear_solution examples")
{
    auto lat = build_lattice(2, 3);
    const auto pair = power_law_pair(lat, 0.1);
    const auto m = sample_multipliers(lat, 42, 0);
    const auto z0 = random_linear_solution(pair, m, 0.0);
    for (std::size_t i = 0; i < lat->size(); ++i)
        CHECK(z0.coeffs()[i] == m.g[i] * pair.u0[i]);
    DataPair zero(HermitianCoeffs{lat}, HermitianCoeffs{lat});
    const auto zz = random_linear_solution(zero, m, 1.3);
    for (double v : zz.grid().values)
        CHECK(v == 0.0);
    const auto z = random_linear_solution(pair, m, 0.8);
    const auto det = linear_solution(randomize_pair(pair, m), 0.8);
    for (std::size_t i = 0; i < lat->size(); ++i)
        CHECK(std::abs(z.coeffs()[i] - det[i]) < 1e-15);
}

TEST_CASE("linear solution solves the Klein-Gordon equation")
{
    auto lat = build_lattice(1, 6);
    const auto pair = power_law_pair(lat, 0.3);
    const double t = 0.4, h = 1e-3;
    const auto up = linear_solution(pair, t + h);
    const auto mid = linear_solution(pair, t);
    const auto dn = linear_solution(pair, t - h);
    for (std::size_t i = 0; i < lat->size(); ++i) {
        const Complex d2 = (up[i] - 2.0 * mid[i] + dn[i]) / (h * h);
        const double w2 = lat->bracket(i) * lat->bracket(i);
        CHECK(std::abs(d2 + w2 * mid[i]) < 1e-4 * w2);
    }
}

TEST_CASE("Monte-Carlo pointwise variance matches truncated_variance")
{
    auto lat = build_lattice(1, 4);
    const auto pair = power_law_pair(lat, -0.2);
    const auto profile = gamma_from_pair(pair);
    const double t = 0.37;
    const double alpha = truncated_variance(profile, 4, t);
    const int draws = 10000;
    const int points[] = {0, 3, 7};
    for (int x : points) {
        double s1 = 0.0, s2 = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto z = random_linear_solution(pair, sample_multipliers(lat, 9, k), t);
            const double v = z.grid().values[x];
            s1 += v * v;
            s2 += v * v * v * v;
        }
        const double mean = s1 / draws;
        const double se = std::sqrt((s2 / draws - mean * mean) / draws);
        CHECK(std::abs(mean - alpha) < 5.0 * se);
    }
}
