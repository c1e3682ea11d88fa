#include "wickfield/stochastic_conv.hpp"

#include "wickfield/error.hpp"
#include "wickfield/philox.hpp"

#include <cmath>
#include <iomanip>
#include <memory>

namespace wickfield {

namespace {

void check_times(const std::vector<double>& times)
{
    if (times.empty())
        throw InvalidArgument("time grid is empty");
    if (!(times.front() >= 0.0))
        throw InvalidArgument("time grid must start at t >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw InvalidArgument("time grid must be strictly increasing");
}

// (2x - sin 2x) / 4, accurate for small x
double sin_sq_integral_scaled(double x)
{
    if (std::abs(x) < 1e-2) {
        const double y = 2.0 * x;
        const double y3 = y * y * y;
        return (y3 / 6.0 - y3 * y * y / 120.0 + y3 * y3 * y / 5040.0) / 4.0;
    }
    return (2.0 * x - std::sin(2.0 * x)) / 4.0;
}

// lower Cholesky factor of a 2x2 covariance ordered (Y, X)
struct Chol2 {
    double l11, l21, l22;
};

Chol2 cholesky_yx(const Matrix2& q)
{
    const double b = q[1][1];
    const double c = q[0][1];
    const double a = q[0][0];
    if (b <= 0.0)
        return {0.0, 0.0, 0.0};
    const double l11 = std::sqrt(b);
    const double l21 = c / l11;
    return {l11, l21, std::sqrt(std::max(0.0, a - l21 * l21))};
}

} // namespace

MultiplierSpec::MultiplierSpec(HermitianCoeffs phi) : phi_hat(std::move(phi))
{
    for (auto v : phi_hat.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidArgument("multiplier coefficients must be finite");
}

MultiplierSpec power_law_multiplier(const LatticePtr& lattice, double alpha)
{
    return MultiplierSpec(HermitianCoeffs::from_function(
        lattice, [alpha](std::span<const int> n) { return Complex(std::pow(bracket(n), -alpha), 0.0); }));
}

double wave_mode_variance_at(double w, double t)
{
    if (!(t >= 0.0))
        throw InvalidArgument("time must be >= 0");
    return sin_sq_integral_scaled(w * t) / w;
}

double wave_mode_variance(std::span<const int> n, double t)
{
    return wave_mode_variance_at(bracket(n), t);
}

double heat_mode_variance_at(double w, double t)
{
    if (!(t >= 0.0))
        throw InvalidArgument("time must be >= 0");
    const double w2 = w * w;
    return -std::expm1(-2.0 * t * w2) / (2.0 * w2);
}

double heat_mode_variance(std::span<const int> n, double t)
{
    return heat_mode_variance_at(bracket(n), t);
}

Matrix2 wave_increment_covariance(double omega, double h)
{
    const double x = omega * h;
    const double s = std::sin(x);
    const double a = sin_sq_integral_scaled(x) / omega;  // int sin^2
    const double b = h - a;                              // int cos^2
    const double c = s * s / (2.0 * omega);              // int sin cos
    return {{{a, c}, {c, b}}};
}

Matrix2 wave_rotation(double omega, double h)
{
    const double c = std::cos(omega * h);
    const double s = std::sin(omega * h);
    return {{{c, s}, {-s, c}}};
}

Matrix2 propagate_covariance(const Matrix2& r, const Matrix2& st, const Matrix2& q)
{
    Matrix2 out{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            double acc = q[i][k];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    acc += r[i][a] * st[a][b] * r[k][b];
            out[i][k] = acc;
        }
    return out;
}

std::vector<FieldSnapshot> sample_wave_convolution(const MultiplierSpec& spec, const std::vector<double>& times,
                                                   std::uint64_t seed, std::uint64_t stream)
{
    check_times(times);
    const auto& lat = spec.lattice();
    const GaussianStream rng(seed, stream);
    std::vector<Complex> X(lat.size()), Y(lat.size());
    std::vector<FieldSnapshot> out;
    out.reserve(times.size());

    double now = 0.0;
    for (std::size_t step = 0; step < times.size(); ++step) {
        const double h = times[step] - now;
        if (h > 0.0) {
            for (std::size_t k = 0; k < lat.size(); ++k) {
                if (!lat.is_canonical(k))
                    continue;
                const double w = lat.bracket(k);
                const auto R = wave_rotation(w, h);
                const auto L = cholesky_yx(wave_increment_covariance(w, h));
                const auto z = rng.normals(pack_frequency(lat.frequency(k)), step, rng_family::kWaveNoise);
                const bool real_mode = k == lat.conjugate_index(k);
                // real modes carry the full variance, complex ones half per part
                const double scale = real_mode ? 1.0 : std::sqrt(0.5);
                const Complex e1(z[0], real_mode ? 0.0 : z[2]);
                const Complex e2(z[1], real_mode ? 0.0 : z[3]);
                const Complex dY = scale * L.l11 * e1;
                const Complex dX = scale * (L.l21 * e1 + L.l22 * e2);
                const Complex x = R[0][0] * X[k] + R[0][1] * Y[k] + dX;
                const Complex y = R[1][0] * X[k] + R[1][1] * Y[k] + dY;
                X[k] = x;
                Y[k] = y;
                if (!real_mode) {
                    X[lat.conjugate_index(k)] = std::conj(x);
                    Y[lat.conjugate_index(k)] = std::conj(y);
                }
            }
            now = times[step];
        }
        HermitianCoeffs c(spec.lattice_ptr());
        for (std::size_t k = 0; k < lat.size(); ++k)
            if (lat.is_canonical(k))
                c.set(k, spec.phi_hat[k] * X[k] / lat.bracket(k));
        out.emplace_back(times[step], std::move(c));
    }
    return out;
}

std::vector<FieldSnapshot> sample_heat_convolution(const MultiplierSpec& spec, const std::vector<double>& times,
                                                   std::uint64_t seed, std::uint64_t stream)
{
    check_times(times);
    const auto& lat = spec.lattice();
    const GaussianStream rng(seed, stream);
    std::vector<Complex> J(lat.size());
    std::vector<FieldSnapshot> out;
    out.reserve(times.size());

    double now = 0.0;
    for (std::size_t step = 0; step < times.size(); ++step) {
        const double h = times[step] - now;
        if (h > 0.0) {
            for (std::size_t k = 0; k < lat.size(); ++k) {
                if (!lat.is_canonical(k))
                    continue;
                const double w = lat.bracket(k);
                const double decay = std::exp(-h * w * w);
                const double sd = std::sqrt(heat_mode_variance_at(w, h));
                const auto z = rng.normals(pack_frequency(lat.frequency(k)), step, rng_family::kHeatNoise);
                const bool real_mode = k == lat.conjugate_index(k);
                const Complex eta = real_mode ? Complex(sd * z[0], 0.0) : sd * std::sqrt(0.5) * Complex(z[0], z[1]);
                J[k] = decay * J[k] + eta;
                if (!real_mode)
                    J[lat.conjugate_index(k)] = std::conj(J[k]);
            }
            now = times[step];
        }
        HermitianCoeffs c(spec.lattice_ptr());
        for (std::size_t k = 0; k < lat.size(); ++k)
            if (lat.is_canonical(k))
                c.set(k, spec.phi_hat[k] * J[k]);
        out.emplace_back(times[step], std::move(c));
    }
    return out;
}

GammaProfile gamma_from_multiplier(const MultiplierSpec& spec, ConvolutionKind kind)
{
    auto phi = std::make_shared<const HermitianCoeffs>(spec.phi_hat);
    if (kind == ConvolutionKind::Wave) {
        auto eval = [phi](std::span<const int> n, double t) {
            const auto k = phi->lattice().index_of(n);
            if (!k)
                return 0.0;
            const double w = phi->lattice().bracket(*k);
            return std::norm((*phi)[*k]) * wave_mode_variance_at(w, t) / (w * w);
        };
        return {spec.lattice_ptr(), ProfileKind::WaveConvolution, eval};
    }
    auto eval = [phi](std::span<const int> n, double t) {
        const auto k = phi->lattice().index_of(n);
        if (!k)
            return 0.0;
        return std::norm((*phi)[*k]) * heat_mode_variance_at(phi->lattice().bracket(*k), t);
    };
    return {spec.lattice_ptr(), ProfileKind::HeatConvolution, eval};
}

OperatorNormCheck hilbert_schmidt_check(const MultiplierSpec& spec, double s, const std::vector<int>& cutoffs,
                                        std::optional<double> power_law_alpha)
{
    const auto& lat = spec.lattice();
    OperatorNormCheck rep;
    rep.order = s;
    rep.p = 2.0;
    for (int K : cutoffs) {
        double sum = 0.0;
        for (std::size_t k = 0; k < lat.size(); ++k)
            if (lat.within(k, K))
                sum += std::pow(lat.bracket(k), 2.0 * (s - 1.0)) * std::norm(spec.phi_hat[k]);
        rep.partial_sums.emplace_back(K, sum);
    }
    if (power_law_alpha)
        rep.classification = power_law_fl_class(lat.dim(), *power_law_alpha, s - 1.0, 2.0);
    return rep;
}

OperatorNormCheck radonifying_check(const MultiplierSpec& spec, double s, double p, const std::vector<int>& cutoffs,
                                    std::optional<double> power_law_alpha)
{
    OperatorNormCheck rep;
    rep.order = s;
    rep.p = p;
    for (int K : cutoffs)
        rep.partial_sums.emplace_back(K, fl_norm(project(spec.phi_hat, K), s, p));
    if (power_law_alpha)
        rep.classification = power_law_fl_class(spec.lattice().dim(), *power_law_alpha, s, p);
    return rep;
}

void write_path_csv(std::ostream& os, const std::vector<FieldSnapshot>& path, std::uint64_t seed,
                    std::uint64_t stream)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "# seed " << seed << "\n# stream " << stream << '\n' << std::setprecision(17);
    for (const auto& snap : path) {
        const auto& lat = snap.coeffs().lattice();
        for (std::size_t k = 0; k < lat.size(); ++k) {
            if (!lat.is_canonical(k))
                continue;
            os << snap.time();
            for (int v : lat.frequency(k))
                os << ',' << v;
            os << ',' << snap.coeffs()[k].real() << ',' << snap.coeffs()[k].imag() << '\n';
        }
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace wickfield
