#include "wickfield/coeff_io.hpp"

#include "wickfield/error.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace wickfield {

namespace {

constexpr std::array<char, 8> kMagic{'W', 'F', 'C', 'O', 'E', 'F', '0', '1'};

struct Header {
    int dim = 0;
    int cutoff = -1;
    TruncationShape shape = TruncationShape::EuclideanBall;
    int oversample = 1;
    std::size_t count = 0;
};

LatticePtr lattice_for(const Header& h)
{
    auto lattice = build_lattice(h.dim, h.cutoff, h.shape, h.oversample);
    if (lattice->size() != h.count)
        throw InvalidArgument("coefficient file count " + std::to_string(h.count) + " does not match lattice size " +
                              std::to_string(lattice->size()));
    return lattice;
}

template <typename T>
void put(std::ostream& out, T value)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in)
{
    char bytes[sizeof(T)];
    if (!in.read(bytes, sizeof(T)))
        throw InvalidArgument("truncated binary coefficient file");
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

void put_string(std::ostream& out, const std::string& s)
{
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in)
{
    const auto n = get<std::uint32_t>(in);
    std::string s(n, '\0');
    if (n && !in.read(s.data(), n))
        throw InvalidArgument("truncated binary coefficient file");
    return s;
}

} // namespace

void write_coeffs_text(std::ostream& out, const HermitianCoeffs& c, const Metadata& metadata)
{
    const auto& lat = c.lattice();
    out << "# wickfield-coeffs 1\n"
        << "# dim " << lat.dim() << "\n"
        << "# cutoff " << lat.cutoff() << "\n"
        << "# shape " << to_string(lat.shape()) << "\n"
        << "# oversample " << lat.oversample() << "\n"
        << "# count " << lat.size() << "\n";
    for (const auto& [key, value] : metadata)
        out << "# meta " << key << " " << value << "\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < lat.size(); ++k) {
        for (int n : lat.frequency(k))
            out << n << " ";
        out << c[k].real() << " " << c[k].imag() << "\n";
    }
}

LoadedCoeffs read_coeffs_text(std::istream& in)
{
    Header h;
    Metadata metadata;
    std::string line;
    bool saw_magic = false;
    while (in.peek() == '#') {
        std::getline(in, line);
        std::istringstream ls(line.substr(1));
        std::string key;
        ls >> key;
        if (key == "wickfield-coeffs")
            saw_magic = true;
        else if (key == "dim")
            ls >> h.dim;
        else if (key == "cutoff")
            ls >> h.cutoff;
        else if (key == "shape") {
            std::string s;
            ls >> s;
            h.shape = parse_truncation_shape(s);
        } else if (key == "oversample")
            ls >> h.oversample;
        else if (key == "count")
            ls >> h.count;
        else if (key == "meta") {
            std::string k;
            ls >> k;
            std::string v;
            std::getline(ls >> std::ws, v);
            metadata[k] = v;
        }
    }
    if (!saw_magic || h.dim < 1 || h.cutoff < 0)
        throw InvalidArgument("missing or malformed coefficient header");

    auto lattice = lattice_for(h);
    std::vector<Complex> values(lattice->size());
    std::vector<bool> seen(lattice->size(), false);
    std::vector<int> n(static_cast<std::size_t>(h.dim));
    for (std::size_t row = 0; row < h.count; ++row) {
        for (auto& x : n)
            if (!(in >> x))
                throw InvalidArgument("truncated coefficient table at row " + std::to_string(row));
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im))
            throw InvalidArgument("truncated coefficient table at row " + std::to_string(row));
        const auto k = lattice->index_of(n);
        if (!k || seen[*k])
            throw InvalidArgument("unexpected or duplicate frequency at row " + std::to_string(row));
        seen[*k] = true;
        values[*k] = {re, im};
    }
    return {HermitianCoeffs(lattice, std::move(values)), std::move(metadata)};
}

void write_coeffs_binary(std::ostream& out, const HermitianCoeffs& c, const Metadata& metadata)
{
    const auto& lat = c.lattice();
    out.write(kMagic.data(), kMagic.size());
    put<std::int32_t>(out, lat.dim());
    put<std::int32_t>(out, lat.cutoff());
    put<std::int32_t>(out, lat.shape() == TruncationShape::Cube ? 1 : 0);
    put<std::int32_t>(out, lat.oversample());
    put<std::uint64_t>(out, lat.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(metadata.size()));
    for (const auto& [key, value] : metadata) {
        put_string(out, key);
        put_string(out, value);
    }
    for (std::size_t k = 0; k < lat.size(); ++k) {
        for (int n : lat.frequency(k))
            put<std::int32_t>(out, n);
        put<double>(out, c[k].real());
        put<double>(out, c[k].imag());
    }
}

LoadedCoeffs read_coeffs_binary(std::istream& in)
{
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw InvalidArgument("not a binary coefficient file");
    Header h;
    h.dim = get<std::int32_t>(in);
    h.cutoff = get<std::int32_t>(in);
    h.shape = get<std::int32_t>(in) == 1 ? TruncationShape::Cube : TruncationShape::EuclideanBall;
    h.oversample = get<std::int32_t>(in);
    h.count = get<std::uint64_t>(in);
    Metadata metadata;
    const auto entries = get<std::uint32_t>(in);
    for (std::uint32_t e = 0; e < entries; ++e) {
        auto key = get_string(in);
        metadata[key] = get_string(in);
    }
    if (h.dim < 1 || h.cutoff < 0)
        throw InvalidArgument("malformed binary coefficient header");

    auto lattice = lattice_for(h);
    std::vector<Complex> values(lattice->size());
    std::vector<bool> seen(lattice->size(), false);
    std::vector<int> n(static_cast<std::size_t>(h.dim));
    for (std::size_t row = 0; row < h.count; ++row) {
        for (auto& x : n)
            x = get<std::int32_t>(in);
        const double re = get<double>(in);
        const double im = get<double>(in);
        const auto k = lattice->index_of(n);
        if (!k || seen[*k])
            throw InvalidArgument("unexpected or duplicate frequency in binary file");
        seen[*k] = true;
        values[*k] = {re, im};
    }
    return {HermitianCoeffs(lattice, std::move(values)), std::move(metadata)};
}

} // namespace wickfield
