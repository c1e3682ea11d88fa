#include "manifest.hpp"

#include "wickfield/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wickfield::cli {

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

OutputSet::OutputSet(std::string dir, std::string command, nlohmann::json resolved_config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(resolved_config))
{
    std::ostringstream h;
    h << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config_.dump());
    hash_ = h.str();
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw Error("cannot create output directory '" + dir_ + "': " + ec.message());
}

void OutputSet::put(const std::string& name, const std::string& content)
{
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    os << content;
    if (!os)
        throw Error("write to '" + path.string() + "' failed");
    files_.push_back(name);
}

void OutputSet::write_csv(const std::string& name, const std::string& body)
{
    put(name, "# manifest " + hash_ + "\n" + body);
}

void OutputSet::write_text(const std::string& name, const std::string& body)
{
    put(name, "# manifest " + hash_ + "\n" + body);
}

void OutputSet::write_json(const std::string& name, nlohmann::json body)
{
    body["manifest_hash"] = hash_;
    put(name, body.dump(2) + "\n");
}

void OutputSet::write_manifest()
{
    nlohmann::json m;
    m["command"] = command_;
    m["config"] = config_;
    m["hash"] = hash_;
    m["outputs"] = files_;
    m["float_mode"] = "IEEE-754 double, no fast-math";
    const auto path = std::filesystem::path(dir_) / "manifest.json";
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    os << m.dump(2) << '\n';
}

} // namespace wickfield::cli
