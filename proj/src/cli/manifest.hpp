#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wickfield::cli {

std::uint64_t fnv1a64(const std::string& bytes);

/// Output directory bound to one resolved configuration. Every file written
/// through it is stamped with the configuration hash; write_manifest() lists
/// them alongside the full configuration.
class OutputSet {
public:
    OutputSet(std::string dir, std::string command, nlohmann::json resolved_config);

    const std::string& hash() const noexcept { return hash_; }

    /// CSV body without the stamp line; a "# manifest <hash>" line is prepended.
    void write_csv(const std::string& name, const std::string& body);
    /// Adds "manifest_hash" to the object before writing.
    void write_json(const std::string& name, nlohmann::json body);
    /// Text with '#' comments (coefficient dumps); a stamp comment is prepended.
    void write_text(const std::string& name, const std::string& body);

    void write_manifest();

private:
    void put(const std::string& name, const std::string& content);

    std::string dir_;
    std::string command_;
    nlohmann::json config_;
    std::string hash_;
    std::vector<std::string> files_;
};

/// Fixed-format numbers for byte-stable output.
std::string fmt(double v);

} // namespace wickfield::cli
