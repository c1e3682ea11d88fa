#pragma once

#include "wickfield/cli.hpp"
#include "wickfield/linear_waves.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wickfield::cli {

using nlohmann::json;

/// Typed, path-tracking reader over one JSON object. Every value read (or
/// defaulted) is echoed into `resolved`; done() rejects unknown keys.
class Section {
public:
    Section(const json& source, json& resolved, std::string path);

    bool has(const std::string& key) const;

    template <class T>
    T required(const std::string& key);

    template <class T>
    T optional(const std::string& key, T fallback);

    Section child(const std::string& key);
    /// An absent key reads as an empty object.
    Section child_or_empty(const std::string& key);

    std::string field(const std::string& key) const;
    void done();

private:
    template <class T>
    T convert(const json& v, const std::string& key) const;

    const json* src_;
    json* res_;
    std::string path_;
    std::set<std::string> seen_;
    static const json kEmpty;
};

/// Options shared by every subcommand, after flag overrides.
struct CommonOptions {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    int workers = 1;
    std::size_t budget_bytes = kDefaultBudgetBytes;
    std::string out;
};

CommonOptions read_common(Section& root);

LatticePtr read_lattice(Section s, std::size_t budget);
DataPair read_pair(Section s, const LatticePtr& lattice);
GammaProfile read_profile(Section s, const LatticePtr& lattice);

} // namespace wickfield::cli
