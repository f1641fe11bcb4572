#pragma once

// JSON instance documents:
//
//   {
//     "format": "secord-instance", "version": 1,
//     "variables":   [{"name": "x", "values": ["a", "b"]}, ...],
//     "constraints": [{"scope": ["x", "y"], "polarity": "conflicts", "tuples": [["a", "a"]]}, ...],
//     "metadata":    {...}
//   }
//
// Values may be strings or integers; they are mapped to 0..d-1 in declared order.
// A reduced current domain is written as a unary supports constraint.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "secord/network.hpp"

namespace secord {

struct Instance {
    ConstraintNetwork network;
    std::vector<std::string> variable_names;
    std::vector<std::vector<std::string>> value_names;
    nlohmann::json metadata = nlohmann::json::object();
};

/// Wraps a network with default names x0, x1, ... and values "0", "1", ...
Instance make_instance(ConstraintNetwork network);

struct ParseOptions {
    bool strict = true; ///< reject unknown fields
};

/// Throws ParseError; syntax errors carry line and column, semantic ones the constraint index.
Instance parse_instance(std::string_view text, const ParseOptions &options = {});
Instance read_instance(const std::filesystem::path &path, const ParseOptions &options = {});

std::string serialize_instance(const Instance &instance);
/// Writes through a temporary file and a rename, so readers never see a partial document.
void write_instance(const std::filesystem::path &path, const Instance &instance);
void write_file_atomically(const std::filesystem::path &path, std::string_view contents);

std::string read_file(const std::filesystem::path &path);

/// FNV-1a, 64-bit; identifies input files in report records.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace secord
