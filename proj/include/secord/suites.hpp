#pragma once

// Verification suites shared by `secord verify` and the acceptance tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "secord/generator.hpp"

namespace secord {

struct CheckLine {
    std::string label;
    bool passed = true;
    std::string detail;
};

struct SuiteReport {
    std::vector<CheckLine> checks;

    bool passed() const;
    void add(std::string label, bool ok, std::string detail = {});
};

using Progress = std::function<void(const std::string &)>;

/// Binary samples for the binary panel, mixed-arity samples for the general one.
SampleSpec lattice_binary_samples(std::uint64_t seed);
SampleSpec lattice_general_samples(std::uint64_t seed);

struct LatticeSuiteOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 7;
    std::filesystem::path corpus; ///< directory holding <hold>_not_<fail>.json witnesses
};

/// Monotonicity along every strict edge, plus a certified witness in the corpus for every
/// strict edge and both directions of every incomparable pair.
SuiteReport run_lattice_suite(const LatticeSuiteOptions &options, const Progress &progress = {});

/// Facts about the two-ternary-constraint network and the 2-colouring triangle.
SuiteReport run_figures_suite();

/// Equivalences between closures, and the path-based characterizations on binary networks.
SuiteReport run_props_suite(std::size_t samples = 100, std::uint64_t seed = 11, const Progress &progress = {});

} // namespace secord
