#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "secord/network.hpp"

namespace secord {

struct EnforceReport {
    bool consistent = true; ///< false iff the final network is failed
    std::size_t passes = 0;
    std::size_t deleted_values = 0;
    std::size_t deleted_tuples = 0;
    std::size_t added_constraints = 0;
    std::chrono::nanoseconds elapsed{0};

    double elapsed_ms() const { return std::chrono::duration<double, std::milli>(elapsed).count(); }
};

struct EnforceOptions {
    /// When set, variables (and values) are visited in a shuffled order instead of ascending ids.
    std::optional<std::uint64_t> shuffle_seed;
    /// enforce_sdc refuses networks where n(n-1)/2 * d^2 exceeds this many potential conflict entries.
    std::size_t sdc_entry_budget = 100'000'000;
};

/// Strong conservative dual consistency (SAC+CDC on non-binary networks). Never adds constraints.
EnforceReport enforce_scdc(ConstraintNetwork &network, const EnforceOptions &options = {});

/// Strong dual consistency; may add binary conflicts constraints. Throws ResourceError over budget.
EnforceReport enforce_sdc(ConstraintNetwork &network, const EnforceOptions &options = {});

/// GAC plus conservative path consistency over triangles of binary constraints.
EnforceReport enforce_scpc(ConstraintNetwork &network, const EnforceOptions &options = {});

/// Singleton arc consistency, restarting the sweep after any deletion.
EnforceReport enforce_sac1(ConstraintNetwork &network, const EnforceOptions &options = {});

/// Plain GAC reported in the same shape as the other enforcers.
EnforceReport enforce_gac_report(ConstraintNetwork &network);

enum class Preprocessing { none, gac, sac1, scpc, scdc1, sdc1 };

std::optional<Preprocessing> preprocessing_from_string(std::string_view name);
std::string_view to_string(Preprocessing p);

/// Dispatches on the enforcer name; `none` leaves the network untouched and reports consistent=!failed.
EnforceReport run_enforcer(Preprocessing which, ConstraintNetwork &network, const EnforceOptions &options = {});

} // namespace secord
