#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "secord/enforcers.hpp"
#include "secord/network.hpp"

namespace secord {

enum class Heuristic { dom_ddeg, dom_wdeg };
enum class SearchMode { first_solution, count_all };

std::optional<Heuristic> heuristic_from_string(std::string_view text);
std::string_view to_string(Heuristic h);

struct SearchConfig {
    Heuristic heuristic = Heuristic::dom_wdeg;
    Preprocessing preprocessing = Preprocessing::none;
    SearchMode mode = SearchMode::first_solution;
    std::uint64_t node_limit = 100'000'000;
    std::chrono::milliseconds time_limit{std::chrono::hours(1)};
};

struct SearchResult {
    enum class Outcome { sat, unsat, limit } outcome = Outcome::unsat;
    std::optional<Instantiation> solution; ///< first solution found, when any
    std::uint64_t nodes = 0;               ///< variable assignments made during search
    std::uint64_t solution_count = 0;
    EnforceReport preprocessing_report;
    std::chrono::nanoseconds elapsed{0};
};

std::string_view to_string(SearchResult::Outcome o);

/// MAC with 2-way branching. Preprocessing runs on a private copy; `network` is untouched.
SearchResult mac_solve(const ConstraintNetwork &network, const SearchConfig &config);

/// Unassigned variable with the smallest |dom| / degree ratio, ties to the smallest id.
/// Degrees count constraints with at least one other unassigned variable; with dom_wdeg
/// each constraint counts its weight. A zero degree ranks last.
/// Throws ModelError if every variable is assigned.
VarId select_variable(const ConstraintNetwork &network, Heuristic heuristic, std::span<const std::uint8_t> assigned);

} // namespace secord
