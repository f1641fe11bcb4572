#pragma once

// Brute-force checkers and closures, written straight from the definitions.
// Nothing here shares code with the propagation module, so the two can be
// used to certify each other.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secord/network.hpp"

namespace secord {

enum class Consistency {
    GAC,
    SAC,
    BiSAC,
    IC, ///< inverse consistency: every value belongs to a solution
    PC,
    ThreeC,
    DC,
    TwoSAC,
    PPC,
    CPC,
    CDC,
    C3C,
    C2SAC,
    sPC,
    s3C,
    sDC,
    s2SAC,
    sPPC,
    sCPC,
    sCDC,
    sC3C,
    sC2SAC,
    SACplusCDC,
};

std::span<const Consistency> all_consistencies();
std::string_view name(Consistency c);
/// Accepts the printed names ("3C", "SAC+CDC", ...), "AC" and "InverseConsistency"; case-insensitive.
std::optional<Consistency> consistency_from_string(std::string_view text);

/// First-order part of a consistency: the value-level test it implies.
enum class ValueTest { none, GAC, SAC, BiSAC, IC };
/// Second-order part: the pair-level test it implies.
enum class PairTest { none, PC, ThreeC, DC, TwoSAC, PPC, CPC, CDC, C3C, C2SAC };

ValueTest value_part(Consistency c);
PairTest pair_part(Consistency c);
/// Pair tests that only look at pairs already bound by a binary constraint.
bool is_conservative(PairTest t);

struct OracleCaps {
    int max_variables = 8;
    int max_domain = 5;
    int max_arity = 4;
    /// Upper bound on pair/value checks over a whole closure computation.
    std::size_t check_budget = 20'000'000;
};

/// Throws ResourceError if the network is beyond the oracle's scale.
void require_oracle_scale(const ConstraintNetwork &network, const OracleCaps &caps = {});

/// GAC(P) by repeated full scans of every relation. Returns a failed network on wipeout.
ConstraintNetwork naive_gac(ConstraintNetwork network);
/// GAC(P|x=a); a failed network if a is not in dom(x).
ConstraintNetwork singleton_gac(const ConstraintNetwork &network, VarId x, Value a);

/// Value-level check for GAC, SAC, BiSAC or IC. Requires a in dom(x).
bool check_value(Consistency phi, const ConstraintNetwork &network, VarId x, Value a);

/// Pair-level check. Strong variants test their pair part only.
/// Throws ModelError if {(x,a),(y,b)} is not locally consistent or phi has no pair part.
bool check_pair(Consistency phi, const ConstraintNetwork &network, VarId x, Value a, VarId y, Value b);

class Path {
  public:
    /// Throws ModelError unless vars has length >= 2, valid ids, and first != last.
    Path(const ConstraintNetwork &network, std::vector<VarId> vars);

    std::span<const VarId> vars() const { return vars_; }
    std::size_t length() const { return vars_.size() - 1; }
    bool is_graph_path() const { return graph_path_; }
    bool is_closed() const { return closed_; }

  private:
    std::vector<VarId> vars_;
    bool graph_path_ = false;
    bool closed_ = false;
};

/// A support for {(x1,a1),(xk,ak)} on the path, one value per position, or nothing.
std::optional<Tuple> check_path_support(const ConstraintNetwork &network, const Path &path, Value a1, Value ak);

struct Violation {
    Instantiation nogood;
    std::string reason;
};

struct PpcResult {
    bool consistent = true;
    std::optional<Violation> violation;
};

/// Every closed graph-path consistent, decided over the finite set of walk relations.
PpcResult check_ppc(const ConstraintNetwork &network);
/// Every graph-path consistent (closed or not).
bool every_graph_path_consistent(const ConstraintNetwork &network);
/// Every 2-length graph-path consistent.
bool every_2length_graph_path_consistent(const ConstraintNetwork &network);

/// First nogood the consistency would discard, scanning values then pairs in
/// lexicographic order. A failed network has none.
std::optional<Violation> find_violation(Consistency phi, const ConstraintNetwork &network,
                                        const OracleCaps &caps = {});
bool is_consistent(Consistency phi, const ConstraintNetwork &network, const OracleCaps &caps = {});

/// Discards every phi-inconsistent value and pair, in sweeps, until nothing changes.
ConstraintNetwork oracle_closure(Consistency phi, const ConstraintNetwork &network, const OracleCaps &caps = {});

/// Solutions in lexicographic order, at most `limit` of them.
/// Throws ResourceError after `node_budget` partial assignments.
std::vector<Instantiation> enumerate_solutions(const ConstraintNetwork &network, std::size_t limit,
                                               std::size_t node_budget = 50'000'000);

} // namespace secord
