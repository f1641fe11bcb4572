#pragma once

// The strength relationships between consistencies, and the machinery that
// checks them on samples: closure comparison along edges and witness search.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "secord/generator.hpp"
#include "secord/network.hpp"
#include "secord/oracle.hpp"

namespace secord {

/// binary: the relationship is claimed for binary networks; general: for any arity.
enum class Panel { binary, general };

struct LatticeEdge {
    Consistency stronger;
    Consistency weaker;
    Panel panel;
};

struct IncomparablePair {
    Consistency a;
    Consistency b;
    Panel panel;
};

std::span<const LatticeEdge> strict_edges();
std::span<const IncomparablePair> incomparable_pairs();

/// A network where `hold` is satisfied and `fail` is not.
struct WitnessRequirement {
    Consistency hold;
    Consistency fail;
    bool binary_only;
};

/// One requirement per strict edge (weaker holds, stronger fails) and two per incomparable pair,
/// merged so each (hold, fail) appears once; binary_only if any source needs a binary network.
std::vector<WitnessRequirement> witness_requirements();

std::string witness_file_name(Consistency hold, Consistency fail);

/// Sampled networks and their closures, memoized so many edges can share them.
class ClosureCache {
  public:
    explicit ClosureCache(SampleSpec spec) : spec_(spec) {}

    const SampleSpec &spec() const { return spec_; }
    const ConstraintNetwork &sample(std::uint64_t index);
    const ConstraintNetwork &closure(Consistency phi, std::uint64_t index);

  private:
    SampleSpec spec_;
    std::map<std::uint64_t, ConstraintNetwork> samples_;
    std::map<std::pair<std::uint64_t, Consistency>, ConstraintNetwork> closures_;
};

struct EdgeReport {
    Consistency stronger;
    Consistency weaker;
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::size_t strict_samples = 0; ///< samples where the closures differ
    std::vector<ConstraintNetwork> offending;
};

/// For each sample P, compare(closure(stronger, P), closure(weaker, P)) must be equal or smaller.
/// Nogood sets are compared up to subsumption.
EdgeReport verify_lattice_edge(Consistency stronger, Consistency weaker, ClosureCache &samples,
                               std::size_t count);
EdgeReport verify_lattice_edge(Consistency stronger, Consistency weaker, const SampleSpec &spec,
                               std::size_t count);

struct WitnessBudget {
    std::size_t attempts = 2000;
    std::uint64_t seed = 1;
    bool binary_only = true;
    int n_max = 6;
    int d_max = 3;
    int arity_max = 4;
};

bool is_witness(const ConstraintNetwork &network, Consistency hold, Consistency fail);

/// Random search: sample a small network, take its `hold` closure (so `hold` is satisfied by
/// construction), then flip single tuples of the closure while `hold` keeps holding, until
/// `fail` breaks. Returns nothing when the budget runs out.
std::optional<ConstraintNetwork> find_witness(Consistency hold, Consistency fail, const WitnessBudget &budget);

/// w, x, y, z over {a, b} with supports c_wxy = {(a,a,a), (b,b,b)} and c_wxz = {(a,b,a), (b,a,b)}.
/// Strong path-consistent, yet both singleton checks on y wipe out.
ConstraintNetwork twin_ternary_network();

/// Binary, 7 variables. Under z=c the all-different triangle p, q, x is squeezed into two
/// values, which arc consistency cannot see; each value of v exposes it (or pins a side
/// variable w1/w2 that excludes c). Every value is SAC and every allowed pair CDC, yet (z,c)
/// disappears in every singleton test on v, so the network is sCDC- but not BiSAC-consistent.
ConstraintNetwork pigeonhole_gadget_network();

} // namespace secord
