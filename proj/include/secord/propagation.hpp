#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "secord/network.hpp"
#include "secord/trail.hpp"

namespace secord {

struct PropagationOutcome {
    enum class Status { ok, wipeout } status = Status::ok;
    std::optional<ConstraintId> culprit; ///< set iff status == wipeout (absent if the input was already failed)
    std::size_t deleted_values = 0;
    std::size_t deleted_tuples = 0;

    bool ok() const { return status == Status::ok; }
};

/// Coarse-grained GAC over constraints with residual supports.
///
/// Residues are caches only: a residue is re-validated before use, so one
/// propagator can follow a network through trail pushes and pops.
class GacPropagator {
  public:
    GacPropagator() = default;
    /// Revision order is drawn at random from the queue when a seed is given.
    explicit GacPropagator(std::uint64_t shuffle_seed);

    /// Revises every constraint until fixpoint.
    PropagationOutcome enforce(ConstraintNetwork &network, Trail *trail = nullptr);
    /// Revises only constraints involving one of `touched`, plus whatever they wake up.
    PropagationOutcome enforce_from(ConstraintNetwork &network, std::span<const VarId> touched, Trail *trail = nullptr);

  private:
    PropagationOutcome run(ConstraintNetwork &network, Trail *trail);
    bool revise(ConstraintNetwork &network, ConstraintId c, Trail *trail, PropagationOutcome &out,
                std::vector<VarId> &changed);
    void enqueue(ConstraintId c);
    void prepare(const ConstraintNetwork &network);

    std::vector<ConstraintId> queue_;
    std::vector<std::uint8_t> queued_;
    // residue_[c][offset_[c][pos] + a] = tuple index + 1, 0 when unknown
    std::vector<std::vector<std::size_t>> residue_;
    std::optional<std::mt19937_64> rng_;
};

PropagationOutcome enforce_gac(ConstraintNetwork &network, Trail *trail = nullptr);

/// Read-only view handed to a singleton-check inspector: the reduced network and
/// the deletions the check made (the trail frame, including x's other values).
struct SingletonView {
    const ConstraintNetwork &reduced;
    std::span<const Trail::Entry> deletions;
};

/// Pushes a frame, assigns x = a, enforces GAC, lets `inspect` look at the result and
/// pops the frame so the network is restored exactly.
///
/// With `base_is_gac`, only constraints of x are seeded; valid when the network is GAC
/// apart from changes that the assignment of x makes irrelevant.
PropagationOutcome singleton_check(ConstraintNetwork &network, VarId x, Value a, Trail &trail,
                                   GacPropagator &gac,
                                   const std::function<void(const SingletonView &)> &inspect = {},
                                   bool base_is_gac = false);

PropagationOutcome singleton_check(ConstraintNetwork &network, VarId x, Value a, Trail &trail,
                                   const std::function<void(const SingletonView &)> &inspect = {});

} // namespace secord
