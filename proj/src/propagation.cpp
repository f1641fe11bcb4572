#include "secord/propagation.hpp"

#include <algorithm>

namespace secord {

GacPropagator::GacPropagator(std::uint64_t shuffle_seed) : rng_(std::in_place, shuffle_seed) {}

void GacPropagator::prepare(const ConstraintNetwork &network) {
    auto m = static_cast<std::size_t>(network.num_constraints());
    if (queued_.size() < m)
        queued_.resize(m, 0);
    while (residue_.size() < m) {
        const auto &c = network.constraint(static_cast<ConstraintId>(residue_.size()));
        std::size_t slots = 0;
        for (int p = 0; p < c.arity(); ++p)
            slots += static_cast<std::size_t>(c.dim(p));
        residue_.emplace_back(slots, 0);
    }
}

void GacPropagator::enqueue(ConstraintId c) {
    auto &flag = queued_[static_cast<std::size_t>(c)];
    if (!flag) {
        flag = 1;
        queue_.push_back(c);
    }
}

PropagationOutcome GacPropagator::enforce(ConstraintNetwork &network, Trail *trail) {
    prepare(network);
    for (ConstraintId c = 0; c < network.num_constraints(); ++c)
        enqueue(c);
    return run(network, trail);
}

PropagationOutcome GacPropagator::enforce_from(ConstraintNetwork &network, std::span<const VarId> touched,
                                               Trail *trail) {
    prepare(network);
    for (VarId x : touched)
        for (ConstraintId c : network.constraints_of(x))
            enqueue(c);
    return run(network, trail);
}

PropagationOutcome GacPropagator::run(ConstraintNetwork &network, Trail *trail) {
    PropagationOutcome out;
    auto clear_queue = [&] {
        for (ConstraintId c : queue_)
            queued_[static_cast<std::size_t>(c)] = 0;
        queue_.clear();
    };
    if (network.failed()) {
        clear_queue();
        out.status = PropagationOutcome::Status::wipeout;
        for (const auto &c : network.constraints())
            if (c.relation_empty()) {
                out.culprit = c.id();
                break;
            }
        return out;
    }

    std::vector<VarId> changed;
    std::size_t head = 0;
    while (head < queue_.size()) {
        ConstraintId c;
        if (rng_) {
            std::uniform_int_distribution<std::size_t> pick(head, queue_.size() - 1);
            std::swap(queue_[head], queue_[pick(*rng_)]);
        }
        c = queue_[head++];
        queued_[static_cast<std::size_t>(c)] = 0;
        if (head > 4096 && head * 2 > queue_.size()) {
            queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
            head = 0;
        }

        changed.clear();
        if (!revise(network, c, trail, out, changed)) {
            out.status = PropagationOutcome::Status::wipeout;
            out.culprit = c;
            queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
            clear_queue();
            return out;
        }
        for (VarId x : changed)
            for (ConstraintId other : network.constraints_of(x))
                if (other != c)
                    enqueue(other);
    }
    queue_.clear();
    return out;
}

// Removes every value of the scope without a support on c. Returns false on wipeout.
bool GacPropagator::revise(ConstraintNetwork &network, ConstraintId cid, Trail *trail, PropagationOutcome &out,
                           std::vector<VarId> &changed) {
    const Constraint &c = network.constraint(cid);
    const int r = c.arity();
    auto scope = c.scope();
    auto &residues = residue_[static_cast<std::size_t>(cid)];

    std::vector<std::vector<Value>> live(static_cast<std::size_t>(r));
    std::vector<std::size_t> offset(static_cast<std::size_t>(r), 0);
    for (int p = 0; p < r; ++p) {
        live[static_cast<std::size_t>(p)] = network.domain(scope[static_cast<std::size_t>(p)]).values();
        if (p > 0)
            offset[static_cast<std::size_t>(p)] =
                offset[static_cast<std::size_t>(p - 1)] + static_cast<std::size_t>(c.dim(p - 1));
    }

    auto still_valid = [&](std::size_t idx) {
        if (!c.allows_index(idx))
            return false;
        for (int q = 0; q < r; ++q)
            if (!network.domain(scope[static_cast<std::size_t>(q)]).contains(c.component(idx, q)))
                return false;
        return true;
    };

    // Lexicographic scan of current tuples with position p fixed to a.
    std::vector<std::size_t> counter(static_cast<std::size_t>(r));
    auto find_support = [&](int p, Value a) -> std::optional<std::size_t> {
        std::size_t base = static_cast<std::size_t>(a) * c.stride(p);
        for (int q = 0; q < r; ++q) {
            if (q != p && live[static_cast<std::size_t>(q)].empty())
                return std::nullopt;
            counter[static_cast<std::size_t>(q)] = 0;
        }
        if (r == 2) {
            int q = 1 - p;
            for (Value b : live[static_cast<std::size_t>(q)]) {
                std::size_t idx = base + static_cast<std::size_t>(b) * c.stride(q);
                if (c.allows_index(idx))
                    return idx;
            }
            return std::nullopt;
        }
        while (true) {
            std::size_t idx = base;
            for (int q = 0; q < r; ++q)
                if (q != p)
                    idx += static_cast<std::size_t>(
                               live[static_cast<std::size_t>(q)][counter[static_cast<std::size_t>(q)]]) *
                           c.stride(q);
            if (c.allows_index(idx))
                return idx;
            int q = r - 1;
            for (; q >= 0; --q) {
                if (q == p)
                    continue;
                auto &k = counter[static_cast<std::size_t>(q)];
                if (++k < live[static_cast<std::size_t>(q)].size())
                    break;
                k = 0;
            }
            if (q < 0)
                return std::nullopt;
        }
    };

    bool again = true;
    while (again) {
        again = false;
        for (int p = 0; p < r; ++p) {
            VarId x = scope[static_cast<std::size_t>(p)];
            auto &values = live[static_cast<std::size_t>(p)];
            bool removed_here = false;
            for (Value a : values) {
                auto &res = residues[offset[static_cast<std::size_t>(p)] + static_cast<std::size_t>(a)];
                if (res != 0 && still_valid(res - 1))
                    continue;
                if (auto idx = find_support(p, a)) {
                    res = *idx + 1;
                    continue;
                }
                network.remove_value(x, a, trail);
                ++out.deleted_values;
                removed_here = true;
                if (network.domain(x).empty())
                    return false;
            }
            if (removed_here) {
                values = network.domain(x).values();
                if (std::find(changed.begin(), changed.end(), x) == changed.end())
                    changed.push_back(x);
                again = r > 1;
            }
        }
    }
    return true;
}

PropagationOutcome enforce_gac(ConstraintNetwork &network, Trail *trail) {
    GacPropagator gac;
    return gac.enforce(network, trail);
}

PropagationOutcome singleton_check(ConstraintNetwork &network, VarId x, Value a, Trail &trail, GacPropagator &gac,
                                   const std::function<void(const SingletonView &)> &inspect, bool base_is_gac) {
    network.check_variable(x);
    trail.push(network);
    assign(network, x, a, &trail);
    VarId touched[] = {x};
    auto out = base_is_gac ? gac.enforce_from(network, touched, &trail) : gac.enforce(network, &trail);
    if (inspect)
        inspect(SingletonView{network, trail.top_frame()});
    trail.pop(network);
    return out;
}

PropagationOutcome singleton_check(ConstraintNetwork &network, VarId x, Value a, Trail &trail,
                                   const std::function<void(const SingletonView &)> &inspect) {
    GacPropagator gac;
    return singleton_check(network, x, a, trail, gac, inspect);
}

} // namespace secord
