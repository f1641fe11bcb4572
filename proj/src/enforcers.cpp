#include "secord/enforcers.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "secord/errors.hpp"
#include "secord/propagation.hpp"
#include "secord/trail.hpp"

namespace secord {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<VarId> sweep_order(int n, const EnforceOptions &options, std::mt19937_64 *rng) {
    std::vector<VarId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (options.shuffle_seed && rng)
        std::shuffle(order.begin(), order.end(), *rng);
    return order;
}

enum class Learning { partial, full };

// Circular singleton-check sweep with nogood learning on binary pairs.
class DualConsistency {
  public:
    DualConsistency(ConstraintNetwork &network, const EnforceOptions &options, Learning learning)
        : net_(network), options_(options), learning_(learning), by_var_(static_cast<std::size_t>(network.num_variables())) {
        if (options.shuffle_seed)
            rng_.emplace(*options.shuffle_seed);
    }

    EnforceReport run() {
        auto start = Clock::now();
        EnforceReport report;
        report_ = &report;

        auto out = gac_.enforce(net_);
        report.deleted_values += out.deleted_values;
        const int n = net_.num_variables();
        if (!out.ok()) {
            report.consistent = false;
        } else if (n > 0) {
            auto order = sweep_order(n, options_, rng_ ? &*rng_ : nullptr);
            std::size_t i = 0, marker = 0, revisions = 0;
            do {
                ++revisions;
                if (revise_variable(order[i])) {
                    auto again = gac_.enforce(net_);
                    report.deleted_values += again.deleted_values;
                    if (!again.ok()) {
                        report.consistent = false;
                        break;
                    }
                    marker = i;
                }
                i = (i + 1) % order.size();
            } while (i != marker);
            report.passes = (revisions + order.size() - 1) / order.size();
        }
        report.consistent = report.consistent && !net_.failed();
        report.elapsed = Clock::now() - start;
        return report;
    }

  private:
    bool revise_variable(VarId x) {
        bool effective = false;
        auto values = net_.domain(x).values();
        if (rng_)
            std::shuffle(values.begin(), values.end(), *rng_);
        for (Value a : values) {
            if (!net_.domain(x).contains(a))
                continue;
            touched_.clear();
            auto out = singleton_check(
                net_, x, a, trail_, gac_,
                [&](const SingletonView &view) {
                    for (const auto &e : view.deletions) {
                        if (e.kind != Trail::Entry::Kind::value || e.owner == x)
                            continue;
                        auto &bucket = by_var_[static_cast<std::size_t>(e.owner)];
                        if (bucket.empty())
                            touched_.push_back(e.owner);
                        bucket.push_back(static_cast<Value>(e.item));
                    }
                },
                /*base_is_gac=*/true);

            if (!out.ok()) {
                for (VarId y : touched_)
                    by_var_[static_cast<std::size_t>(y)].clear();
                net_.remove_value(x, a);
                ++report_->deleted_values;
                effective = true;
                if (net_.failed())
                    return true;
                continue;
            }
            std::sort(touched_.begin(), touched_.end());
            for (VarId y : touched_) {
                auto &deleted = by_var_[static_cast<std::size_t>(y)];
                std::sort(deleted.begin(), deleted.end());
                if (learn(x, a, y, deleted))
                    effective = true;
                deleted.clear();
            }
            if (net_.failed())
                return true;
        }
        return effective;
    }

    bool learn(VarId x, Value a, VarId y, const std::vector<Value> &deleted) {
        if (auto cid = net_.binary_between(x, y)) {
            bool any = false;
            const auto &c = net_.constraint(*cid);
            bool x_first = c.scope()[0] == x;
            for (Value b : deleted) {
                Value t[2] = {x_first ? a : b, x_first ? b : a};
                if (net_.forbid_tuple(*cid, c.index_of(t))) {
                    ++report_->deleted_tuples;
                    any = true;
                }
            }
            return any;
        }
        if (learning_ == Learning::partial)
            return false;
        std::vector<Tuple> conflicts;
        conflicts.reserve(deleted.size());
        for (Value b : deleted)
            conflicts.push_back(Tuple{a, b});
        net_.add_constraint({x, y}, Polarity::conflicts, conflicts);
        ++report_->added_constraints;
        report_->deleted_tuples += conflicts.size();
        return true;
    }

    ConstraintNetwork &net_;
    const EnforceOptions &options_;
    Learning learning_;
    GacPropagator gac_;
    Trail trail_;
    std::optional<std::mt19937_64> rng_;
    std::vector<std::vector<Value>> by_var_;
    std::vector<VarId> touched_;
    EnforceReport *report_ = nullptr;
};

// Worklist over (binary constraint, third variable) triangles, interleaved with GAC.
class ConservativePathConsistency {
  public:
    ConservativePathConsistency(ConstraintNetwork &network, const EnforceOptions &options)
        : net_(network), options_(options) {}

    EnforceReport run() {
        auto start = Clock::now();
        EnforceReport report;
        const int n = net_.num_variables();

        auto out = gac_.enforce(net_);
        report.deleted_values += out.deleted_values;
        if (!out.ok()) {
            report.consistent = false;
            report.elapsed = Clock::now() - start;
            return report;
        }

        queued_.assign(static_cast<std::size_t>(net_.num_constraints()) * static_cast<std::size_t>(n), 0);
        for (const auto &c : net_.constraints()) {
            if (c.arity() != 2)
                continue;
            for (VarId z = 0; z < n; ++z)
                if (is_triangle(c.id(), z))
                    push(c.id(), z);
        }
        if (options_.shuffle_seed) {
            std::mt19937_64 rng(*options_.shuffle_seed);
            std::shuffle(next_.begin(), next_.end(), rng);
        }

        std::vector<int> sizes(static_cast<std::size_t>(n));
        do {
            ++report.passes;
            std::vector<std::pair<ConstraintId, VarId>> current;
            current.swap(next_);
            for (auto [cid, z] : current) {
                queued_[slot(cid, z)] = 0;
                std::size_t removed = revise_triangle(cid, z);
                if (removed == 0)
                    continue;
                report.deleted_tuples += removed;
                const auto &c = net_.constraint(cid);
                VarId x = c.scope()[0], y = c.scope()[1];
                for (VarId w = 0; w < n; ++w) {
                    if (w == x || w == y)
                        continue;
                    auto cxw = net_.binary_between(x, w);
                    auto cyw = net_.binary_between(y, w);
                    if (cxw && cyw) {
                        push(*cxw, y);
                        push(*cyw, x);
                    }
                }
                for (VarId v = 0; v < n; ++v)
                    sizes[static_cast<std::size_t>(v)] = net_.domain(v).size();
                VarId touched[] = {x, y};
                auto again = gac_.enforce_from(net_, touched);
                report.deleted_values += again.deleted_values;
                if (!again.ok() || net_.failed()) {
                    report.consistent = false;
                    report.elapsed = Clock::now() - start;
                    return report;
                }
                for (VarId v = 0; v < n; ++v)
                    if (net_.domain(v).size() != sizes[static_cast<std::size_t>(v)])
                        wake_third(v);
            }
        } while (!next_.empty());

        report.consistent = !net_.failed();
        report.elapsed = Clock::now() - start;
        return report;
    }

  private:
    std::size_t slot(ConstraintId c, VarId z) const {
        return static_cast<std::size_t>(c) * static_cast<std::size_t>(net_.num_variables()) +
               static_cast<std::size_t>(z);
    }

    bool is_triangle(ConstraintId cid, VarId z) const {
        const auto &c = net_.constraint(cid);
        VarId x = c.scope()[0], y = c.scope()[1];
        return z != x && z != y && net_.binary_between(x, z) && net_.binary_between(y, z);
    }

    void push(ConstraintId c, VarId z) {
        auto &flag = queued_[slot(c, z)];
        if (!flag) {
            flag = 1;
            next_.emplace_back(c, z);
        }
    }

    // Every triangle whose third variable is z must be rechecked once z shrinks.
    void wake_third(VarId z) {
        for (ConstraintId a : net_.constraints_of(z)) {
            const auto &ca = net_.constraint(a);
            if (ca.arity() != 2)
                continue;
            VarId u = ca.scope()[0] == z ? ca.scope()[1] : ca.scope()[0];
            for (ConstraintId b : net_.constraints_of(z)) {
                const auto &cb = net_.constraint(b);
                if (cb.arity() != 2)
                    continue;
                VarId v = cb.scope()[0] == z ? cb.scope()[1] : cb.scope()[0];
                if (u < v)
                    if (auto cuv = net_.binary_between(u, v))
                        push(*cuv, z);
            }
        }
    }

    std::size_t revise_triangle(ConstraintId cid, VarId z) {
        const auto &c = net_.constraint(cid);
        VarId x = c.scope()[0], y = c.scope()[1];
        auto xs = net_.domain(x).values();
        auto ys = net_.domain(y).values();
        auto zs = net_.domain(z).values();
        std::size_t removed = 0;
        for (Value a : xs)
            for (Value b : ys) {
                Value t[2] = {a, b};
                auto idx = c.index_of(t);
                if (!c.allows_index(idx))
                    continue;
                bool witnessed = std::any_of(zs.begin(), zs.end(), [&](Value w) {
                    return net_.pair_allowed(x, a, z, w) && net_.pair_allowed(y, b, z, w);
                });
                if (!witnessed && net_.forbid_tuple(cid, idx))
                    ++removed;
            }
        return removed;
    }

    ConstraintNetwork &net_;
    const EnforceOptions &options_;
    GacPropagator gac_;
    std::vector<std::uint8_t> queued_;
    std::vector<std::pair<ConstraintId, VarId>> next_;
};

} // namespace

EnforceReport enforce_scdc(ConstraintNetwork &network, const EnforceOptions &options) {
    return DualConsistency(network, options, Learning::partial).run();
}

EnforceReport enforce_sdc(ConstraintNetwork &network, const EnforceOptions &options) {
    auto n = static_cast<double>(network.num_variables());
    auto d = static_cast<double>(network.max_domain_size());
    double entries = n * (n - 1) / 2 * d * d;
    if (entries > static_cast<double>(options.sdc_entry_budget))
        throw ResourceError("sDC1 would need up to " + std::to_string(static_cast<long long>(entries)) +
                            " conflict entries, over the budget of " + std::to_string(options.sdc_entry_budget));
    return DualConsistency(network, options, Learning::full).run();
}

EnforceReport enforce_scpc(ConstraintNetwork &network, const EnforceOptions &options) {
    return ConservativePathConsistency(network, options).run();
}

EnforceReport enforce_sac1(ConstraintNetwork &network, const EnforceOptions &options) {
    auto start = Clock::now();
    EnforceReport report;
    GacPropagator gac;
    Trail trail;
    std::optional<std::mt19937_64> rng;
    if (options.shuffle_seed)
        rng.emplace(*options.shuffle_seed);

    auto out = gac.enforce(network);
    report.deleted_values += out.deleted_values;
    if (!out.ok()) {
        report.consistent = false;
        report.elapsed = Clock::now() - start;
        return report;
    }
    auto order = sweep_order(network.num_variables(), options, rng ? &*rng : nullptr);
    bool changed = true;
    while (changed && report.consistent) {
        changed = false;
        ++report.passes;
        for (VarId x : order) {
            auto values = network.domain(x).values();
            if (rng)
                std::shuffle(values.begin(), values.end(), *rng);
            for (Value a : values) {
                if (!network.domain(x).contains(a))
                    continue;
                if (singleton_check(network, x, a, trail, gac, {}, /*base_is_gac=*/true).ok())
                    continue;
                network.remove_value(x, a);
                ++report.deleted_values;
                changed = true;
                VarId touched[] = {x};
                auto again = gac.enforce_from(network, touched);
                report.deleted_values += again.deleted_values;
                if (!again.ok()) {
                    report.consistent = false;
                    break;
                }
            }
            if (!report.consistent)
                break;
        }
    }
    report.consistent = report.consistent && !network.failed();
    report.elapsed = Clock::now() - start;
    return report;
}

EnforceReport enforce_gac_report(ConstraintNetwork &network) {
    auto start = Clock::now();
    EnforceReport report;
    auto out = enforce_gac(network);
    report.passes = 1;
    report.deleted_values = out.deleted_values;
    report.consistent = out.ok() && !network.failed();
    report.elapsed = Clock::now() - start;
    return report;
}

std::optional<Preprocessing> preprocessing_from_string(std::string_view name) {
    if (name == "none")
        return Preprocessing::none;
    if (name == "gac" || name == "ac")
        return Preprocessing::gac;
    if (name == "sac1" || name == "sac")
        return Preprocessing::sac1;
    if (name == "scpc" || name == "scpc8")
        return Preprocessing::scpc;
    if (name == "scdc1" || name == "scdc")
        return Preprocessing::scdc1;
    if (name == "sdc1" || name == "sdc")
        return Preprocessing::sdc1;
    return std::nullopt;
}

std::string_view to_string(Preprocessing p) {
    switch (p) {
    case Preprocessing::none:
        return "none";
    case Preprocessing::gac:
        return "gac";
    case Preprocessing::sac1:
        return "sac1";
    case Preprocessing::scpc:
        return "scpc";
    case Preprocessing::scdc1:
        return "scdc1";
    case Preprocessing::sdc1:
        return "sdc1";
    }
    return "?";
}

EnforceReport run_enforcer(Preprocessing which, ConstraintNetwork &network, const EnforceOptions &options) {
    switch (which) {
    case Preprocessing::none: {
        EnforceReport r;
        r.consistent = !network.failed();
        return r;
    }
    case Preprocessing::gac:
        return enforce_gac_report(network);
    case Preprocessing::sac1:
        return enforce_sac1(network, options);
    case Preprocessing::scpc:
        return enforce_scpc(network, options);
    case Preprocessing::scdc1:
        return enforce_scdc(network, options);
    case Preprocessing::sdc1:
        return enforce_sdc(network, options);
    }
    return {};
}

} // namespace secord
