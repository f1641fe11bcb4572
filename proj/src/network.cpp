#include "secord/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "secord/errors.hpp"
#include "secord/trail.hpp"

namespace secord {

namespace {

std::uint64_t pair_key(VarId x, VarId y) {
    auto lo = static_cast<std::uint64_t>(std::min(x, y));
    auto hi = static_cast<std::uint64_t>(std::max(x, y));
    return (lo << 32) | hi;
}

std::vector<VarId> sorted_scope(std::span<const VarId> scope) {
    std::vector<VarId> s(scope.begin(), scope.end());
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

// ---------------------------------------------------------------- Domain

Domain::Domain(int initial_size) : present_(static_cast<std::size_t>(initial_size), 1), size_(initial_size) {}

std::vector<Value> Domain::values() const {
    std::vector<Value> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (int a = 0; a < initial_size(); ++a)
        if (present_[static_cast<std::size_t>(a)])
            out.push_back(a);
    return out;
}

Value Domain::first() const {
    for (int a = 0; a < initial_size(); ++a)
        if (present_[static_cast<std::size_t>(a)])
            return a;
    return -1;
}

bool Domain::erase(Value a) {
    if (!contains(a))
        return false;
    present_[static_cast<std::size_t>(a)] = 0;
    --size_;
    return true;
}

void Domain::restore(Value a) {
    auto &slot = present_[static_cast<std::size_t>(a)];
    if (!slot) {
        slot = 1;
        ++size_;
    }
}

// ---------------------------------------------------------------- Instantiation

Instantiation::Instantiation(std::initializer_list<Assignment> pairs) {
    for (const auto &p : pairs)
        add(p.var, p.value);
}

Instantiation::Instantiation(std::vector<Assignment> pairs) {
    for (const auto &p : pairs)
        add(p.var, p.value);
}

void Instantiation::add(VarId x, Value a) {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), x,
                               [](const Assignment &p, VarId v) { return p.var < v; });
    if (it != pairs_.end() && it->var == x) {
        if (it->value != a)
            throw ModelError("instantiation binds variable " + std::to_string(x) + " twice");
        return;
    }
    pairs_.insert(it, Assignment{x, a});
}

bool Instantiation::binds(VarId x) const { return value_of(x).has_value(); }

std::optional<Value> Instantiation::value_of(VarId x) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), x,
                               [](const Assignment &p, VarId v) { return p.var < v; });
    if (it != pairs_.end() && it->var == x)
        return it->value;
    return std::nullopt;
}

bool Instantiation::is_subset_of(const Instantiation &other) const {
    return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

// ---------------------------------------------------------------- Constraint

Constraint::Constraint(ConstraintId id, std::vector<VarId> scope, std::vector<int> dims, Polarity polarity)
    : id_(id), scope_(std::move(scope)), dims_(std::move(dims)), polarity_(polarity) {
    strides_.assign(scope_.size(), 1);
    std::size_t product = 1;
    for (std::size_t i = scope_.size(); i-- > 0;) {
        strides_[i] = product;
        product *= static_cast<std::size_t>(dims_[i]);
        if (product > kMaxConstraintProduct)
            throw ResourceError("constraint table over " + std::to_string(scope_.size()) +
                                " variables exceeds the dense relation limit");
    }
    allowed_.assign(product, 1);
    allowed_count_ = product;
}

int Constraint::position_of(VarId x) const {
    for (std::size_t i = 0; i < scope_.size(); ++i)
        if (scope_[i] == x)
            return static_cast<int>(i);
    return -1;
}

std::size_t Constraint::index_of(std::span<const Value> tuple) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i)
        idx += static_cast<std::size_t>(tuple[i]) * strides_[i];
    return idx;
}

Tuple Constraint::tuple_at(std::size_t index) const {
    Tuple t(scope_.size());
    for (std::size_t i = 0; i < scope_.size(); ++i)
        t[i] = component(index, static_cast<int>(i));
    return t;
}

std::vector<Tuple> Constraint::table() const {
    if (polarity_ == Polarity::conflicts)
        return forbidden_tuples();
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < allowed_.size(); ++i)
        if (allowed_[i])
            out.push_back(tuple_at(i));
    return out;
}

std::vector<Tuple> Constraint::forbidden_tuples() const {
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < allowed_.size(); ++i)
        if (!allowed_[i])
            out.push_back(tuple_at(i));
    return out;
}

// ---------------------------------------------------------------- ConstraintNetwork

ConstraintNetwork::ConstraintNetwork(std::span<const int> domain_sizes) {
    domains_.reserve(domain_sizes.size());
    for (int s : domain_sizes) {
        if (s < 0)
            throw ModelError("negative domain size");
        domains_.emplace_back(s);
        if (s == 0)
            failed_ = true;
    }
    var_constraints_.resize(domain_sizes.size());
}

int ConstraintNetwork::max_domain_size() const {
    int d = 0;
    for (const auto &dom : domains_)
        d = std::max(d, dom.initial_size());
    return d;
}

int ConstraintNetwork::max_arity() const {
    int r = 0;
    for (const auto &c : constraints_)
        r = std::max(r, c.arity());
    return r;
}

void ConstraintNetwork::check_variable(VarId x) const {
    if (x < 0 || x >= num_variables())
        throw ModelError("unknown variable id " + std::to_string(x));
}

std::optional<ConstraintId> ConstraintNetwork::binary_between(VarId x, VarId y) const {
    auto it = binary_index_.find(pair_key(x, y));
    if (it == binary_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<ConstraintId> ConstraintNetwork::constraint_on(std::span<const VarId> vars) const {
    if (vars.size() == 2)
        return binary_between(vars[0], vars[1]);
    auto it = scope_index_.find(sorted_scope(vars));
    if (it == scope_index_.end())
        return std::nullopt;
    return it->second;
}

bool ConstraintNetwork::pair_allowed(VarId x, Value a, VarId y, Value b) const {
    auto c = binary_between(x, y);
    if (!c)
        return true;
    const auto &con = constraints_[static_cast<std::size_t>(*c)];
    std::size_t idx = con.scope_[0] == x
                          ? static_cast<std::size_t>(a) * con.strides_[0] + static_cast<std::size_t>(b) * con.strides_[1]
                          : static_cast<std::size_t>(b) * con.strides_[0] + static_cast<std::size_t>(a) * con.strides_[1];
    return con.allowed_[idx] != 0;
}

bool ConstraintNetwork::remove_value(VarId x, Value a, Trail *trail) {
    auto &dom = domains_[static_cast<std::size_t>(x)];
    if (!dom.erase(a))
        return false;
    if (trail)
        trail->record_value(x, a);
    if (dom.empty())
        failed_ = true;
    return true;
}

bool ConstraintNetwork::forbid_tuple(ConstraintId c, std::size_t index, Trail *trail) {
    auto &con = constraints_[static_cast<std::size_t>(c)];
    if (!con.allowed_[index])
        return false;
    con.allowed_[index] = 0;
    --con.allowed_count_;
    if (trail)
        trail->record_tuple(c, index);
    if (con.allowed_count_ == 0)
        failed_ = true;
    return true;
}

void ConstraintNetwork::restore_value(VarId x, Value a) { domains_[static_cast<std::size_t>(x)].restore(a); }

void ConstraintNetwork::restore_tuple(ConstraintId c, std::size_t index) {
    auto &con = constraints_[static_cast<std::size_t>(c)];
    if (!con.allowed_[index]) {
        con.allowed_[index] = 1;
        ++con.allowed_count_;
    }
}

ConstraintId ConstraintNetwork::insert_constraint(Constraint c) {
    auto id = static_cast<ConstraintId>(constraints_.size());
    c.id_ = id;
    for (VarId x : c.scope_)
        var_constraints_[static_cast<std::size_t>(x)].push_back(id);
    if (c.arity() == 2)
        binary_index_.emplace(pair_key(c.scope_[0], c.scope_[1]), id);
    scope_index_.emplace(sorted_scope(c.scope_), id);
    if (c.relation_empty())
        failed_ = true;
    constraints_.push_back(std::move(c));
    return id;
}

namespace {

void validate_scope(const ConstraintNetwork &net, std::span<const VarId> scope) {
    for (std::size_t i = 0; i < scope.size(); ++i) {
        net.check_variable(scope[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (scope[i] == scope[j])
                throw ModelError("variable " + std::to_string(scope[i]) + " appears twice in a scope");
    }
}

void validate_tuple(const ConstraintNetwork &net, std::span<const VarId> scope, const Tuple &t) {
    if (t.size() != scope.size())
        throw ModelError("tuple of length " + std::to_string(t.size()) + " for a scope of arity " +
                         std::to_string(scope.size()));
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] < 0 || t[i] >= net.domain(scope[i]).initial_size())
            throw ModelError("value " + std::to_string(t[i]) + " outside the initial domain of variable " +
                             std::to_string(scope[i]));
}

} // namespace

ConstraintId ConstraintNetwork::add_constraint(std::vector<VarId> scope, Polarity polarity,
                                               std::span<const Tuple> tuples) {
    validate_scope(*this, scope);
    if (scope.size() < 2)
        throw ModelError("constraints must involve at least two variables");
    if (constraint_on(scope))
        throw ModelError("a constraint on this scope already exists");
    std::vector<int> dims;
    for (VarId x : scope)
        dims.push_back(domain(x).initial_size());
    Constraint c(0, std::move(scope), std::move(dims), polarity);
    if (polarity == Polarity::supports) {
        std::fill(c.allowed_.begin(), c.allowed_.end(), 0);
        c.allowed_count_ = 0;
    }
    for (const auto &t : tuples) {
        validate_tuple(*this, c.scope_, t);
        auto idx = c.index_of(t);
        std::uint8_t want = polarity == Polarity::supports ? 1 : 0;
        if (c.allowed_[idx] != want) {
            c.allowed_[idx] = want;
            if (want)
                ++c.allowed_count_;
            else
                --c.allowed_count_;
        }
    }
    return insert_constraint(std::move(c));
}

bool ConstraintNetwork::operator==(const ConstraintNetwork &other) const {
    if (failed_ != other.failed_ || domains_ != other.domains_ || constraints_.size() != other.constraints_.size())
        return false;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        const auto &a = constraints_[i];
        const auto &b = other.constraints_[i];
        if (a.scope_ != b.scope_ || a.polarity_ != b.polarity_ || a.allowed_ != b.allowed_)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- free operations

ConstraintNetwork build_network(std::span<const int> domain_sizes, std::span<const ConstraintSpec> constraints) {
    ConstraintNetwork net(domain_sizes);

    // Merge by scope set; the first occurrence fixes the stored scope order and polarity.
    struct Pending {
        std::vector<VarId> scope;
        Polarity polarity;
        std::vector<std::uint8_t> allowed;
        std::vector<std::size_t> strides;
    };
    std::vector<Pending> pending;
    std::map<std::vector<VarId>, std::size_t> by_scope;

    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        const auto &spec = constraints[ci];
        if (spec.scope.empty())
            throw ModelError("constraint " + std::to_string(ci) + " has an empty scope");
        try {
            validate_scope(net, spec.scope);
            for (const auto &t : spec.tuples)
                validate_tuple(net, spec.scope, t);
        } catch (const ModelError &e) {
            throw ModelError("constraint " + std::to_string(ci) + ": " + e.what());
        }

        if (spec.scope.size() == 1) {
            VarId x = spec.scope[0];
            std::vector<std::uint8_t> listed(static_cast<std::size_t>(net.domain(x).initial_size()), 0);
            for (const auto &t : spec.tuples)
                listed[static_cast<std::size_t>(t[0])] = 1;
            for (Value a = 0; a < net.domain(x).initial_size(); ++a) {
                bool keep = (spec.polarity == Polarity::supports) == (listed[static_cast<std::size_t>(a)] != 0);
                if (!keep)
                    net.remove_value(x, a);
            }
            continue;
        }

        auto key = sorted_scope(spec.scope);
        auto [it, fresh] = by_scope.try_emplace(key, pending.size());
        if (fresh) {
            Pending p;
            p.scope = spec.scope;
            p.polarity = spec.polarity;
            std::size_t product = 1;
            p.strides.assign(spec.scope.size(), 1);
            for (std::size_t i = spec.scope.size(); i-- > 0;) {
                p.strides[i] = product;
                product *= static_cast<std::size_t>(net.domain(spec.scope[i]).initial_size());
                if (product > kMaxConstraintProduct)
                    throw ResourceError("constraint " + std::to_string(ci) + " exceeds the dense relation limit");
            }
            p.allowed.assign(product, 1);
            pending.push_back(std::move(p));
        }
        auto &target = pending[it->second];

        // Relation of this spec, laid out in the target's scope order.
        std::vector<std::size_t> pos(spec.scope.size());
        for (std::size_t i = 0; i < spec.scope.size(); ++i)
            pos[i] = static_cast<std::size_t>(
                std::find(target.scope.begin(), target.scope.end(), spec.scope[i]) - target.scope.begin());
        std::vector<std::uint8_t> mine(target.allowed.size(), spec.polarity == Polarity::supports ? 0 : 1);
        for (const auto &t : spec.tuples) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
                idx += static_cast<std::size_t>(t[i]) * target.strides[pos[i]];
            mine[idx] = spec.polarity == Polarity::supports ? 1 : 0;
        }
        for (std::size_t i = 0; i < mine.size(); ++i)
            target.allowed[i] = static_cast<std::uint8_t>(target.allowed[i] & mine[i]);
    }

    for (auto &p : pending) {
        std::vector<int> dims;
        for (VarId x : p.scope)
            dims.push_back(net.domain(x).initial_size());
        Constraint c(0, p.scope, std::move(dims), p.polarity);
        c.allowed_ = std::move(p.allowed);
        c.allowed_count_ = static_cast<std::size_t>(std::count(c.allowed_.begin(), c.allowed_.end(), 1));
        if (c.is_universal())
            continue;
        net.insert_constraint(std::move(c));
    }
    return net;
}

bool is_locally_consistent(const ConstraintNetwork &network, const Instantiation &inst) {
    for (const auto &[x, a] : inst) {
        network.check_variable(x);
        if (!network.domain(x).contains(a))
            return false;
    }
    if (inst.size() < 2)
        return true;
    // Only constraints touching a bound variable can be covered.
    std::vector<ConstraintId> seen;
    Tuple t;
    for (const auto &[x, a] : inst) {
        for (ConstraintId cid : network.constraints_of(x)) {
            if (std::find(seen.begin(), seen.end(), cid) != seen.end())
                continue;
            seen.push_back(cid);
            const auto &c = network.constraint(cid);
            t.clear();
            bool covered = true;
            for (VarId y : c.scope()) {
                auto v = inst.value_of(y);
                if (!v) {
                    covered = false;
                    break;
                }
                t.push_back(*v);
            }
            if (covered && !c.allows(t))
                return false;
        }
    }
    return true;
}

void discard_nogood(ConstraintNetwork &network, const Instantiation &nogood) {
    if (nogood.empty())
        throw ModelError("cannot discard the empty instantiation");
    for (const auto &[x, a] : nogood) {
        network.check_variable(x);
        if (a < 0 || a >= network.domain(x).initial_size())
            throw ModelError("value " + std::to_string(a) + " outside the initial domain of variable " +
                             std::to_string(x));
    }
    if (nogood.size() == 1) {
        network.remove_value(nogood.begin()->var, nogood.begin()->value);
        return;
    }
    std::vector<VarId> vars;
    for (const auto &p : nogood)
        vars.push_back(p.var);
    if (auto cid = network.constraint_on(vars)) {
        const auto &c = network.constraint(*cid);
        Tuple t;
        for (VarId y : c.scope())
            t.push_back(*nogood.value_of(y));
        network.forbid_tuple(*cid, c.index_of(t));
        return;
    }
    Tuple t;
    for (const auto &p : nogood)
        t.push_back(p.value);
    std::vector<Tuple> table{t};
    network.add_constraint(std::move(vars), Polarity::conflicts, table);
}

std::vector<Instantiation> nogood_representation(const ConstraintNetwork &network) {
    std::vector<Instantiation> out;
    for (VarId x = 0; x < network.num_variables(); ++x) {
        const auto &dom = network.domain(x);
        for (Value a = 0; a < dom.initial_size(); ++a)
            if (!dom.contains(a))
                out.push_back(Instantiation{{x, a}});
    }
    for (const auto &c : network.constraints()) {
        for (std::size_t i = 0; i < c.product_size(); ++i) {
            if (c.allows_index(i))
                continue;
            Instantiation inst;
            for (int p = 0; p < c.arity(); ++p)
                inst.add(c.scope()[static_cast<std::size_t>(p)], c.component(i, p));
            out.push_back(std::move(inst));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct InstantiationHash {
    std::size_t operator()(const Instantiation &inst) const {
        std::size_t h = 1469598103934665603ull;
        for (const auto &[x, a] : inst) {
            h ^= static_cast<std::size_t>(x) * 0x9e3779b97f4a7c15ull + static_cast<std::size_t>(a);
            h *= 1099511628211ull;
        }
        return h;
    }
};

using NogoodSet = std::unordered_set<Instantiation, InstantiationHash>;

// Every nogood of `needles` is either in `hay` or has a proper subset in `hay`.
bool covered_by_subsumption(const std::vector<Instantiation> &needles, const NogoodSet &hay) {
    for (const auto &g : needles) {
        if (hay.count(g))
            continue;
        auto pairs = g.pairs();
        auto k = pairs.size();
        bool found = false;
        for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k) && !found; ++mask) {
            Instantiation sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::size_t{1} << i))
                    sub.add(pairs[i].var, pairs[i].value);
            found = hay.count(sub) > 0;
        }
        if (!found)
            return false;
    }
    return true;
}

} // namespace

Ordering compare(const ConstraintNetwork &p1, const ConstraintNetwork &p2, NogoodOrder order) {
    if (p1.num_variables() != p2.num_variables())
        throw ModelError("cannot compare networks over different variables");
    for (VarId x = 0; x < p1.num_variables(); ++x)
        if (p1.domain(x).initial_size() != p2.domain(x).initial_size())
            throw ModelError("cannot compare networks with different initial domains");

    if (p1.failed() || p2.failed()) {
        if (p1.failed() && p2.failed())
            return Ordering::equal;
        return p1.failed() ? Ordering::smaller : Ordering::greater;
    }

    auto n1 = nogood_representation(p1);
    auto n2 = nogood_representation(p2);
    bool one_has_all_of_two; // P1 ≼ P2
    bool two_has_all_of_one; // P2 ≼ P1
    if (order == NogoodOrder::raw) {
        one_has_all_of_two = std::includes(n1.begin(), n1.end(), n2.begin(), n2.end());
        two_has_all_of_one = std::includes(n2.begin(), n2.end(), n1.begin(), n1.end());
    } else {
        NogoodSet s1(n1.begin(), n1.end());
        NogoodSet s2(n2.begin(), n2.end());
        one_has_all_of_two = covered_by_subsumption(n2, s1);
        two_has_all_of_one = covered_by_subsumption(n1, s2);
    }
    if (one_has_all_of_two && two_has_all_of_one)
        return Ordering::equal;
    if (one_has_all_of_two)
        return Ordering::smaller;
    if (two_has_all_of_one)
        return Ordering::greater;
    return Ordering::incomparable;
}

void assign(ConstraintNetwork &network, VarId x, Value a, Trail *trail) {
    network.check_variable(x);
    if (!network.domain(x).contains(a))
        throw ModelError("value " + std::to_string(a) + " is not in the current domain of variable " +
                         std::to_string(x));
    const auto &dom = network.domain(x);
    for (Value b = 0; b < dom.initial_size(); ++b)
        if (b != a)
            network.remove_value(x, b, trail);
}

const char *to_string(Ordering o) {
    switch (o) {
    case Ordering::equal:
        return "equal";
    case Ordering::smaller:
        return "smaller";
    case Ordering::greater:
        return "greater";
    case Ordering::incomparable:
        return "incomparable";
    }
    return "?";
}

// ---------------------------------------------------------------- Trail

void Trail::push(const ConstraintNetwork &network) { frames_.push_back(Frame{entries_.size(), network.failed()}); }

void Trail::pop(ConstraintNetwork &network) {
    auto frame = frames_.back();
    frames_.pop_back();
    for (std::size_t i = entries_.size(); i-- > frame.start;) {
        const auto &e = entries_[i];
        if (e.kind == Entry::Kind::value)
            network.restore_value(e.owner, static_cast<Value>(e.item));
        else
            network.restore_tuple(e.owner, e.item);
    }
    entries_.resize(frame.start);
    network.set_failed(frame.failed);
}

std::span<const Trail::Entry> Trail::top_frame() const {
    if (frames_.empty())
        return {};
    return std::span<const Entry>(entries_).subspan(frames_.back().start);
}

void Trail::record_value(VarId x, Value a) {
    if (!frames_.empty())
        entries_.push_back(Entry{Entry::Kind::value, x, static_cast<std::size_t>(a)});
}

void Trail::record_tuple(ConstraintId c, std::size_t index) {
    if (!frames_.empty())
        entries_.push_back(Entry{Entry::Kind::tuple, c, index});
}

} // namespace secord
