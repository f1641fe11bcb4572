#include "secord/oracle.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "secord/errors.hpp"

namespace secord {

namespace {

struct NameEntry {
    Consistency id;
    std::string_view text;
};

constexpr std::array kNames{
    NameEntry{Consistency::GAC, "GAC"},        NameEntry{Consistency::SAC, "SAC"},
    NameEntry{Consistency::BiSAC, "BiSAC"},    NameEntry{Consistency::IC, "IC"},
    NameEntry{Consistency::PC, "PC"},          NameEntry{Consistency::ThreeC, "3C"},
    NameEntry{Consistency::DC, "DC"},          NameEntry{Consistency::TwoSAC, "2SAC"},
    NameEntry{Consistency::PPC, "PPC"},        NameEntry{Consistency::CPC, "CPC"},
    NameEntry{Consistency::CDC, "CDC"},        NameEntry{Consistency::C3C, "C3C"},
    NameEntry{Consistency::C2SAC, "C2SAC"},    NameEntry{Consistency::sPC, "sPC"},
    NameEntry{Consistency::s3C, "s3C"},        NameEntry{Consistency::sDC, "sDC"},
    NameEntry{Consistency::s2SAC, "s2SAC"},    NameEntry{Consistency::sPPC, "sPPC"},
    NameEntry{Consistency::sCPC, "sCPC"},      NameEntry{Consistency::sCDC, "sCDC"},
    NameEntry{Consistency::sC3C, "sC3C"},      NameEntry{Consistency::sC2SAC, "sC2SAC"},
    NameEntry{Consistency::SACplusCDC, "SAC+CDC"},
};

constexpr std::array kAll = [] {
    std::array<Consistency, kNames.size()> out{};
    for (std::size_t i = 0; i < kNames.size(); ++i)
        out[i] = kNames[i].id;
    return out;
}();

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char p, char q) {
               return std::tolower(static_cast<unsigned char>(p)) == std::tolower(static_cast<unsigned char>(q));
           });
}

bool in_network(const ConstraintNetwork &g, VarId y, Value b) { return !g.failed() && g.domain(y).contains(b); }

// {(x,a),(y,b)} with x != y.
bool pair_ok_locally(const ConstraintNetwork &net, VarId x, Value a, VarId y, Value b) {
    return net.domain(x).contains(a) && net.domain(y).contains(b) && net.pair_allowed(x, a, y, b);
}

std::vector<VarId> binary_neighbours(const ConstraintNetwork &net, VarId v) {
    std::vector<VarId> out;
    for (ConstraintId cid : net.constraints_of(v)) {
        const auto &c = net.constraint(cid);
        if (c.arity() == 2)
            out.push_back(c.scope()[0] == v ? c.scope()[1] : c.scope()[0]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t full_mask(const Domain &d) {
    std::uint32_t m = 0;
    for (Value v : d.values())
        m |= std::uint32_t{1} << v;
    return m;
}

// Starting from (x,a), explores every graph walk as (variable, set of reachable values)
// states. result[y] is the intersection of those sets over walks of length >= 1 ending
// at y; reached[y] tells whether any walk ends at y.
struct WalkSummary {
    std::vector<std::uint32_t> guaranteed;
    std::vector<std::uint8_t> reached;
};

WalkSummary summarize_walks(const ConstraintNetwork &net, VarId x, Value a,
                            const std::vector<std::vector<VarId>> &neighbours) {
    const int n = net.num_variables();
    const int width = net.max_domain_size();
    WalkSummary out;
    out.guaranteed.resize(static_cast<std::size_t>(n));
    out.reached.assign(static_cast<std::size_t>(n), 0);
    for (VarId v = 0; v < n; ++v)
        out.guaranteed[static_cast<std::size_t>(v)] = full_mask(net.domain(v));

    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) << width, 0);
    std::vector<std::pair<VarId, std::uint32_t>> stack{{x, std::uint32_t{1} << a}};
    seen[(static_cast<std::size_t>(x) << width) | (std::uint32_t{1} << a)] = 1;
    while (!stack.empty()) {
        auto [v, set] = stack.back();
        stack.pop_back();
        for (VarId w : neighbours[static_cast<std::size_t>(v)]) {
            std::uint32_t next = 0;
            for (Value c : net.domain(w).values())
                for (Value s = 0; s < width; ++s)
                    if ((set >> s & 1U) && net.pair_allowed(v, s, w, c)) {
                        next |= std::uint32_t{1} << c;
                        break;
                    }
            out.reached[static_cast<std::size_t>(w)] = 1;
            out.guaranteed[static_cast<std::size_t>(w)] &= next;
            auto &flag = seen[(static_cast<std::size_t>(w) << width) | next];
            if (!flag) {
                flag = 1;
                stack.emplace_back(w, next);
            }
        }
    }
    return out;
}

// Lazily computed facts about one fixed network, shared by all checks of a sweep.
class Analyzer {
  public:
    Analyzer(const ConstraintNetwork &network, std::size_t *budget)
        : net_(network), budget_(budget), width_(network.max_domain_size()),
          singles_(slots()), walks_(slots()), solvable_(slots(), -1) {}

    bool value_ok(ValueTest test, VarId x, Value a) {
        spend();
        switch (test) {
        case ValueTest::none:
            return true;
        case ValueTest::GAC:
            return gac_value(x, a);
        case ValueTest::SAC:
            return !single(x, a).failed();
        case ValueTest::BiSAC:
            return bisac_value(x, a);
        case ValueTest::IC: {
            auto &memo = solvable_[slot(x, a)];
            if (memo < 0) {
                ConstraintNetwork copy = net_;
                assign(copy, x, a);
                memo = enumerate_solutions(copy, 1).empty() ? 0 : 1;
            }
            return memo == 1;
        }
        }
        return true;
    }

    bool pair_ok(PairTest test, VarId x, Value a, VarId y, Value b) {
        spend();
        if (is_conservative(test) && !net_.binary_between(x, y))
            return true;
        switch (test) {
        case PairTest::none:
            return true;
        case PairTest::PC:
            return path_extends(x, a, y, b, /*graph_only=*/false);
        case PairTest::CPC:
            return path_extends(x, a, y, b, /*graph_only=*/true);
        case PairTest::ThreeC:
        case PairTest::C3C:
            return triple_extends(x, a, y, b);
        case PairTest::DC:
        case PairTest::CDC:
            return in_network(single(x, a), y, b) && in_network(single(y, b), x, a);
        case PairTest::TwoSAC:
        case PairTest::C2SAC: {
            ConstraintNetwork copy = net_;
            assign(copy, x, a);
            assign(copy, y, b);
            return !naive_gac(std::move(copy)).failed();
        }
        case PairTest::PPC:
            return walks(x, a).guaranteed[static_cast<std::size_t>(y)] >> b & 1U;
        }
        return true;
    }

  private:
    std::size_t slots() const {
        return static_cast<std::size_t>(net_.num_variables()) * static_cast<std::size_t>(std::max(width_, 1));
    }
    std::size_t slot(VarId x, Value a) const {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(a);
    }

    void spend() {
        if (*budget_ == 0)
            throw ResourceError("oracle check budget exhausted");
        --*budget_;
    }

    const ConstraintNetwork &single(VarId x, Value a) {
        auto &memo = singles_[slot(x, a)];
        if (!memo)
            memo = singleton_gac(net_, x, a);
        return *memo;
    }

    const WalkSummary &walks(VarId x, Value a) {
        auto &memo = walks_[slot(x, a)];
        if (!memo) {
            if (neighbours_.empty())
                for (VarId v = 0; v < net_.num_variables(); ++v)
                    neighbours_.push_back(binary_neighbours(net_, v));
            memo = summarize_walks(net_, x, a, neighbours_);
        }
        return *memo;
    }

    bool gac_value(VarId x, Value a) const {
        if (!net_.domain(x).contains(a))
            return false;
        for (ConstraintId cid : net_.constraints_of(x)) {
            const auto &c = net_.constraint(cid);
            int p = c.position_of(x);
            bool supported = false;
            for (std::size_t idx = 0; idx < c.product_size() && !supported; ++idx) {
                if (!c.allows_index(idx) || c.component(idx, p) != a)
                    continue;
                supported = true;
                for (int q = 0; q < c.arity() && supported; ++q)
                    supported = net_.domain(c.scope()[static_cast<std::size_t>(q)]).contains(c.component(idx, q));
            }
            if (!supported)
                return false;
        }
        return true;
    }

    bool bisac_value(VarId x, Value a) {
        ConstraintNetwork reduced = net_;
        for (VarId y = 0; y < net_.num_variables(); ++y) {
            if (y == x)
                continue;
            for (Value b : net_.domain(y).values())
                if (!in_network(single(y, b), x, a))
                    reduced.remove_value(y, b);
        }
        if (reduced.failed())
            return false;
        assign(reduced, x, a);
        return !naive_gac(std::move(reduced)).failed();
    }

    // For every third variable z (restricted to triangles when graph_only) some value of z
    // is compatible with both ends.
    bool path_extends(VarId x, Value a, VarId y, Value b, bool graph_only) const {
        for (VarId z = 0; z < net_.num_variables(); ++z) {
            if (z == x || z == y)
                continue;
            if (graph_only && !(net_.binary_between(x, z) && net_.binary_between(y, z)))
                continue;
            bool witness = false;
            for (Value c : net_.domain(z).values())
                if (pair_ok_locally(net_, x, a, z, c) && pair_ok_locally(net_, y, b, z, c)) {
                    witness = true;
                    break;
                }
            if (!witness)
                return false;
        }
        return true;
    }

    bool triple_extends(VarId x, Value a, VarId y, Value b) const {
        for (VarId z = 0; z < net_.num_variables(); ++z) {
            if (z == x || z == y)
                continue;
            bool witness = false;
            for (Value c : net_.domain(z).values())
                if (is_locally_consistent(net_, Instantiation{{x, a}, {y, b}, {z, c}})) {
                    witness = true;
                    break;
                }
            if (!witness)
                return false;
        }
        return true;
    }

    const ConstraintNetwork &net_;
    std::size_t *budget_;
    int width_;
    std::vector<std::optional<ConstraintNetwork>> singles_;
    std::vector<std::optional<WalkSummary>> walks_;
    std::vector<int> solvable_;
    std::vector<std::vector<VarId>> neighbours_;
};

std::vector<Violation> sweep(Consistency phi, const ConstraintNetwork &net, std::size_t *budget, bool first_only) {
    std::vector<Violation> found;
    if (net.failed())
        return found;
    Analyzer analyzer(net, budget);
    const int n = net.num_variables();
    const auto vt = value_part(phi);
    const auto pt = pair_part(phi);

    std::vector<std::vector<std::uint8_t>> dropped(static_cast<std::size_t>(n));
    for (VarId x = 0; x < n; ++x)
        dropped[static_cast<std::size_t>(x)].assign(static_cast<std::size_t>(net.domain(x).initial_size()), 0);

    if (vt != ValueTest::none) {
        for (VarId x = 0; x < n; ++x)
            for (Value a : net.domain(x).values())
                if (!analyzer.value_ok(vt, x, a)) {
                    found.push_back({Instantiation{{x, a}}, std::string(name(phi)) + "-inconsistent value"});
                    if (first_only)
                        return found;
                    dropped[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] = 1;
                }
    }
    if (pt == PairTest::none)
        return found;
    for (VarId x = 0; x < n; ++x)
        for (VarId y = x + 1; y < n; ++y) {
            if (is_conservative(pt) && !net.binary_between(x, y))
                continue;
            for (Value a : net.domain(x).values()) {
                if (dropped[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)])
                    continue;
                for (Value b : net.domain(y).values()) {
                    if (dropped[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)])
                        continue;
                    if (!pair_ok_locally(net, x, a, y, b))
                        continue;
                    if (!analyzer.pair_ok(pt, x, a, y, b)) {
                        found.push_back({Instantiation{{x, a}, {y, b}}, std::string(name(phi)) + "-inconsistent pair"});
                        if (first_only)
                            return found;
                    }
                }
            }
        }
    return found;
}

} // namespace

std::span<const Consistency> all_consistencies() { return kAll; }

std::string_view name(Consistency c) {
    for (const auto &e : kNames)
        if (e.id == c)
            return e.text;
    return "?";
}

std::optional<Consistency> consistency_from_string(std::string_view text) {
    for (const auto &e : kNames)
        if (iequals(e.text, text))
            return e.id;
    if (iequals(text, "AC"))
        return Consistency::GAC;
    if (iequals(text, "InverseConsistency"))
        return Consistency::IC;
    if (iequals(text, "SAC_CDC") || iequals(text, "SACCDC"))
        return Consistency::SACplusCDC;
    return std::nullopt;
}

ValueTest value_part(Consistency c) {
    switch (c) {
    case Consistency::GAC:
        return ValueTest::GAC;
    case Consistency::SAC:
    case Consistency::SACplusCDC:
        return ValueTest::SAC;
    case Consistency::BiSAC:
        return ValueTest::BiSAC;
    case Consistency::IC:
        return ValueTest::IC;
    case Consistency::sPC:
    case Consistency::s3C:
    case Consistency::sDC:
    case Consistency::s2SAC:
    case Consistency::sPPC:
    case Consistency::sCPC:
    case Consistency::sCDC:
    case Consistency::sC3C:
    case Consistency::sC2SAC:
        return ValueTest::GAC;
    default:
        return ValueTest::none;
    }
}

PairTest pair_part(Consistency c) {
    switch (c) {
    case Consistency::PC:
    case Consistency::sPC:
        return PairTest::PC;
    case Consistency::ThreeC:
    case Consistency::s3C:
        return PairTest::ThreeC;
    case Consistency::DC:
    case Consistency::sDC:
        return PairTest::DC;
    case Consistency::TwoSAC:
    case Consistency::s2SAC:
        return PairTest::TwoSAC;
    case Consistency::PPC:
    case Consistency::sPPC:
        return PairTest::PPC;
    case Consistency::CPC:
    case Consistency::sCPC:
        return PairTest::CPC;
    case Consistency::CDC:
    case Consistency::sCDC:
    case Consistency::SACplusCDC:
        return PairTest::CDC;
    case Consistency::C3C:
    case Consistency::sC3C:
        return PairTest::C3C;
    case Consistency::C2SAC:
    case Consistency::sC2SAC:
        return PairTest::C2SAC;
    default:
        return PairTest::none;
    }
}

bool is_conservative(PairTest t) {
    switch (t) {
    case PairTest::PPC:
    case PairTest::CPC:
    case PairTest::CDC:
    case PairTest::C3C:
    case PairTest::C2SAC:
        return true;
    default:
        return false;
    }
}

void require_oracle_scale(const ConstraintNetwork &network, const OracleCaps &caps) {
    if (network.num_variables() > caps.max_variables)
        throw ResourceError("oracle refuses " + std::to_string(network.num_variables()) + " variables (cap " +
                            std::to_string(caps.max_variables) + ")");
    if (network.max_domain_size() > caps.max_domain)
        throw ResourceError("oracle refuses domain size " + std::to_string(network.max_domain_size()) + " (cap " +
                            std::to_string(caps.max_domain) + ")");
    if (network.max_arity() > caps.max_arity)
        throw ResourceError("oracle refuses arity " + std::to_string(network.max_arity()) + " (cap " +
                            std::to_string(caps.max_arity) + ")");
}

ConstraintNetwork naive_gac(ConstraintNetwork network) {
    bool changed = !network.failed();
    while (changed) {
        changed = false;
        for (const auto &c : network.constraints()) {
            const int r = c.arity();
            std::vector<std::vector<std::uint8_t>> seen(static_cast<std::size_t>(r));
            for (int p = 0; p < r; ++p)
                seen[static_cast<std::size_t>(p)].assign(static_cast<std::size_t>(c.dim(p)), 0);
            for (std::size_t idx = 0; idx < c.product_size(); ++idx) {
                if (!c.allows_index(idx))
                    continue;
                bool valid = true;
                for (int p = 0; p < r && valid; ++p)
                    valid = network.domain(c.scope()[static_cast<std::size_t>(p)]).contains(c.component(idx, p));
                if (!valid)
                    continue;
                for (int p = 0; p < r; ++p)
                    seen[static_cast<std::size_t>(p)][static_cast<std::size_t>(c.component(idx, p))] = 1;
            }
            for (int p = 0; p < r; ++p) {
                VarId x = c.scope()[static_cast<std::size_t>(p)];
                for (Value a : network.domain(x).values())
                    if (!seen[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)]) {
                        network.remove_value(x, a);
                        changed = true;
                    }
                if (network.failed())
                    return network;
            }
        }
    }
    return network;
}

ConstraintNetwork singleton_gac(const ConstraintNetwork &network, VarId x, Value a) {
    ConstraintNetwork copy = network;
    if (!copy.domain(x).contains(a)) {
        for (Value b : copy.domain(x).values())
            copy.remove_value(x, b);
        return copy;
    }
    assign(copy, x, a);
    return naive_gac(std::move(copy));
}

bool check_value(Consistency phi, const ConstraintNetwork &network, VarId x, Value a) {
    auto vt = value_part(phi);
    if (vt == ValueTest::none || pair_part(phi) != PairTest::none)
        throw ModelError("check_value needs GAC, SAC, BiSAC or IC, got " + std::string(name(phi)));
    network.check_variable(x);
    if (!network.domain(x).contains(a))
        throw ModelError("check_value: value not in the current domain");
    std::size_t budget = OracleCaps{}.check_budget;
    return Analyzer(network, &budget).value_ok(vt, x, a);
}

bool check_pair(Consistency phi, const ConstraintNetwork &network, VarId x, Value a, VarId y, Value b) {
    auto pt = pair_part(phi);
    if (pt == PairTest::none)
        throw ModelError(std::string(name(phi)) + " has no pair-level test");
    network.check_variable(x);
    network.check_variable(y);
    if (x == y || !pair_ok_locally(network, x, a, y, b))
        throw ModelError("check_pair: the pair is not a locally consistent instantiation");
    std::size_t budget = OracleCaps{}.check_budget;
    return Analyzer(network, &budget).pair_ok(pt, x, a, y, b);
}

Path::Path(const ConstraintNetwork &network, std::vector<VarId> vars) : vars_(std::move(vars)) {
    if (vars_.size() < 2)
        throw ModelError("a path needs at least two variables");
    for (VarId v : vars_)
        network.check_variable(v);
    if (vars_.front() == vars_.back())
        throw ModelError("a path must end on a different variable than it starts");
    graph_path_ = true;
    for (std::size_t i = 0; i + 1 < vars_.size() && graph_path_; ++i)
        graph_path_ = vars_[i] != vars_[i + 1] && network.binary_between(vars_[i], vars_[i + 1]).has_value();
    closed_ = network.binary_between(vars_.front(), vars_.back()).has_value();
}

std::optional<Tuple> check_path_support(const ConstraintNetwork &network, const Path &path, Value a1, Value ak) {
    auto vars = path.vars();
    const std::size_t k = vars.size();
    if (network.failed() || !network.domain(vars[0]).contains(a1) || !network.domain(vars[k - 1]).contains(ak))
        return std::nullopt;

    // parent[i][c]: value at position i-1 that reaches c, or -1 if c is unreachable.
    std::vector<std::vector<Value>> parent(k);
    parent[0].assign(static_cast<std::size_t>(network.domain(vars[0]).initial_size()), -1);
    parent[0][static_cast<std::size_t>(a1)] = a1;
    for (std::size_t i = 1; i < k; ++i) {
        VarId prev = vars[i - 1], cur = vars[i];
        parent[i].assign(static_cast<std::size_t>(network.domain(cur).initial_size()), -1);
        for (Value c : network.domain(cur).values()) {
            if (prev == cur) {
                if (parent[i - 1][static_cast<std::size_t>(c)] >= 0)
                    parent[i][static_cast<std::size_t>(c)] = c;
                continue;
            }
            for (Value s : network.domain(prev).values())
                if (parent[i - 1][static_cast<std::size_t>(s)] >= 0 && network.pair_allowed(prev, s, cur, c)) {
                    parent[i][static_cast<std::size_t>(c)] = s;
                    break;
                }
        }
    }
    if (parent[k - 1][static_cast<std::size_t>(ak)] < 0)
        return std::nullopt;
    Tuple tau(k);
    tau[k - 1] = ak;
    for (std::size_t i = k - 1; i > 0; --i)
        tau[i - 1] = parent[i][static_cast<std::size_t>(tau[i])];
    return tau;
}

PpcResult check_ppc(const ConstraintNetwork &network) {
    PpcResult out;
    if (network.failed())
        return out;
    require_oracle_scale(network);
    std::vector<std::vector<VarId>> neighbours;
    for (VarId v = 0; v < network.num_variables(); ++v)
        neighbours.push_back(binary_neighbours(network, v));
    for (VarId x = 0; x < network.num_variables(); ++x)
        for (Value a : network.domain(x).values()) {
            auto summary = summarize_walks(network, x, a, neighbours);
            for (VarId y : neighbours[static_cast<std::size_t>(x)])
                for (Value b : network.domain(y).values())
                    if (network.pair_allowed(x, a, y, b) && !(summary.guaranteed[static_cast<std::size_t>(y)] >> b & 1U)) {
                        out.consistent = false;
                        out.violation = Violation{Instantiation{{x, a}, {y, b}},
                                                  "some closed graph-path between the two variables has no support"};
                        return out;
                    }
        }
    return out;
}

bool every_graph_path_consistent(const ConstraintNetwork &network) {
    if (network.failed())
        return true;
    require_oracle_scale(network);
    std::vector<std::vector<VarId>> neighbours;
    for (VarId v = 0; v < network.num_variables(); ++v)
        neighbours.push_back(binary_neighbours(network, v));
    for (VarId x = 0; x < network.num_variables(); ++x)
        for (Value a : network.domain(x).values()) {
            auto summary = summarize_walks(network, x, a, neighbours);
            for (VarId y = 0; y < network.num_variables(); ++y) {
                if (y == x || !summary.reached[static_cast<std::size_t>(y)])
                    continue;
                for (Value b : network.domain(y).values())
                    if (network.pair_allowed(x, a, y, b) && !(summary.guaranteed[static_cast<std::size_t>(y)] >> b & 1U))
                        return false;
            }
        }
    return true;
}

bool every_2length_graph_path_consistent(const ConstraintNetwork &network) {
    if (network.failed())
        return true;
    const int n = network.num_variables();
    for (VarId x = 0; x < n; ++x)
        for (VarId y = 0; y < n; ++y) {
            if (x == y)
                continue;
            for (VarId z = 0; z < n; ++z) {
                if (z == x || z == y || !network.binary_between(x, z) || !network.binary_between(z, y))
                    continue;
                for (Value a : network.domain(x).values())
                    for (Value b : network.domain(y).values()) {
                        if (!network.pair_allowed(x, a, y, b))
                            continue;
                        bool witness = false;
                        for (Value c : network.domain(z).values())
                            if (network.pair_allowed(x, a, z, c) && network.pair_allowed(z, c, y, b)) {
                                witness = true;
                                break;
                            }
                        if (!witness)
                            return false;
                    }
            }
        }
    return true;
}

std::optional<Violation> find_violation(Consistency phi, const ConstraintNetwork &network, const OracleCaps &caps) {
    require_oracle_scale(network, caps);
    std::size_t budget = caps.check_budget;
    auto found = sweep(phi, network, &budget, /*first_only=*/true);
    if (found.empty())
        return std::nullopt;
    return found.front();
}

bool is_consistent(Consistency phi, const ConstraintNetwork &network, const OracleCaps &caps) {
    return !find_violation(phi, network, caps).has_value();
}

ConstraintNetwork oracle_closure(Consistency phi, const ConstraintNetwork &network, const OracleCaps &caps) {
    require_oracle_scale(network, caps);
    std::size_t budget = caps.check_budget;
    ConstraintNetwork current = network;
    while (!current.failed()) {
        auto found = sweep(phi, current, &budget, /*first_only=*/false);
        if (found.empty())
            break;
        for (const auto &v : found) {
            discard_nogood(current, v.nogood);
            if (current.failed())
                break;
        }
    }
    return current;
}

std::vector<Instantiation> enumerate_solutions(const ConstraintNetwork &network, std::size_t limit,
                                               std::size_t node_budget) {
    std::vector<Instantiation> out;
    const int n = network.num_variables();
    if (network.failed() || limit == 0)
        return out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    // Each constraint is checked once its last scope variable is assigned.
    std::vector<std::vector<ConstraintId>> closes(static_cast<std::size_t>(n));
    for (const auto &c : network.constraints()) {
        VarId last = *std::max_element(c.scope().begin(), c.scope().end());
        closes[static_cast<std::size_t>(last)].push_back(c.id());
    }
    std::vector<std::vector<Value>> values(static_cast<std::size_t>(n));
    for (VarId x = 0; x < n; ++x)
        values[static_cast<std::size_t>(x)] = network.domain(x).values();

    std::vector<Value> current(static_cast<std::size_t>(n), 0);
    std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
    Tuple t;
    auto fits = [&](VarId x) {
        for (ConstraintId cid : closes[static_cast<std::size_t>(x)]) {
            const auto &c = network.constraint(cid);
            t.clear();
            for (VarId v : c.scope())
                t.push_back(current[static_cast<std::size_t>(v)]);
            if (!c.allows(t))
                return false;
        }
        return true;
    };

    std::size_t nodes = 0;
    int depth = 0;
    pos[0] = 0;
    while (depth >= 0) {
        auto &k = pos[static_cast<std::size_t>(depth)];
        const auto &vals = values[static_cast<std::size_t>(depth)];
        if (k >= vals.size()) {
            --depth;
            if (depth >= 0)
                ++pos[static_cast<std::size_t>(depth)];
            continue;
        }
        if (++nodes > node_budget)
            throw ResourceError("solution enumeration exceeded its node budget");
        current[static_cast<std::size_t>(depth)] = vals[k];
        if (!fits(depth)) {
            ++k;
            continue;
        }
        if (depth == n - 1) {
            std::vector<Assignment> pairs;
            for (VarId x = 0; x < n; ++x)
                pairs.push_back({x, current[static_cast<std::size_t>(x)]});
            out.emplace_back(std::move(pairs));
            if (out.size() >= limit)
                return out;
            ++k;
            continue;
        }
        ++depth;
        pos[static_cast<std::size_t>(depth)] = 0;
    }
    return out;
}

} // namespace secord
