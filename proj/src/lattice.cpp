#include "secord/lattice.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "secord/rng.hpp"

namespace secord {

namespace {

using C = Consistency;
constexpr auto B = Panel::binary;
constexpr auto G = Panel::general;

constexpr std::array kStrictEdges{
    // binary networks: PC, 3C and DC coincide there, as do sC3C and sCPC
    LatticeEdge{C::TwoSAC, C::DC, B},  LatticeEdge{C::TwoSAC, C::C2SAC, B}, LatticeEdge{C::DC, C::CDC, B},
    LatticeEdge{C::ThreeC, C::C3C, B}, LatticeEdge{C::PC, C::PPC, B},       LatticeEdge{C::C2SAC, C::CDC, B},
    LatticeEdge{C::C2SAC, C::C3C, B},  LatticeEdge{C::CDC, C::PPC, B},      LatticeEdge{C::PPC, C::CPC, B},
    LatticeEdge{C::PPC, C::C3C, B},    LatticeEdge{C::C3C, C::CPC, B},      LatticeEdge{C::s2SAC, C::sDC, B},
    LatticeEdge{C::s2SAC, C::sC2SAC, B}, LatticeEdge{C::sDC, C::sCDC, B},   LatticeEdge{C::sC2SAC, C::sCDC, B},
    LatticeEdge{C::sCDC, C::sPPC, B},  LatticeEdge{C::sPPC, C::sCPC, B},    LatticeEdge{C::sCDC, C::SAC, B},
    LatticeEdge{C::SAC, C::GAC, B},    LatticeEdge{C::BiSAC, C::SAC, B},    LatticeEdge{C::sPC, C::BiSAC, B},
    // any arity
    LatticeEdge{C::TwoSAC, C::DC, G},  LatticeEdge{C::TwoSAC, C::ThreeC, G}, LatticeEdge{C::TwoSAC, C::C2SAC, G},
    LatticeEdge{C::DC, C::PC, G},      LatticeEdge{C::ThreeC, C::PC, G},    LatticeEdge{C::DC, C::CDC, G},
    LatticeEdge{C::ThreeC, C::C3C, G}, LatticeEdge{C::PC, C::PPC, G},       LatticeEdge{C::PC, C::CPC, G},
    LatticeEdge{C::C2SAC, C::CDC, G},  LatticeEdge{C::C2SAC, C::C3C, G},    LatticeEdge{C::CDC, C::PPC, G},
    LatticeEdge{C::C3C, C::CPC, G},    LatticeEdge{C::PPC, C::CPC, G},      LatticeEdge{C::s2SAC, C::sDC, G},
    LatticeEdge{C::s2SAC, C::s3C, G},  LatticeEdge{C::sDC, C::sPC, G},      LatticeEdge{C::s3C, C::sPC, G},
    LatticeEdge{C::sDC, C::SACplusCDC, G}, LatticeEdge{C::SACplusCDC, C::sCDC, G},
    LatticeEdge{C::sCDC, C::sPPC, G},  LatticeEdge{C::sPPC, C::sCPC, G},
};

constexpr std::array kIncomparable{
    IncomparablePair{C::ThreeC, C::DC, G},   IncomparablePair{C::PC, C::C2SAC, B},
    IncomparablePair{C::DC, C::C2SAC, B},    IncomparablePair{C::ThreeC, C::C2SAC, B},
    IncomparablePair{C::CDC, C::C3C, G},     IncomparablePair{C::PPC, C::C3C, G},
    IncomparablePair{C::PC, C::CDC, G},      IncomparablePair{C::sPC, C::sC2SAC, B},
    IncomparablePair{C::sDC, C::sC2SAC, B},  IncomparablePair{C::s3C, C::sC2SAC, B},
    IncomparablePair{C::sPC, C::sCDC, G},    IncomparablePair{C::sCDC, C::BiSAC, B},
};

// Spec-level copy of a network that can be edited and rebuilt.
struct Editable {
    std::vector<int> sizes;
    std::vector<ConstraintSpec> specs;

    explicit Editable(const ConstraintNetwork &net) {
        for (VarId x = 0; x < net.num_variables(); ++x) {
            const auto &d = net.domain(x);
            sizes.push_back(d.initial_size());
            if (d.size() != d.initial_size()) {
                ConstraintSpec u{{x}, Polarity::supports, {}};
                for (Value a : d.values())
                    u.tuples.push_back({a});
                specs.push_back(std::move(u));
            }
        }
        for (const auto &c : net.constraints()) {
            ConstraintSpec s{{c.scope().begin(), c.scope().end()}, Polarity::conflicts, c.forbidden_tuples()};
            specs.push_back(std::move(s));
        }
    }

    ConstraintNetwork build() const { return build_network(sizes, specs); }

    // Toggles one tuple of a random non-unary constraint, or starts a new binary one.
    void mutate(Rng &rng) {
        std::vector<std::size_t> relations;
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (specs[i].scope.size() >= 2)
                relations.push_back(i);
        const int n = static_cast<int>(sizes.size());
        if (relations.empty() || (n >= 2 && rng.chance(0.15))) {
            VarId x = rng.between(0, n - 1), y = rng.between(0, n - 2);
            if (y >= x)
                ++y;
            for (const auto &s : specs) {
                std::set<VarId> have(s.scope.begin(), s.scope.end());
                if (have == std::set<VarId>{x, y})
                    return;
            }
            specs.push_back({{x, y},
                             Polarity::conflicts,
                             {{rng.between(0, sizes[static_cast<std::size_t>(x)] - 1),
                               rng.between(0, sizes[static_cast<std::size_t>(y)] - 1)}}});
            return;
        }
        auto &s = specs[relations[rng.below(relations.size())]];
        Tuple t;
        for (VarId v : s.scope)
            t.push_back(rng.between(0, sizes[static_cast<std::size_t>(v)] - 1));
        auto it = std::find(s.tuples.begin(), s.tuples.end(), t);
        if (it != s.tuples.end())
            s.tuples.erase(it);
        else
            s.tuples.push_back(std::move(t));
    }
};

} // namespace

std::span<const LatticeEdge> strict_edges() { return kStrictEdges; }

std::span<const IncomparablePair> incomparable_pairs() { return kIncomparable; }

std::vector<WitnessRequirement> witness_requirements() {
    std::vector<WitnessRequirement> out;
    auto add = [&](Consistency hold, Consistency fail, Panel panel) {
        bool binary = panel == Panel::binary;
        for (auto &r : out)
            if (r.hold == hold && r.fail == fail) {
                r.binary_only = r.binary_only || binary;
                return;
            }
        out.push_back({hold, fail, binary});
    };
    for (const auto &e : kStrictEdges)
        add(e.weaker, e.stronger, e.panel);
    for (const auto &p : kIncomparable) {
        add(p.a, p.b, p.panel);
        add(p.b, p.a, p.panel);
    }
    return out;
}

std::string witness_file_name(Consistency hold, Consistency fail) {
    return std::string(name(hold)) + "_not_" + std::string(name(fail)) + ".json";
}

const ConstraintNetwork &ClosureCache::sample(std::uint64_t index) {
    auto it = samples_.find(index);
    if (it == samples_.end())
        it = samples_.emplace(index, draw_sample(spec_, index)).first;
    return it->second;
}

const ConstraintNetwork &ClosureCache::closure(Consistency phi, std::uint64_t index) {
    auto key = std::make_pair(index, phi);
    auto it = closures_.find(key);
    if (it == closures_.end())
        it = closures_.emplace(key, oracle_closure(phi, sample(index))).first;
    return it->second;
}

EdgeReport verify_lattice_edge(Consistency stronger, Consistency weaker, ClosureCache &samples, std::size_t count) {
    EdgeReport report;
    report.stronger = stronger;
    report.weaker = weaker;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto &s = samples.closure(stronger, i);
        const auto &w = samples.closure(weaker, i);
        auto order = compare(s, w, NogoodOrder::subsumption);
        ++report.samples;
        if (order == Ordering::smaller)
            ++report.strict_samples;
        if (order != Ordering::equal && order != Ordering::smaller) {
            ++report.violations;
            if (report.offending.size() < 3)
                report.offending.push_back(samples.sample(i));
        }
    }
    return report;
}

EdgeReport verify_lattice_edge(Consistency stronger, Consistency weaker, const SampleSpec &spec, std::size_t count) {
    ClosureCache cache(spec);
    return verify_lattice_edge(stronger, weaker, cache, count);
}

bool is_witness(const ConstraintNetwork &network, Consistency hold, Consistency fail) {
    return !network.failed() && is_consistent(hold, network) && !is_consistent(fail, network);
}

std::optional<ConstraintNetwork> find_witness(Consistency hold, Consistency fail, const WitnessBudget &budget) {
    Rng rng(budget.seed);
    SampleSpec spec;
    spec.n_min = 3;
    spec.n_max = budget.n_max;
    spec.d_min = 2;
    spec.d_max = budget.d_max;
    spec.tightness_min = 0.05;
    spec.tightness_max = 0.7;
    if (!budget.binary_only) {
        spec.extra_min = 0;
        spec.extra_max = 2;
        spec.extra_arity_max = budget.arity_max;
    }
    spec.seed = rng.below(std::numeric_limits<std::uint64_t>::max());

    const int moves = 12;
    std::size_t spent = 0;
    for (std::uint64_t index = 0; spent < budget.attempts; ++index) {
        ConstraintNetwork start = draw_sample(spec, index);
        ++spent;
        if (start.failed())
            continue;
        Editable current(start);
        for (int m = 0; m <= moves && spent < budget.attempts; ++m) {
            Editable next = current;
            if (m > 0) {
                next.mutate(rng);
                ++spent;
            }
            ConstraintNetwork candidate = next.build();
            if (candidate.failed())
                continue;
            if (budget.binary_only && !candidate.is_binary())
                continue;
            ConstraintNetwork closed = oracle_closure(hold, candidate);
            if (closed.failed())
                continue;
            if (!is_consistent(fail, closed))
                return closed;
            current = std::move(next);
        }
    }
    return std::nullopt;
}

ConstraintNetwork twin_ternary_network() {
    // w=0, x=1, y=2, z=3; a=0, b=1
    const std::vector<int> sizes{2, 2, 2, 2};
    const std::vector<ConstraintSpec> specs{
        {{0, 1, 2}, Polarity::supports, {{0, 0, 0}, {1, 1, 1}}},
        {{0, 1, 3}, Polarity::supports, {{0, 1, 0}, {1, 0, 1}}},
    };
    return build_network(sizes, specs);
}

ConstraintNetwork pigeonhole_gadget_network() {
    // v=0 {A,B,E,F}; p=1, q=2, x=3 over {0,1,2}; w1=4, w2=5 over {0,1}; z=6 over {c,d}.
    enum : VarId { v, p, q, x, w1, w2, z };
    const std::vector<int> sizes{4, 3, 3, 3, 2, 2, 2};
    std::vector<ConstraintSpec> specs;
    const std::vector<Tuple> equal{{0, 0}, {1, 1}, {2, 2}};
    for (auto [a, b] : {std::pair{p, q}, {p, x}, {q, x}})
        specs.push_back({{a, b}, Polarity::conflicts, equal});
    for (VarId y : {p, q, x})
        specs.push_back({{z, y}, Polarity::conflicts, {{0, 2}}});
    for (VarId w : {w1, w2})
        specs.push_back({{z, w}, Polarity::conflicts, {{0, 0}}});
    // A pins (p,q) = (0,1), B pins (1,0), E pins w1 = 0, F pins w2 = 0.
    specs.push_back({{v, p}, Polarity::supports, {{0, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}, {3, 0}, {3, 1}, {3, 2}}});
    specs.push_back({{v, q}, Polarity::supports, {{0, 1}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {3, 0}, {3, 1}, {3, 2}}});
    specs.push_back({{v, w1}, Polarity::supports, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {3, 0}, {3, 1}}});
    specs.push_back({{v, w2}, Polarity::supports, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}}});
    return build_network(sizes, specs);
}

} // namespace secord
