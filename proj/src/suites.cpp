#include "secord/suites.hpp"

#include <algorithm>
#include <sstream>

#include "secord/enforcers.hpp"
#include "secord/errors.hpp"
#include "secord/instance_io.hpp"
#include "secord/lattice.hpp"
#include "secord/oracle.hpp"

namespace secord {

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine &c) { return c.passed; });
}

void SuiteReport::add(std::string label, bool ok, std::string detail) {
    checks.push_back({std::move(label), ok, std::move(detail)});
}

SampleSpec lattice_binary_samples(std::uint64_t seed) {
    SampleSpec s;
    s.n_min = 3;
    s.n_max = 6;
    s.d_min = 2;
    s.d_max = 3;
    s.seed = seed;
    return s;
}

SampleSpec lattice_general_samples(std::uint64_t seed) {
    SampleSpec s = lattice_binary_samples(seed);
    s.n_min = 4;
    s.n_max = 5;
    s.extra_min = 1;
    s.extra_max = 2;
    s.extra_arity_max = 4;
    return s;
}

namespace {

void notify(const Progress &progress, const std::string &msg) {
    if (progress)
        progress(msg);
}

std::string edge_label(Consistency a, Consistency b, const char *rel) {
    return std::string(name(a)) + " " + rel + " " + std::string(name(b));
}

std::vector<std::vector<bool>> adjacency(const ConstraintNetwork &net) {
    auto n = static_cast<std::size_t>(net.num_variables());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto &c : net.constraints())
        if (c.arity() == 2) {
            auto x = static_cast<std::size_t>(c.scope()[0]), y = static_cast<std::size_t>(c.scope()[1]);
            adj[x][y] = adj[y][x] = true;
        }
    return adj;
}

bool connected(const ConstraintNetwork &net) {
    auto adj = adjacency(net);
    std::size_t n = adj.size();
    if (n == 0)
        return true;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (std::size_t w = 0; w < n; ++w)
            if (adj[v][w] && !seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Chordal iff simplicial vertices can be peeled off until nothing is left.
bool chordal(const ConstraintNetwork &net) {
    auto adj = adjacency(net);
    std::size_t n = adj.size();
    std::vector<bool> gone(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        bool peeled = false;
        for (std::size_t v = 0; v < n && !peeled; ++v) {
            if (gone[v])
                continue;
            std::vector<std::size_t> nb;
            for (std::size_t w = 0; w < n; ++w)
                if (!gone[w] && adj[v][w])
                    nb.push_back(w);
            bool clique = true;
            for (std::size_t i = 0; i < nb.size() && clique; ++i)
                for (std::size_t j = i + 1; j < nb.size() && clique; ++j)
                    clique = adj[nb[i]][nb[j]];
            if (clique) {
                gone[v] = true;
                peeled = true;
            }
        }
        if (!peeled)
            return false;
    }
    return true;
}

bool same(const ConstraintNetwork &a, const ConstraintNetwork &b) {
    return compare(a, b, NogoodOrder::subsumption) == Ordering::equal;
}

} // namespace

SuiteReport run_lattice_suite(const LatticeSuiteOptions &options, const Progress &progress) {
    SuiteReport report;
    ClosureCache binary(lattice_binary_samples(options.seed));
    ClosureCache general(lattice_general_samples(options.seed));
    for (const auto &e : strict_edges()) {
        auto &cache = e.panel == Panel::binary ? binary : general;
        const char *panel = e.panel == Panel::binary ? "binary" : "general";
        notify(progress, std::string("edge ") + edge_label(e.stronger, e.weaker, ">") + " (" + panel + ")");
        auto r = verify_lattice_edge(e.stronger, e.weaker, cache, options.samples);
        std::ostringstream detail;
        detail << panel << ": " << r.samples << " samples, " << r.violations << " violations, "
               << r.strict_samples << " strict";
        report.add("monotone " + edge_label(e.stronger, e.weaker, ">=") + " [" + panel + "]",
                   r.violations == 0 && r.samples >= options.samples, detail.str());
    }
    for (const auto &req : witness_requirements()) {
        auto file = options.corpus / witness_file_name(req.hold, req.fail);
        std::string label = "witness " + edge_label(req.hold, req.fail, "holds,") + " fails";
        if (!std::filesystem::exists(file)) {
            report.add(label, false, "missing " + file.string());
            continue;
        }
        try {
            auto inst = read_instance(file);
            if (req.binary_only && !inst.network.is_binary()) {
                report.add(label, false, file.filename().string() + " is not binary");
                continue;
            }
            bool ok = is_witness(inst.network, req.hold, req.fail);
            report.add(label, ok, file.filename().string() + (ok ? "" : " does not separate the pair"));
        } catch (const std::exception &e) {
            report.add(label, false, e.what());
        }
    }
    return report;
}

SuiteReport run_figures_suite() {
    SuiteReport report;
    const auto twin = twin_ternary_network();
    const VarId y = 2, z = 3;
    const Value a = 0, b = 1;

    report.add("twin ternary: SAC rejects (y,a)", !check_value(Consistency::SAC, twin, y, a));
    report.add("twin ternary: SAC rejects (y,b)", !check_value(Consistency::SAC, twin, y, b));
    report.add("twin ternary: GAC holds", is_consistent(Consistency::GAC, twin));
    report.add("twin ternary: DC rejects {(y,a),(z,a)}", !check_pair(Consistency::DC, twin, y, a, z, a));
    report.add("twin ternary: PC accepts {(y,a),(z,a)}", check_pair(Consistency::PC, twin, y, a, z, a));
    report.add("twin ternary: sPC-consistent", is_consistent(Consistency::sPC, twin));
    report.add("twin ternary: not DC-consistent", !is_consistent(Consistency::DC, twin));
    report.add("twin ternary: sCDC-consistent", is_consistent(Consistency::sCDC, twin));
    report.add("twin ternary: not SAC+CDC-consistent", !is_consistent(Consistency::SACplusCDC, twin));
    {
        auto p = twin;
        report.add("twin ternary: sCDC1 detects inconsistency", !enforce_scdc(p).consistent);
    }
    {
        auto p = twin;
        report.add("twin ternary: SAC1 detects inconsistency", !enforce_sac1(p).consistent);
    }
    {
        auto p = twin;
        report.add("twin ternary: sCPC8 leaves it unchanged",
                   enforce_scpc(p).consistent && same(p, twin));
    }

    const auto triangle = not_equal_clique(3, 2);
    report.add("triangle: no solution", enumerate_solutions(triangle, 1).empty());
    report.add("triangle: arc-consistent", is_consistent(Consistency::GAC, triangle));
    report.add("triangle: PC closure fails", oracle_closure(Consistency::PC, triangle).failed());
    report.add("triangle: SAC closure fails", oracle_closure(Consistency::SAC, triangle).failed());
    const std::pair<const char *, EnforceReport (*)(ConstraintNetwork &, const EnforceOptions &)> enforcers[] = {
        {"SAC1", enforce_sac1}, {"sCPC8", enforce_scpc}, {"sCDC1", enforce_scdc}, {"sDC1", enforce_sdc}};
    for (const auto &[label, fn] : enforcers) {
        auto p = triangle;
        report.add(std::string("triangle: ") + label + " detects inconsistency", !fn(p, {}).consistent);
    }

    const auto gadget = pigeonhole_gadget_network();
    report.add("pigeonhole gadget: sCDC-consistent", is_consistent(Consistency::sCDC, gadget));
    report.add("pigeonhole gadget: (z,c) is SAC", check_value(Consistency::SAC, gadget, 6, 0));
    report.add("pigeonhole gadget: (z,c) is not BiSAC", !check_value(Consistency::BiSAC, gadget, 6, 0));
    {
        auto p = gadget;
        report.add("pigeonhole gadget: sCDC1 leaves it unchanged", enforce_scdc(p).consistent && same(p, gadget));
    }
    return report;
}

SuiteReport run_props_suite(std::size_t samples, std::uint64_t seed, const Progress &progress) {
    SuiteReport report;
    ClosureCache cache(lattice_binary_samples(seed));

    std::size_t eq3c = 0, eqspc = 0, eqsdc = 0, eqscdc = 0, eqs2sac = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        if (i % 20 == 0)
            notify(progress, "closure equalities, sample " + std::to_string(i));
        const auto &pc = cache.closure(Consistency::PC, i);
        eq3c += same(cache.closure(Consistency::ThreeC, i), pc);
        eqspc += same(naive_gac(pc), cache.closure(Consistency::sPC, i));
        eqsdc += same(naive_gac(cache.closure(Consistency::DC, i)), cache.closure(Consistency::sDC, i));
        eqscdc += same(naive_gac(cache.closure(Consistency::CDC, i)), cache.closure(Consistency::sCDC, i));
        eqs2sac += same(naive_gac(cache.closure(Consistency::C2SAC, i)), cache.closure(Consistency::sC2SAC, i));
    }
    auto count_line = [&](const std::string &label, std::size_t hits) {
        report.add(label, hits == samples, std::to_string(hits) + "/" + std::to_string(samples) + " samples");
    };
    count_line("3C closure equals PC closure", eq3c);
    count_line("AC after PC equals sPC", eqspc);
    count_line("GAC after DC equals sDC", eqsdc);
    count_line("GAC after CDC equals sCDC", eqscdc);
    count_line("GAC after C2SAC equals sC2SAC", eqs2sac);

    // Arc-consistent networks: raw GAC fixpoints mixed with stronger closures so both
    // truth values of each biconditional actually occur.
    std::vector<ConstraintNetwork> ac;
    for (std::size_t i = 0; ac.size() < std::max<std::size_t>(samples, 50) && i < 4 * samples + 200; ++i) {
        const auto &p = cache.sample(i);
        for (auto phi : {Consistency::GAC, Consistency::sCPC, Consistency::sPPC}) {
            auto q = phi == Consistency::GAC ? naive_gac(p) : cache.closure(phi, i);
            if (!q.failed())
                ac.push_back(std::move(q));
        }
    }
    notify(progress, "path characterizations on " + std::to_string(ac.size()) + " arc-consistent networks");

    std::size_t p3 = 0, p3_true = 0, p23 = 0, p23_true = 0;
    std::size_t p2 = 0, p2_n = 0, p2_true = 0, p4 = 0, p4_n = 0, p4_true = 0;
    for (const auto &q : ac) {
        bool pc = is_consistent(Consistency::PC, q);
        bool two = every_2length_graph_path_consistent(q);
        p3 += pc == two;
        p3_true += pc;
        bool c3c = is_consistent(Consistency::C3C, q);
        bool cpc = is_consistent(Consistency::CPC, q);
        p23 += c3c == cpc;
        p23_true += cpc;
        if (connected(q)) {
            ++p2_n;
            p2 += pc == every_graph_path_consistent(q);
            p2_true += pc;
        }
        if (chordal(q)) {
            ++p4_n;
            bool ppc = check_ppc(q).consistent;
            p4 += ppc == cpc;
            p4_true += ppc;
        }
    }
    auto bicond = [&](const std::string &label, std::size_t hits, std::size_t n, std::size_t truths, std::size_t need) {
        std::ostringstream d;
        d << hits << "/" << n << " agree, " << truths << " consistent";
        report.add(label, hits == n && n >= need, d.str());
    };
    bicond("arc-consistent: PC iff every 2-length graph-path consistent", p3, ac.size(), p3_true, 50);
    bicond("arc-consistent: C3C iff CPC", p23, ac.size(), p23_true, 50);
    bicond("connected: PC iff every graph-path consistent", p2, p2_n, p2_true, 1);
    bicond("triangulated: PPC iff CPC", p4, p4_n, p4_true, 1);
    return report;
}

} // namespace secord
