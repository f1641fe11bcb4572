// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is non-zero if any gating criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fixtures.hpp"
#include "secord/enforcers.hpp"
#include "secord/errors.hpp"
#include "secord/generator.hpp"
#include "secord/instance_io.hpp"
#include "secord/oracle.hpp"
#include "secord/rng.hpp"
#include "secord/search.hpp"
#include "secord/suites.hpp"

using namespace secord;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void fail(std::string why) {
        passed = false;
        notes.push_back("FAIL: " + std::move(why));
    }
    void note(std::string s) { notes.push_back(std::move(s)); }
    void require(bool ok, const std::string &why) {
        if (!ok)
            fail(why);
    }
};

bool same(const ConstraintNetwork &a, const ConstraintNetwork &b) {
    return compare(a, b, NogoodOrder::subsumption) == Ordering::equal;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// 1 -------------------------------------------------------------------------

Outcome closure_equivalence() {
    Outcome o;
    auto start = Clock::now();
    std::size_t count = 0, sdc_bad = 0, scdc_bad = 0;
    for (int n = 4; n <= 6; ++n)
        for (int d = 2; d <= 4; ++d)
            for (double density : {0.4, 0.8})
                for (int ti = 1; ti <= 9; ++ti)
                    for (std::uint64_t rep = 0; rep < 2; ++rep) {
                        double t = ti / 10.0;
                        if (model_b_forbidden_count(d, t) >= d * d)
                            continue;
                        ModelBParams p{n, d, density, t, derive_seed(1000 + static_cast<std::uint64_t>(count), rep)};
                        auto net = generate_model_b(p);
                        ++count;
                        auto a = net;
                        enforce_sdc(a);
                        if (!same(a, oracle_closure(Consistency::sPC, net)) && sdc_bad++ < 3)
                            o.fail("sdc1 differs from the sPC closure at n=" + std::to_string(n) + " d=" +
                                   std::to_string(d) + " t=" + fmt(t, 1));
                        auto b = net;
                        enforce_scdc(b);
                        if (!same(b, oracle_closure(Consistency::SACplusCDC, net)) && scdc_bad++ < 3)
                            o.fail("scdc1 differs from the SAC+CDC closure at n=" + std::to_string(n) + " d=" +
                                   std::to_string(d) + " t=" + fmt(t, 1));
                    }
    double secs = seconds_since(start);
    o.require(count >= 200, "only " + std::to_string(count) + " networks");
    o.require(sdc_bad == 0 && scdc_bad == 0, std::to_string(sdc_bad) + " sdc1 and " + std::to_string(scdc_bad) +
                                                   " scdc1 mismatches");
    o.require(secs < 300, "took " + fmt(secs, 1) + " s");
    o.note(std::to_string(count) + " networks, " + std::to_string(sdc_bad + scdc_bad) + " mismatches, " + fmt(secs, 1) +
           " s");
    return o;
}

// 2 -------------------------------------------------------------------------

Outcome nonbinary_scdc() {
    Outcome o;
    SampleSpec spec;
    spec.n_min = 3;
    spec.n_max = 5;
    spec.d_min = 2;
    spec.d_max = 3;
    spec.extra_min = 1;
    spec.extra_max = 2;
    spec.extra_arity_max = 3;
    spec.seed = 2024;
    std::size_t count = 0, bad = 0, wiped = 0;
    for (std::uint64_t i = 0; i < 120; ++i) {
        auto net = draw_sample(spec, i);
        if (net.max_arity() < 3)
            continue;
        ++count;
        auto a = net;
        auto r = enforce_scdc(a);
        wiped += !r.consistent;
        if (!same(a, oracle_closure(Consistency::SACplusCDC, net)) && bad++ < 3)
            o.fail("scdc1 differs from the SAC+CDC closure on sample " + std::to_string(i));
    }
    o.require(count >= 100, "only " + std::to_string(count) + " networks with a ternary constraint");
    auto twin = fixtures::twin_ternary();
    auto a = twin, b = twin;
    bool scdc_false = !enforce_scdc(a).consistent;
    bool sac_false = !enforce_sac1(b).consistent;
    o.require(scdc_false, "scdc1 reports the twin-ternary network consistent");
    o.require(sac_false, "sac1 reports the twin-ternary network consistent");
    o.require(same(a, oracle_closure(Consistency::SACplusCDC, twin)), "twin-ternary closure mismatch");
    o.note(std::to_string(count) + " networks (" + std::to_string(wiped) + " refuted), " + std::to_string(bad) +
           " mismatches; twin ternary refuted by scdc1 and sac1");
    return o;
}

// 3, 4 ----------------------------------------------------------------------

Outcome from_suite(const SuiteReport &report) {
    Outcome o;
    std::size_t failed = 0;
    for (const auto &c : report.checks)
        if (!c.passed) {
            ++failed;
            o.fail(c.label + (c.detail.empty() ? "" : " (" + c.detail + ")"));
        }
    o.note(std::to_string(report.checks.size() - failed) + "/" + std::to_string(report.checks.size()) +
           " checks passed");
    return o;
}

// 5 -------------------------------------------------------------------------

Outcome well_behaved() {
    Outcome o;
    const Preprocessing which[] = {Preprocessing::sac1, Preprocessing::scpc, Preprocessing::scdc1, Preprocessing::sdc1};
    Rng rng(55);
    std::vector<ConstraintNetwork> nets;
    for (int i = 0; i < 100; ++i) {
        ModelBParams p;
        p.n = rng.between(6, 14);
        p.d = rng.between(2, 5);
        p.density = 0.2 + 0.8 * rng.unit();
        p.tightness = 0.05 + 0.35 * rng.unit();
        if (model_b_forbidden_count(p.d, p.tightness) >= p.d * p.d)
            p.tightness = 0.3;
        p.seed = rng.engine()();
        nets.push_back(generate_model_b(p));
    }
    for (auto w : which) {
        std::size_t not_idem = 0, order_dep = 0, refuted = 0;
        for (std::size_t i = 0; i < nets.size(); ++i) {
            auto base = nets[i];
            refuted += !run_enforcer(w, base).consistent;
            auto again = base;
            auto r = run_enforcer(w, again);
            if (r.deleted_values + r.deleted_tuples + r.added_constraints != 0 || !same(again, base))
                ++not_idem;
            for (std::uint64_t s = 1; s <= 5; ++s) {
                auto shuffled = nets[i];
                EnforceOptions opt;
                opt.shuffle_seed = derive_seed(i, s);
                run_enforcer(w, shuffled, opt);
                if (!same(shuffled, base)) {
                    ++order_dep;
                    break;
                }
            }
        }
        std::string name(to_string(w));
        o.require(not_idem == 0, name + ": " + std::to_string(not_idem) + " networks changed on a second run");
        o.require(order_dep == 0, name + ": " + std::to_string(order_dep) + " networks depend on the sweep order");
        o.note(name + ": 100 networks (" + std::to_string(refuted) + " refuted), idempotent and order-independent" +
               (not_idem + order_dep ? " NOT" : ""));
    }
    return o;
}

// 6 -------------------------------------------------------------------------

bool verifies(const ConstraintNetwork &net, const Instantiation &sol) {
    if (static_cast<int>(sol.size()) != net.num_variables())
        return false;
    for (auto [x, a] : sol)
        if (!net.domain(x).contains(a))
            return false;
    return is_locally_consistent(net, sol);
}

Outcome search_correctness() {
    Outcome o;
    SampleSpec spec;
    spec.n_min = 3;
    spec.n_max = 7;
    spec.d_min = 2;
    spec.d_max = 4;
    spec.extra_min = 0;
    spec.extra_max = 1;
    spec.seed = 606;
    const Preprocessing pres[] = {Preprocessing::none, Preprocessing::gac, Preprocessing::sac1,
                                  Preprocessing::scpc, Preprocessing::scdc1, Preprocessing::sdc1};
    std::size_t runs = 0, wrong = 0, bad_solution = 0, sat = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto net = draw_sample(spec, i);
        auto expected = enumerate_solutions(net, std::size_t{1} << 24).size();
        sat += expected > 0;
        for (auto h : {Heuristic::dom_ddeg, Heuristic::dom_wdeg})
            for (auto pre : pres) {
                SearchConfig cfg;
                cfg.heuristic = h;
                cfg.preprocessing = pre;
                cfg.mode = SearchMode::count_all;
                auto r = mac_solve(net, cfg);
                ++runs;
                if (r.solution_count != expected || r.outcome == SearchResult::Outcome::limit) {
                    if (wrong++ < 3)
                        o.fail("sample " + std::to_string(i) + " " + std::string(to_string(h)) + "/" +
                               std::string(to_string(pre)) + ": " + std::to_string(r.solution_count) + " vs " +
                               std::to_string(expected));
                }
                if (r.solution && !verifies(net, *r.solution))
                    ++bad_solution;
                cfg.mode = SearchMode::first_solution;
                auto first = mac_solve(net, cfg);
                if ((first.outcome == SearchResult::Outcome::sat) != (expected > 0))
                    ++wrong;
                if (first.solution && !verifies(net, *first.solution))
                    ++bad_solution;
            }
    }
    o.require(wrong == 0, std::to_string(wrong) + " runs disagree with enumeration");
    o.require(bad_solution == 0, std::to_string(bad_solution) + " reported solutions do not verify");
    o.note(std::to_string(runs) + " counting runs over 100 networks (" + std::to_string(sat) +
           " satisfiable), 12 configurations each");
    return o;
}

// 7 -------------------------------------------------------------------------

Outcome phase_transition() {
    Outcome o;
    auto start = Clock::now();
    PhaseScanConfig cfg;
    cfg.n = 20;
    cfg.d = 6;
    cfg.density = 0.5;
    cfg.samples = 50;
    cfg.seed = 14;
    cfg.t_grid = tightness_grid(0.02, 0.98, 0.02);
    cfg.checks = {Preprocessing::gac, Preprocessing::sac1, Preprocessing::scdc1, Preprocessing::sdc1};
    auto scan = phase_scan(cfg);
    double secs = seconds_since(start);
    o.require(scan.monotonicity_violations == 0,
              std::to_string(scan.monotonicity_violations) + " instances break the detection chain");
    std::vector<double> x;
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        if (!scan.crossings[i]) {
            o.fail(std::string(to_string(cfg.checks[i])) + " never reaches one half");
            return o;
        }
        x.push_back(*scan.crossings[i]);
    }
    double ac = x[0], sac = x[1], scdc = x[2], sdc = x[3];
    o.require(sdc <= scdc && scdc <= sac && sac <= ac, "crossings out of order");
    o.require(secs < 900, "took " + fmt(secs, 1) + " s");
    o.note("crossings: ac " + fmt(ac) + ", sac1 " + fmt(sac) + ", scdc1 " + fmt(scdc) + ", sdc1 " + fmt(sdc) + "; " +
           std::to_string(cfg.t_grid.size()) + " grid points, " + fmt(secs, 1) + " s");
    double gap = std::fabs(sdc - scdc);
    o.note(std::string("soft: |sdc1 - scdc1| = ") + fmt(gap) + (gap <= 0.04 ? " <= 0.04" : " > 0.04 (not gating)"));
    return o;
}

// 8 -------------------------------------------------------------------------

Outcome preprocessing_payoff() {
    Outcome o;
    std::size_t instances = 0, unmet = 0;
    std::vector<std::string> missed;
    for (int d = 2; d <= 4; ++d)
        for (int k = d + 1; k <= 8; ++k) {
            auto net = not_equal_clique(k, d);
            ++instances;
            for (auto h : {Heuristic::dom_ddeg, Heuristic::dom_wdeg}) {
                auto nodes = [&](Preprocessing pre) {
                    SearchConfig cfg;
                    cfg.heuristic = h;
                    cfg.preprocessing = pre;
                    return mac_solve(net, cfg).nodes;
                };
                auto plain = nodes(Preprocessing::none);
                auto sdc = nodes(Preprocessing::sdc1);
                auto scdc = nodes(Preprocessing::scdc1);
                o.require(plain >= 1, "plain MAC settles K" + std::to_string(k) + "/" + std::to_string(d) + " at the root");
                o.require(sdc <= plain, "sdc1 increases nodes on K" + std::to_string(k) + "/" + std::to_string(d));
                if (sdc != 0 || scdc != 0) {
                    ++unmet;
                    if (h == Heuristic::dom_wdeg)
                        missed.push_back("K" + std::to_string(k) + "/" + std::to_string(d) + " (sdc1 " +
                                         std::to_string(sdc) + ", scdc1 " + std::to_string(scdc) + " nodes)");
                }
            }
        }
    if (unmet) {
        std::string list;
        for (const auto &m : missed)
            list += (list.empty() ? "" : ", ") + m;
        o.fail("preprocessing leaves search work on " + std::to_string(missed.size()) + " of " +
               std::to_string(instances) + " cliques: " + list);
        o.note("with d >= 3 every pair of values of a clique of differences extends to any third variable, "
               "so the clique is path-consistent and sDC, sCDC and SAC cannot refute it");
    } else {
        o.note(std::to_string(instances) + " cliques refuted with zero nodes");
    }
    return o;
}

// 9 -------------------------------------------------------------------------

int cli_code(std::vector<std::string> args, std::string *err_text = nullptr) {
    args.insert(args.begin(), "secord");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    if (err_text)
        *err_text = err.str();
    return code;
}

template <class F>
bool throws_resource(F &&f) {
    try {
        f();
    } catch (const ResourceError &) {
        return true;
    } catch (...) {
        return false;
    }
    return false;
}

Outcome resource_guards() {
    Outcome o;
    // sDC1 memory budget.
    auto wide = not_equal_clique(40, 8);
    auto before = wide;
    EnforceOptions small;
    small.sdc_entry_budget = 10'000;
    o.require(throws_resource([&] { enforce_sdc(wide, small); }), "sdc1 does not refuse an over-budget network");
    o.require(compare(wide, before) == Ordering::equal, "sdc1 modified the network before refusing");
    ModelBParams huge{2000, 60, 0.01, 0.1, 1};
    o.require(throws_resource([&] {
                  auto p = generate_model_b(huge);
                  enforce_sdc(p);
              }),
              "sdc1 accepts n=2000, d=60 under the default budget");

    // Oracle caps.
    o.require(throws_resource([] { oracle_closure(Consistency::sPC, not_equal_clique(9, 3)); }),
              "oracle accepts 9 variables");
    o.require(throws_resource([] { is_consistent(Consistency::PC, not_equal_clique(4, 6)); }),
              "oracle accepts domain size 6");
    {
        std::vector<ConstraintSpec> specs{{{0, 1, 2, 3, 4}, Polarity::conflicts, {{0, 0, 0, 0, 0}}}};
        auto five = build_network(std::vector<int>{2, 2, 2, 2, 2}, specs);
        o.require(throws_resource([&] { find_violation(Consistency::GAC, five); }), "oracle accepts arity 5");
    }
    o.require(throws_resource([] { enumerate_solutions(not_equal_clique(8, 7), 1, 1000); }),
              "enumeration ignores its node budget");
    OracleCaps tight;
    tight.check_budget = 50;
    o.require(throws_resource([&] { oracle_closure(Consistency::TwoSAC, not_equal_clique(6, 3), tight); }),
              "oracle ignores its check budget");

    // Command line: exit code 3.
    auto dir = std::filesystem::temp_directory_path() / "secord_acceptance";
    std::filesystem::create_directories(dir);
    auto big = (dir / "big.json").string();
    write_instance(big, make_instance(not_equal_clique(9, 3)));
    auto widef = (dir / "wide.json").string();
    write_instance(widef, make_instance(not_equal_clique(40, 8)));
    std::string err;
    int c1 = cli_code({"closure", "--phi", "sPC", "--in", big}, &err);
    o.require(c1 == 3, "closure over the cap exits " + std::to_string(c1) + ": " + err);
    int c2 = cli_code({"preprocess", "--phi", "sdc1", "--sdc-budget", "10000", "--in", widef}, &err);
    o.require(c2 == 3, "over-budget sdc1 exits " + std::to_string(c2) + ": " + err);
    int c3 = cli_code({"solve", "--phi", "sdc1", "--in", widef, "--node-limit", "10"}, &err);
    o.require(c3 == 0, "solve under the default budget exits " + std::to_string(c3));
    std::filesystem::remove_all(dir);
    o.note("sdc1 budget, oracle variable/domain/arity caps, check and enumeration budgets all refuse cleanly; "
           "CLI exits 3");
    return o;
}

struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::filesystem::path corpus = std::filesystem::path(SECORD_CORPUS_DIR) / "witnesses";
    std::vector<Criterion> criteria{
        {1, "closure equivalence of sdc1 and scdc1 on binary networks", closure_equivalence},
        {2, "scdc1 on networks with ternary constraints", nonbinary_scdc},
        {3, "lattice edges and witnesses",
         [&] { return from_suite(run_lattice_suite({100, 7, corpus})); }},
        {4, "equivalence results", [] { return from_suite(run_props_suite(100, 11)); }},
        {5, "enforcers idempotent and order-independent", well_behaved},
        {6, "search agrees with enumeration", search_correctness},
        {7, "phase transition ordering", phase_transition},
        {8, "preprocessing payoff on cliques of differences", preprocessing_payoff},
        {9, "resource guards", resource_guards},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += !o.passed;
        std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " ("
                  << fmt(seconds_since(start), 1) << " s)\n";
        for (const auto &n : o.notes)
            std::cout << "      " << n << "\n";
        std::cout << std::flush;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
