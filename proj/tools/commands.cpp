#include "commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "secord/enforcers.hpp"
#include "secord/errors.hpp"
#include "secord/generator.hpp"
#include "secord/instance_io.hpp"
#include "secord/lattice.hpp"
#include "secord/oracle.hpp"
#include "secord/rng.hpp"
#include "secord/search.hpp"
#include "secord/suites.hpp"

#ifndef SECORD_CORPUS_DIR
#define SECORD_CORPUS_DIR "corpus"
#endif

namespace secord::cli {

using nlohmann::json;

namespace {

struct Input {
    Instance instance;
    std::string path;
    std::string hash;
};

Input load(const std::string &path, bool lenient) {
    std::string text = read_file(path);
    Input in;
    try {
        in.instance = parse_instance(text, ParseOptions{!lenient});
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what());
    }
    in.path = path;
    in.hash = hex64(fnv1a64(text));
    return in;
}

/// One JSON object per line, appended to the report file or written to `out`.
void emit(const json &record, const std::string &report, std::ostream &out) {
    std::string line = record.dump() + "\n";
    if (report.empty() || report == "-") {
        out << line << std::flush;
        return;
    }
    std::ofstream f(report, std::ios::app);
    if (!f)
        throw ParseError("cannot write report " + report);
    f << line;
}

json enforce_json(const EnforceReport &r) {
    return {{"consistent", r.consistent},          {"passes", r.passes},
            {"del_values", r.deleted_values},      {"del_tuples", r.deleted_tuples},
            {"added_constraints", r.added_constraints}, {"ms", r.elapsed_ms()}};
}

json input_json(const Input &in) {
    return {{"path", in.path},
            {"fnv1a64", in.hash},
            {"variables", in.instance.network.num_variables()},
            {"constraints", in.instance.network.num_constraints()}};
}

Preprocessing parse_preprocessing(const std::string &text) {
    auto p = preprocessing_from_string(text);
    if (!p)
        throw CLI::ValidationError("--phi", "unknown preprocessing '" + text + "'");
    return *p;
}

Consistency parse_consistency(const std::string &text, const char *flag) {
    auto c = consistency_from_string(text);
    if (!c)
        throw CLI::ValidationError(flag, "unknown consistency '" + text + "'");
    return *c;
}

std::vector<std::string> split(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

int print_suite(const std::string &suite, const SuiteReport &report, std::ostream &out) {
    for (const auto &c : report.checks) {
        json rec{{"suite", suite}, {"check", c.label}, {"passed", c.passed}};
        if (!c.detail.empty())
            rec["detail"] = c.detail;
        out << rec.dump() << "\n";
    }
    out << json{{"suite", suite}, {"passed", report.passed()}, {"checks", report.checks.size()}}.dump() << "\n";
    return report.passed() ? ExitCode::ok : ExitCode::violation;
}

/// Tries the hand-built networks first, then random search over a handful of seeds.
std::optional<std::pair<ConstraintNetwork, std::string>> search_witness(const WitnessRequirement &req,
                                                                        std::size_t attempts, std::uint64_t seed,
                                                                        int seeds) {
    if (!req.binary_only) {
        auto twin = twin_ternary_network();
        if (is_witness(twin, req.hold, req.fail))
            return std::make_pair(std::move(twin), std::string("twin-ternary fixture"));
    }
    if (auto g = pigeonhole_gadget_network(); is_witness(g, req.hold, req.fail))
        return std::make_pair(std::move(g), std::string("pigeonhole gadget"));
    for (int s = 0; s < seeds; ++s) {
        WitnessBudget budget;
        budget.attempts = attempts;
        budget.binary_only = req.binary_only;
        budget.seed = derive_seed(seed, static_cast<std::uint64_t>(s));
        for (int arity : {3, 4}) {
            if (req.binary_only && arity > 3)
                break;
            budget.arity_max = arity;
            if (auto w = find_witness(req.hold, req.fail, budget))
                return std::make_pair(std::move(*w), "random search, seed " + std::to_string(budget.seed) +
                                                         ", arity " + std::to_string(arity));
        }
    }
    return std::nullopt;
}

void save_witness(const std::filesystem::path &file, const ConstraintNetwork &net, Consistency hold,
                  Consistency fail, const std::string &source) {
    auto inst = make_instance(net);
    inst.metadata = {{"holds", std::string(name(hold))}, {"fails", std::string(name(fail))}, {"source", source}};
    write_instance(file, inst);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Second-order consistencies for constraint networks"};
    app.name("secord");
    app.require_subcommand(1);
    bool lenient = false;
    app.add_flag("--lenient", lenient, "Ignore unknown fields in instance documents");

    // generate
    auto *gen = app.add_subcommand("generate", "Model B random binary network");
    ModelBParams mb;
    std::string gen_out;
    gen->add_option("--n", mb.n, "Variables")->required();
    gen->add_option("--d", mb.d, "Domain size")->required();
    gen->add_option("--density", mb.density, "Fraction of variable pairs constrained")->required();
    gen->add_option("--tightness", mb.tightness, "Fraction of forbidden tuples per constraint")->required();
    gen->add_option("--seed", mb.seed, "Seed");
    gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

    // preprocess
    auto *pre = app.add_subcommand("preprocess", "Enforce a consistency with one of the fast enforcers");
    std::string pre_phi, pre_in, pre_out, pre_report;
    std::optional<std::uint64_t> pre_shuffle;
    std::size_t sdc_budget = EnforceOptions{}.sdc_entry_budget;
    pre->add_option("--phi", pre_phi, "gac, sac1, scpc, scdc1 or sdc1")->required();
    pre->add_option("--in", pre_in, "Instance file")->required();
    pre->add_option("--out", pre_out, "Write the enforced instance here");
    pre->add_option("--report", pre_report, "Append the JSON record here (stdout if omitted)");
    pre->add_option("--shuffle", pre_shuffle, "Visit variables in an order shuffled by this seed");
    pre->add_option("--sdc-budget", sdc_budget, "Largest n(n-1)/2*d^2 sdc1 accepts");

    // solve
    auto *sol = app.add_subcommand("solve", "MAC search, optionally after preprocessing");
    std::string sol_heur = "wdeg", sol_phi = "none", sol_mode = "first", sol_in, sol_report;
    std::uint64_t node_limit = SearchConfig{}.node_limit;
    double time_limit_s = 3600;
    sol->add_option("--heuristic", sol_heur, "ddeg or wdeg");
    sol->add_option("--phi", sol_phi, "none, sac1, scpc, scdc1 or sdc1");
    sol->add_option("--mode", sol_mode, "first or count");
    sol->add_option("--in", sol_in, "Instance file")->required();
    sol->add_option("--report", sol_report, "Append the JSON record here (stdout if omitted)");
    sol->add_option("--node-limit", node_limit, "Stop after this many assignments");
    sol->add_option("--time-limit", time_limit_s, "Stop after this many seconds");

    // closure
    auto *clo = app.add_subcommand("closure", "Reference closure computed from the definitions (small networks)");
    std::string clo_phi, clo_in, clo_out;
    OracleCaps caps;
    clo->add_option("--phi", clo_phi, "Consistency name, e.g. sPC, 3C, SAC+CDC")->required();
    clo->add_option("--in", clo_in, "Instance file")->required();
    clo->add_option("--out", clo_out, "Output file (stdout if omitted)");

    // verify
    auto *ver = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::size_t ver_samples = 100;
    std::uint64_t ver_seed = 7;
    std::string corpus = std::string(SECORD_CORPUS_DIR) + "/witnesses";
    ver->add_option("--suite", suite, "lattice, figures or props")
        ->required()
        ->check(CLI::IsMember({"lattice", "figures", "props"}));
    ver->add_option("--samples", ver_samples, "Samples per edge or property");
    ver->add_option("--seed", ver_seed, "Sampling seed");
    ver->add_option("--corpus", corpus, "Witness directory");

    // phase
    auto *pha = app.add_subcommand("phase", "Unsat detection rate against tightness");
    PhaseScanConfig ps;
    double t_from = 0.1, t_to = 0.9, t_step = 0.02;
    std::string checks = "gac,sac1,scdc1,sdc1", pha_out;
    pha->add_option("--n", ps.n, "Variables");
    pha->add_option("--d", ps.d, "Domain size");
    pha->add_option("--density", ps.density, "Density");
    pha->add_option("--t-from", t_from, "First tightness");
    pha->add_option("--t-to", t_to, "Last tightness");
    pha->add_option("--t-step", t_step, "Grid step");
    pha->add_option("--samples", ps.samples, "Instances per grid point");
    pha->add_option("--checks", checks, "Comma-separated preprocessing names");
    pha->add_option("--seed", ps.seed, "Seed");
    pha->add_option("--out", pha_out, "CSV file (stdout if omitted)");

    // witness
    auto *wit = app.add_subcommand("witness", "Search for a network separating two consistencies");
    std::string hold_s, fail_s, wit_out;
    bool all = false, force = false, wit_binary = false;
    std::size_t attempts = 2000;
    std::uint64_t wit_seed = 1;
    int seeds = 8;
    wit->add_option("--hold", hold_s, "Consistency the network must satisfy");
    wit->add_option("--fail", fail_s, "Consistency the network must violate");
    wit->add_flag("--binary", wit_binary, "Only binary networks");
    wit->add_option("--out", wit_out, "Output file (stdout if omitted)");
    wit->add_flag("--all", all, "Fill the corpus with every witness the lattice suite needs");
    wit->add_flag("--force", force, "With --all, search again even for certified files");
    wit->add_option("--corpus", corpus, "Witness directory");
    wit->add_option("--attempts", attempts, "Samples per search");
    wit->add_option("--seed", wit_seed, "Seed");
    wit->add_option("--seeds", seeds, "Independent searches before giving up");

    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? ExitCode::ok : ExitCode::usage;
    }

    try {
        if (*gen) {
            auto inst = make_instance(generate_model_b(mb));
            inst.metadata = {{"generator", "model-b"}, {"n", mb.n}, {"d", mb.d}, {"density", mb.density},
                             {"tightness", mb.tightness}, {"seed", mb.seed}, {"rng", std::string(kRngAlgorithm)}};
            if (gen_out.empty())
                out << serialize_instance(inst);
            else
                write_instance(gen_out, inst);
            return ExitCode::ok;
        }

        if (*pre) {
            auto which = parse_preprocessing(pre_phi);
            auto in = load(pre_in, lenient);
            EnforceOptions opt;
            opt.shuffle_seed = pre_shuffle;
            opt.sdc_entry_budget = sdc_budget;
            auto rep = run_enforcer(which, in.instance.network, opt);
            if (!pre_out.empty())
                write_instance(pre_out, in.instance);
            json config{{"phi", std::string(to_string(which))}, {"sdc_budget", sdc_budget}};
            if (pre_shuffle)
                config["shuffle"] = *pre_shuffle;
            emit({{"command", "preprocess"}, {"input", input_json(in)}, {"config", config}, {"result", enforce_json(rep)}},
                 pre_report, out);
            return ExitCode::ok;
        }

        if (*sol) {
            SearchConfig cfg;
            auto h = heuristic_from_string(sol_heur);
            if (!h)
                throw CLI::ValidationError("--heuristic", "expected ddeg or wdeg");
            cfg.heuristic = *h;
            cfg.preprocessing = parse_preprocessing(sol_phi);
            if (sol_mode == "first")
                cfg.mode = SearchMode::first_solution;
            else if (sol_mode == "count")
                cfg.mode = SearchMode::count_all;
            else
                throw CLI::ValidationError("--mode", "expected first or count");
            cfg.node_limit = node_limit;
            cfg.time_limit = std::chrono::milliseconds(static_cast<long long>(time_limit_s * 1000));
            auto in = load(sol_in, lenient);
            auto r = mac_solve(in.instance.network, cfg);
            json result{{"outcome", std::string(to_string(r.outcome))},
                        {"nodes", r.nodes},
                        {"solutions", r.solution_count},
                        {"ms", std::chrono::duration<double, std::milli>(r.elapsed).count()},
                        {"preprocessing", enforce_json(r.preprocessing_report)}};
            if (r.solution) {
                json sol_obj = json::object();
                for (auto [x, a] : *r.solution)
                    sol_obj[in.instance.variable_names[static_cast<std::size_t>(x)]] =
                        in.instance.value_names[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
                result["solution"] = std::move(sol_obj);
            }
            json config{{"heuristic", std::string(to_string(cfg.heuristic))},
                        {"phi", std::string(to_string(cfg.preprocessing))},
                        {"mode", sol_mode},
                        {"node_limit", node_limit},
                        {"time_limit_s", time_limit_s}};
            emit({{"command", "solve"}, {"input", input_json(in)}, {"config", config}, {"result", result}}, sol_report,
                 out);
            return ExitCode::ok;
        }

        if (*clo) {
            auto phi = parse_consistency(clo_phi, "--phi");
            auto in = load(clo_in, lenient);
            require_oracle_scale(in.instance.network, caps);
            in.instance.network = oracle_closure(phi, in.instance.network, caps);
            in.instance.metadata["closure"] = std::string(name(phi));
            in.instance.metadata["source_fnv1a64"] = in.hash;
            if (clo_out.empty())
                out << serialize_instance(in.instance);
            else
                write_instance(clo_out, in.instance);
            return ExitCode::ok;
        }

        if (*ver) {
            auto progress = [&err, &suite](const std::string &msg) { err << "[" << suite << "] " << msg << "\n"; };
            if (suite == "lattice")
                return print_suite(suite, run_lattice_suite({ver_samples, ver_seed, corpus}, progress), out);
            if (suite == "figures")
                return print_suite(suite, run_figures_suite(), out);
            return print_suite(suite, run_props_suite(ver_samples, ver_seed, progress), out);
        }

        if (*pha) {
            ps.t_grid = tightness_grid(t_from, t_to, t_step);
            for (const auto &c : split(checks))
                ps.checks.push_back(parse_preprocessing(c));
            if (ps.checks.empty())
                throw CLI::ValidationError("--checks", "at least one check is needed");
            auto scan = phase_scan(ps, [&err](double t) { err << "t=" << t << "\n"; });
            std::ostringstream csv;
            write_phase_csv(csv, scan);
            if (pha_out.empty())
                out << csv.str();
            else
                write_file_atomically(pha_out, csv.str());
            for (std::size_t i = 0; i < ps.checks.size(); ++i) {
                err << to_string(ps.checks[i]) << " crossing: ";
                if (scan.crossings[i])
                    err << *scan.crossings[i] << "\n";
                else
                    err << "none\n";
            }
            err << "monotonicity violations: " << scan.monotonicity_violations << "\n";
            return scan.monotonicity_violations == 0 ? ExitCode::ok : ExitCode::violation;
        }

        if (*wit) {
            if (all) {
                std::filesystem::create_directories(corpus);
                int missing = 0;
                for (const auto &req : witness_requirements()) {
                    auto file = std::filesystem::path(corpus) / witness_file_name(req.hold, req.fail);
                    if (!force && std::filesystem::exists(file)) {
                        try {
                            auto inst = read_instance(file);
                            if ((!req.binary_only || inst.network.is_binary()) &&
                                is_witness(inst.network, req.hold, req.fail)) {
                                err << file.filename().string() << ": certified, kept\n";
                                continue;
                            }
                        } catch (const ParseError &) {
                        }
                    }
                    auto found = search_witness(req, attempts, wit_seed, seeds);
                    if (!found) {
                        err << file.filename().string() << ": not found\n";
                        ++missing;
                        continue;
                    }
                    save_witness(file, found->first, req.hold, req.fail, found->second);
                    err << file.filename().string() << ": " << found->second << "\n";
                }
                return missing == 0 ? ExitCode::ok : ExitCode::violation;
            }
            if (hold_s.empty() || fail_s.empty())
                throw CLI::ValidationError("witness", "--hold and --fail are required without --all");
            WitnessRequirement req{parse_consistency(hold_s, "--hold"), parse_consistency(fail_s, "--fail"), wit_binary};
            auto found = search_witness(req, attempts, wit_seed, seeds);
            if (!found) {
                err << "no witness found within the budget\n";
                return ExitCode::violation;
            }
            auto inst = make_instance(found->first);
            inst.metadata = {{"holds", hold_s}, {"fails", fail_s}, {"source", found->second}};
            if (wit_out.empty())
                out << serialize_instance(inst);
            else
                write_instance(wit_out, inst);
            return ExitCode::ok;
        }
    } catch (const CLI::Error &e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const ResourceError &e) {
        err << "resource limit: " << e.what() << "\n";
        return ExitCode::resource;
    } catch (const ParseError &e) {
        err << "input error: " << e.what() << "\n";
        return ExitCode::file_error;
    } catch (const ModelError &e) {
        err << "invalid model: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const std::bad_alloc &) {
        err << "resource limit: out of memory\n";
        return ExitCode::resource;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "file error: " << e.what() << "\n";
        return ExitCode::file_error;
    }
    return ExitCode::usage;
}

} // namespace secord::cli
