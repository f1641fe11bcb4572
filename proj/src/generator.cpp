#include "secord/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "secord/errors.hpp"
#include "secord/rng.hpp"

namespace secord {

namespace {

// First k entries of a uniform random permutation of 0..size-1.
std::vector<std::size_t> choose_distinct(Rng &rng, std::size_t size, std::size_t k) {
    std::vector<std::size_t> pool(size);
    for (std::size_t i = 0; i < size; ++i)
        pool[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng.below(size - i)]);
    pool.resize(k);
    return pool;
}

std::vector<ConstraintSpec> model_b_specs(const ModelBParams &p, Rng &rng) {
    const int e = model_b_constraint_count(p.n, p.density);
    const int k = model_b_forbidden_count(p.d, p.tightness);

    std::vector<std::pair<VarId, VarId>> pairs;
    for (VarId x = 0; x < p.n; ++x)
        for (VarId y = x + 1; y < p.n; ++y)
            pairs.emplace_back(x, y);

    std::vector<ConstraintSpec> specs;
    specs.reserve(static_cast<std::size_t>(e));
    const auto cells = static_cast<std::size_t>(p.d) * static_cast<std::size_t>(p.d);
    for (std::size_t pick : choose_distinct(rng, pairs.size(), static_cast<std::size_t>(e))) {
        ConstraintSpec s;
        s.scope = {pairs[pick].first, pairs[pick].second};
        s.polarity = Polarity::conflicts;
        auto chosen = choose_distinct(rng, cells, static_cast<std::size_t>(k));
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t cell : chosen)
            s.tuples.push_back({static_cast<Value>(cell / static_cast<std::size_t>(p.d)),
                                static_cast<Value>(cell % static_cast<std::size_t>(p.d))});
        specs.push_back(std::move(s));
    }
    return specs;
}

} // namespace

long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5 + 1e-9)); }

int model_b_constraint_count(int n, double density) {
    double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<int>(round_half_up(density * pairs));
}

int model_b_forbidden_count(int d, double tightness) {
    return static_cast<int>(round_half_up(tightness * static_cast<double>(d) * static_cast<double>(d)));
}

ConstraintNetwork generate_model_b(const ModelBParams &p) {
    if (p.n < 1)
        throw ModelError("Model B needs at least one variable");
    if (p.d < 1)
        throw ModelError("Model B needs a domain size of at least 1");
    if (!(p.density >= 0.0 && p.density <= 1.0))
        throw ModelError("density must lie in [0, 1]");
    if (!(p.tightness >= 0.0 && p.tightness <= 1.0))
        throw ModelError("tightness must lie in [0, 1]");
    if (model_b_forbidden_count(p.d, p.tightness) >= p.d * p.d)
        throw ModelError("tightness " + std::to_string(p.tightness) + " forbids every tuple for d=" +
                         std::to_string(p.d));
    Rng rng(p.seed);
    auto specs = model_b_specs(p, rng);
    std::vector<int> sizes(static_cast<std::size_t>(p.n), p.d);
    return build_network(sizes, specs);
}

ConstraintNetwork not_equal_clique(int k, int d) {
    if (k < 1 || d < 1)
        throw ModelError("clique size and domain size must be positive");
    std::vector<ConstraintSpec> specs;
    for (VarId x = 0; x < k; ++x)
        for (VarId y = x + 1; y < k; ++y) {
            ConstraintSpec s{{x, y}, Polarity::conflicts, {}};
            for (Value a = 0; a < d; ++a)
                s.tuples.push_back({a, a});
            specs.push_back(std::move(s));
        }
    std::vector<int> sizes(static_cast<std::size_t>(k), d);
    return build_network(sizes, specs);
}

ConstraintNetwork draw_sample(const SampleSpec &spec, std::uint64_t index) {
    Rng rng(derive_seed(spec.seed, index));
    ModelBParams p;
    p.n = rng.between(spec.n_min, spec.n_max);
    p.d = rng.between(spec.d_min, spec.d_max);
    p.density = spec.density_min + (spec.density_max - spec.density_min) * rng.unit();
    p.tightness = spec.tightness_min + (spec.tightness_max - spec.tightness_min) * rng.unit();
    while (model_b_forbidden_count(p.d, p.tightness) >= p.d * p.d)
        p.tightness *= 0.9;
    auto specs = model_b_specs(p, rng);

    int extras = spec.extra_max > 0 ? rng.between(spec.extra_min, spec.extra_max) : 0;
    std::vector<std::vector<VarId>> used;
    for (int i = 0; i < extras; ++i) {
        int arity = i == 0 ? 3 : rng.between(3, std::max(3, spec.extra_arity_max));
        if (arity > p.n)
            break;
        std::vector<VarId> scope;
        bool fresh = false;
        for (int attempt = 0; attempt < 20 && !fresh; ++attempt) {
            auto picks = choose_distinct(rng, static_cast<std::size_t>(p.n), static_cast<std::size_t>(arity));
            scope.assign(picks.begin(), picks.end());
            auto key = scope;
            std::sort(key.begin(), key.end());
            fresh = std::find(used.begin(), used.end(), key) == used.end();
            if (fresh)
                used.push_back(key);
        }
        if (!fresh)
            continue;
        std::size_t product = 1;
        for (int j = 0; j < arity; ++j)
            product *= static_cast<std::size_t>(p.d);
        double t = 0.1 + 0.6 * rng.unit();
        auto k = static_cast<std::size_t>(std::clamp<long long>(round_half_up(t * static_cast<double>(product)), 1,
                                                                static_cast<long long>(product) - 1));
        ConstraintSpec s;
        s.scope = scope;
        s.polarity = Polarity::conflicts;
        auto chosen = choose_distinct(rng, product, k);
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t cell : chosen) {
            Tuple tuple(static_cast<std::size_t>(arity));
            for (int j = arity - 1; j >= 0; --j) {
                tuple[static_cast<std::size_t>(j)] = static_cast<Value>(cell % static_cast<std::size_t>(p.d));
                cell /= static_cast<std::size_t>(p.d);
            }
            s.tuples.push_back(std::move(tuple));
        }
        specs.push_back(std::move(s));
    }
    std::vector<int> sizes(static_cast<std::size_t>(p.n), p.d);
    return build_network(sizes, specs);
}

std::vector<double> tightness_grid(double from, double to, double step) {
    if (!(step > 0))
        throw ModelError("grid step must be positive");
    std::vector<double> grid;
    for (long long i = 0;; ++i) {
        double t = std::round((from + static_cast<double>(i) * step) * 1e9) / 1e9;
        if (t > to + 1e-9)
            break;
        grid.push_back(t);
    }
    return grid;
}

PhaseScan phase_scan(const PhaseScanConfig &config, const std::function<void(double)> &on_point) {
    static constexpr Preprocessing kChain[] = {Preprocessing::gac, Preprocessing::sac1, Preprocessing::scdc1,
                                               Preprocessing::sdc1};
    auto chain_rank = [](Preprocessing p) -> int {
        for (int i = 0; i < 4; ++i)
            if (kChain[i] == p)
                return i;
        return -1;
    };

    PhaseScan scan;
    const std::size_t checks = config.checks.size();
    scan.crossings.assign(checks, std::nullopt);
    std::vector<double> previous(checks, 0.0);
    std::vector<bool> crossed(checks, false);

    for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
        double t = config.t_grid[ti];
        if (on_point)
            on_point(t);
        std::vector<std::size_t> unsat(checks, 0);
        std::vector<double> total_ms(checks, 0.0);
        for (std::size_t s = 0; s < config.samples; ++s) {
            ModelBParams p{config.n, config.d, config.density, t, derive_seed(config.seed, s)};
            auto base = generate_model_b(p);
            int weakest_detect = 5, strongest_miss = -1;
            for (std::size_t c = 0; c < checks; ++c) {
                ConstraintNetwork copy = base;
                auto report = run_enforcer(config.checks[c], copy);
                total_ms[c] += report.elapsed_ms();
                int rank = chain_rank(config.checks[c]);
                if (!report.consistent) {
                    ++unsat[c];
                    if (rank >= 0)
                        weakest_detect = std::min(weakest_detect, rank);
                } else if (rank >= 0) {
                    strongest_miss = std::max(strongest_miss, rank);
                }
            }
            if (strongest_miss > weakest_detect)
                ++scan.monotonicity_violations;
        }
        for (std::size_t c = 0; c < checks; ++c) {
            PhaseRow row;
            row.t = t;
            row.check = config.checks[c];
            row.samples = config.samples;
            row.unsat = unsat[c];
            row.frac_unsat = config.samples ? static_cast<double>(unsat[c]) / static_cast<double>(config.samples) : 0;
            row.mean_ms = config.samples ? total_ms[c] / static_cast<double>(config.samples) : 0;
            if (!crossed[c] && row.frac_unsat >= 0.5) {
                crossed[c] = true;
                row.crossing = true;
                if (ti == 0) {
                    scan.crossings[c] = t;
                } else {
                    double t0 = config.t_grid[ti - 1], f0 = previous[c];
                    scan.crossings[c] = t0 + (0.5 - f0) / (row.frac_unsat - f0) * (t - t0);
                }
            }
            previous[c] = row.frac_unsat;
            scan.rows.push_back(row);
        }
    }
    return scan;
}

void write_phase_csv(std::ostream &out, const PhaseScan &scan) {
    out << "t,check,samples,frac_unsat,mean_ms,crossing_flag\n";
    for (const auto &r : scan.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%.4g,%s,%zu,%.6g,%.6g,%d\n", r.t, std::string(to_string(r.check)).c_str(),
                      r.samples, r.frac_unsat, r.mean_ms, r.crossing ? 1 : 0);
        out << line;
    }
}

} // namespace secord
