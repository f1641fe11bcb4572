#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "secord/enforcers.hpp"
#include "secord/network.hpp"

namespace secord {

/// Model B: e = round(density * n(n-1)/2) distinct pairs, each forbidding round(t * d^2) distinct tuples.
struct ModelBParams {
    int n = 10;
    int d = 3;
    double density = 0.5;
    double tightness = 0.5;
    std::uint64_t seed = 0;
};

/// Round half up, robust to binary noise like 0.58 * 25 = 14.499999...
long long round_half_up(double x);
int model_b_constraint_count(int n, double density);
int model_b_forbidden_count(int d, double tightness);

/// Throws ModelError on out-of-range parameters (including t large enough to forbid every tuple).
ConstraintNetwork generate_model_b(const ModelBParams &p);

/// k variables over {0..d-1}, pairwise different: unsatisfiable whenever k > d.
ConstraintNetwork not_equal_clique(int k, int d);

/// Small random networks for property tests and lattice sampling: a Model B core with
/// random density and tightness, optionally plus a few non-binary conflicts constraints.
struct SampleSpec {
    int n_min = 3;
    int n_max = 6;
    int d_min = 2;
    int d_max = 3;
    double density_min = 0.3;
    double density_max = 1.0;
    double tightness_min = 0.1;
    double tightness_max = 0.9;
    int extra_min = 0;       ///< non-binary constraints added on top of the binary core
    int extra_max = 0;
    int extra_arity_max = 3; ///< the first extra constraint is always ternary
    std::uint64_t seed = 1;
};

ConstraintNetwork draw_sample(const SampleSpec &spec, std::uint64_t index);

struct PhaseScanConfig {
    int n = 20;
    int d = 6;
    double density = 0.5;
    std::vector<double> t_grid;
    std::size_t samples = 50;
    std::vector<Preprocessing> checks;
    std::uint64_t seed = 0;
};

struct PhaseRow {
    double t = 0;
    Preprocessing check = Preprocessing::gac;
    std::size_t samples = 0;
    std::size_t unsat = 0;
    double frac_unsat = 0;
    double mean_ms = 0;
    bool crossing = false; ///< first grid point where frac_unsat reaches one half
};

struct PhaseScan {
    std::vector<PhaseRow> rows;
    /// Interpolated tightness where each check first detects half of the instances, per check.
    std::vector<std::optional<double>> crossings;
    /// Instances where a weaker check of the chain gac, sac1, scdc1, sdc1 saw unsat but a stronger one did not.
    std::size_t monotonicity_violations = 0;
};

/// Inclusive grid from `from` to `to`, cleaned of accumulated floating error.
std::vector<double> tightness_grid(double from, double to, double step);

PhaseScan phase_scan(const PhaseScanConfig &config,
                     const std::function<void(double t)> &on_point = {});

/// Header `t,check,samples,frac_unsat,mean_ms,crossing_flag`, one row per (t, check).
void write_phase_csv(std::ostream &out, const PhaseScan &scan);

} // namespace secord
