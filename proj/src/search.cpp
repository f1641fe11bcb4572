#include "secord/search.hpp"

#include "secord/errors.hpp"
#include "secord/propagation.hpp"
#include "secord/trail.hpp"

namespace secord {

std::optional<Heuristic> heuristic_from_string(std::string_view text) {
    if (text == "ddeg" || text == "dom/ddeg" || text == "dom_ddeg")
        return Heuristic::dom_ddeg;
    if (text == "wdeg" || text == "dom/wdeg" || text == "dom_wdeg")
        return Heuristic::dom_wdeg;
    return std::nullopt;
}

std::string_view to_string(Heuristic h) { return h == Heuristic::dom_ddeg ? "dom/ddeg" : "dom/wdeg"; }

std::string_view to_string(SearchResult::Outcome o) {
    switch (o) {
    case SearchResult::Outcome::sat:
        return "sat";
    case SearchResult::Outcome::unsat:
        return "unsat";
    case SearchResult::Outcome::limit:
        return "limit";
    }
    return "?";
}

VarId select_variable(const ConstraintNetwork &network, Heuristic heuristic, std::span<const std::uint8_t> assigned) {
    VarId best = -1;
    std::uint64_t best_size = 0, best_deg = 0;
    for (VarId x = 0; x < network.num_variables(); ++x) {
        if (assigned[static_cast<std::size_t>(x)])
            continue;
        std::uint64_t deg = 0;
        for (ConstraintId cid : network.constraints_of(x)) {
            const auto &c = network.constraint(cid);
            bool live = false;
            for (VarId y : c.scope())
                if (y != x && !assigned[static_cast<std::size_t>(y)]) {
                    live = true;
                    break;
                }
            if (live)
                deg += heuristic == Heuristic::dom_wdeg ? c.weight() : 1;
        }
        auto size = static_cast<std::uint64_t>(network.domain(x).size());
        bool better;
        if (best < 0)
            better = true;
        else if (deg == 0)
            better = false;
        else if (best_deg == 0)
            better = true;
        else
            better = size * best_deg < best_size * deg;
        if (better) {
            best = x;
            best_size = size;
            best_deg = deg;
        }
    }
    if (best < 0)
        throw ModelError("select_variable: every variable is assigned");
    return best;
}

namespace {

class Mac {
  public:
    Mac(ConstraintNetwork &network, const SearchConfig &config, SearchResult &result)
        : net_(network), config_(config), result_(result),
          assigned_(static_cast<std::size_t>(network.num_variables()), 0),
          deadline_(std::chrono::steady_clock::now() + config.time_limit) {}

    void run() {
        for (ConstraintId c = 0; c < net_.num_constraints(); ++c)
            net_.constraint(c).set_weight(1);
        auto root = gac_.enforce(net_);
        if (!root.ok()) {
            result_.outcome = SearchResult::Outcome::unsat;
            return;
        }
        explore();
        if (limited_)
            result_.outcome = SearchResult::Outcome::limit;
        else if (result_.solution_count > 0)
            result_.outcome = SearchResult::Outcome::sat;
        else
            result_.outcome = SearchResult::Outcome::unsat;
    }

  private:
    bool propagate(VarId x) {
        VarId touched[] = {x};
        auto out = gac_.enforce_from(net_, touched, &trail_);
        if (!out.ok() && out.culprit)
            net_.constraint(*out.culprit).bump_weight();
        return out.ok();
    }

    bool out_of_budget() {
        if (result_.nodes >= config_.node_limit)
            return true;
        if ((result_.nodes & 255) == 0 && std::chrono::steady_clock::now() >= deadline_)
            return true;
        return false;
    }

    void explore() {
        if (stop_)
            return;
        if (depth_ == net_.num_variables()) {
            ++result_.solution_count;
            if (!result_.solution) {
                std::vector<Assignment> pairs;
                for (VarId x = 0; x < net_.num_variables(); ++x)
                    pairs.push_back({x, net_.domain(x).first()});
                result_.solution = Instantiation(std::move(pairs));
            }
            if (config_.mode == SearchMode::first_solution)
                stop_ = true;
            return;
        }
        if (out_of_budget()) {
            limited_ = stop_ = true;
            return;
        }
        VarId x = select_variable(net_, config_.heuristic, assigned_);
        Value a = net_.domain(x).first();

        trail_.push(net_);
        ++result_.nodes;
        assigned_[static_cast<std::size_t>(x)] = 1;
        ++depth_;
        assign(net_, x, a, &trail_);
        if (propagate(x))
            explore();
        --depth_;
        assigned_[static_cast<std::size_t>(x)] = 0;
        trail_.pop(net_);
        if (stop_)
            return;

        trail_.push(net_);
        net_.remove_value(x, a, &trail_);
        if (!net_.failed() && propagate(x))
            explore();
        trail_.pop(net_);
    }

    ConstraintNetwork &net_;
    const SearchConfig &config_;
    SearchResult &result_;
    GacPropagator gac_;
    Trail trail_;
    std::vector<std::uint8_t> assigned_;
    int depth_ = 0;
    bool stop_ = false;
    bool limited_ = false;
    std::chrono::steady_clock::time_point deadline_;
};

} // namespace

SearchResult mac_solve(const ConstraintNetwork &network, const SearchConfig &config) {
    if (config.node_limit == 0 || config.time_limit.count() <= 0)
        throw ModelError("search limits must be positive");
    auto start = std::chrono::steady_clock::now();
    SearchResult result;
    ConstraintNetwork work = network;
    result.preprocessing_report = run_enforcer(config.preprocessing, work);
    if (!result.preprocessing_report.consistent || work.failed()) {
        result.outcome = SearchResult::Outcome::unsat;
    } else {
        Mac(work, config, result).run();
    }
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

} // namespace secord
