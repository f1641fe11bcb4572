#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "secord/errors.hpp"
#include "secord/generator.hpp"
#include "secord/oracle.hpp"
#include "secord/search.hpp"

using namespace secord;

TEST(Search, FindsAndVerifiesSolution) {
    auto p = fixtures::less_than();
    auto r = mac_solve(p, {});
    ASSERT_EQ(r.outcome, SearchResult::Outcome::sat);
    ASSERT_TRUE(r.solution.has_value());
    EXPECT_EQ(r.solution->size(), 2u);
    EXPECT_TRUE(is_locally_consistent(p, *r.solution));
}

TEST(Search, CountsAllSolutions) {
    SearchConfig cfg;
    cfg.mode = SearchMode::count_all;
    EXPECT_EQ(mac_solve(fixtures::less_than(), cfg).solution_count, 3u);
    EXPECT_EQ(mac_solve(not_equal_clique(3, 3), cfg).solution_count, 6u);
    auto unsat = mac_solve(fixtures::odd_cycle(), cfg);
    EXPECT_EQ(unsat.outcome, SearchResult::Outcome::unsat);
    EXPECT_EQ(unsat.solution_count, 0u);
}

TEST(Search, PreprocessingSettlesTriangleWithoutNodes) {
    SearchConfig cfg;
    cfg.preprocessing = Preprocessing::sdc1;
    auto r = mac_solve(fixtures::triangle(), cfg);
    EXPECT_EQ(r.outcome, SearchResult::Outcome::unsat);
    EXPECT_EQ(r.nodes, 0u);
    EXPECT_FALSE(r.preprocessing_report.consistent);
    cfg.preprocessing = Preprocessing::none;
    EXPECT_GE(mac_solve(fixtures::triangle(), cfg).nodes, 1u);
}

TEST(Search, NodeLimitIsReported) {
    SearchConfig cfg;
    cfg.mode = SearchMode::count_all;
    cfg.node_limit = 3;
    auto r = mac_solve(not_equal_clique(6, 6), cfg);
    EXPECT_EQ(r.outcome, SearchResult::Outcome::limit);
    EXPECT_LE(r.nodes, 3u);
    cfg.node_limit = 0;
    EXPECT_THROW(mac_solve(fixtures::less_than(), cfg), ModelError);
}

TEST(Search, InputIsUntouched) {
    auto p = fixtures::odd_cycle();
    auto before = p;
    SearchConfig cfg;
    cfg.preprocessing = Preprocessing::scdc1;
    mac_solve(p, cfg);
    EXPECT_TRUE(p == before);
}

TEST(Search, VariableSelection) {
    // x0 has the smaller domain; x2 is unconstrained and ranks last.
    auto p = fixtures::make({2, 3, 2}, {{{0, 1}, Polarity::conflicts, {{0, 0}}}});
    std::vector<std::uint8_t> none(3, 0);
    EXPECT_EQ(select_variable(p, Heuristic::dom_ddeg, none), 0);
    std::vector<std::uint8_t> first(3, 0);
    first[0] = 1;
    // Once x0 is assigned nothing has a live degree; the smallest id wins.
    EXPECT_EQ(select_variable(p, Heuristic::dom_ddeg, first), 1);
    p.constraint(0).set_weight(5);
    EXPECT_EQ(select_variable(p, Heuristic::dom_wdeg, none), 0);
}

TEST(Search, HeuristicNames) {
    EXPECT_EQ(heuristic_from_string("wdeg"), Heuristic::dom_wdeg);
    EXPECT_EQ(heuristic_from_string("dom/ddeg"), Heuristic::dom_ddeg);
    EXPECT_FALSE(heuristic_from_string("random").has_value());
}

TEST(Search, MatchesEnumerationOnSamples) {
    SampleSpec spec;
    spec.extra_max = 1;
    SearchConfig cfg;
    cfg.mode = SearchMode::count_all;
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto p = draw_sample(spec, i);
        EXPECT_EQ(mac_solve(p, cfg).solution_count, enumerate_solutions(p, 1u << 20).size()) << "sample " << i;
    }
}
