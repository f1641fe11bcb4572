#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "secord/errors.hpp"
#include "secord/oracle.hpp"

using namespace secord;

TEST(Oracle, NamesRoundTrip) {
    for (auto c : all_consistencies())
        EXPECT_EQ(consistency_from_string(name(c)), c) << name(c);
    EXPECT_EQ(consistency_from_string("ac"), Consistency::GAC);
    EXPECT_EQ(consistency_from_string("sac+cdc"), Consistency::SACplusCDC);
    EXPECT_FALSE(consistency_from_string("nope").has_value());
}

TEST(Oracle, Decomposition) {
    EXPECT_EQ(value_part(Consistency::sCDC), ValueTest::GAC);
    EXPECT_EQ(pair_part(Consistency::sCDC), PairTest::CDC);
    EXPECT_EQ(value_part(Consistency::SACplusCDC), ValueTest::SAC);
    EXPECT_EQ(value_part(Consistency::PC), ValueTest::none);
    EXPECT_EQ(pair_part(Consistency::BiSAC), PairTest::none);
    EXPECT_TRUE(is_conservative(PairTest::CPC));
    EXPECT_FALSE(is_conservative(PairTest::DC));
}

TEST(Oracle, ValueChecksOnTriangle) {
    auto t = fixtures::triangle();
    EXPECT_TRUE(check_value(Consistency::GAC, t, 0, 0));
    EXPECT_FALSE(check_value(Consistency::SAC, t, 0, 0));
    EXPECT_FALSE(check_value(Consistency::IC, t, 0, 0));
}

TEST(Oracle, PairChecksOnTwinTernary) {
    auto p = fixtures::twin_ternary();
    EXPECT_FALSE(check_pair(Consistency::DC, p, 2, 0, 3, 0));
    EXPECT_FALSE(check_pair(Consistency::TwoSAC, p, 2, 0, 3, 0));
    EXPECT_TRUE(check_pair(Consistency::PC, p, 2, 0, 3, 0));
    EXPECT_TRUE(check_pair(Consistency::ThreeC, p, 2, 0, 3, 0));
}

TEST(Oracle, PairCheckNeedsLocalConsistency) {
    auto p = fixtures::less_than();
    EXPECT_THROW(check_pair(Consistency::PC, p, 0, 2, 1, 0), ModelError);
    EXPECT_THROW(check_pair(Consistency::GAC, p, 0, 0, 1, 1), ModelError);
}

TEST(Oracle, PathsAndSupports) {
    auto p = fixtures::odd_cycle();
    Path closed(p, {0, 1, 2, 3, 0, 1});
    EXPECT_TRUE(closed.is_graph_path());
    EXPECT_TRUE(closed.is_closed());
    Path open(p, {0, 1, 2});
    EXPECT_FALSE(open.is_closed());
    auto s = check_path_support(p, open, 0, 0);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(*s, (Tuple{0, 0, 0}));
    EXPECT_FALSE(check_path_support(p, open, 0, 1).has_value());
    Path skip(p, {0, 2});
    EXPECT_FALSE(skip.is_graph_path());
    EXPECT_THROW(Path(p, {1, 1}), ModelError);
}

TEST(Oracle, OddCycleIsArcButNotPathConsistent) {
    auto p = fixtures::odd_cycle();
    EXPECT_TRUE(is_consistent(Consistency::GAC, p));
    EXPECT_FALSE(is_consistent(Consistency::PC, p));
    EXPECT_FALSE(check_ppc(p).consistent);
    EXPECT_FALSE(every_graph_path_consistent(p));
    EXPECT_TRUE(enumerate_solutions(p, 10).empty());
    auto v = find_violation(Consistency::SAC, p);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->nogood.size(), 1u);
}

TEST(Oracle, ClosureOfPcWipesOddCycle) {
    EXPECT_TRUE(oracle_closure(Consistency::PC, fixtures::odd_cycle()).failed());
    EXPECT_TRUE(oracle_closure(Consistency::sPC, fixtures::odd_cycle()).failed());
    // No triangle in the constraint graph, so conservative path consistency sees nothing.
    EXPECT_FALSE(oracle_closure(Consistency::sCPC, fixtures::odd_cycle()).failed());
}

TEST(Oracle, ClosuresAreFixpoints) {
    auto p = fixtures::less_than();
    for (auto c : all_consistencies()) {
        auto q = oracle_closure(c, p);
        EXPECT_TRUE(is_consistent(c, q)) << name(c);
        EXPECT_EQ(compare(oracle_closure(c, q), q, NogoodOrder::subsumption), Ordering::equal) << name(c);
    }
}

TEST(Oracle, EnumerationIsLexicographic) {
    auto sols = enumerate_solutions(fixtures::less_than(), 10);
    ASSERT_EQ(sols.size(), 3u);
    EXPECT_EQ(sols[0], (Instantiation{{0, 0}, {1, 1}}));
    EXPECT_EQ(sols[2], (Instantiation{{0, 1}, {1, 2}}));
    EXPECT_EQ(enumerate_solutions(fixtures::less_than(), 2).size(), 2u);
}

TEST(Oracle, RefusesLargeNetworks) {
    auto big = not_equal_clique(9, 3);
    EXPECT_THROW(require_oracle_scale(big), ResourceError);
    EXPECT_THROW(oracle_closure(Consistency::PC, big), ResourceError);
    OracleCaps caps;
    caps.max_variables = 10;
    EXPECT_NO_THROW(require_oracle_scale(big, caps));
    EXPECT_THROW(enumerate_solutions(not_equal_clique(9, 8), 1, 100), ResourceError);
}

TEST(Oracle, FailedNetworkIsVacuouslyConsistent) {
    auto p = fixtures::less_than();
    for (Value a : {0, 1, 2})
        p.remove_value(1, a);
    EXPECT_TRUE(is_consistent(Consistency::sPC, p));
    EXPECT_FALSE(find_violation(Consistency::GAC, p).has_value());
}
