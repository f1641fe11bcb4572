#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "secord/generator.hpp"
#include "secord/oracle.hpp"
#include "secord/propagation.hpp"
#include "secord/trail.hpp"

using namespace secord;

TEST(Gac, LessThanChain) {
    auto p = fixtures::less_than();
    auto out = enforce_gac(p);
    EXPECT_TRUE(out.ok());
    EXPECT_EQ(p.domain(0).values(), (std::vector<Value>{0, 1}));
    EXPECT_EQ(p.domain(1).values(), (std::vector<Value>{1, 2}));
    EXPECT_EQ(out.deleted_values, 2u);
}

TEST(Gac, WipeoutNamesCulprit) {
    auto p = fixtures::make({2, 2}, {{{0, 1}, Polarity::supports, {}}});
    auto out = enforce_gac(p);
    EXPECT_FALSE(out.ok());
    EXPECT_TRUE(out.culprit.has_value());
    EXPECT_TRUE(p.failed());
}

TEST(Gac, TwinTernaryIsAlreadyGac) {
    auto p = fixtures::twin_ternary();
    auto before = p;
    EXPECT_TRUE(enforce_gac(p).ok());
    EXPECT_EQ(compare(p, before), Ordering::equal);
}

TEST(Gac, AgreesWithNaiveOracle) {
    SampleSpec spec;
    spec.extra_max = 2;
    spec.extra_arity_max = 4;
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto p = draw_sample(spec, i);
        auto q = p;
        enforce_gac(q);
        EXPECT_EQ(compare(q, naive_gac(p), NogoodOrder::subsumption), Ordering::equal) << "sample " << i;
    }
}

TEST(Gac, ShuffledQueueReachesTheSameFixpoint) {
    SampleSpec spec;
    spec.extra_max = 1;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto p = draw_sample(spec, i);
        auto a = p, b = p;
        GacPropagator(i + 99).enforce(a);
        enforce_gac(b);
        EXPECT_EQ(compare(a, b), Ordering::equal);
    }
}

TEST(Singleton, CheckRestoresNetworkAndReportsDeletions) {
    auto p = fixtures::triangle();
    auto before = p;
    Trail trail;
    std::size_t seen = 0;
    auto out = singleton_check(p, 0, 0, trail, [&](const SingletonView &v) { seen = v.deletions.size(); });
    EXPECT_FALSE(out.ok());
    EXPECT_GT(seen, 0u);
    EXPECT_TRUE(p == before);
    EXPECT_EQ(trail.depth(), 0u);
}

TEST(Singleton, TwinTernaryWipesOnY) {
    auto p = fixtures::twin_ternary();
    Trail trail;
    EXPECT_FALSE(singleton_check(p, 2, 0, trail).ok());
    EXPECT_FALSE(singleton_check(p, 2, 1, trail).ok());
    // w = a already needs x = a and x = b at once.
    EXPECT_FALSE(singleton_check(p, 0, 0, trail).ok());
    EXPECT_TRUE(enforce_gac(p).ok());
}
