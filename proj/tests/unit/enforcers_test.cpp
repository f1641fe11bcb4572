#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "secord/enforcers.hpp"
#include "secord/errors.hpp"
#include "secord/generator.hpp"
#include "secord/oracle.hpp"

using namespace secord;

namespace {

bool same(const ConstraintNetwork &a, const ConstraintNetwork &b) {
    return compare(a, b, NogoodOrder::subsumption) == Ordering::equal;
}

SampleSpec binary_spec() {
    SampleSpec s;
    s.n_min = 3;
    s.n_max = 5;
    s.d_max = 3;
    return s;
}

} // namespace

TEST(Enforcers, SdcMatchesStrongPathConsistency) {
    for (std::uint64_t i = 0; i < 60; ++i) {
        auto p = draw_sample(binary_spec(), i);
        auto q = p;
        enforce_sdc(q);
        EXPECT_TRUE(same(q, oracle_closure(Consistency::sPC, p))) << "sample " << i;
    }
}

TEST(Enforcers, ScdcMatchesSacPlusCdc) {
    SampleSpec spec = binary_spec();
    spec.extra_min = 0;
    spec.extra_max = 1;
    for (std::uint64_t i = 0; i < 60; ++i) {
        auto p = draw_sample(spec, i);
        auto q = p;
        enforce_scdc(q);
        EXPECT_TRUE(same(q, oracle_closure(Consistency::SACplusCDC, p))) << "sample " << i;
    }
}

TEST(Enforcers, ScpcMatchesOracle) {
    for (std::uint64_t i = 0; i < 60; ++i) {
        auto p = draw_sample(binary_spec(), i);
        auto q = p;
        enforce_scpc(q);
        EXPECT_TRUE(same(q, oracle_closure(Consistency::sCPC, p))) << "sample " << i;
    }
}

TEST(Enforcers, Sac1MatchesOracle) {
    SampleSpec spec = binary_spec();
    spec.extra_max = 1;
    for (std::uint64_t i = 0; i < 60; ++i) {
        auto p = draw_sample(spec, i);
        auto q = p;
        enforce_sac1(q);
        EXPECT_TRUE(same(q, oracle_closure(Consistency::SAC, p))) << "sample " << i;
    }
}

TEST(Enforcers, ScdcNeverAddsConstraints) {
    for (std::uint64_t i = 0; i < 30; ++i) {
        auto p = draw_sample(binary_spec(), i);
        int before = p.num_constraints();
        auto r = enforce_scdc(p);
        EXPECT_EQ(r.added_constraints, 0u);
        EXPECT_EQ(p.num_constraints(), before);
    }
}

TEST(Enforcers, SecondRunHasNoEffect) {
    for (auto which : {Preprocessing::sac1, Preprocessing::scpc, Preprocessing::scdc1, Preprocessing::sdc1}) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            auto p = draw_sample(binary_spec(), i);
            run_enforcer(which, p);
            auto again = p;
            auto r = run_enforcer(which, again);
            EXPECT_EQ(r.deleted_values + r.deleted_tuples + r.added_constraints, 0u) << to_string(which);
            EXPECT_EQ(compare(again, p), Ordering::equal);
        }
    }
}

TEST(Enforcers, TwinTernaryDetectedBySingletonBased) {
    auto a = fixtures::twin_ternary();
    EXPECT_FALSE(enforce_scdc(a).consistent);
    auto b = fixtures::twin_ternary();
    EXPECT_FALSE(enforce_sac1(b).consistent);
    auto c = fixtures::twin_ternary();
    EXPECT_FALSE(enforce_sdc(c).consistent);
}

TEST(Enforcers, TriangleDetectedByAllButGac) {
    for (auto which : {Preprocessing::sac1, Preprocessing::scpc, Preprocessing::scdc1, Preprocessing::sdc1}) {
        auto p = fixtures::triangle();
        EXPECT_FALSE(run_enforcer(which, p).consistent) << to_string(which);
    }
    auto p = fixtures::triangle();
    EXPECT_TRUE(run_enforcer(Preprocessing::gac, p).consistent);
}

TEST(Enforcers, ReportCountsDeletions) {
    auto p = fixtures::less_than();
    auto r = enforce_sdc(p);
    EXPECT_TRUE(r.consistent);
    EXPECT_EQ(r.deleted_values, 2u);
    EXPECT_GE(r.passes, 1u);
}

TEST(Enforcers, SdcRefusesOverBudget) {
    ModelBParams mb;
    mb.n = 30;
    mb.d = 10;
    mb.density = 0.2;
    mb.tightness = 0.1;
    auto p = generate_model_b(mb);
    EnforceOptions opt;
    opt.sdc_entry_budget = 1000;
    auto before = p;
    EXPECT_THROW(enforce_sdc(p, opt), ResourceError);
    EXPECT_EQ(compare(p, before), Ordering::equal);
}

TEST(Enforcers, PreprocessingNames) {
    EXPECT_EQ(preprocessing_from_string("sdc1"), Preprocessing::sdc1);
    EXPECT_EQ(preprocessing_from_string("ac"), Preprocessing::gac);
    EXPECT_EQ(preprocessing_from_string("sac"), Preprocessing::sac1);
    EXPECT_FALSE(preprocessing_from_string("xyz").has_value());
    for (auto p : {Preprocessing::none, Preprocessing::gac, Preprocessing::sac1, Preprocessing::scpc,
                   Preprocessing::scdc1, Preprocessing::sdc1})
        EXPECT_EQ(preprocessing_from_string(to_string(p)), p);
}
