#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include <cvoa/engine/ledger.hpp>

using namespace cvoa;

namespace {

auto constant(double v) {
    return [v] { return v; };
}

auto no_draw() {
    return []() -> double { throw std::logic_error("no draw expected"); };
}

} // namespace

TEST(Ledger, DeadCandidateIgnoredWithoutDraws) {
    PopulationLedger<int> ledger;
    EpidemicParameters p;
    p.p_isolation = 0.0;
    p.p_reinfection = 1.0;
    ASSERT_TRUE(ledger.kill(7));
    EXPECT_EQ(ledger.admit(7, p, no_draw()), Disposition::Ignored);
    EXPECT_FALSE(ledger.is_in_flight(7));
}

TEST(Ledger, FreshCandidateBranches) {
    PopulationLedger<int> ledger;
    EpidemicParameters p;
    p.p_isolation = 0.0;
    EXPECT_EQ(ledger.admit(1, p, constant(0.3)), Disposition::AddedToNewInfected);
    EXPECT_TRUE(ledger.is_in_flight(1));
    // Already waiting in a new-infected population.
    EXPECT_EQ(ledger.admit(1, p, no_draw()), Disposition::Ignored);

    p.p_isolation = 1.0;
    EXPECT_EQ(ledger.admit(2, p, constant(0.999)), Disposition::Isolated);
    EXPECT_TRUE(ledger.is_recovered(2));
    EXPECT_EQ(ledger.isolated_total(), 1u);

    p.p_isolation = 0.5;
    EXPECT_EQ(ledger.admit(3, p, constant(0.5)), Disposition::Isolated); // R4 > p is strict
    EXPECT_EQ(ledger.admit(4, p, constant(0.51)), Disposition::AddedToNewInfected);
}

TEST(Ledger, RecoveredCandidateBranches) {
    PopulationLedger<int> ledger;
    EpidemicParameters p;
    ASSERT_TRUE(ledger.recover(5));
    p.p_reinfection = 1.0;
    EXPECT_EQ(ledger.admit(5, p, constant(0.99)), Disposition::Reinfected);
    EXPECT_FALSE(ledger.is_recovered(5));
    EXPECT_TRUE(ledger.is_in_flight(5));

    ASSERT_TRUE(ledger.recover(6));
    p.p_reinfection = 0.14;
    EXPECT_EQ(ledger.admit(6, p, constant(0.14)), Disposition::Ignored); // R3 < p is strict
    EXPECT_TRUE(ledger.is_recovered(6));
}

TEST(Ledger, KillAndRecoverKeepSetsDisjoint) {
    PopulationLedger<int> ledger;
    ASSERT_TRUE(ledger.recover(1));
    ASSERT_TRUE(ledger.kill(1));
    EXPECT_FALSE(ledger.is_recovered(1));
    EXPECT_FALSE(ledger.recover(1));
    EXPECT_FALSE(ledger.kill(1));
    EXPECT_EQ(ledger.deaths_total(), 1u);
    EXPECT_EQ(ledger.recovered_total(), 1u);

    EpidemicParameters p;
    p.p_isolation = 0.0;
    ASSERT_EQ(ledger.admit(2, p, constant(0.5)), Disposition::AddedToNewInfected);
    EXPECT_FALSE(ledger.recover(2)); // still in a new-infected population
    ledger.release(2);
    EXPECT_TRUE(ledger.recover(2));
}

TEST(Ledger, CountersAreCumulative) {
    PopulationLedger<int> ledger;
    EpidemicParameters p;
    p.p_reinfection = 1.0;
    ledger.recover(1);
    ledger.admit(1, p, constant(0.0));
    ledger.release(1);
    ledger.recover(1);
    EXPECT_EQ(ledger.recovered_total(), 2u);
    EXPECT_EQ(ledger.recovered_size(), 1u);
}

TEST(SharedLedger, ConcurrentReinfectionHappensOnce) {
    for (int round = 0; round < 200; ++round) {
        SharedLedger<int> ledger(8);
        ledger.recover(42);
        EpidemicParameters p;
        p.p_reinfection = 1.0;
        std::atomic<int> reinfected{0};
        {
            std::vector<std::jthread> threads;
            for (int t = 0; t < 4; ++t)
                threads.emplace_back([&] {
                    if (ledger.admit(42, p, constant(0.0)) == Disposition::Reinfected) ++reinfected;
                });
        }
        ASSERT_EQ(reinfected.load(), 1);
        ASSERT_FALSE(ledger.is_recovered(42));
        ASSERT_TRUE(ledger.is_in_flight(42));
    }
}

TEST(SharedLedger, RandomConcurrentTrafficPreservesInvariants) {
    SharedLedger<int> ledger(16);
    EpidemicParameters p;
    {
        std::vector<std::jthread> threads;
        for (int t = 0; t < 6; ++t)
            threads.emplace_back([&, t] {
                RandomSource rng(static_cast<std::uint64_t>(t));
                for (int i = 0; i < 20000; ++i) {
                    const int g = static_cast<int>(rng.uniform_int(0, 199));
                    switch (rng.index(4)) {
                    case 0: ledger.kill(g); break;
                    case 1: ledger.recover(g); break;
                    case 2: ledger.admit(g, p, [&rng] { return rng.uniform(); }); break;
                    default: ledger.release(g);
                    }
                }
            });
    }
    auto dead = ledger.dead_members();
    auto recovered = ledger.recovered_members();
    std::sort(dead.begin(), dead.end());
    std::sort(recovered.begin(), recovered.end());
    std::vector<int> both;
    std::set_intersection(dead.begin(), dead.end(), recovered.begin(), recovered.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
    for (int g : recovered) EXPECT_FALSE(ledger.is_in_flight(g));
    EXPECT_EQ(ledger.deaths_total(), dead.size());
}
