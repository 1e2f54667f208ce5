#include <gtest/gtest.h>

#include "hcpforge/hcpforge.hpp"
#include "oracles.hpp"

using namespace hcpforge;

namespace {
const SolveBudget kTenSeconds{10.0, std::nullopt, std::nullopt};
} // namespace

TEST(CountHc, SpecExamples)
{
    EXPECT_EQ(count_hc(complete_graph(4)).count, 3u);
    EXPECT_EQ(count_hc(complete_graph(3)).count, 1u);
    EXPECT_EQ(count_hc(gen_generalized_petersen(7, 2)).count, 7u);
    EXPECT_EQ(count_hc(gen_generalized_petersen(11, 2)).count, 0u);
    EXPECT_EQ(count_hc(complete_graph(7)).count, 360u);
    EXPECT_THROW(count_hc(Graph()), InvalidArgument);
}

TEST(CountHc, LimitAndBudget)
{
    const HcCount limited = count_hc(complete_graph(8), 5);
    EXPECT_EQ(limited.status, CountStatus::limit_reached);
    EXPECT_EQ(limited.count, 5u);
    const HcCount cut = count_hc(complete_graph(12), std::nullopt, {std::nullopt, 10, std::nullopt});
    EXPECT_EQ(cut.status, CountStatus::budget_exceeded);
    EXPECT_EQ(cut.solve_status(), SolveStatus::BUDGET_EXCEEDED);
}

TEST(CountHc, MatchesPermutationOracleOnAllSmallGraphs)
{
    for (int n = 1; n <= 6; ++n) {
        for (const Graph& g : oracle::all_graphs(n)) {
            ASSERT_EQ(count_hc(g).count, oracle::all_hcs_by_permutation(g).size());
        }
    }
}

TEST(CountHc, MatchesPermutationOracleOnRandomGraphsUpToEight)
{
    Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 7 + static_cast<int>(rng.below(2));
        const Graph g = oracle::random_graph(n, 0.3 + 0.5 * rng.uniform01(), rng);
        ASSERT_EQ(count_hc(g).count, oracle::all_hcs_by_permutation(g).size());
    }
}

TEST(CountHc, MatchesBacktrackingOnRandomCubic)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = gen_random_regular(20, 3, seed);
        ASSERT_EQ(count_hc(g).count, oracle::count_hcs_dfs(g));
    }
}

TEST(FindHcExact, SpecExamples)
{
    const Graph c6 = cycle_graph(6);
    const SolverOutcome c = find_hc_exact(c6);
    ASSERT_EQ(c.status, SolveStatus::FOUND);
    EXPECT_EQ(*c.tour, Tour({1, 2, 3, 4, 5, 6}));

    EXPECT_EQ(find_hc_exact(gen_generalized_petersen(5, 2)).status, SolveStatus::EXHAUSTED_NO_HC);

    for (int n = 3; n <= 16; ++n) {
        const auto sh = gen_sheehan(n);
        const SolverOutcome out = find_hc_exact(sh.graph, kTenSeconds);
        ASSERT_EQ(out.status, SolveStatus::FOUND);
        EXPECT_EQ(*out.tour, *sh.planted);
    }
}

TEST(FindHcExact, AgreesWithOracleOnAllSmallGraphs)
{
    for (int n = 1; n <= 6; ++n) {
        for (const Graph& g : oracle::all_graphs(n)) {
            const SolverOutcome out = find_hc_exact(g);
            const bool has = !oracle::all_hcs_by_permutation(g).empty();
            ASSERT_EQ(out.status, has ? SolveStatus::FOUND : SolveStatus::EXHAUSTED_NO_HC);
            if (has) {
                ASSERT_TRUE(is_hamiltonian_cycle(g, *out.tour));
            }
        }
    }
}

TEST(FindHcExact, AgreesWithOracleOnRandomGraphs)
{
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 7 + static_cast<int>(rng.below(8));
        const Graph g = oracle::random_graph(n, 0.15 + 0.4 * rng.uniform01(), rng);
        const SolverOutcome out = find_hc_exact(g);
        const bool has = oracle::count_hcs_dfs(g) > 0;
        ASSERT_EQ(out.status, has ? SolveStatus::FOUND : SolveStatus::EXHAUSTED_NO_HC);
        if (has) {
            ASSERT_TRUE(is_hamiltonian_cycle(g, *out.tour));
        }
    }
}

TEST(FindHcExact, SnarksAndPetersenFamily)
{
    EXPECT_EQ(find_hc_exact(gen_flower_snark(5)).status, SolveStatus::EXHAUSTED_NO_HC);
    EXPECT_EQ(find_hc_exact(gen_flower_snark(7)).status, SolveStatus::EXHAUSTED_NO_HC);
    EXPECT_EQ(find_hc_exact(gen_modified_flower_snark(5).graph).status, SolveStatus::FOUND);
    EXPECT_EQ(find_hc_exact(gen_generalized_petersen(17, 2)).status, SolveStatus::EXHAUSTED_NO_HC);
}

TEST(FindHcExact, NodeCapReportsBudget)
{
    const SolverOutcome out = find_hc_exact(gen_flower_snark(21), {std::nullopt, 3, std::nullopt});
    EXPECT_EQ(out.status, SolveStatus::BUDGET_EXCEEDED);
    EXPECT_FALSE(out.tour.has_value());
}

TEST(Prune, ChordOnC5IsRemoved)
{
    const Graph g(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 3}});
    const PruneResult pr = prune_non_hc_edges(g);
    EXPECT_FALSE(pr.graph.has_edge(1, 3));
    EXPECT_EQ(pr.graph.m(), 5);
    EXPECT_EQ(pr.removed, 1);
}

TEST(Prune, DetectsNonHamiltonian)
{
    const Graph path(4, {{1, 2}, {2, 3}, {3, 4}});
    EXPECT_TRUE(prune_non_hc_edges(path).non_hamiltonian);
}

TEST(Prune, PreservesCountsOnCorpus)
{
    Rng rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(11));
        const Graph g = oracle::random_graph(n, 0.2 + 0.4 * rng.uniform01(), rng);
        const PruneResult pr = prune_non_hc_edges(g);
        const std::uint64_t before = oracle::count_hcs_dfs(g);
        if (pr.non_hamiltonian) {
            ASSERT_EQ(before, 0u);
        } else {
            ASSERT_EQ(oracle::count_hcs_dfs(pr.graph), before);
        }
    }
}

TEST(FindHcHeuristic, SpecExamples)
{
    EXPECT_EQ(find_hc_heuristic(cycle_graph(4), kTenSeconds, 1).status, SolveStatus::FOUND);
    const SolverOutcome pet = find_hc_heuristic(gen_generalized_petersen(5, 2), {0.5, std::nullopt, std::nullopt}, 1);
    EXPECT_EQ(pet.status, SolveStatus::BUDGET_EXCEEDED);
    EXPECT_NE(pet.failure, FailureMode::none);
}

TEST(FindHcHeuristic, PlantedCubicThousand)
{
    int found = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PlantedInstance inst = gen_planted_cubic(1000, seed);
        const SolverOutcome out = find_hc_heuristic(inst.graph, kTenSeconds, seed);
        if (out.status == SolveStatus::FOUND) {
            ASSERT_TRUE(is_hamiltonian_cycle(inst.graph, *out.tour));
            ++found;
        }
    }
    EXPECT_GE(found, 99);
}

TEST(FindHcHeuristic, DeterministicUnderNodeCap)
{
    const PlantedInstance inst = gen_planted_cubic(200, 4);
    const SolveBudget budget{std::nullopt, 50000, std::nullopt};
    const SolverOutcome a = find_hc_heuristic(inst.graph, budget, 9);
    const SolverOutcome b = find_hc_heuristic(inst.graph, budget, 9);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.tour, b.tour);
    EXPECT_EQ(a.nodes, b.nodes);
}

TEST(FindHcHeuristic, NeverClaimsNonHamiltonicity)
{
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = oracle::random_graph(10, 0.3, rng);
        const SolverOutcome out = find_hc_heuristic(g, {std::nullopt, 2000, std::nullopt}, trial);
        ASSERT_NE(out.status, SolveStatus::ERROR);
        if (out.status == SolveStatus::FOUND) {
            ASSERT_TRUE(is_hamiltonian_cycle(g, *out.tour));
        }
        ASSERT_NE(out.status, SolveStatus::EXHAUSTED_NO_HC);
    }
}

TEST(Budget, Validation)
{
    EXPECT_THROW((SolveBudget{0.0, std::nullopt, std::nullopt}.validate()), InvalidArgument);
    EXPECT_THROW((SolveBudget{std::nullopt, 0, std::nullopt}.validate()), InvalidArgument);
    EXPECT_THROW((SolveBudget{std::nullopt, std::nullopt, 0}.validate()), InvalidArgument);
    EXPECT_NO_THROW((SolveBudget{1.0, 1, 1}.validate()));
}

TEST(Status, StringRoundTrip)
{
    for (SolveStatus s : {SolveStatus::FOUND, SolveStatus::EXHAUSTED_NO_HC, SolveStatus::BUDGET_EXCEEDED,
                          SolveStatus::ERROR}) {
        EXPECT_EQ(solve_status_from_string(to_string(s)), s);
    }
    EXPECT_EQ(failure_marker(FailureMode::timeout), "*");
    EXPECT_EQ(failure_marker(FailureMode::memory), "**");
    EXPECT_EQ(failure_marker(FailureMode::crash), "***");
}
