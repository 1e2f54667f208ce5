#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hcpforge/hcpforge.hpp"

using namespace hcpforge;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = HCPFORGE_SAMPLES;

SourceProblem load(SourceKind kind, const std::string& file)
{
    std::ifstream in(kSamples / file);
    EXPECT_TRUE(in.good()) << file;
    return parse_source(kind, in);
}

} // namespace

TEST(Samples, GraphsParse)
{
    EXPECT_EQ(read_hcp(kSamples / "c6.hcp"), cycle_graph(6, "C6"));
    const Graph pet = read_hcp(kSamples / "petersen.hcp");
    EXPECT_TRUE(pet.same_structure(gen_generalized_petersen(5, 2)));
    EXPECT_EQ(count_hc(pet).count, 0u);
}

TEST(Samples, PlanLoads)
{
    const BenchmarkPlan plan = read_plan(kSamples / "plan.json");
    EXPECT_EQ(plan.instances.size(), 5u);
    EXPECT_EQ(plan.solvers.size(), 2u);
    for (const auto& inst : plan.instances) {
        if (inst.path) {
            EXPECT_TRUE(fs::exists(*inst.path)) << *inst.path;
        }
    }
}

TEST(Samples, SourcesReduceWithExpectedFeasibility)
{
    const std::vector<std::tuple<SourceKind, std::string, bool>> cases{
        {SourceKind::QN, "queens4.txt", true},   {SourceKind::COL3, "col3_k4.txt", false},
        {SourceKind::SSP, "ssp.txt", true},      {SourceKind::II, "ii.txt", true},
        {SourceKind::CNF, "cnf.cnf", true},
    };
    for (const auto& [kind, file, feasible] : cases) {
        const SourceProblem p = load(kind, file);
        const Reduced r = reduce(p);
        const SolverOutcome out = find_hc_exact(r.graph, {120.0, std::nullopt, std::nullopt});
        ASSERT_NE(out.status, SolveStatus::BUDGET_EXCEEDED) << file;
        EXPECT_EQ(out.status == SolveStatus::FOUND, feasible) << file;
        if (out.tour) {
            EXPECT_TRUE(is_valid_solution(p, decode_hc(r.certificate, *out.tour))) << file;
        }
    }
}
