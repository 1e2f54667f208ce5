#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "hcpforge/hcpforge.hpp"

using namespace hcpforge;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run(const std::string& args)
{
    const std::string cmd = std::string(HCPFORGE_CLI) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.output.append(buf, got);
    }
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream out(p);
    out << text;
}

class Scratch : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("hcpforge_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out() const { return "--out '" + dir_.string() + "'"; }
    fs::path dir_;
};

BenchmarkPlan plan_for(std::vector<Graph> graphs, const fs::path& dir, std::vector<std::string> solvers, int r,
                       double budget)
{
    BenchmarkPlan plan;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const fs::path p = dir / (graphs[i].name() + ".hcp");
        write_hcp(p, graphs[i]);
        plan.instances.push_back({p, std::nullopt});
    }
    for (const auto& s : solvers) {
        plan.solvers.push_back({s, s, std::nullopt});
    }
    plan.relabellings = r;
    plan.budget_secs = budget;
    plan.seed = 99;
    return plan;
}

/// Records with the time-dependent field blanked.
std::vector<std::string> masked_records(const fs::path& path)
{
    std::vector<std::string> out;
    for (BenchmarkRecord r : read_records(path)) {
        r.elapsed = 0.0;
        out.push_back(record_to_line(r));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

// --- plan and record plumbing ----------------------------------------------

TEST(Plan, ParsesJsonAndValidates)
{
    const auto j = nlohmann::json::parse(R"({
        "seed": 5, "relabellings": 7, "budget_secs": 2.5, "node_cap": 1000,
        "instances": ["a.hcp", {"family": "GPN", "p": 7}],
        "solvers": [{"name": "exact"}, {"name": "h2", "builtin": "heuristic"},
                    {"name": "ext", "command": "x {instance_path}", "input": "TSP_FULL_MATRIX"}]
    })");
    const BenchmarkPlan plan = plan_from_json(j, "/base");
    EXPECT_EQ(plan.seed, 5u);
    EXPECT_EQ(plan.relabellings, 7);
    EXPECT_EQ(*plan.instances[0].path, fs::path("/base/a.hcp"));
    EXPECT_EQ(plan.instances[1].family->p, 7);
    EXPECT_EQ(plan.solvers[1].builtin, "heuristic");
    EXPECT_EQ(plan.solvers[2].external->input, InputFormat::TSP_FULL_MATRIX);
    EXPECT_EQ(plan.budget().node_cap, 1000u);

    auto bad = j;
    bad["solvers"] = nlohmann::json::parse(R"([{"name": "exact"}, {"name": "exact"}])");
    EXPECT_THROW(plan_from_json(bad), InvalidArgument);
    bad = j;
    bad["relabellings"] = 0;
    EXPECT_THROW(plan_from_json(bad), InvalidArgument);
    bad = j;
    bad["solvers"] = nlohmann::json::parse(R"([{"name": "magic"}])");
    EXPECT_THROW(plan_from_json(bad), InvalidArgument);
    bad = j;
    bad.erase("instances");
    EXPECT_THROW(plan_from_json(bad), ParseError);
}

TEST(Records, LineRoundTripAndRepair)
{
    BenchmarkRecord r;
    r.instance = "GPN_14";
    r.solver = "exact";
    r.index = 3;
    r.status = SolveStatus::BUDGET_EXCEEDED;
    r.failure = FailureMode::timeout;
    r.elapsed = 1.25;
    r.detail = "cap \"quoted\"";
    const auto back = record_from_line(record_to_line(r));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(record_to_line(*back), record_to_line(r));
    EXPECT_FALSE(record_from_line("{\"instance\": ").has_value());

    const fs::path p = fs::temp_directory_path() / ("hcpforge_records_" + std::to_string(::getpid()) + ".jsonl");
    const std::string full = record_to_line(r) + "\n";
    write_text(p, full + full.substr(0, full.size() / 2));
    EXPECT_EQ(read_records(p).size(), 1u);
    EXPECT_EQ(read_records(p, true).size(), 1u);
    EXPECT_EQ(slurp(p), full);
    fs::remove(p);
}

TEST(Seeds, StableAndIndependentOfSolverForRelabelling)
{
    EXPECT_EQ(relabel_seed(1, "A", 3), relabel_seed(1, "A", 3));
    EXPECT_NE(relabel_seed(1, "A", 3), relabel_seed(1, "A", 4));
    EXPECT_NE(relabel_seed(1, "A", 3), relabel_seed(2, "A", 3));
    EXPECT_NE(solver_seed(1, "A", "x", 3), solver_seed(1, "A", "y", 3));
}

TEST(Table, MeanOverSuccessesAndMarkers)
{
    const std::vector<Graph> instances{cycle_graph(5, "A"), cycle_graph(6, "B")};
    std::vector<BenchmarkRecord> recs;
    auto add = [&](const std::string& inst, int idx, SolveStatus st, FailureMode f, double t) {
        BenchmarkRecord r;
        r.instance = inst;
        r.solver = "s";
        r.index = idx;
        r.status = st;
        r.failure = f;
        r.elapsed = t;
        recs.push_back(r);
    };
    add("A", 0, SolveStatus::FOUND, FailureMode::none, 1.0);
    add("A", 1, SolveStatus::FOUND, FailureMode::none, 3.0);
    add("A", 2, SolveStatus::BUDGET_EXCEEDED, FailureMode::timeout, 100.0);
    add("A", 2, SolveStatus::FOUND, FailureMode::none, 50.0); // duplicate key ignored
    add("B", 0, SolveStatus::ERROR, FailureMode::crash, 0.5);
    add("B", 1, SolveStatus::ERROR, FailureMode::memory, 0.5);
    add("B", 2, SolveStatus::ERROR, FailureMode::memory, 0.5);
    add("B", 9, SolveStatus::FOUND, FailureMode::none, 0.5); // index beyond R ignored
    const ResultTable t = build_table(instances, {"s"}, recs, 3);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].cells[0].solved, 2);
    EXPECT_DOUBLE_EQ(*t.rows[0].cells[0].mean_time, 2.0);
    EXPECT_EQ(t.rows[0].cells[0].dominant_failure, FailureMode::timeout);
    EXPECT_EQ(t.rows[1].cells[0].solved, 0);
    EXPECT_FALSE(t.rows[1].cells[0].mean_time.has_value());
    EXPECT_EQ(t.rows[1].cells[0].dominant_failure, FailureMode::memory);

    std::ostringstream csv, md;
    write_table_csv(csv, t);
    write_table_markdown(md, t);
    EXPECT_EQ(csv.str(), "Name,n,s Solved,s Time\nA,5,2*,2.000000\nB,6,0**,NA\n");
    EXPECT_NE(md.str().find("| B | 6 | 0** | NA |"), std::string::npos);
}

// --- sweeps ----------------------------------------------------------------

TEST_F(Scratch, ExactOnC6SolvesEveryRelabelling)
{
    const BenchmarkPlan plan = plan_for({cycle_graph(6, "C6")}, dir_, {"exact"}, 100, 10.0);
    const ResultTable t = run_bench(plan, dir_ / "out");
    EXPECT_EQ(t.rows[0].cells[0].solved, 100);
    ASSERT_TRUE(t.rows[0].cells[0].mean_time.has_value());
    EXPECT_GT(*t.rows[0].cells[0].mean_time, 0.0);
}

TEST_F(Scratch, HeuristicOnPetersenPrintsNa)
{
    const BenchmarkPlan plan = plan_for({gen_generalized_petersen(5, 2, "PET")}, dir_, {"heuristic"}, 10, 1.0);
    const ResultTable t = run_bench(plan, dir_ / "out");
    EXPECT_EQ(t.rows[0].cells[0].solved, 0);
    EXPECT_FALSE(t.rows[0].cells[0].mean_time.has_value());
    EXPECT_NE(slurp(dir_ / "out" / "results.csv").find(",0*,NA"), std::string::npos);
}

TEST_F(Scratch, TableShapeAndResume)
{
    BenchmarkPlan plan = plan_for({cycle_graph(5, "C5"), gen_generalized_petersen(7, 2, "GP7"),
                                   gen_generalized_petersen(5, 2, "PET")},
                                  dir_, {"exact", "heuristic"}, 6, 5.0);
    plan.node_cap = 20000;
    plan.relabellings = 3;
    run_bench(plan, dir_ / "resumed");
    EXPECT_EQ(read_records(dir_ / "resumed" / "records.jsonl").size(), 18u);
    plan.relabellings = 6;
    std::size_t calls = 0;
    const ResultTable t = run_bench(plan, dir_ / "resumed", [&](std::size_t, std::size_t total) {
        ++calls;
        EXPECT_EQ(total, 18u);
    });
    EXPECT_EQ(calls, 18u);
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& row : t.rows) {
        EXPECT_EQ(row.cells.size(), 2u);
    }
    const std::string header = slurp(dir_ / "resumed" / "results.csv");
    EXPECT_EQ(header.substr(0, header.find('\n')), "Name,n,exact Solved,exact Time,heuristic Solved,heuristic Time");

    plan.workers = 3;
    run_bench(plan, dir_ / "fresh");
    EXPECT_EQ(masked_records(dir_ / "fresh" / "records.jsonl"), masked_records(dir_ / "resumed" / "records.jsonl"));
}

TEST_F(Scratch, VerificationGateRejectsLyingSolver)
{
    const Graph g = cycle_graph(8, "C8");
    const SolverHandle liar{"liar", [](const Graph& h, std::uint64_t, const SolveBudget&) {
                                SolverOutcome out;
                                out.status = SolveStatus::FOUND;
                                std::vector<Vertex> order(h.n());
                                std::iota(order.begin(), order.end(), 1);
                                out.tour = Tour(order);
                                return out;
                            }};
    int errors = 0;
    for (int i = 0; i < 10; ++i) {
        const BenchmarkRecord r = run_trial(g, liar, i, 1, {});
        errors += r.status == SolveStatus::ERROR;
    }
    EXPECT_GE(errors, 9); // a random relabelling almost never maps 1..8 onto the cycle
    const BenchmarkRecord honest = run_trial(g, builtin_exact_solver(), 0, 1, {});
    EXPECT_EQ(honest.status, SolveStatus::FOUND);
}

// --- CLI -------------------------------------------------------------------

TEST_F(Scratch, CliGenerate)
{
    RunResult r = run("generate --family GPN --p 61 " + out());
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(fs::exists(dir_ / "GPN_122.hcp"));
    EXPECT_EQ(read_hcp(dir_ / "GPN_122.hcp").m(), 183);

    r = run("generate --family SNARK_MODIFIED --k 31 --tsp " + out());
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(fs::exists(dir_ / "SN_124.hcp"));
    EXPECT_TRUE(fs::exists(dir_ / "SN_124.tsp"));

    r = run("generate --family GP0 --p 4 " + out());
    EXPECT_EQ(r.code, 3) << r.output;
    r = run("generate --family NOPE --p 5 " + out());
    EXPECT_EQ(r.code, 3) << r.output;
    r = run("frobnicate");
    EXPECT_EQ(r.code, 3) << r.output;

    r = run("generate --family PLANTED_CUBIC --n 20 --seed 4 " + out());
    EXPECT_EQ(r.code, 0) << r.output;
    r = run("verify '" + (dir_ / "PC_20.hcp").string() + "' '" + (dir_ / "PC_20.planted.tour").string() + "'");
    EXPECT_EQ(r.code, 0) << r.output;
}

TEST_F(Scratch, CliVerify)
{
    write_hcp(dir_ / "c4.hcp", Graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}, "C4"));
    write_text(dir_ / "good.tour", "TOUR_SECTION\n1\n2\n3\n4\n-1\nEOF\n");
    write_text(dir_ / "bad.tour", "TOUR_SECTION\n1\n3\n2\n4\n-1\nEOF\n");
    write_text(dir_ / "cut.tour", "TOUR_SECTION\n1\n2\n");
    const std::string c4 = "'" + (dir_ / "c4.hcp").string() + "' ";
    RunResult r = run("verify " + c4 + "'" + (dir_ / "good.tour").string() + "'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.output.find("valid\nlength 0"), std::string::npos) << r.output;
    r = run("verify " + c4 + "'" + (dir_ / "bad.tour").string() + "'");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("invalid\nlength 2"), std::string::npos) << r.output;
    r = run("verify " + c4 + "'" + (dir_ / "cut.tour").string() + "'");
    EXPECT_EQ(r.code, 2) << r.output;
    r = run("verify '" + (dir_ / "missing.hcp").string() + "' '" + (dir_ / "good.tour").string() + "'");
    EXPECT_EQ(r.code, 2) << r.output;
}

TEST_F(Scratch, CliConvertRoundTrip)
{
    write_hcp(dir_ / "g.hcp", gen_generalized_petersen(7, 2, "GP7"));
    RunResult r = run("convert '" + (dir_ / "g.hcp").string() + "' --to tsp " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    fs::create_directories(dir_ / "back");
    r = run("convert '" + (dir_ / "GP7.tsp").string() + "' --to hcp --out '" + (dir_ / "back").string() + "'");
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(read_hcp(dir_ / "back" / "GP7.hcp").same_structure(gen_generalized_petersen(7, 2)));
}

TEST_F(Scratch, CliReduceAndDecode)
{
    write_text(dir_ / "q4.txt", "4\n");
    RunResult r = run("reduce QN '" + (dir_ / "q4.txt").string() + "' " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    fs::path hcp, cert;
    for (const auto& e : fs::directory_iterator(dir_)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("QN_", 0) == 0 && e.path().extension() == ".hcp") {
            hcp = e.path();
        }
        if (name.size() > 10 && name.substr(name.size() - 10) == ".cert.json") {
            cert = e.path();
        }
    }
    ASSERT_FALSE(hcp.empty());
    ASSERT_FALSE(cert.empty());
    r = run("solve '" + hcp.string() + "' --solver exact > '" + (dir_ / "q4.tour").string() + "'");
    ASSERT_EQ(r.code, 0) << r.output;
    r = run("decode '" + cert.string() + "' '" + (dir_ / "q4.tour").string() + "'");
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("valid QN solution"), std::string::npos) << r.output;

    const Graph g = read_hcp(hcp);
    std::vector<Vertex> order(g.n());
    std::iota(order.begin(), order.end(), 1);
    write_tour(dir_ / "wrong.tour", Tour(order));
    r = run("decode '" + cert.string() + "' '" + (dir_ / "wrong.tour").string() + "'");
    EXPECT_EQ(r.code, 1) << r.output;

    write_text(dir_ / "ssp.txt", "1\n1\n");
    r = run("reduce SSP '" + (dir_ / "ssp.txt").string() + "' " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    write_text(dir_ / "k4.txt", "4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    r = run("reduce COL3 '" + (dir_ / "k4.txt").string() + "' " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    for (const auto& e : fs::directory_iterator(dir_)) {
        const std::string name = e.path().filename().string();
        if ((name.rfind("SSP_", 0) == 0 || name.rfind("COL3_", 0) == 0) && e.path().extension() == ".hcp") {
            EXPECT_EQ(find_hc_exact(read_hcp(e.path()), {60.0, std::nullopt, std::nullopt}).status,
                      SolveStatus::EXHAUSTED_NO_HC)
                << name;
        }
    }
    write_text(dir_ / "broken.txt", "4\n1 9\n");
    r = run("reduce COL3 '" + (dir_ / "broken.txt").string() + "' " + out());
    EXPECT_EQ(r.code, 2) << r.output;
}

TEST_F(Scratch, CliHarden)
{
    RunResult r = run("harden --n 51 " + out());
    EXPECT_EQ(r.code, 3) << r.output;

    r = run("harden --n 250 --samples 3 --solver exact --seed 1 " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    std::string csv = slurp(dir_ / "summary_250.csv");
    EXPECT_NE(csv.find("\n250,3,"), std::string::npos) << csv;
    EXPECT_NE(csv.find(",0,100.000000\n"), std::string::npos) << csv;

    r = run("harden --n 250 --samples 3 --solver none --seed 1 " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    csv = slurp(dir_ / "summary_250.csv");
    EXPECT_NE(csv.find(",100.000000,100,0.000000\n"), std::string::npos) << csv;
    EXPECT_TRUE(fs::exists(dir_ / "HR_250_2.hcp"));
    EXPECT_TRUE(fs::exists(dir_ / "HR_250_2.planted.tour"));
}

TEST_F(Scratch, CliBenchAndReport)
{
    write_hcp(dir_ / "c6.hcp", cycle_graph(6, "C6"));
    write_hcp(dir_ / "pet.hcp", gen_generalized_petersen(5, 2, "PET"));
    write_text(dir_ / "plan.json", R"({"seed": 3, "relabellings": 4, "budget_secs": 1, "node_cap": 5000,
        "instances": ["c6.hcp", "pet.hcp"], "solvers": [{"name": "exact"}, {"name": "heuristic"}]})");
    RunResult r = run("bench '" + (dir_ / "plan.json").string() + "' --quiet " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("| C6 | 6 | 4 |"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("| PET | 10 | 0 | NA | 0 | NA |"), std::string::npos) << r.output;
    const std::string before = slurp(dir_ / "results.csv");
    fs::remove(dir_ / "results.csv");
    r = run("report '" + (dir_ / "plan.json").string() + "' " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_EQ(slurp(dir_ / "results.csv"), before);

    write_text(dir_ / "broken.json", "{");
    r = run("bench '" + (dir_ / "broken.json").string() + "' " + out());
    EXPECT_EQ(r.code, 2) << r.output;
}
