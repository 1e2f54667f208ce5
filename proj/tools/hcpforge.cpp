// hcpforge command-line front end.
//
// Exit codes: 0 success; 1 negative verdict (invalid tour, failed decode);
// 2 unreadable or malformed input file; 3 invalid arguments; 4 other error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcpforge/hcpforge.hpp"

namespace fs = std::filesystem;
using namespace hcpforge;

namespace {

constexpr int kInvalid = 1;
constexpr int kParseError = 2;
constexpr int kUsage = 3;
constexpr int kFailure = 4;

struct Globals {
    std::uint64_t seed = 0;
    std::string out = ".";
    std::optional<double> budget_secs;
    std::optional<std::uint64_t> mem_cap_mb;
    std::optional<int> workers;
    std::optional<int> relabellings;
};

fs::path out_dir(const Globals& g)
{
    fs::path dir = g.out;
    fs::create_directories(dir);
    return dir;
}

Graph read_instance(const fs::path& path)
{
    if (path.extension() == ".tsp") {
        Graph g = tsp_to_graph(read_tsp(path));
        return g.name().empty() ? g.with_name(path.stem().string()) : g;
    }
    return read_hcp(path);
}

SolveBudget budget_from(const Globals& g, double default_secs, std::optional<std::uint64_t> node_cap)
{
    SolveBudget b;
    b.wall_seconds = g.budget_secs.value_or(default_secs);
    b.node_cap = node_cap;
    if (g.mem_cap_mb) {
        b.memory_bytes = *g.mem_cap_mb * 1024 * 1024;
    }
    b.validate();
    return b;
}

/// Control solver for hardening experiments: never finds a tour.
SolverHandle null_solver()
{
    return {"none", [](const Graph&, std::uint64_t, const SolveBudget&) {
                SolverOutcome out;
                out.status = SolveStatus::BUDGET_EXCEEDED;
                out.failure = FailureMode::gave_up;
                out.detail = "control solver";
                return out;
            }};
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
    std::string family;
    int p = 0, k = 0, n = 0, d = 3;
    bool tsp = false;
    bool seeded = false;
};

int cmd_generate(const GenerateArgs& a, const Globals& g)
{
    FamilySpec spec;
    spec.family = family_from_string(a.family);
    spec.p = a.p;
    spec.k = a.k;
    spec.n = a.n;
    spec.d = a.d;
    if (a.seeded || spec.family == Family::RANDOM_REGULAR || spec.family == Family::PLANTED_CUBIC) {
        spec.seed = g.seed;
    }
    const GeneratedInstance inst = generate(spec);
    const fs::path dir = out_dir(g);
    const fs::path hcp = dir / (inst.graph.name() + ".hcp");
    write_hcp(hcp, inst.graph);
    std::cout << "wrote " << hcp.string() << '\n';
    if (a.tsp) {
        const fs::path tsp = dir / (inst.graph.name() + ".tsp");
        write_tsp(tsp, graph_to_tsp(inst.graph));
        std::cout << "wrote " << tsp.string() << '\n';
    }
    if (inst.planted) {
        const fs::path tour = dir / (inst.graph.name() + ".planted.tour");
        write_tour(tour, *inst.planted, inst.graph.name());
        std::cout << "wrote " << tour.string() << '\n';
    }
    std::cout << "name: " << inst.graph.name() << "\nvertices: " << inst.graph.n() << "\nedges: " << inst.graph.m()
              << "\nhamiltonian: " << to_string(inst.expected.hamiltonian) << "\nhc_count: "
              << (inst.expected.hc_count ? std::to_string(*inst.expected.hc_count) : std::string("unknown"))
              << "\noptimal_tsp_length: "
              << (inst.expected.optimal_tsp_length() ? std::to_string(*inst.expected.optimal_tsp_length())
                                                     : std::string("unknown"))
              << '\n';
    return 0;
}

// --- convert ---------------------------------------------------------------

int cmd_convert(const std::string& input, const std::string& to, const Globals& g)
{
    const fs::path in = input;
    const Graph graph = read_instance(in);
    const fs::path dir = out_dir(g);
    const std::string stem = graph.name().empty() ? in.stem().string() : graph.name();
    fs::path target;
    if (to == "tsp") {
        target = dir / (stem + ".tsp");
        write_tsp(target, graph_to_tsp(graph));
    } else if (to == "hcp") {
        target = dir / (stem + ".hcp");
        write_hcp(target, graph);
    } else {
        throw InvalidArgument("--to must be tsp or hcp");
    }
    std::cout << "wrote " << target.string() << " (" << graph.n() << " vertices, " << graph.m() << " edges)\n";
    return 0;
}

// --- reduce / decode -------------------------------------------------------

int cmd_reduce(const std::string& kind_text, const std::string& input, const Globals& g)
{
    const SourceKind kind = source_kind_from_string(kind_text);
    std::ifstream in(input);
    if (!in) {
        throw ParseError("cannot open " + input);
    }
    const SourceProblem problem = parse_source(kind, in);
    const Reduced r = reduce(problem);
    const fs::path dir = out_dir(g);
    const fs::path hcp = dir / (r.graph.name() + ".hcp");
    const fs::path cert = dir / (r.graph.name() + ".cert.json");
    write_hcp(hcp, r.graph);
    write_certificate(cert, r.certificate);
    std::cout << "wrote " << hcp.string() << "\nwrote " << cert.string() << "\ncnf: " << r.certificate.cnf_vars
              << " variables, " << r.certificate.cnf_literals << " literal occurrences\nreduced: " << r.graph.n()
              << " vertices, " << r.graph.m() << " edges\n";
    return 0;
}

int cmd_decode(const std::string& cert_path, const std::string& tour_path)
{
    ReductionCertificate cert = read_certificate(fs::path(cert_path));
    const Tour t = read_tour(fs::path(tour_path), cert.graph.n());
    SourceSolution s;
    try {
        s = decode_hc(cert, t);
    } catch (const InvalidCertificate& e) {
        std::cout << "invalid: " << e.what() << '\n';
        return kInvalid;
    }
    std::cout << "valid " << to_string(s.kind) << " solution\n" << describe(cert.source, s) << '\n';
    return 0;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const std::string& instance, const std::string& tour_path)
{
    const Graph g = read_instance(instance);
    const Tour t = read_tour(fs::path(tour_path), g.n());
    const bool ok = is_hamiltonian_cycle(g, t);
    std::cout << (ok ? "valid" : "invalid") << "\nlength " << tour_length(graph_to_tsp(g), t) << '\n';
    return ok ? 0 : kInvalid;
}

// --- solve (single run, for use as an external solver) ----------------------

int cmd_solve(const std::string& instance, const std::string& solver, std::optional<std::uint64_t> node_cap,
              const Globals& g)
{
    const Graph graph = read_instance(instance);
    const SolveBudget budget = budget_from(g, 60.0, node_cap);
    SolverOutcome out;
    if (solver == "exact") {
        out = find_hc_exact(graph, budget);
    } else if (solver == "heuristic") {
        out = find_hc_heuristic(graph, budget, g.seed);
    } else {
        throw InvalidArgument("--solver must be exact or heuristic");
    }
    if (out.status == SolveStatus::FOUND) {
        write_tour(std::cout, *out.tour, graph.name());
    }
    std::cerr << to_string(out.status) << (out.detail.empty() ? "" : ": " + out.detail) << '\n';
    return 0;
}

// --- harden ----------------------------------------------------------------

struct HardenArgs {
    int n = 0;
    int samples = 1;
    int max_count = 100;
    int degree = 3;
    std::string solver = "heuristic";
    std::optional<std::uint64_t> node_cap;
    std::string command;
};

int cmd_harden(const HardenArgs& a, const Globals& g)
{
    if (a.n < 4 || a.n % 2 != 0) {
        throw InvalidArgument("--n must be even and at least 4");
    }
    if (a.samples < 1) {
        throw InvalidArgument("--samples must be at least 1");
    }
    HardeningConfig cfg;
    cfg.max_count = a.max_count;
    cfg.budget = budget_from(g, 10.0, a.node_cap);
    if (a.solver == "heuristic") {
        cfg.solver = builtin_heuristic_solver();
    } else if (a.solver == "exact") {
        cfg.solver = builtin_exact_solver();
    } else if (a.solver == "none") {
        cfg.solver = null_solver();
    } else if (a.solver == "external") {
        cfg.solver = external_solver("external", ExternalSolverSpec{a.command, InputFormat::HCP,
                                                                    OutputParser::TSPLIB_TOUR, std::nullopt});
    } else {
        throw InvalidArgument("--solver must be heuristic, exact, none or external");
    }
    const fs::path dir = out_dir(g);
    std::vector<HardeningReport> reports;
    std::ofstream log(dir / ("harden_" + std::to_string(a.n) + ".log"), std::ios::trunc);
    for (int i = 0; i < a.samples; ++i) {
        const std::uint64_t sample_seed = SeedHasher(g.seed).add("sample").add(static_cast<std::uint64_t>(i)).value();
        PlantedInstance inst = gen_planted_regular(a.n, a.degree, sample_seed);
        cfg.seed = SeedHasher(sample_seed).add("harden").value();
        HardeningReport r = harden(inst, cfg);
        const std::string name = "HR_" + std::to_string(a.n) + "_" + std::to_string(i);
        write_hcp(dir / (name + ".hcp"), r.final_graph.with_name(name));
        write_tour(dir / (name + ".planted.tour"), r.planted, name);
        std::ostringstream line;
        line << name << " edges " << r.input_edges << "->" << r.final_graph.m() << " removed " << r.edges_removed
             << " solves " << r.trace.size() << " failures " << r.failures_in_final_window
             << (r.trivial() ? " trivial" : "");
        std::cout << line.str() << '\n';
        log << line.str() << '\n';
        reports.push_back(std::move(r));
    }
    const std::vector<SummaryRow> rows{hardening_summary(reports)};
    std::ofstream csv(dir / ("summary_" + std::to_string(a.n) + ".csv"), std::ios::trunc);
    write_summary_csv(csv, rows);
    std::ofstream md(dir / ("summary_" + std::to_string(a.n) + ".md"), std::ios::trunc);
    write_summary_markdown(md, rows);
    write_summary_markdown(std::cout, rows);
    return 0;
}

// --- bench / report --------------------------------------------------------

BenchmarkPlan plan_with_overrides(const std::string& plan_path, const Globals& g, bool seed_given)
{
    BenchmarkPlan plan = read_plan(plan_path);
    if (seed_given) {
        plan.seed = g.seed;
    }
    if (g.budget_secs) {
        plan.budget_secs = *g.budget_secs;
    }
    if (g.mem_cap_mb) {
        plan.mem_cap_mb = g.mem_cap_mb;
    }
    if (g.workers) {
        plan.workers = *g.workers;
    }
    if (g.relabellings) {
        plan.relabellings = *g.relabellings;
    }
    plan.validate();
    return plan;
}

int cmd_bench(const std::string& plan_path, const Globals& g, bool seed_given, bool quiet)
{
    const BenchmarkPlan plan = plan_with_overrides(plan_path, g, seed_given);
    const fs::path dir = out_dir(g);
    auto progress = [quiet](std::size_t done, std::size_t total) {
        if (!quiet && (done == total || done % 50 == 0)) {
            std::cerr << "trials " << done << "/" << total << '\n';
        }
    };
    const ResultTable table = run_bench(plan, dir, progress);
    write_table_markdown(std::cout, table);
    return 0;
}

int cmd_report(const std::string& plan_path, const Globals& g, bool seed_given)
{
    const BenchmarkPlan plan = plan_with_overrides(plan_path, g, seed_given);
    const ResultTable table = report_bench(plan, fs::path(g.out));
    write_table_markdown(std::cout, table);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hard Hamiltonian cycle instances: generation, hardening, reductions and benchmarking"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Master RNG seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--budget-secs", g.budget_secs, "Wall-clock cap per solve (seconds)");
    app.add_option("--mem-cap-mb", g.mem_cap_mb, "Memory cap per external solver process (MiB)");
    app.add_option("--workers", g.workers, "Concurrent trials");
    app.add_option("--relabellings", g.relabellings, "Random relabellings per instance");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate an instance family member");
    generate->add_option("--family", gen.family, "GPN GP3 GP0 SHEEHAN SNARK SNARK_MODIFIED RANDOM_REGULAR PLANTED_CUBIC")
        ->required();
    generate->add_option("--p", gen.p, "Generalized Petersen p");
    generate->add_option("--k", gen.k, "Flower snark k");
    generate->add_option("--n", gen.n, "Vertex count");
    generate->add_option("--d", gen.d, "Degree");
    generate->add_flag("--tsp", gen.tsp, "Also write the binary TSP file");
    generate->add_flag("--seeded-edge", gen.seeded, "Choose the added GP0/snark edge from --seed");

    std::string convert_in, convert_to = "tsp";
    auto* convert = app.add_subcommand("convert", "Convert between HCP and binary TSP files");
    convert->add_option("input", convert_in, "Instance file")->required();
    convert->add_option("--to", convert_to, "tsp or hcp");

    std::string reduce_kind, reduce_in;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a source problem to HCP");
    reduce_cmd->add_option("kind", reduce_kind, "CNF COL3 II QN SSP")->required();
    reduce_cmd->add_option("input", reduce_in, "Source problem file")->required();

    std::string decode_cert, decode_tour;
    auto* decode = app.add_subcommand("decode", "Decode a tour of a reduced graph into a source solution");
    decode->add_option("certificate", decode_cert)->required();
    decode->add_option("tour", decode_tour)->required();

    HardenArgs hard;
    auto* harden_cmd = app.add_subcommand("harden", "Harden planted random graphs against a solver");
    harden_cmd->add_option("--n", hard.n, "Vertex count (even)")->required();
    harden_cmd->add_option("--samples", hard.samples, "Number of graphs");
    harden_cmd->add_option("--max-count", hard.max_count, "Consecutive unproductive solves before stopping");
    harden_cmd->add_option("--degree", hard.degree, "Degree of the planted input graphs");
    harden_cmd->add_option("--solver", hard.solver, "heuristic, exact, none or external");
    harden_cmd->add_option("--node-cap", hard.node_cap, "Node cap per in-loop solve");
    harden_cmd->add_option("--command", hard.command, "External solver command template");

    std::string bench_plan;
    bool quiet = false;
    auto* bench = app.add_subcommand("bench", "Run a benchmark plan (resumes from existing records)");
    bench->add_option("plan", bench_plan, "Plan file (JSON)")->required();
    bench->add_flag("--quiet", quiet, "No progress output");

    std::string verify_instance, verify_tour;
    auto* verify = app.add_subcommand("verify", "Check a tour against an instance");
    verify->add_option("instance", verify_instance)->required();
    verify->add_option("tour", verify_tour)->required();

    std::string report_plan;
    auto* report = app.add_subcommand("report", "Rebuild result tables from records");
    report->add_option("plan", report_plan, "Plan file (JSON)")->required();

    std::string solve_instance, solve_solver = "exact";
    std::optional<std::uint64_t> solve_nodes;
    auto* solve = app.add_subcommand("solve", "Solve one instance and print its tour");
    solve->add_option("instance", solve_instance)->required();
    solve->add_option("--solver", solve_solver, "exact or heuristic");
    solve->add_option("--node-cap", solve_nodes, "Node cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        const bool seed_given = seed_opt->count() > 0;
        if (*generate) {
            return cmd_generate(gen, g);
        }
        if (*convert) {
            return cmd_convert(convert_in, convert_to, g);
        }
        if (*reduce_cmd) {
            return cmd_reduce(reduce_kind, reduce_in, g);
        }
        if (*decode) {
            return cmd_decode(decode_cert, decode_tour);
        }
        if (*harden_cmd) {
            return cmd_harden(hard, g);
        }
        if (*bench) {
            return cmd_bench(bench_plan, g, seed_given, quiet);
        }
        if (*verify) {
            return cmd_verify(verify_instance, verify_tour);
        }
        if (*report) {
            return cmd_report(report_plan, g, seed_given);
        }
        if (*solve) {
            return cmd_solve(solve_instance, solve_solver, solve_nodes, g);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
