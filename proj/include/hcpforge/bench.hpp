#pragma once

// Benchmark sweeps: every (instance, solver, relabelling) trial runs on a
// seeded relabelling of the instance, its tour is mapped back and verified
// on the original labels, and one JSON line per trial is appended to
// records.jsonl. Re-running a sweep skips trials already on record, so an
// interrupted sweep resumes where it stopped. Tables are derived from the
// records alone.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcpforge/error.hpp"
#include "hcpforge/external.hpp"
#include "hcpforge/families.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/rng.hpp"
#include "hcpforge/solver.hpp"
#include "hcpforge/tsplib.hpp"

namespace hcpforge {

/// An instance is a file (.hcp, or a binary .tsp) or a family spec.
struct InstanceSource {
    std::optional<std::filesystem::path> path;
    std::optional<FamilySpec> family;
};

/// Built-in ("exact", "heuristic") or an external command.
struct SolverEntry {
    std::string name;
    std::string builtin;
    std::optional<ExternalSolverSpec> external;
};

struct BenchmarkPlan {
    std::vector<InstanceSource> instances;
    std::vector<SolverEntry> solvers;
    int relabellings = 100;
    double budget_secs = 60.0;
    std::optional<std::uint64_t> mem_cap_mb;
    std::optional<std::uint64_t> node_cap;
    std::uint64_t seed = 0;
    int workers = 1;

    void validate() const
    {
        if (relabellings < 1) {
            throw InvalidArgument("relabellings must be at least 1");
        }
        if (!(budget_secs > 0)) {
            throw InvalidArgument("budget must be positive");
        }
        if (workers < 1) {
            throw InvalidArgument("workers must be at least 1");
        }
        if (instances.empty() || solvers.empty()) {
            throw InvalidArgument("a plan needs at least one instance and one solver");
        }
        std::set<std::string> names;
        for (const auto& s : solvers) {
            if (s.name.empty() || !names.insert(s.name).second) {
                throw InvalidArgument("solver names must be nonempty and distinct ('" + s.name + "')");
            }
            if (!s.external && s.builtin != "exact" && s.builtin != "heuristic") {
                throw InvalidArgument("solver '" + s.name + "' is neither built-in (exact, heuristic) nor external");
            }
            if (s.external) {
                s.external->validate();
            }
        }
    }

    SolveBudget budget() const
    {
        SolveBudget b;
        b.wall_seconds = budget_secs;
        b.node_cap = node_cap;
        if (mem_cap_mb) {
            b.memory_bytes = *mem_cap_mb * 1024 * 1024;
        }
        b.validate();
        return b;
    }
};

// ---------------------------------------------------------------------------
// Plan files (JSON)

inline FamilySpec family_spec_from_json(const nlohmann::json& j)
{
    FamilySpec spec;
    spec.family = family_from_string(j.at("family").get<std::string>());
    spec.p = j.value("p", 0);
    spec.k = j.value("k", 0);
    spec.n = j.value("n", 0);
    spec.d = j.value("d", 3);
    if (j.contains("seed")) {
        spec.seed = j.at("seed").get<std::uint64_t>();
    }
    return spec;
}

/// Relative instance paths resolve against `base_dir`.
inline BenchmarkPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {})
{
    BenchmarkPlan plan;
    try {
        plan.seed = j.value("seed", std::uint64_t{0});
        plan.relabellings = j.value("relabellings", 100);
        plan.budget_secs = j.value("budget_secs", 60.0);
        plan.workers = j.value("workers", 1);
        if (j.contains("mem_cap_mb") && !j.at("mem_cap_mb").is_null()) {
            plan.mem_cap_mb = j.at("mem_cap_mb").get<std::uint64_t>();
        }
        if (j.contains("node_cap") && !j.at("node_cap").is_null()) {
            plan.node_cap = j.at("node_cap").get<std::uint64_t>();
        }
        for (const auto& inst : j.at("instances")) {
            InstanceSource src;
            if (inst.is_string()) {
                std::filesystem::path p = inst.get<std::string>();
                src.path = p.is_absolute() ? p : base_dir / p;
            } else {
                src.family = family_spec_from_json(inst);
            }
            plan.instances.push_back(std::move(src));
        }
        for (const auto& s : j.at("solvers")) {
            SolverEntry entry;
            entry.name = s.at("name").get<std::string>();
            if (s.contains("command")) {
                ExternalSolverSpec spec;
                spec.command = s.at("command").get<std::string>();
                spec.input = input_format_from_string(s.value("input", std::string("HCP")));
                spec.output = output_parser_from_string(s.value("output", std::string("TSPLIB_TOUR")));
                entry.external = std::move(spec);
            } else {
                entry.builtin = s.value("builtin", entry.name);
            }
            plan.solvers.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed plan: ") + e.what());
    }
    plan.validate();
    return plan;
}

inline BenchmarkPlan read_plan(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open plan " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("plan is not valid JSON: ") + e.what());
    }
    return plan_from_json(j, path.parent_path());
}

inline Graph load_instance(const InstanceSource& src)
{
    if (src.family) {
        return generate(*src.family).graph;
    }
    if (!src.path) {
        throw InvalidArgument("instance has neither a path nor a family");
    }
    const auto ext = src.path->extension().string();
    if (ext == ".tsp") {
        Graph g = tsp_to_graph(read_tsp(*src.path));
        return g.name().empty() ? g.with_name(src.path->stem().string()) : g;
    }
    Graph g = read_hcp(*src.path);
    return g.name().empty() ? g.with_name(src.path->stem().string()) : g;
}

inline SolverHandle resolve_solver(const SolverEntry& entry)
{
    if (entry.external) {
        return external_solver(entry.name, *entry.external);
    }
    SolverHandle h = entry.builtin == "exact" ? builtin_exact_solver() : builtin_heuristic_solver();
    h.name = entry.name;
    return h;
}

// ---------------------------------------------------------------------------
// Records

struct BenchmarkRecord {
    std::string instance;
    std::string solver;
    int index = 0;
    std::uint64_t relabel_seed = 0;
    std::uint64_t solver_seed = 0;
    SolveStatus status = SolveStatus::ERROR;
    FailureMode failure = FailureMode::none;
    double elapsed = 0.0;
    std::uint64_t nodes = 0;
    std::string detail;

    std::tuple<std::string, std::string, int> key() const { return {instance, solver, index}; }
};

inline std::string record_to_line(const BenchmarkRecord& r)
{
    nlohmann::json j{{"instance", r.instance},
                     {"solver", r.solver},
                     {"index", r.index},
                     {"relabel_seed", r.relabel_seed},
                     {"solver_seed", r.solver_seed},
                     {"status", std::string(to_string(r.status))},
                     {"failure", std::string(to_string(r.failure))},
                     {"elapsed", r.elapsed},
                     {"nodes", r.nodes},
                     {"detail", r.detail}};
    return j.dump();
}

inline std::optional<BenchmarkRecord> record_from_line(const std::string& line)
{
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return std::nullopt;
    }
    try {
        BenchmarkRecord r;
        r.instance = j.at("instance").get<std::string>();
        r.solver = j.at("solver").get<std::string>();
        r.index = j.at("index").get<int>();
        r.relabel_seed = j.at("relabel_seed").get<std::uint64_t>();
        r.solver_seed = j.at("solver_seed").get<std::uint64_t>();
        r.status = solve_status_from_string(j.at("status").get<std::string>());
        r.failure = failure_mode_from_string(j.at("failure").get<std::string>());
        r.elapsed = j.at("elapsed").get<double>();
        r.nodes = j.at("nodes").get<std::uint64_t>();
        r.detail = j.value("detail", std::string());
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

/// Reads records.jsonl. A partial last line (a write cut short) is dropped
/// and, with `repair`, truncated away so appends start on a fresh line.
inline std::vector<BenchmarkRecord> read_records(const std::filesystem::path& path, bool repair = false)
{
    std::vector<BenchmarkRecord> out;
    if (!std::filesystem::exists(path)) {
        return out;
    }
    std::string text;
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const std::size_t complete = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
    std::size_t start = 0;
    while (start < complete) {
        const std::size_t end = text.find('\n', start);
        const std::string line = text.substr(start, end - start);
        if (auto r = record_from_line(line)) {
            out.push_back(std::move(*r));
        }
        start = end + 1;
    }
    if (repair && complete < text.size()) {
        std::filesystem::resize_file(path, complete);
    }
    return out;
}

/// Serialised appends of one record per line, flushed immediately.
class RecordWriter {
public:
    explicit RecordWriter(const std::filesystem::path& path) : file_(std::fopen(path.string().c_str(), "ab"))
    {
        if (file_ == nullptr) {
            throw Error("cannot open " + path.string() + " for appending");
        }
    }
    ~RecordWriter() { std::fclose(file_); }
    RecordWriter(const RecordWriter&) = delete;
    RecordWriter& operator=(const RecordWriter&) = delete;

    void append(const BenchmarkRecord& r)
    {
        const std::string line = record_to_line(r) + "\n";
        std::lock_guard lock(mutex_);
        std::fwrite(line.data(), 1, line.size(), file_);
        std::fflush(file_);
    }

private:
    std::FILE* file_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Trials

inline std::uint64_t relabel_seed(std::uint64_t master, const std::string& instance, int index)
{
    return SeedHasher(master).add("relabel").add(instance).add(static_cast<std::uint64_t>(index)).value();
}

inline std::uint64_t solver_seed(std::uint64_t master, const std::string& instance, const std::string& solver,
                                 int index)
{
    return SeedHasher(master).add("solver").add(instance).add(solver).add(static_cast<std::uint64_t>(index)).value();
}

/// One trial. Any tour is mapped back through the inverse relabelling and
/// must verify on `g` to count as FOUND.
inline BenchmarkRecord run_trial(const Graph& g, const SolverHandle& solver, int index, std::uint64_t master,
                                 const SolveBudget& budget)
{
    BenchmarkRecord rec;
    rec.instance = g.name();
    rec.solver = solver.name;
    rec.index = index;
    rec.relabel_seed = relabel_seed(master, g.name(), index);
    rec.solver_seed = solver_seed(master, g.name(), solver.name, index);
    const Relabelling r = Relabelling::random(g.n(), rec.relabel_seed);
    const Graph relabelled = relabel(g, r);
    const auto t0 = detail::Clock::now();
    SolverOutcome out;
    try {
        out = solver.solve(relabelled, rec.solver_seed, budget);
    } catch (const std::exception& e) {
        out.status = SolveStatus::ERROR;
        out.failure = FailureMode::crash;
        out.detail = e.what();
        out.elapsed = detail::seconds_since(t0);
    }
    rec.status = out.status;
    rec.failure = out.failure;
    rec.elapsed = out.elapsed;
    rec.nodes = out.nodes;
    rec.detail = out.detail;
    if (out.status == SolveStatus::FOUND) {
        const bool verified = out.tour && is_hamiltonian_cycle(g, relabel_tour(*out.tour, r.inverse()));
        if (!verified) {
            rec.status = SolveStatus::ERROR;
            rec.failure = FailureMode::crash;
            rec.detail = "tour failed verification on the original labels";
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Result tables

struct ResultCell {
    int solved = 0;
    int trials = 0;
    std::optional<double> mean_time; // over FOUND trials only
    FailureMode dominant_failure = FailureMode::none;
};

struct ResultRow {
    std::string name;
    int n = 0;
    std::vector<ResultCell> cells; // one per solver, plan order
};

struct ResultTable {
    std::vector<std::string> solvers;
    std::vector<ResultRow> rows;
};

inline ResultTable build_table(const std::vector<Graph>& instances, const std::vector<std::string>& solvers,
                               const std::vector<BenchmarkRecord>& records, int relabellings)
{
    std::map<std::pair<std::string, std::string>, std::vector<const BenchmarkRecord*>> by_cell;
    std::set<std::tuple<std::string, std::string, int>> seen;
    for (const auto& r : records) {
        if (r.index < 0 || r.index >= relabellings || !seen.insert(r.key()).second) {
            continue;
        }
        by_cell[{r.instance, r.solver}].push_back(&r);
    }
    ResultTable table{solvers, {}};
    for (const Graph& g : instances) {
        ResultRow row{g.name(), g.n(), {}};
        for (const auto& s : solvers) {
            ResultCell cell;
            double total = 0.0;
            std::map<FailureMode, int> failures;
            for (const BenchmarkRecord* r : by_cell[{g.name(), s}]) {
                ++cell.trials;
                if (r->status == SolveStatus::FOUND) {
                    ++cell.solved;
                    total += r->elapsed;
                } else if (r->failure == FailureMode::timeout || r->failure == FailureMode::memory ||
                           r->failure == FailureMode::crash) {
                    ++failures[r->failure];
                }
            }
            if (cell.solved > 0) {
                cell.mean_time = total / cell.solved;
            }
            int best = 0;
            for (const auto& [mode, count] : failures) {
                if (count > best) {
                    best = count;
                    cell.dominant_failure = mode;
                }
            }
            row.cells.push_back(cell);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace detail {
inline std::string format_time(const std::optional<double>& t, int digits)
{
    if (!t) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *t);
    return buf;
}

inline std::string solved_text(const ResultCell& c)
{
    return std::to_string(c.solved) + std::string(failure_marker(c.dominant_failure));
}
} // namespace detail

inline void write_table_csv(std::ostream& out, const ResultTable& t)
{
    out << "Name,n";
    for (const auto& s : t.solvers) {
        out << ',' << s << " Solved," << s << " Time";
    }
    out << '\n';
    for (const auto& row : t.rows) {
        out << row.name << ',' << row.n;
        for (const auto& c : row.cells) {
            out << ',' << detail::solved_text(c) << ',' << detail::format_time(c.mean_time, 6);
        }
        out << '\n';
    }
}

inline void write_table_markdown(std::ostream& out, const ResultTable& t)
{
    out << "| Name | n |";
    for (const auto& s : t.solvers) {
        out << ' ' << s << " Solved | " << s << " Time |";
    }
    out << "\n| --- | --- |";
    for (std::size_t i = 0; i < t.solvers.size(); ++i) {
        out << " --- | --- |";
    }
    out << '\n';
    for (const auto& row : t.rows) {
        out << "| " << row.name << " | " << row.n << " |";
        for (const auto& c : row.cells) {
            out << ' ' << detail::solved_text(c) << " | " << detail::format_time(c.mean_time, 2) << " |";
        }
        out << '\n';
    }
    out << "\n* timeout, ** memory cap, *** solver error (marks the most common failure in a cell)\n";
}

// ---------------------------------------------------------------------------
// Sweep

struct BenchPaths {
    std::filesystem::path records;
    std::filesystem::path csv;
    std::filesystem::path markdown;

    explicit BenchPaths(const std::filesystem::path& dir)
        : records(dir / "records.jsonl"), csv(dir / "results.csv"), markdown(dir / "results.md")
    {
    }
};

inline std::vector<Graph> load_instances(const BenchmarkPlan& plan)
{
    std::vector<Graph> out;
    std::set<std::string> names;
    for (const auto& src : plan.instances) {
        out.push_back(load_instance(src));
        if (!names.insert(out.back().name()).second) {
            throw InvalidArgument("instance name '" + out.back().name() + "' appears twice in the plan");
        }
    }
    return out;
}

inline std::vector<std::string> solver_names(const BenchmarkPlan& plan)
{
    std::vector<std::string> out;
    for (const auto& s : plan.solvers) {
        out.push_back(s.name);
    }
    return out;
}

inline void write_tables(const ResultTable& table, const BenchPaths& paths)
{
    std::ofstream csv(paths.csv, std::ios::binary | std::ios::trunc);
    write_table_csv(csv, table);
    std::ofstream md(paths.markdown, std::ios::binary | std::ios::trunc);
    write_table_markdown(md, table);
    if (!csv || !md) {
        throw Error("failed writing result tables");
    }
}

/// Runs the missing trials of `plan`, appending to out_dir/records.jsonl,
/// then writes results.csv and results.md. `progress` (optional) is called
/// after each trial with (done, total).
inline ResultTable run_bench(const BenchmarkPlan& plan, const std::filesystem::path& out_dir,
                             const std::function<void(std::size_t, std::size_t)>& progress = {})
{
    plan.validate();
    const std::vector<Graph> instances = load_instances(plan);
    std::vector<SolverHandle> solvers;
    for (const auto& s : plan.solvers) {
        solvers.push_back(resolve_solver(s));
    }
    const SolveBudget budget = plan.budget();
    std::filesystem::create_directories(out_dir);
    const BenchPaths paths(out_dir);

    std::set<std::tuple<std::string, std::string, int>> done;
    for (const auto& r : read_records(paths.records, true)) {
        done.insert(r.key());
    }
    struct Job {
        std::size_t instance, solver;
        int index;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t s = 0; s < solvers.size(); ++s) {
            for (int k = 0; k < plan.relabellings; ++k) {
                if (!done.count({instances[i].name(), solvers[s].name, k})) {
                    jobs.push_back({i, s, k});
                }
            }
        }
    }

    {
        RecordWriter writer(paths.records);
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> finished{0};
        std::mutex progress_mutex;
        auto worker = [&] {
            for (std::size_t j = next++; j < jobs.size(); j = next++) {
                const Job& job = jobs[j];
                writer.append(run_trial(instances[job.instance], solvers[job.solver], job.index, plan.seed, budget));
                const std::size_t count = ++finished;
                if (progress) {
                    std::lock_guard lock(progress_mutex);
                    progress(count, jobs.size());
                }
            }
        };
        const int threads = std::min<int>(plan.workers, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& th : pool) {
            th.join();
        }
    }

    const ResultTable table =
        build_table(instances, solver_names(plan), read_records(paths.records), plan.relabellings);
    write_tables(table, paths);
    return table;
}

/// Rebuilds the tables from existing records without running anything.
inline ResultTable report_bench(const BenchmarkPlan& plan, const std::filesystem::path& out_dir)
{
    plan.validate();
    const BenchPaths paths(out_dir);
    const ResultTable table =
        build_table(load_instances(plan), solver_names(plan), read_records(paths.records), plan.relabellings);
    write_tables(table, paths);
    return table;
}

} // namespace hcpforge
