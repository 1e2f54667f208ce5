#pragma once

// Solver-in-the-loop hardening of planted Hamiltonian graphs.
//
// Loop on the current graph G with tracked planted cycle P:
//   solve G -> tour R
//   R found and R != P : delete the smallest edge of R not on P, Count = 0,
//                        solve again (no relabelling)
//   otherwise          : relabel G and P, Count += 1, stop once
//                        Count > max_count, else solve again
// The last max_count solves are the final window; a failure is a solve that
// returned no cycle at all.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/rng.hpp"
#include "hcpforge/solver.hpp"

namespace hcpforge {

enum class LoopOutcome { found_planted, found_other, found_none };

inline std::string_view to_string(LoopOutcome o)
{
    switch (o) {
    case LoopOutcome::found_planted: return "found-planted";
    case LoopOutcome::found_other: return "found-other";
    case LoopOutcome::found_none: return "found-none";
    }
    return "?";
}

struct HardeningConfig {
    int max_count = 100;
    SolverHandle solver = builtin_heuristic_solver();
    std::uint64_t seed = 0;
    SolveBudget budget{10.0, std::nullopt, std::nullopt};
};

struct TraceEntry {
    LoopOutcome outcome = LoopOutcome::found_none;
    SolveStatus status = SolveStatus::ERROR;
    int edges = 0;                  // edge count after this step
    std::optional<Edge> removed;    // set for found-other (labels of that step)
    int count = 0;                  // Count after this step
    std::string detail;
};

struct HardeningReport {
    Graph final_graph;
    Tour planted;
    int max_count = 0;
    int input_edges = 0;
    int edges_removed = 0;
    int failures_in_final_window = 0;
    std::vector<TraceEntry> trace;

    double average_degree() const { return final_graph.average_degree(); }
    bool trivial() const { return failures_in_final_window == 0; }
};

/// Smallest edge (in (min,max) order) of hc_r that hc_i does not use.
inline Edge edge_to_remove(const Tour& hc_r, const Tour& hc_i)
{
    if (hc_r.size() != hc_i.size()) {
        throw InvalidArgument("tours have different lengths");
    }
    if (hc_r == hc_i) {
        throw InvalidArgument("tours are equal; no edge to remove");
    }
    const auto planted = hc_i.edges();
    for (const Edge& e : hc_r.edges()) {
        if (!std::binary_search(planted.begin(), planted.end(), e)) {
            return e;
        }
    }
    throw InvariantViolation("distinct Hamiltonian cycles share every edge");
}

/// Counts found-none results among the last `window` solves.
inline int failures_in_window(const std::vector<TraceEntry>& trace, int window)
{
    int failures = 0;
    const auto begin = trace.size() > static_cast<std::size_t>(window) ? trace.end() - window : trace.begin();
    for (auto it = begin; it != trace.end(); ++it) {
        failures += it->outcome == LoopOutcome::found_none;
    }
    return failures;
}

inline HardeningReport harden(const PlantedInstance& inst, const HardeningConfig& cfg)
{
    if (cfg.max_count < 1) {
        throw InvalidArgument("max_count must be at least 1");
    }
    if (!cfg.solver.solve) {
        throw InvalidArgument("hardening needs a solver");
    }
    if (!is_hamiltonian_cycle(inst.graph, inst.planted)) {
        throw InvalidArgument("planted tour is not a Hamiltonian cycle of the graph");
    }
    Graph g = inst.graph;
    Tour planted = inst.planted;
    HardeningReport report{g, planted, cfg.max_count, g.m(), 0, 0, {}};
    int count = 0;
    std::uint64_t relabels = 0;

    for (std::uint64_t step = 0;; ++step) {
        const std::uint64_t solve_seed = SeedHasher(cfg.seed).add("solve").add(step).value();
        TraceEntry entry;
        std::optional<Tour> found;
        try {
            SolverOutcome out = cfg.solver.solve(g, solve_seed, cfg.budget);
            entry.status = out.status;
            entry.detail = out.detail;
            if (out.status == SolveStatus::FOUND && out.tour && is_hamiltonian_cycle(g, *out.tour)) {
                found = std::move(out.tour);
            } else if (out.status == SolveStatus::FOUND) {
                entry.status = SolveStatus::ERROR;
                entry.detail = "solver reported a tour that does not verify";
            }
        } catch (const std::exception& e) {
            entry.status = SolveStatus::ERROR;
            entry.detail = std::string("solver failed: ") + e.what();
        }

        if (found && !(*found == planted)) {
            const Edge e = edge_to_remove(*found, planted);
            g = remove_edge(g, e);
            ++report.edges_removed;
            count = 0;
            entry.outcome = LoopOutcome::found_other;
            entry.removed = e;
        } else {
            entry.outcome = found ? LoopOutcome::found_planted : LoopOutcome::found_none;
            const Relabelling r =
                Relabelling::random(g.n(), SeedHasher(cfg.seed).add("relabel").add(relabels++).value());
            g = relabel(g, r);
            planted = relabel_tour(planted, r);
            ++count;
        }
        if (!is_hamiltonian_cycle(g, planted)) {
            throw InvariantViolation("planted cycle lost during hardening");
        }
        entry.edges = g.m();
        entry.count = count;
        report.trace.push_back(std::move(entry));
        if (count > cfg.max_count) {
            break;
        }
    }
    report.final_graph = g.with_name(inst.graph.name());
    report.planted = planted;
    report.failures_in_final_window = failures_in_window(report.trace, cfg.max_count);
    return report;
}

// ---------------------------------------------------------------------------
// Summary statistics

struct SummaryRow {
    int size = 0;
    std::size_t sample = 0;
    double average_degree = 0.0;
    double average_fail = 0.0;
    int highest_fail = 0;
    double full_success = 0.0; // percent of reports with no failures
};

inline SummaryRow hardening_summary(const std::vector<HardeningReport>& reports)
{
    if (reports.empty()) {
        throw InvalidArgument("hardening summary needs at least one report");
    }
    SummaryRow row;
    row.size = reports.front().final_graph.n();
    row.sample = reports.size();
    int clean = 0;
    double degree = 0.0, fails = 0.0;
    for (const auto& r : reports) {
        if (r.final_graph.n() != row.size) {
            throw InvalidArgument("reports mix sizes " + std::to_string(row.size) + " and " +
                                  std::to_string(r.final_graph.n()));
        }
        degree += r.average_degree();
        fails += r.failures_in_final_window;
        row.highest_fail = std::max(row.highest_fail, r.failures_in_final_window);
        clean += r.failures_in_final_window == 0;
    }
    const auto k = static_cast<double>(reports.size());
    row.average_degree = degree / k;
    row.average_fail = fails / k;
    row.full_success = 100.0 * clean / k;
    return row;
}

inline const std::vector<std::string>& summary_columns()
{
    static const std::vector<std::string> columns{"Size",         "Sample",       "Average degree",
                                                  "Average Fail", "Highest Fail", "Full success"};
    return columns;
}

namespace detail {
inline std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}
} // namespace detail

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    const auto& cols = summary_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const auto& r : rows) {
        out << r.size << ',' << r.sample << ',' << detail::fixed(r.average_degree, 6) << ','
            << detail::fixed(r.average_fail, 6) << ',' << r.highest_fail << ',' << detail::fixed(r.full_success, 6)
            << '\n';
    }
}

inline void write_summary_markdown(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    const auto& cols = summary_columns();
    out << '|';
    for (const auto& c : cols) {
        out << ' ' << c << " |";
    }
    out << "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << " --- |";
    }
    out << '\n';
    for (const auto& r : rows) {
        out << "| " << r.size << " | " << r.sample << " | " << detail::fixed(r.average_degree, 2) << " | "
            << detail::fixed(r.average_fail, 2) << " | " << r.highest_fail << " | "
            << detail::fixed(r.full_success, 2) << " |\n";
    }
}

} // namespace hcpforge
