#pragma once

// Built-in Hamiltonian cycle solvers.
//
//  count_hc            exact count of Hamiltonian cycles (small graphs)
//  find_hc_exact       complete search; can prove non-Hamiltonicity
//  prune_non_hc_edges  local forced-edge rules iterated to a fixpoint
//  find_hc_heuristic   randomized path extension with rotations and restarts

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/rng.hpp"

namespace hcpforge {

enum class SolveStatus { FOUND, EXHAUSTED_NO_HC, BUDGET_EXCEEDED, ERROR };

inline std::string_view to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::FOUND: return "FOUND";
    case SolveStatus::EXHAUSTED_NO_HC: return "EXHAUSTED_NO_HC";
    case SolveStatus::BUDGET_EXCEEDED: return "BUDGET_EXCEEDED";
    case SolveStatus::ERROR: return "ERROR";
    }
    return "?";
}

inline SolveStatus solve_status_from_string(std::string_view s)
{
    for (SolveStatus st : {SolveStatus::FOUND, SolveStatus::EXHAUSTED_NO_HC, SolveStatus::BUDGET_EXCEEDED,
                           SolveStatus::ERROR}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw InvalidArgument("unknown solve status '" + std::string(s) + "'");
}

/// Why a run did not produce a tour. Maps onto the benchmark table markers:
/// timeout '*', memory '**', crash '***'; gave_up (the solver finished
/// without a tour, or proved there is none) is unmarked.
enum class FailureMode { none, gave_up, timeout, memory, crash };

inline std::string_view to_string(FailureMode f)
{
    switch (f) {
    case FailureMode::none: return "none";
    case FailureMode::gave_up: return "gave_up";
    case FailureMode::timeout: return "timeout";
    case FailureMode::memory: return "memory";
    case FailureMode::crash: return "crash";
    }
    return "?";
}

inline FailureMode failure_mode_from_string(std::string_view s)
{
    for (FailureMode f : {FailureMode::none, FailureMode::gave_up, FailureMode::timeout, FailureMode::memory,
                          FailureMode::crash}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw InvalidArgument("unknown failure mode '" + std::string(s) + "'");
}

inline std::string_view failure_marker(FailureMode f)
{
    switch (f) {
    case FailureMode::timeout: return "*";
    case FailureMode::memory: return "**";
    case FailureMode::crash: return "***";
    default: return "";
    }
}

struct SolveBudget {
    std::optional<double> wall_seconds;
    std::optional<std::uint64_t> node_cap;
    std::optional<std::uint64_t> memory_bytes;

    void validate() const
    {
        if (wall_seconds && !(*wall_seconds > 0)) {
            throw InvalidArgument("wall-clock cap must be positive");
        }
        if (node_cap && *node_cap == 0) {
            throw InvalidArgument("node cap must be positive");
        }
        if (memory_bytes && *memory_bytes == 0) {
            throw InvalidArgument("memory cap must be positive");
        }
    }
};

struct SolverOutcome {
    SolveStatus status = SolveStatus::ERROR;
    std::optional<Tour> tour;
    double elapsed = 0.0;
    std::string detail;
    FailureMode failure = FailureMode::none;
    std::uint64_t nodes = 0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Node and wall-clock accounting shared by the search loops.
class BudgetMeter {
public:
    explicit BudgetMeter(const SolveBudget& budget) : budget_(budget), start_(Clock::now()) { budget.validate(); }

    /// Counts one node; returns false once a cap is hit (and stays false).
    bool tick()
    {
        ++nodes_;
        if (exceeded_) {
            return false;
        }
        if (budget_.node_cap && nodes_ > *budget_.node_cap) {
            exceeded_ = true;
            reason_ = FailureMode::gave_up;
            return false;
        }
        if (budget_.wall_seconds && (nodes_ & 1023) == 0 && seconds_since(start_) > *budget_.wall_seconds) {
            exceeded_ = true;
            reason_ = FailureMode::timeout;
            return false;
        }
        return true;
    }

    bool exceeded() const noexcept { return exceeded_; }
    FailureMode reason() const noexcept { return reason_; }
    std::uint64_t nodes() const noexcept { return nodes_; }
    double elapsed() const { return seconds_since(start_); }

private:
    SolveBudget budget_;
    Clock::time_point start_;
    std::uint64_t nodes_ = 0;
    bool exceeded_ = false;
    FailureMode reason_ = FailureMode::none;
};

/// Depth-first Hamiltonian path extension from a fixed start vertex.
///
/// Pruning: a vertex not yet on the path needs two neighbours that are not
/// path-interior; when the endpoint has an unvisited neighbour with exactly
/// two such neighbours, that neighbour must come next (two of them means a
/// dead end; not applied at the start vertex, which stays open as the
/// closing end). Completed sub-searches are memoised on (visited set, endpoint)
/// through a 128-bit Zobrist key.
class PathSearch {
public:
    enum class Mode { find, count };

    PathSearch(const Graph& g, Mode mode, BudgetMeter& meter, std::uint64_t limit = 0)
        : n_(g.n()), mode_(mode), meter_(meter), limit_(limit)
    {
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (int v = 0; v < n_; ++v) {
            offsets_[v + 1] = offsets_[v] + g.degree(v + 1);
        }
        adjacency_.reserve(offsets_.back());
        for (int v = 0; v < n_; ++v) {
            for (Vertex w : g.neighbours(v + 1)) {
                adjacency_.push_back(w - 1);
            }
        }
        Rng rng(0x5eed5eedULL);
        for (auto* keys : {&zobrist_a_, &zobrist_b_, &end_a_, &end_b_}) {
            keys->resize(static_cast<std::size_t>(n_));
            for (auto& k : *keys) {
                k = rng.next();
            }
        }
    }

    /// Runs the search. In find mode returns 1 and fills tour() on success.
    /// In count mode returns the number of directed Hamiltonian cycles
    /// through the start (twice the undirected count), saturating at limit.
    std::uint64_t run()
    {
        if (n_ < 3) {
            return 0;
        }
        start_ = 0;
        for (int v = 1; v < n_; ++v) {
            if (degree(v) < degree(start_)) {
                start_ = v;
            }
        }
        visited_.assign(static_cast<std::size_t>(n_), 0);
        avail_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            avail_[v] = degree(v);
        }
        visited_[start_] = 1;
        hash_a_ = zobrist_a_[start_];
        hash_b_ = zobrist_b_[start_];
        path_.assign(1, start_);
        return extend(start_, 1);
    }

    bool aborted() const noexcept { return meter_.exceeded() || limit_hit_; }
    bool limit_hit() const noexcept { return limit_hit_; }
    const std::vector<int>& tour() const noexcept { return found_; }

private:
    struct Key {
        std::uint64_t a, b;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept { return static_cast<std::size_t>(k.a); }
    };

    static constexpr std::size_t kMemoCap = std::size_t{1} << 20;

    int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

    bool adjacent(int a, int b) const
    {
        for (std::size_t i = offsets_[a]; i < offsets_[a + 1]; ++i) {
            if (adjacency_[i] == b) {
                return true;
            }
        }
        return false;
    }

    std::uint64_t extend(int end, int depth)
    {
        if (depth == n_) {
            if (!adjacent(end, start_)) {
                return 0;
            }
            if (mode_ == Mode::find) {
                found_ = path_;
            }
            return 1;
        }
        if (!meter_.tick()) {
            return 0;
        }
        const Key key{hash_a_ ^ end_a_[end], hash_b_ ^ end_b_[end]};
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }

        const std::size_t base = scratch_.size();
        int forced = -1;
        int forced_count = 0;
        for (std::size_t i = offsets_[end]; i < offsets_[end + 1]; ++i) {
            const int w = adjacency_[i];
            if (visited_[w]) {
                continue;
            }
            if (end != start_ && avail_[w] <= 2 && depth + 1 < n_) {
                forced = w;
                ++forced_count;
            }
            scratch_.push_back(w);
        }
        std::uint64_t total = 0;
        if (forced_count >= 2) {
            scratch_.resize(base);
            remember(key, 0);
            return 0;
        }
        if (forced_count == 1) {
            scratch_.resize(base);
            scratch_.push_back(forced);
        } else if (mode_ == Mode::find) {
            std::stable_sort(scratch_.begin() + static_cast<std::ptrdiff_t>(base), scratch_.end(),
                             [this](int x, int y) { return avail_[x] < avail_[y]; });
        }

        for (std::size_t ci = base; ci < scratch_.size(); ++ci) {
            const int next = scratch_[ci];
            const bool dead = step(end, next);
            if (!dead) {
                total += extend(next, depth + 1);
            }
            if (mode_ == Mode::find && total > 0) {
                scratch_.resize(base);
                return total;
            }
            unstep(end, next);
            if (aborted()) {
                scratch_.resize(base);
                return 0;
            }
            if (mode_ == Mode::count && limit_ && total >= limit_) {
                limit_hit_ = true;
                scratch_.resize(base);
                return 0;
            }
        }
        scratch_.resize(base);
        remember(key, total);
        return total;
    }

    // Moves the endpoint from `end` to `next`. Returns true if the move
    // leaves some vertex without enough usable neighbours.
    bool step(int end, int next)
    {
        bool dead = false;
        if (end != start_) {
            for (std::size_t i = offsets_[end]; i < offsets_[end + 1]; ++i) {
                const int x = adjacency_[i];
                --avail_[x];
                if (x != next && !visited_[x] && avail_[x] < 2) {
                    dead = true;
                }
            }
            if (avail_[start_] < 1) {
                dead = true;
            }
        }
        visited_[next] = 1;
        hash_a_ ^= zobrist_a_[next];
        hash_b_ ^= zobrist_b_[next];
        path_.push_back(next);
        return dead;
    }

    void unstep(int end, int next)
    {
        path_.pop_back();
        hash_a_ ^= zobrist_a_[next];
        hash_b_ ^= zobrist_b_[next];
        visited_[next] = 0;
        if (end != start_) {
            for (std::size_t i = offsets_[end]; i < offsets_[end + 1]; ++i) {
                ++avail_[adjacency_[i]];
            }
        }
    }

    void remember(const Key& key, std::uint64_t value)
    {
        if (aborted() || memo_.size() >= kMemoCap) {
            return;
        }
        if (mode_ == Mode::find && value != 0) {
            return;
        }
        memo_.emplace(key, value);
    }

    int n_;
    Mode mode_;
    BudgetMeter& meter_;
    std::uint64_t limit_;
    bool limit_hit_ = false;
    int start_ = 0;

    std::vector<std::size_t> offsets_;
    std::vector<int> adjacency_;
    std::vector<std::uint64_t> zobrist_a_, zobrist_b_, end_a_, end_b_;

    std::vector<char> visited_;
    std::vector<int> avail_;
    std::vector<int> path_;
    std::vector<int> scratch_;
    std::vector<int> found_;
    std::uint64_t hash_a_ = 0, hash_b_ = 0;
    std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
};

inline bool connected(const Graph& g)
{
    if (g.n() == 0) {
        return true;
    }
    std::vector<char> seen(static_cast<std::size_t>(g.n()) + 1, 0);
    std::vector<Vertex> stack{1};
    seen[1] = 1;
    int reached = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : g.neighbours(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == g.n();
}

/// Cheap necessary conditions for Hamiltonicity.
inline bool trivially_non_hamiltonian(const Graph& g)
{
    if (g.n() < 3) {
        return true;
    }
    for (Vertex v = 1; v <= g.n(); ++v) {
        if (g.degree(v) < 2) {
            return true;
        }
    }
    return !connected(g);
}

inline Tour tour_from_zero_based(const std::vector<int>& path)
{
    std::vector<Vertex> order;
    order.reserve(path.size());
    for (int v : path) {
        order.push_back(v + 1);
    }
    return Tour(std::move(order));
}


/// Complete Hamiltonian cycle search over edge decisions.
///
/// Each edge is undecided, required or deleted. Propagation to a fixpoint:
///  - a vertex with fewer than two live edges fails;
///  - a vertex with exactly two live edges requires both;
///  - a vertex with two required edges deletes its other edges;
///  - required edges form vertex-disjoint paths; an edge joining the two
///    ends of a path short of n vertices is deleted.
/// Every search node also rejects live graphs that are disconnected or have
/// a cut vertex. Branching picks a path end (else any vertex) with the fewest
/// live edges and splits on one of its undecided edges: required, or deleted.
class EdgeSearch {
public:
    EdgeSearch(const Graph& g, BudgetMeter& meter) : n_(g.n()), meter_(meter)
    {
        const auto edges = g.edges();
        ends_.reserve(edges.size());
        for (const Edge& e : edges) {
            ends_.push_back({e.u - 1, e.v - 1});
        }
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& [a, b] : ends_) {
            ++offsets_[a + 1];
            ++offsets_[b + 1];
        }
        for (int v = 0; v < n_; ++v) {
            offsets_[v + 1] += offsets_[v];
        }
        incident_.resize(offsets_.back());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (int e = 0; e < static_cast<int>(ends_.size()); ++e) {
            incident_[fill[ends_[e].first]++] = e;
            incident_[fill[ends_[e].second]++] = e;
        }
        state_.assign(ends_.size(), kUndecided);
        live_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            live_[v] = static_cast<int>(offsets_[v + 1] - offsets_[v]);
        }
        required_.assign(static_cast<std::size_t>(n_), 0);
        other_end_.resize(static_cast<std::size_t>(n_));
        length_.assign(static_cast<std::size_t>(n_), 1);
        for (int v = 0; v < n_; ++v) {
            other_end_[v] = v;
        }
        disc_.assign(static_cast<std::size_t>(n_), 0);
        low_.assign(static_cast<std::size_t>(n_), 0);
    }

    /// true when a Hamiltonian cycle was found (see cycle()).
    bool run()
    {
        if (n_ < 3) {
            return false;
        }
        for (int v = 0; v < n_; ++v) {
            queue_.push_back(v);
        }
        if (!propagate()) {
            return false;
        }
        return search();
    }

    /// The found cycle as 0-based vertices.
    std::vector<int> cycle() const
    {
        std::vector<int> order{0};
        int prev = -1, at = 0;
        while (static_cast<int>(order.size()) < n_) {
            int next = -1;
            for (std::size_t i = offsets_[at]; i < offsets_[at + 1]; ++i) {
                const int e = incident_[i];
                if (state_[e] != kRequired) {
                    continue;
                }
                const int w = other(e, at);
                if (w != prev) {
                    next = w;
                    break;
                }
            }
            if (next < 0) {
                break;
            }
            order.push_back(next);
            prev = at;
            at = next;
        }
        return order;
    }

private:
    static constexpr std::uint8_t kUndecided = 0, kRequired = 1, kDeleted = 2;

    struct TrailEntry {
        int edge;      // edge whose state was set, or -1 for a path-end record
        int vertex;    // path-end record: vertex whose fields were overwritten
        int old_end;
        int old_length;
    };

    int other(int e, int v) const { return ends_[e].first == v ? ends_[e].second : ends_[e].first; }

    int find_edge(int a, int b) const
    {
        if (offsets_[a + 1] - offsets_[a] > offsets_[b + 1] - offsets_[b]) {
            std::swap(a, b);
        }
        for (std::size_t i = offsets_[a]; i < offsets_[a + 1]; ++i) {
            if (other(incident_[i], a) == b) {
                return incident_[i];
            }
        }
        return -1;
    }

    void set_end(int v, int end, int length)
    {
        trail_.push_back({-1, v, other_end_[v], length_[v]});
        other_end_[v] = end;
        length_[v] = length;
    }

    bool remove(int e)
    {
        if (state_[e] == kDeleted) {
            return true;
        }
        if (state_[e] == kRequired) {
            return false;
        }
        state_[e] = kDeleted;
        trail_.push_back({e, -1, 0, 0});
        const auto [a, b] = ends_[e];
        --live_[a];
        --live_[b];
        queue_.push_back(a);
        queue_.push_back(b);
        return true;
    }

    bool require(int e)
    {
        if (state_[e] == kRequired) {
            return true;
        }
        if (state_[e] == kDeleted) {
            return false;
        }
        const auto [u, v] = ends_[e];
        if (required_[u] >= 2 || required_[v] >= 2) {
            return false;
        }
        const int a = other_end_[u];
        const int b = other_end_[v];
        const bool closes = (a == v);
        if (closes && length_[u] < n_) {
            return false;
        }
        state_[e] = kRequired;
        trail_.push_back({e, -1, 0, 0});
        ++required_[u];
        ++required_[v];
        queue_.push_back(u);
        queue_.push_back(v);
        if (closes) {
            complete_ = true;
            return true;
        }
        const int joined = length_[u] + length_[v];
        set_end(a, b, joined);
        set_end(b, a, joined);
        if (joined < n_) {
            const int shortcut = find_edge(a, b);
            if (shortcut >= 0 && shortcut != e && !remove(shortcut)) {
                return false;
            }
        }
        return true;
    }

    bool propagate()
    {
        while (!queue_.empty()) {
            const int v = queue_.back();
            queue_.pop_back();
            if (live_[v] < 2 || required_[v] > 2) {
                queue_.clear();
                return false;
            }
            if (live_[v] == 2 && required_[v] < 2) {
                for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
                    const int e = incident_[i];
                    if (state_[e] == kUndecided && !require(e)) {
                        queue_.clear();
                        return false;
                    }
                }
            } else if (required_[v] == 2 && live_[v] > 2) {
                for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
                    const int e = incident_[i];
                    if (state_[e] == kUndecided && !remove(e)) {
                        queue_.clear();
                        return false;
                    }
                }
            }
        }
        return true;
    }

    void undo_to(std::size_t mark)
    {
        while (trail_.size() > mark) {
            const TrailEntry t = trail_.back();
            trail_.pop_back();
            if (t.edge < 0) {
                other_end_[t.vertex] = t.old_end;
                length_[t.vertex] = t.old_length;
                continue;
            }
            const auto [a, b] = ends_[t.edge];
            if (state_[t.edge] == kDeleted) {
                ++live_[a];
                ++live_[b];
            } else {
                --required_[a];
                --required_[b];
            }
            state_[t.edge] = kUndecided;
        }
        complete_ = false;
    }

    /// Live graph is connected and has no cut vertex (iterative Tarjan).
    bool biconnected()
    {
        std::fill(disc_.begin(), disc_.end(), 0);
        int timer = 0;
        stack_.clear();
        stack_.push_back({0, -1, offsets_[0]});
        disc_[0] = low_[0] = ++timer;
        int root_children = 0;
        while (!stack_.empty()) {
            auto& f = stack_.back();
            if (f.next < offsets_[f.v + 1]) {
                const int e = incident_[f.next++];
                if (state_[e] == kDeleted || e == f.parent_edge) {
                    continue;
                }
                const int w = other(e, f.v);
                if (disc_[w] == 0) {
                    disc_[w] = low_[w] = ++timer;
                    stack_.push_back({w, e, offsets_[w]});
                } else {
                    low_[f.v] = std::min(low_[f.v], disc_[w]);
                }
                continue;
            }
            const int v = f.v;
            stack_.pop_back();
            if (stack_.empty()) {
                break;
            }
            const int parent = stack_.back().v;
            low_[parent] = std::min(low_[parent], low_[v]);
            if (parent == 0) {
                ++root_children;
            } else if (low_[v] >= disc_[parent]) {
                return false;
            }
        }
        if (timer != n_) {
            return false;
        }
        return root_children <= 1;
    }

    bool search()
    {
        if (complete_) {
            return true;
        }
        if (!meter_.tick()) {
            return false;
        }
        if (!biconnected()) {
            return false;
        }
        // Branch vertex: prefer path ends, then fewest live edges.
        int best = -1;
        for (int v = 0; v < n_; ++v) {
            if (required_[v] == 2) {
                continue;
            }
            if (best < 0 || (required_[v] == 1) > (required_[best] == 1) ||
                ((required_[v] == 1) == (required_[best] == 1) && live_[v] < live_[best])) {
                best = v;
            }
        }
        if (best < 0) {
            return false;
        }
        // Edge towards the neighbour with fewest live edges first; ties go to
        // the higher label.
        int chosen = -1;
        for (std::size_t i = offsets_[best]; i < offsets_[best + 1]; ++i) {
            const int e = incident_[i];
            if (state_[e] != kUndecided) {
                continue;
            }
            if (chosen < 0 || live_[other(e, best)] < live_[other(chosen, best)] ||
                (live_[other(e, best)] == live_[other(chosen, best)] && other(e, best) > other(chosen, best))) {
                chosen = e;
            }
        }
        if (chosen < 0) {
            return false;
        }
        const std::size_t mark = trail_.size();
        if (require(chosen) && propagate() && search()) {
            return true;
        }
        queue_.clear();
        undo_to(mark);
        if (meter_.exceeded()) {
            return false;
        }
        if (remove(chosen) && propagate() && search()) {
            return true;
        }
        queue_.clear();
        undo_to(mark);
        return false;
    }

    struct Frame {
        int v;
        int parent_edge;
        std::size_t next;
    };

    int n_;
    BudgetMeter& meter_;
    std::vector<std::pair<int, int>> ends_;
    std::vector<std::size_t> offsets_;
    std::vector<int> incident_;
    std::vector<std::uint8_t> state_;
    std::vector<int> live_, required_, other_end_, length_;
    std::vector<int> queue_;
    std::vector<TrailEntry> trail_;
    std::vector<int> disc_, low_;
    std::vector<Frame> stack_;
    bool complete_ = false;
};

} // namespace detail

enum class CountStatus { exact, limit_reached, budget_exceeded };

struct HcCount {
    std::uint64_t count = 0;
    CountStatus status = CountStatus::exact;
    /// Budget outcome mirrored as a solver status: BUDGET_EXCEEDED when the
    /// search was cut, otherwise FOUND (count > 0) or EXHAUSTED_NO_HC.
    SolveStatus solve_status() const
    {
        if (status == CountStatus::budget_exceeded) {
            return SolveStatus::BUDGET_EXCEEDED;
        }
        return count > 0 ? SolveStatus::FOUND : SolveStatus::EXHAUSTED_NO_HC;
    }
};

/// Exact number of distinct Hamiltonian cycles (undirected, up to rotation and
/// reflection). With `limit`, stops once that many are found and reports
/// limit_reached with count == limit. A cut budget is reported as such; the
/// count is then only a lower bound and must not be used as an answer.
inline HcCount count_hc(const Graph& g, std::optional<std::uint64_t> limit = {}, const SolveBudget& budget = {})
{
    if (g.n() == 0) {
        throw InvalidArgument("count_hc needs a nonempty graph");
    }
    if (detail::trivially_non_hamiltonian(g)) {
        return {0, CountStatus::exact};
    }
    detail::BudgetMeter meter(budget);
    const std::uint64_t directed_limit = limit ? 2 * *limit : 0;
    detail::PathSearch search(g, detail::PathSearch::Mode::count, meter, directed_limit);
    const std::uint64_t directed = search.run();
    if (meter.exceeded()) {
        return {directed / 2, CountStatus::budget_exceeded};
    }
    if (search.limit_hit()) {
        return {*limit, CountStatus::limit_reached};
    }
    return {directed / 2, CountStatus::exact};
}

struct PruneResult {
    Graph graph;
    bool non_hamiltonian = false;
    std::string reason;
    int removed = 0;
};

/// Removes edges that lie on no Hamiltonian cycle, using only local rules,
/// until nothing changes:
///  - both edges at a degree-2 vertex are forced;
///  - a vertex with two forced edges loses all its other edges;
///  - an edge joining the two ends of a forced path on fewer than n vertices
///    would close a short cycle and is removed.
/// The Hamiltonian cycles of the result are exactly those of the input. If a
/// rule proves there are none, `non_hamiltonian` is set and `graph` holds the
/// partially pruned graph.
inline PruneResult prune_non_hc_edges(const Graph& g)
{
    PruneResult result{g, false, {}, 0};
    const int n = g.n();
    if (n < 3) {
        result.non_hamiltonian = true;
        result.reason = "fewer than 3 vertices";
        return result;
    }
    while (true) {
        const Graph& cur = result.graph;
        for (Vertex v = 1; v <= n; ++v) {
            if (cur.degree(v) < 2) {
                result.non_hamiltonian = true;
                result.reason = "vertex " + std::to_string(v) + " has degree " + std::to_string(cur.degree(v));
                return result;
            }
        }
        // forced[v] holds up to the first three forced partners of v.
        std::vector<std::vector<Vertex>> forced(static_cast<std::size_t>(n) + 1);
        std::vector<Edge> forced_edges;
        for (Vertex v = 1; v <= n; ++v) {
            if (cur.degree(v) == 2) {
                for (Vertex w : cur.neighbours(v)) {
                    forced_edges.push_back(make_edge(v, w));
                }
            }
        }
        std::sort(forced_edges.begin(), forced_edges.end());
        forced_edges.erase(std::unique(forced_edges.begin(), forced_edges.end()), forced_edges.end());
        for (const Edge& e : forced_edges) {
            forced[e.u].push_back(e.v);
            forced[e.v].push_back(e.u);
        }
        for (Vertex v = 1; v <= n; ++v) {
            if (forced[v].size() > 2) {
                result.non_hamiltonian = true;
                result.reason = "vertex " + std::to_string(v) + " has three forced edges";
                return result;
            }
        }

        std::vector<Edge> doomed;
        for (Vertex v = 1; v <= n; ++v) {
            if (forced[v].size() != 2) {
                continue;
            }
            for (Vertex w : cur.neighbours(v)) {
                if (w != forced[v][0] && w != forced[v][1]) {
                    doomed.push_back(make_edge(v, w));
                }
            }
        }

        // Walk every forced path/cycle once.
        std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
        for (Vertex v = 1; v <= n; ++v) {
            if (seen[v] || forced[v].size() != 1) {
                continue;
            }
            Vertex prev = 0, at = v;
            int length = 0;
            while (true) {
                seen[at] = 1;
                ++length;
                Vertex next = 0;
                for (Vertex w : forced[at]) {
                    if (w != prev) {
                        next = w;
                    }
                }
                if (next == 0) {
                    break;
                }
                prev = at;
                at = next;
            }
            if (length < n && cur.has_edge(v, at) &&
                !std::binary_search(forced_edges.begin(), forced_edges.end(), make_edge(v, at))) {
                doomed.push_back(make_edge(v, at));
            }
        }
        for (Vertex v = 1; v <= n; ++v) {
            if (seen[v] || forced[v].size() != 2) {
                continue;
            }
            // Every vertex here has two forced edges: a closed forced cycle.
            int length = 0;
            Vertex prev = 0, at = v;
            do {
                seen[at] = 1;
                ++length;
                Vertex next = forced[at][0] == prev ? forced[at][1] : forced[at][0];
                prev = at;
                at = next;
            } while (at != v);
            if (length < n) {
                result.non_hamiltonian = true;
                result.reason = "forced edges close a cycle of length " + std::to_string(length);
                return result;
            }
        }

        std::sort(doomed.begin(), doomed.end());
        doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
        if (doomed.empty()) {
            return result;
        }
        std::vector<Edge> kept;
        kept.reserve(cur.edges().size());
        for (const Edge& e : cur.edges()) {
            if (!std::binary_search(doomed.begin(), doomed.end(), e)) {
                kept.push_back(e);
            }
        }
        result.removed += static_cast<int>(doomed.size());
        result.graph = Graph(n, std::move(kept), g.name());
    }
}

/// Complete search: FOUND with a verified tour, EXHAUSTED_NO_HC when the
/// search space is exhausted, or BUDGET_EXCEEDED.
inline SolverOutcome find_hc_exact(const Graph& g, const SolveBudget& budget = {})
{
    if (g.n() == 0) {
        throw InvalidArgument("find_hc_exact needs a nonempty graph");
    }
    detail::BudgetMeter meter(budget);
    SolverOutcome out;
    auto finish = [&](SolveStatus status, std::string detail_text) {
        out.status = status;
        out.detail = std::move(detail_text);
        out.elapsed = meter.elapsed();
        out.nodes = meter.nodes();
        if (status == SolveStatus::EXHAUSTED_NO_HC) {
            out.failure = FailureMode::gave_up;
        } else if (status == SolveStatus::BUDGET_EXCEEDED) {
            out.failure = meter.reason() == FailureMode::timeout ? FailureMode::timeout : FailureMode::gave_up;
        }
        return out;
    };

    if (detail::trivially_non_hamiltonian(g)) {
        return finish(SolveStatus::EXHAUSTED_NO_HC, "degree or connectivity obstruction");
    }
    detail::EdgeSearch search(g, meter);
    if (search.run()) {
        Tour t = detail::tour_from_zero_based(search.cycle());
        if (!is_hamiltonian_cycle(g, t)) {
            throw InvariantViolation("exact search produced a tour that does not verify");
        }
        out.tour = std::move(t);
        return finish(SolveStatus::FOUND, "");
    }
    if (meter.exceeded()) {
        return finish(SolveStatus::BUDGET_EXCEEDED,
                      meter.reason() == FailureMode::timeout ? "wall-clock cap reached" : "node cap reached");
    }
    return finish(SolveStatus::EXHAUSTED_NO_HC, "search space exhausted");
}

/// Randomized heuristic: least-degree-first path extension, rotations of the
/// path when the endpoint is stuck, and restarts with growing step limits.
/// Never claims non-Hamiltonicity. Without any cap in `budget` a 10 s
/// wall-clock cap applies. With only a node cap the run is fully
/// deterministic in (graph, seed).
inline SolverOutcome find_hc_heuristic(const Graph& g, const SolveBudget& budget, std::uint64_t seed)
{
    if (g.n() == 0) {
        throw InvalidArgument("find_hc_heuristic needs a nonempty graph");
    }
    SolveBudget effective = budget;
    if (!effective.wall_seconds && !effective.node_cap) {
        effective.wall_seconds = 10.0;
    }
    detail::BudgetMeter meter(effective);
    SolverOutcome out;
    auto give_up = [&] {
        out.status = SolveStatus::BUDGET_EXCEEDED;
        out.failure = meter.reason() == FailureMode::timeout ? FailureMode::timeout : FailureMode::gave_up;
        out.detail = meter.reason() == FailureMode::timeout ? "wall-clock cap reached" : "node cap reached";
        out.elapsed = meter.elapsed();
        out.nodes = meter.nodes();
        return out;
    };

    const int n = g.n();
    if (detail::trivially_non_hamiltonian(g)) {
        // No tour can exist, but a heuristic does not certify that.
        out.status = SolveStatus::BUDGET_EXCEEDED;
        out.failure = FailureMode::gave_up;
        out.detail = "no candidate cycle (degree or connectivity obstruction)";
        out.elapsed = meter.elapsed();
        return out;
    }

    Rng rng(seed);
    std::vector<Vertex> path;
    std::vector<int> pos(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> free_degree(static_cast<std::size_t>(n) + 1);
    std::vector<Vertex> options;

    auto add_to_path = [&](Vertex v) {
        pos[v] = static_cast<int>(path.size());
        path.push_back(v);
        for (Vertex w : g.neighbours(v)) {
            --free_degree[w];
        }
    };
    auto reverse_range = [&](std::size_t from) {
        std::reverse(path.begin() + static_cast<std::ptrdiff_t>(from), path.end());
        for (std::size_t i = from; i < path.size(); ++i) {
            pos[path[i]] = static_cast<int>(i);
        }
    };

    const std::uint64_t base_limit = 20ULL * static_cast<std::uint64_t>(n) + 100;
    for (std::uint64_t restart = 0;; ++restart) {
        path.clear();
        std::fill(pos.begin(), pos.end(), -1);
        for (Vertex v = 1; v <= n; ++v) {
            free_degree[v] = g.degree(v);
        }
        add_to_path(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)) + 1));
        const std::uint64_t limit = base_limit * (restart + 1);
        for (std::uint64_t steps = 0; steps < limit; ++steps) {
            if (!meter.tick()) {
                return give_up();
            }
            const Vertex end = path.back();

            // Extension to the unvisited neighbour with fewest free neighbours.
            options.clear();
            int best = std::numeric_limits<int>::max();
            for (Vertex w : g.neighbours(end)) {
                if (pos[w] >= 0) {
                    continue;
                }
                if (free_degree[w] < best) {
                    best = free_degree[w];
                    options.clear();
                }
                if (free_degree[w] == best) {
                    options.push_back(w);
                }
            }
            if (!options.empty()) {
                add_to_path(options[rng.below(options.size())]);
                continue;
            }

            if (static_cast<int>(path.size()) == n && g.has_edge(end, path.front())) {
                out.status = SolveStatus::FOUND;
                out.tour = Tour(path);
                out.elapsed = meter.elapsed();
                out.nodes = meter.nodes();
                return out;
            }

            // Rotation: pick a neighbour x = path[i] of the endpoint (other
            // than its predecessor), reverse path[i+1..]; path[i+1] becomes the
            // new endpoint. Occasionally swap ends instead.
            options.clear();
            for (Vertex w : g.neighbours(end)) {
                const int i = pos[w];
                if (i >= 0 && i + 2 < static_cast<int>(path.size())) {
                    options.push_back(w);
                }
            }
            if (options.empty() || rng.below(8) == 0) {
                std::reverse(path.begin(), path.end());
                for (std::size_t i = 0; i < path.size(); ++i) {
                    pos[path[i]] = static_cast<int>(i);
                }
                continue;
            }
            const Vertex pivot = options[rng.below(options.size())];
            reverse_range(static_cast<std::size_t>(pos[pivot]) + 1);
        }
    }
}

/// A named solver callable as solve(graph, seed, budget). Built-in solvers
/// are safe to call concurrently on different graphs.
struct SolverHandle {
    std::string name;
    std::function<SolverOutcome(const Graph&, std::uint64_t, const SolveBudget&)> solve;
};

inline SolverHandle builtin_exact_solver()
{
    return {"exact", [](const Graph& g, std::uint64_t, const SolveBudget& b) { return find_hc_exact(g, b); }};
}

inline SolverHandle builtin_heuristic_solver()
{
    return {"heuristic",
            [](const Graph& g, std::uint64_t seed, const SolveBudget& b) { return find_hc_heuristic(g, b, seed); }};
}

} // namespace hcpforge
