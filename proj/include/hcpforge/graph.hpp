#pragma once

// Graph, tour and relabelling value types shared by every other header.
//
// Vertices are 1-based (TSPLIB convention). Graphs are simple and undirected;
// both a sorted edge list and per-vertex sorted neighbour lists are kept.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/rng.hpp"

namespace hcpforge {

using Vertex = int;

/// Unordered vertex pair stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) noexcept
{
    return a < b ? Edge{a, b} : Edge{b, a};
}

class Graph {
public:
    Graph() = default;

    /// Builds a simple graph on vertices 1..n. Throws InvalidArgument on an
    /// out-of-range endpoint, a self-loop or a repeated edge.
    Graph(int n, std::vector<Edge> edges, std::string name = {})
        : n_(n), edges_(std::move(edges)), name_(std::move(name))
    {
        if (n_ < 0) {
            throw InvalidArgument("vertex count must be non-negative");
        }
        for (Edge& e : edges_) {
            if (e.u < 1 || e.v < 1 || e.u > n_ || e.v > n_) {
                throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                      ") has an endpoint outside 1.." + std::to_string(n_));
            }
            if (e.u == e.v) {
                throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
            }
            e = make_edge(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end());
        auto dup = std::adjacent_find(edges_.begin(), edges_.end());
        if (dup != edges_.end()) {
            throw InvalidArgument("duplicate edge (" + std::to_string(dup->u) + "," +
                                  std::to_string(dup->v) + ")");
        }
        build_adjacency();
    }

    int n() const noexcept { return n_; }
    int m() const noexcept { return static_cast<int>(edges_.size()); }
    const std::string& name() const noexcept { return name_; }

    /// Edges sorted by (min, max) endpoint.
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Sorted neighbours of v.
    std::span<const Vertex> neighbours(Vertex v) const
    {
        return {adjacency_.data() + offsets_[v - 1], adjacency_.data() + offsets_[v]};
    }

    int degree(Vertex v) const { return static_cast<int>(offsets_[v] - offsets_[v - 1]); }

    bool has_edge(Vertex a, Vertex b) const
    {
        if (a < 1 || b < 1 || a > n_ || b > n_ || a == b) {
            return false;
        }
        auto nb = neighbours(a);
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    /// Degree -> number of vertices with that degree.
    std::map<int, int> degree_multiset() const
    {
        std::map<int, int> counts;
        for (Vertex v = 1; v <= n_; ++v) {
            ++counts[degree(v)];
        }
        return counts;
    }

    double average_degree() const { return n_ == 0 ? 0.0 : 2.0 * m() / n_; }

    Graph with_name(std::string name) const
    {
        Graph g = *this;
        g.name_ = std::move(name);
        return g;
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_ && a.name_ == b.name_;
    }

    /// Same vertex count and edge set, names ignored.
    bool same_structure(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

private:
    void build_adjacency()
    {
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.u];
            ++offsets_[e.v];
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        adjacency_.assign(edges_.size() * 2, 0);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            adjacency_[fill[e.u - 1]++] = e.v;
            adjacency_[fill[e.v - 1]++] = e.u;
        }
        for (Vertex v = 1; v <= n_; ++v) {
            std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v - 1]),
                      adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]));
        }
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::string name_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
};

/// A cyclic vertex order, stored canonically: it starts at vertex 1 and the
/// second entry is the smaller of vertex 1's two cyclic neighbours. Two tours
/// describing the same undirected cycle therefore compare equal.
class Tour {
public:
    Tour() = default;

    /// Throws InvalidArgument unless `order` is a permutation of 1..order.size().
    explicit Tour(std::vector<Vertex> order) : order_(std::move(order))
    {
        const std::size_t n = order_.size();
        std::vector<bool> seen(n + 1, false);
        for (Vertex v : order_) {
            if (v < 1 || static_cast<std::size_t>(v) > n) {
                throw InvalidArgument("tour vertex " + std::to_string(v) + " outside 1.." + std::to_string(n));
            }
            if (seen[v]) {
                throw InvalidArgument("tour repeats vertex " + std::to_string(v));
            }
            seen[v] = true;
        }
        canonicalize();
    }

    std::size_t size() const noexcept { return order_.size(); }
    std::span<const Vertex> order() const noexcept { return order_; }
    Vertex operator[](std::size_t i) const { return order_[i]; }

    /// The n wrapping edges (for n >= 3), sorted.
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        if (order_.size() < 3) {
            return out;
        }
        out.reserve(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) {
            out.push_back(make_edge(order_[i], order_[(i + 1) % order_.size()]));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool uses_edge(Edge e) const
    {
        auto es = edges();
        return std::binary_search(es.begin(), es.end(), make_edge(e.u, e.v));
    }

    friend bool operator==(const Tour&, const Tour&) = default;

private:
    void canonicalize()
    {
        const std::size_t n = order_.size();
        if (n == 0) {
            return;
        }
        auto one = std::find(order_.begin(), order_.end(), 1);
        std::rotate(order_.begin(), one, order_.end());
        if (n >= 3 && order_.back() < order_[1]) {
            std::reverse(order_.begin() + 1, order_.end());
        }
    }

    std::vector<Vertex> order_;
};

/// A vertex permutation: vertex v is renamed perm[v-1].
struct Relabelling {
    std::vector<Vertex> perm;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return perm.size(); }
    Vertex operator()(Vertex v) const { return perm[static_cast<std::size_t>(v) - 1]; }

    static Relabelling identity(int n)
    {
        Relabelling r;
        r.perm.resize(static_cast<std::size_t>(n));
        std::iota(r.perm.begin(), r.perm.end(), 1);
        return r;
    }

    static Relabelling random(int n, std::uint64_t seed)
    {
        Relabelling r = identity(n);
        Rng rng(seed);
        rng.shuffle(r.perm);
        r.seed = seed;
        return r;
    }

    /// Throws InvalidArgument if perm is not a bijection on 1..n.
    void validate() const
    {
        std::vector<bool> seen(perm.size() + 1, false);
        for (Vertex v : perm) {
            if (v < 1 || static_cast<std::size_t>(v) > perm.size() || seen[v]) {
                throw InvalidArgument("relabelling is not a permutation of 1.." + std::to_string(perm.size()));
            }
            seen[v] = true;
        }
    }

    Relabelling inverse() const
    {
        Relabelling inv;
        inv.seed = seed;
        inv.perm.resize(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            inv.perm[static_cast<std::size_t>(perm[i]) - 1] = static_cast<Vertex>(i + 1);
        }
        return inv;
    }
};

/// A graph together with a Hamiltonian cycle known by construction.
struct PlantedInstance {
    Graph graph;
    Tour planted;
};

/// True iff every wrapping consecutive pair of `t` is an edge of `g`.
/// A tour of the wrong length is not a certificate at all and throws.
inline bool is_hamiltonian_cycle(const Graph& g, const Tour& t)
{
    if (t.size() != static_cast<std::size_t>(g.n())) {
        throw InvalidCertificate("tour has " + std::to_string(t.size()) + " vertices but the graph has " +
                                 std::to_string(g.n()));
    }
    const std::size_t n = t.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.has_edge(t[i], t[(i + 1) % n])) {
            return false;
        }
    }
    return true;
}

inline PlantedInstance make_planted(Graph graph, Tour planted)
{
    if (!is_hamiltonian_cycle(graph, planted)) {
        throw InvalidArgument("planted tour is not a Hamiltonian cycle of " + graph.name());
    }
    return {std::move(graph), std::move(planted)};
}

inline Graph relabel(const Graph& g, const Relabelling& r)
{
    if (r.size() != static_cast<std::size_t>(g.n())) {
        throw InvalidArgument("relabelling has length " + std::to_string(r.size()) + " but the graph has " +
                              std::to_string(g.n()) + " vertices");
    }
    r.validate();
    std::vector<Edge> edges;
    edges.reserve(g.edges().size());
    for (const Edge& e : g.edges()) {
        edges.push_back(make_edge(r(e.u), r(e.v)));
    }
    return Graph(g.n(), std::move(edges), g.name());
}

inline Tour relabel_tour(const Tour& t, const Relabelling& r)
{
    if (r.size() != t.size()) {
        throw InvalidArgument("relabelling has length " + std::to_string(r.size()) + " but the tour has " +
                              std::to_string(t.size()) + " vertices");
    }
    r.validate();
    std::vector<Vertex> order;
    order.reserve(t.size());
    for (Vertex v : t.order()) {
        order.push_back(r(v));
    }
    return Tour(std::move(order));
}

inline Graph add_edge(const Graph& g, Edge e)
{
    if (e.u == e.v) {
        throw InvalidArgument("cannot add self-loop at " + std::to_string(e.u));
    }
    if (g.has_edge(e.u, e.v)) {
        throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") already present");
    }
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    edges.push_back(make_edge(e.u, e.v));
    return Graph(g.n(), std::move(edges), g.name());
}

inline Graph remove_edge(const Graph& g, Edge e)
{
    if (!g.has_edge(e.u, e.v)) {
        throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") not present");
    }
    const Edge target = make_edge(e.u, e.v);
    std::vector<Edge> edges;
    edges.reserve(g.edges().size() - 1);
    for (const Edge& x : g.edges()) {
        if (x != target) {
            edges.push_back(x);
        }
    }
    return Graph(g.n(), std::move(edges), g.name());
}

/// Cycle graph 1-2-...-n-1.
inline Graph cycle_graph(int n, std::string name = {})
{
    if (n < 3) {
        throw InvalidArgument("a cycle needs at least 3 vertices");
    }
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= n; ++v) {
        edges.push_back(make_edge(v, v % n + 1));
    }
    return Graph(n, std::move(edges), std::move(name));
}

inline Graph complete_graph(int n, std::string name = {})
{
    std::vector<Edge> edges;
    for (Vertex a = 1; a <= n; ++a) {
        for (Vertex b = a + 1; b <= n; ++b) {
            edges.push_back({a, b});
        }
    }
    return Graph(n, std::move(edges), std::move(name));
}

} // namespace hcpforge
