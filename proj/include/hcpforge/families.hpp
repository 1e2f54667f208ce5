#pragma once

// Generators for the benchmark instance families: generalized Petersen graphs
// (and their one-chord Hamiltonian variants), maximally dense uniquely
// Hamiltonian graphs, flower snarks, random regular graphs and planted
// Hamiltonian regular graphs.
//
// Every generator is a pure function of its parameters and seed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/rng.hpp"

namespace hcpforge {

enum class Family { GPN, GP3, GP0, SHEEHAN, SNARK, SNARK_MODIFIED, RANDOM_REGULAR, PLANTED_CUBIC };

inline std::string_view to_string(Family f)
{
    switch (f) {
    case Family::GPN: return "GPN";
    case Family::GP3: return "GP3";
    case Family::GP0: return "GP0";
    case Family::SHEEHAN: return "SHEEHAN";
    case Family::SNARK: return "SNARK";
    case Family::SNARK_MODIFIED: return "SNARK_MODIFIED";
    case Family::RANDOM_REGULAR: return "RANDOM_REGULAR";
    case Family::PLANTED_CUBIC: return "PLANTED_CUBIC";
    }
    return "?";
}

inline Family family_from_string(std::string_view s)
{
    for (Family f : {Family::GPN, Family::GP3, Family::GP0, Family::SHEEHAN, Family::SNARK, Family::SNARK_MODIFIED,
                     Family::RANDOM_REGULAR, Family::PLANTED_CUBIC}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw InvalidArgument("unknown family '" + std::string(s) + "'");
}

/// Parameters for one generated instance. Which integers matter depends on
/// the family: p for GP*, k for snarks, n (and d) for the rest.
struct FamilySpec {
    Family family = Family::GPN;
    int p = 0;
    int k = 0;
    int n = 0;
    int d = 3;
    std::optional<std::uint64_t> seed;
};

enum class Hamiltonicity { yes, no, unknown };

inline std::string_view to_string(Hamiltonicity h)
{
    switch (h) {
    case Hamiltonicity::yes: return "yes";
    case Hamiltonicity::no: return "no";
    case Hamiltonicity::unknown: return "unknown";
    }
    return "?";
}

/// What is known about an instance by construction.
struct ExpectedProperties {
    std::optional<long long> hc_count;
    Hamiltonicity hamiltonian = Hamiltonicity::unknown;

    /// Optimal binary-TSP tour length: 0 exactly when the graph is Hamiltonian.
    std::optional<int> optimal_tsp_length() const
    {
        if (hamiltonian == Hamiltonicity::yes) {
            return 0;
        }
        return std::nullopt;
    }
};

struct GeneratedInstance {
    Graph graph;
    ExpectedProperties expected;
    std::optional<Tour> planted;
};

/// GP(p, k): outer cycle u_0..u_{p-1}, spokes u_i v_i, inner edges v_i v_{i+k}.
/// u_i is labelled i+1 and v_i is labelled p+i+1.
inline Graph gen_generalized_petersen(int p, int k, std::string name = {})
{
    if (p < 3) {
        throw InvalidArgument("generalized Petersen graph needs p >= 3, got " + std::to_string(p));
    }
    if (k < 1 || 2 * k >= p) {
        throw InvalidArgument("generalized Petersen graph needs 1 <= k < p/2, got p=" + std::to_string(p) +
                              " k=" + std::to_string(k));
    }
    auto u = [](int i) { return i + 1; };
    auto v = [p](int i) { return p + i + 1; };
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(3 * p));
    for (int i = 0; i < p; ++i) {
        edges.push_back(make_edge(u(i), u((i + 1) % p)));
        edges.push_back(make_edge(u(i), v(i)));
        edges.push_back(make_edge(v(i), v((i + k) % p)));
    }
    if (name.empty()) {
        name = "GP_" + std::to_string(p) + "_" + std::to_string(k);
    }
    return Graph(2 * p, std::move(edges), std::move(name));
}

/// Lexicographically smallest vertex pair that is not an edge.
inline std::optional<Edge> smallest_absent_pair(const Graph& g)
{
    for (Vertex a = 1; a <= g.n(); ++a) {
        auto nb = g.neighbours(a);
        Vertex expect = a + 1;
        for (Vertex b : nb) {
            if (b < expect) {
                continue;
            }
            if (b != expect) {
                break;
            }
            ++expect;
        }
        if (expect <= g.n()) {
            return Edge{a, expect};
        }
    }
    return std::nullopt;
}

/// One of the three GP(p,2) benchmark classes, named <CLASS>_<2p>.
///
/// GP0 graphs are non-Hamiltonian, so a chord is added. Without a seed it is
/// the smallest absent pair (u_0, u_2); with a seed it is (u_i, u_{i+2}) for a
/// random i. The rotation i -> i+1 is an automorphism of GP(p,2), so every
/// choice gives an isomorphic, Hamiltonian instance.
inline GeneratedInstance gen_gp_benchmark(Family cls, int p, std::optional<std::uint64_t> seed = {})
{
    const int residue = ((p % 6) + 6) % 6;
    const int required = cls == Family::GPN ? 1 : cls == Family::GP3 ? 3 : cls == Family::GP0 ? 5 : -1;
    if (required < 0) {
        throw InvalidArgument("gen_gp_benchmark expects GPN, GP3 or GP0");
    }
    if (residue != required) {
        throw InvalidArgument(std::string(to_string(cls)) + " requires p = " + std::to_string(required) +
                              " (mod 6), got p=" + std::to_string(p));
    }
    const std::string name = std::string(to_string(cls)) + "_" + std::to_string(2 * p);
    Graph g = gen_generalized_petersen(p, 2, name);
    GeneratedInstance out;
    switch (cls) {
    case Family::GPN:
        out.expected = {p, Hamiltonicity::yes};
        break;
    case Family::GP3:
        out.expected = {3, Hamiltonicity::yes};
        break;
    default: {
        Edge chord = *smallest_absent_pair(g);
        if (seed) {
            Rng rng(*seed);
            const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
            chord = make_edge(i + 1, (i + 2) % p + 1);
        }
        g = add_edge(g, chord);
        out.expected = {std::nullopt, Hamiltonicity::yes};
        break;
    }
    }
    out.graph = std::move(g);
    return out;
}

/// Maximally dense uniquely Hamiltonian graph on n >= 3 vertices, with
/// floor(n^2/4) + 1 edges.
///
/// The unique Hamiltonian cycle is 1-2-...-n-1. Chords: every pair of odd
/// vertices, and every pair (even a, odd b) with a + 3 <= b <= 2*floor(n/2) - 1.
/// Vertex n (even n) or n-1 (odd n) has degree 2, which is what lets
/// forced-edge pruning peel the chords away one at a time.
inline GeneratedInstance gen_sheehan(int n)
{
    if (n < 3) {
        throw InvalidArgument("uniquely Hamiltonian construction needs n >= 3, got " + std::to_string(n));
    }
    const int top = 2 * (n / 2) - 1;
    std::vector<Edge> edges;
    for (Vertex a = 1; a <= n; ++a) {
        for (Vertex b = a + 1; b <= n; ++b) {
            const bool on_cycle = b == a + 1 || (a == 1 && b == n);
            const bool odd_pair = a % 2 == 1 && b % 2 == 1;
            const bool even_odd = a % 2 == 0 && b % 2 == 1 && b >= a + 3 && b <= top;
            if (on_cycle || odd_pair || even_odd) {
                edges.push_back({a, b});
            }
        }
    }
    GeneratedInstance out;
    out.graph = Graph(n, std::move(edges), "SH_" + std::to_string(n));
    out.expected = {1, Hamiltonicity::yes};
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    out.planted = Tour(std::move(order));
    return out;
}

/// Isaacs flower snark J_k on 4k vertices (k odd, k >= 5).
///
/// Gadget i is a claw with centre a_i and leaves b_i, c_i, d_i, labelled
/// 4i+1..4i+4. The b's form a k-cycle; the c's and d's form one 2k-cycle
/// c_0..c_{k-1} d_0..d_{k-1}.
inline Graph gen_flower_snark(int k)
{
    if (k < 5 || k % 2 == 0) {
        throw InvalidArgument("flower snark needs odd k >= 5, got " + std::to_string(k));
    }
    auto a = [](int i) { return 4 * i + 1; };
    auto b = [](int i) { return 4 * i + 2; };
    auto c = [](int i) { return 4 * i + 3; };
    auto d = [](int i) { return 4 * i + 4; };
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        const int j = (i + 1) % k;
        edges.push_back(make_edge(a(i), b(i)));
        edges.push_back(make_edge(a(i), c(i)));
        edges.push_back(make_edge(a(i), d(i)));
        edges.push_back(make_edge(b(i), b(j)));
        if (i + 1 < k) {
            edges.push_back(make_edge(c(i), c(j)));
            edges.push_back(make_edge(d(i), d(j)));
        } else {
            edges.push_back(make_edge(c(i), d(0)));
            edges.push_back(make_edge(d(i), c(0)));
        }
    }
    return Graph(4 * k, std::move(edges), "FS_" + std::to_string(4 * k));
}

/// Flower snark plus one chord between claw centres, named SN_<4k>.
///
/// Default chord is the smallest absent pair (a_0, a_1). A seed picks
/// (a_i, a_{i+1}) instead; shifting every gadget by one (swapping c and d
/// across the seam) is an automorphism, so all choices are isomorphic.
inline GeneratedInstance gen_modified_flower_snark(int k, std::optional<std::uint64_t> seed = {})
{
    Graph g = gen_flower_snark(k);
    Edge chord = *smallest_absent_pair(g);
    if (seed) {
        Rng rng(*seed);
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        chord = make_edge(4 * i + 1, 4 * ((i + 1) % k) + 1);
    }
    GeneratedInstance out;
    out.graph = add_edge(g, chord).with_name("SN_" + std::to_string(4 * k));
    out.expected = {std::nullopt, Hamiltonicity::yes};
    return out;
}

/// Uniform simple d-regular graph via the pairing model: shuffle the n*d
/// stubs, pair neighbours, reject on a loop or repeated pair. The generator is
/// reseeded after every 1000 rejections; 100 reseeds without success throws.
inline Graph gen_random_regular(int n, int d, std::uint64_t seed)
{
    if (n < 1 || d < 1 || d >= n || (static_cast<long long>(n) * d) % 2 != 0) {
        throw InvalidArgument("random regular graph needs d >= 1, d < n and n*d even; got n=" +
                              std::to_string(n) + " d=" + std::to_string(d));
    }
    constexpr int kRetries = 1000;
    constexpr int kReseeds = 100;
    std::vector<Vertex> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    std::vector<Edge> edges;
    for (int round = 0; round < kReseeds; ++round) {
        Rng rng(SeedHasher(seed).add(static_cast<std::uint64_t>(round)).value());
        for (int attempt = 0; attempt < kRetries; ++attempt) {
            stubs.clear();
            for (Vertex v = 1; v <= n; ++v) {
                stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
            }
            rng.shuffle(stubs);
            edges.clear();
            bool simple = true;
            for (std::size_t i = 0; i < stubs.size(); i += 2) {
                if (stubs[i] == stubs[i + 1]) {
                    simple = false;
                    break;
                }
                edges.push_back(make_edge(stubs[i], stubs[i + 1]));
            }
            if (!simple) {
                continue;
            }
            std::sort(edges.begin(), edges.end());
            if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
                continue;
            }
            return Graph(n, edges, "RR_" + std::to_string(n));
        }
    }
    throw Error("pairing model produced no simple graph for n=" + std::to_string(n) + " d=" + std::to_string(d));
}

/// Random d-regular Hamiltonian graph with a known cycle: a uniformly random
/// n-cycle plus d-2 random perfect matchings avoiding all earlier edges.
inline PlantedInstance gen_planted_regular(int n, int d, std::uint64_t seed)
{
    if (d < 2 || d >= n || (d > 2 && n % 2 != 0)) {
        throw InvalidArgument("planted regular graph needs 2 <= d < n and even n when d > 2; got n=" +
                              std::to_string(n) + " d=" + std::to_string(d));
    }
    if (n < 3) {
        throw InvalidArgument("planted regular graph needs n >= 3");
    }
    constexpr int kRetries = 10000;
    Rng rng(seed);
    std::vector<Vertex> cycle(static_cast<std::size_t>(n));
    std::iota(cycle.begin(), cycle.end(), 1);
    rng.shuffle(cycle);

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        edges.push_back(make_edge(cycle[i], cycle[(i + 1) % cycle.size()]));
    }
    std::sort(edges.begin(), edges.end());

    std::vector<Vertex> order(cycle);
    for (int layer = 2; layer < d; ++layer) {
        bool placed = false;
        for (int attempt = 0; attempt < kRetries && !placed; ++attempt) {
            rng.shuffle(order);
            std::vector<Edge> matching;
            bool ok = true;
            for (std::size_t i = 0; i < order.size(); i += 2) {
                Edge e = make_edge(order[i], order[i + 1]);
                if (std::binary_search(edges.begin(), edges.end(), e)) {
                    ok = false;
                    break;
                }
                matching.push_back(e);
            }
            if (ok) {
                edges.insert(edges.end(), matching.begin(), matching.end());
                std::sort(edges.begin(), edges.end());
                placed = true;
            }
        }
        if (!placed) {
            throw Error("could not place perfect matching " + std::to_string(layer - 1) + " for n=" +
                        std::to_string(n) + " d=" + std::to_string(d));
        }
    }
    Graph g(n, std::move(edges), "PC_" + std::to_string(n));
    return make_planted(std::move(g), Tour(std::move(cycle)));
}

/// Planted 3-regular instance: random Hamiltonian cycle plus a random perfect
/// matching on its chords.
inline PlantedInstance gen_planted_cubic(int n, std::uint64_t seed)
{
    if (n < 4 || n % 2 != 0) {
        throw InvalidArgument("planted cubic graph needs even n >= 4, got " + std::to_string(n));
    }
    return gen_planted_regular(n, 3, seed);
}

/// Dispatches a FamilySpec to its generator.
inline GeneratedInstance generate(const FamilySpec& spec)
{
    switch (spec.family) {
    case Family::GPN:
    case Family::GP3:
    case Family::GP0:
        return gen_gp_benchmark(spec.family, spec.p, spec.seed);
    case Family::SHEEHAN:
        return gen_sheehan(spec.n);
    case Family::SNARK: {
        GeneratedInstance out;
        out.graph = gen_flower_snark(spec.k);
        out.expected = {0, Hamiltonicity::no};
        return out;
    }
    case Family::SNARK_MODIFIED:
        return gen_modified_flower_snark(spec.k, spec.seed);
    case Family::RANDOM_REGULAR: {
        GeneratedInstance out;
        out.graph = gen_random_regular(spec.n, spec.d, spec.seed.value_or(0));
        return out;
    }
    case Family::PLANTED_CUBIC: {
        if (spec.d == 3 && (spec.n < 4 || spec.n % 2 != 0)) {
            throw InvalidArgument("planted cubic graph needs even n >= 4, got " + std::to_string(spec.n));
        }
        PlantedInstance inst = gen_planted_regular(spec.n, spec.d, spec.seed.value_or(0));
        GeneratedInstance out;
        out.graph = std::move(inst.graph);
        out.planted = std::move(inst.planted);
        out.expected = {std::nullopt, Hamiltonicity::yes};
        return out;
    }
    }
    throw InvalidArgument("unhandled family");
}

} // namespace hcpforge
