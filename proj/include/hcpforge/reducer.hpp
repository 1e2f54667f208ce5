#pragma once

// Source problem -> CNF -> undirected HCP, and back.
//
// CNF to directed graph: variable i owns a head h_i, a tail t_i and a row
// r_0..r_{L-1} with L = 3*occ_i + 1 (occ_i = literal occurrences of i). The
// row is a two-way chain entered from h_i at one end and left to t_i at the
// other; walking it left to right means "true". Occurrence s of i owns the
// slot (r_{3s+1}, r_{3s+2}); a positive literal adds r_{3s+1} -> c -> r_{3s+2}
// through its clause node c, a negative one r_{3s+2} -> c -> r_{3s+1}. Tails
// lead to the next head, the last tail back to h_1.
//
// Directed to undirected: node x becomes x_in - x_mid - x_out and an arc
// u -> v becomes the edge u_out - v_in. Vertex count is
// 3 * (3*vars + 3*literals + clauses) <= 12 * (vars + literals).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hcpforge/cnf.hpp"
#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"

namespace hcpforge {

enum class SourceKind { CNF, COL3, II, QN, SSP };

inline std::string_view to_string(SourceKind k)
{
    switch (k) {
    case SourceKind::CNF: return "CNF";
    case SourceKind::COL3: return "COL3";
    case SourceKind::II: return "II";
    case SourceKind::QN: return "QN";
    case SourceKind::SSP: return "SSP";
    }
    return "?";
}

inline SourceKind source_kind_from_string(std::string_view s)
{
    for (SourceKind k : {SourceKind::CNF, SourceKind::COL3, SourceKind::II, SourceKind::QN, SourceKind::SSP}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    if (s == "COL") {
        return SourceKind::COL3;
    }
    throw InvalidArgument("unknown source kind '" + std::string(s) + "' (expected CNF, COL3, II, QN or SSP)");
}

struct SourceProblem {
    std::variant<CnfFormula, Graph, int, SetSplitInstance, InsanityInstance> payload;

    SourceKind kind() const
    {
        static constexpr SourceKind kinds[] = {SourceKind::CNF, SourceKind::COL3, SourceKind::QN, SourceKind::SSP,
                                               SourceKind::II};
        return kinds[payload.index()];
    }

    static SourceProblem cnf(CnfFormula f) { return {std::move(f)}; }
    static SourceProblem col3(Graph g) { return {std::move(g)}; }
    static SourceProblem queens(int n) { return {n}; }
    static SourceProblem setsplit(SetSplitInstance s) { return {std::move(s)}; }
    static SourceProblem insanity(InsanityInstance i) { return {std::move(i)}; }
};

inline CnfFormula encode(const SourceProblem& p)
{
    return std::visit(
        [](const auto& x) -> CnfFormula {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CnfFormula>) {
                x.validate();
                return x;
            } else if constexpr (std::is_same_v<T, Graph>) {
                return encode_col3(x);
            } else if constexpr (std::is_same_v<T, int>) {
                return encode_nqueens(x);
            } else if constexpr (std::is_same_v<T, SetSplitInstance>) {
                return encode_setsplit(x);
            } else {
                return encode_instant_insanity(x);
            }
        },
        p.payload);
}

// ---------------------------------------------------------------------------
// Source file formats. '#' starts a comment; blank lines are skipped.
//   CNF  : DIMACS
//   COL3 : vertex count, then one "u v" edge per line
//   QN   : board size
//   SSP  : universe size, then one subset per line (elements separated by
//          blanks; a line "-" is the empty subset)
//   II   : cube count k, then k lines of six colours in 1..k ordered front,
//          back, left, right, top, bottom

namespace detail {

inline std::vector<std::pair<std::size_t, std::vector<std::string>>> content_lines(std::istream& in)
{
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        std::string t;
        while (ss >> t) {
            tokens.push_back(t);
        }
        if (!tokens.empty()) {
            out.emplace_back(number, std::move(tokens));
        }
    }
    return out;
}

inline int to_int(const std::string& token, std::size_t line)
{
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + token + "'", line);
    }
    if (used != token.size()) {
        throw ParseError("expected an integer, got '" + token + "'", line);
    }
    return value;
}

inline int single_int(const std::pair<std::size_t, std::vector<std::string>>& line, const char* what)
{
    if (line.second.size() != 1) {
        throw ParseError(std::string("expected a single ") + what, line.first);
    }
    return to_int(line.second[0], line.first);
}

} // namespace detail

inline SourceProblem parse_source(SourceKind kind, std::istream& in)
{
    if (kind == SourceKind::CNF) {
        return SourceProblem::cnf(read_dimacs(in));
    }
    const auto lines = detail::content_lines(in);
    if (lines.empty()) {
        throw ParseError("empty source file");
    }
    try {
        switch (kind) {
        case SourceKind::QN: {
            if (lines.size() != 1) {
                throw ParseError("a queens file holds only the board size", lines[1].first);
            }
            const int n = detail::single_int(lines[0], "board size");
            if (n < 1) {
                throw ParseError("board size must be at least 1", lines[0].first);
            }
            return SourceProblem::queens(n);
        }
        case SourceKind::COL3: {
            const int n = detail::single_int(lines[0], "vertex count");
            if (n < 1) {
                throw ParseError("vertex count must be at least 1", lines[0].first);
            }
            std::vector<Edge> edges;
            for (std::size_t i = 1; i < lines.size(); ++i) {
                const auto& [number, tokens] = lines[i];
                if (tokens.size() != 2) {
                    throw ParseError("expected 'u v'", number);
                }
                const int u = detail::to_int(tokens[0], number);
                const int v = detail::to_int(tokens[1], number);
                if (u < 1 || u > n || v < 1 || v > n || u == v) {
                    throw ParseError("bad edge " + tokens[0] + " " + tokens[1], number);
                }
                edges.push_back(make_edge(u, v));
            }
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
            return SourceProblem::col3(Graph(n, std::move(edges), "COL3"));
        }
        case SourceKind::SSP: {
            SetSplitInstance inst;
            inst.universe = detail::single_int(lines[0], "universe size");
            if (inst.universe < 1) {
                throw ParseError("universe must be nonempty", lines[0].first);
            }
            for (std::size_t i = 1; i < lines.size(); ++i) {
                const auto& [number, tokens] = lines[i];
                std::vector<int> subset;
                if (!(tokens.size() == 1 && tokens[0] == "-")) {
                    for (const auto& t : tokens) {
                        const int e = detail::to_int(t, number);
                        if (e < 1 || e > inst.universe) {
                            throw ParseError("element " + t + " outside the universe", number);
                        }
                        subset.push_back(e);
                    }
                }
                inst.subsets.push_back(std::move(subset));
            }
            return SourceProblem::setsplit(std::move(inst));
        }
        case SourceKind::II: {
            const int k = detail::single_int(lines[0], "cube count");
            if (k < 1) {
                throw ParseError("cube count must be at least 1", lines[0].first);
            }
            if (lines.size() != static_cast<std::size_t>(k) + 1) {
                throw ParseError("expected " + std::to_string(k) + " cube lines, found " +
                                 std::to_string(lines.size() - 1));
            }
            InsanityInstance inst;
            for (int i = 1; i <= k; ++i) {
                const auto& [number, tokens] = lines[i];
                if (tokens.size() != 6) {
                    throw ParseError("a cube needs six face colours", number);
                }
                Cube cube{};
                for (int f = 0; f < 6; ++f) {
                    cube[f] = detail::to_int(tokens[f], number);
                    if (cube[f] < 1 || cube[f] > k) {
                        throw ParseError("colour " + tokens[f] + " outside 1.." + std::to_string(k), number);
                    }
                }
                inst.cubes.push_back(cube);
            }
            return SourceProblem::insanity(std::move(inst));
        }
        case SourceKind::CNF: break;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    throw InvalidArgument("unhandled source kind");
}

inline SourceProblem parse_source(SourceKind kind, const std::string& text)
{
    std::istringstream in(text);
    return parse_source(kind, in);
}

/// Canonical text in the source file format; parse_source inverts it.
inline std::string format_source(const SourceProblem& p)
{
    std::ostringstream out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CnfFormula>) {
                write_dimacs(out, x);
            } else if constexpr (std::is_same_v<T, Graph>) {
                out << x.n() << '\n';
                for (const Edge& e : x.edges()) {
                    out << e.u << ' ' << e.v << '\n';
                }
            } else if constexpr (std::is_same_v<T, int>) {
                out << x << '\n';
            } else if constexpr (std::is_same_v<T, SetSplitInstance>) {
                out << x.universe << '\n';
                for (const auto& s : x.subsets) {
                    if (s.empty()) {
                        out << "-\n";
                        continue;
                    }
                    for (std::size_t i = 0; i < s.size(); ++i) {
                        out << (i ? " " : "") << s[i];
                    }
                    out << '\n';
                }
            } else {
                out << x.cubes.size() << '\n';
                for (const Cube& c : x.cubes) {
                    for (int f = 0; f < 6; ++f) {
                        out << (f ? " " : "") << c[f];
                    }
                    out << '\n';
                }
            }
        },
        p.payload);
    return out.str();
}

// ---------------------------------------------------------------------------
// CNF -> HCP

/// Undirected labels that reveal variable i's truth value in a tour:
/// head_out is joined either to true_in (row walked left to right) or to
/// false_in.
struct VariableGadget {
    Vertex head_out = 0;
    Vertex true_in = 0;
    Vertex false_in = 0;
    friend bool operator==(const VariableGadget&, const VariableGadget&) = default;
};

struct CnfReduction {
    Graph graph;
    std::vector<VariableGadget> variables; // index i-1 for variable i
};

inline CnfReduction reduce_cnf_to_hcp(const CnfFormula& f, std::string name = {})
{
    f.validate();
    const int vars = f.num_vars;
    std::vector<int> occurrences(static_cast<std::size_t>(vars) + 1, 0);
    for (const auto& c : f.clauses) {
        for (int lit : c) {
            ++occurrences[std::abs(lit)];
        }
    }

    // Directed node ids.
    int next_id = 0;
    std::vector<int> head(vars + 1), tail(vars + 1), row_start(vars + 1), row_len(vars + 1);
    for (int i = 1; i <= vars; ++i) {
        head[i] = next_id++;
        row_len[i] = 3 * occurrences[i] + 1;
        row_start[i] = next_id;
        next_id += row_len[i];
        tail[i] = next_id++;
    }
    std::vector<int> clause_node(f.clauses.size());
    for (auto& c : clause_node) {
        c = next_id++;
    }

    std::set<std::pair<int, int>> arcs;
    for (int i = 1; i <= vars; ++i) {
        const int first = row_start[i];
        const int last = row_start[i] + row_len[i] - 1;
        arcs.insert({head[i], first});
        arcs.insert({head[i], last});
        arcs.insert({first, tail[i]});
        arcs.insert({last, tail[i]});
        for (int r = first; r < last; ++r) {
            arcs.insert({r, r + 1});
            arcs.insert({r + 1, r});
        }
        arcs.insert({tail[i], head[i == vars ? 1 : i + 1]});
    }
    std::vector<int> used(static_cast<std::size_t>(vars) + 1, 0);
    for (std::size_t j = 0; j < f.clauses.size(); ++j) {
        for (int lit : f.clauses[j]) {
            const int v = std::abs(lit);
            const int s = used[v]++;
            const int a = row_start[v] + 3 * s + 1;
            const int b = a + 1;
            if (lit > 0) {
                arcs.insert({a, clause_node[j]});
                arcs.insert({clause_node[j], b});
            } else {
                arcs.insert({b, clause_node[j]});
                arcs.insert({clause_node[j], a});
            }
        }
    }

    auto in = [](int d) { return 3 * d + 1; };
    auto mid = [](int d) { return 3 * d + 2; };
    auto out = [](int d) { return 3 * d + 3; };
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(2 * next_id) + arcs.size());
    for (int d = 0; d < next_id; ++d) {
        edges.push_back({in(d), mid(d)});
        edges.push_back({mid(d), out(d)});
    }
    for (const auto& [u, v] : arcs) {
        edges.push_back(make_edge(out(u), in(v)));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    CnfReduction result{Graph(3 * next_id, std::move(edges), std::move(name)), {}};
    for (int i = 1; i <= vars; ++i) {
        result.variables.push_back(
            {out(head[i]), in(row_start[i]), in(row_start[i] + row_len[i] - 1)});
    }
    return result;
}

/// Reads the assignment a Hamiltonian cycle of the reduced graph encodes.
/// assignment[v] for v in 1..num_vars; index 0 unused.
inline std::vector<bool> assignment_from_tour(const std::vector<VariableGadget>& gadgets, const Tour& t)
{
    std::vector<int> position(t.size() + 1, -1);
    for (std::size_t i = 0; i < t.size(); ++i) {
        position[t[i]] = static_cast<int>(i);
    }
    const auto n = static_cast<int>(t.size());
    auto adjacent = [&](Vertex a, Vertex b) {
        const int d = std::abs(position[a] - position[b]);
        return d == 1 || d == n - 1;
    };
    std::vector<bool> assignment(gadgets.size() + 1, false);
    for (std::size_t i = 0; i < gadgets.size(); ++i) {
        const auto& g = gadgets[i];
        if (adjacent(g.head_out, g.true_in)) {
            assignment[i + 1] = true;
        } else if (!adjacent(g.head_out, g.false_in)) {
            throw InvalidCertificate("tour does not traverse the gadget of variable " + std::to_string(i + 1));
        }
    }
    return assignment;
}

// ---------------------------------------------------------------------------
// Solutions

/// values per kind: CNF truth value (0/1) per variable; COL3 colour 1..3 per
/// vertex; QN queen column (1-based) per row; SSP part (0/1) per element; II
/// rotation index into cube_rotations() per cube.
struct SourceSolution {
    SourceKind kind = SourceKind::CNF;
    std::vector<int> values;
    friend bool operator==(const SourceSolution&, const SourceSolution&) = default;
};

inline bool is_valid_solution(const SourceProblem& p, const SourceSolution& s)
{
    if (s.kind != p.kind()) {
        return false;
    }
    const auto& v = s.values;
    switch (p.kind()) {
    case SourceKind::CNF: {
        const auto& f = std::get<CnfFormula>(p.payload);
        if (v.size() != static_cast<std::size_t>(f.num_vars)) {
            return false;
        }
        std::vector<bool> a(v.size() + 1);
        for (std::size_t i = 0; i < v.size(); ++i) {
            a[i + 1] = v[i] != 0;
        }
        return f.satisfied_by(a);
    }
    case SourceKind::COL3: {
        const auto& g = std::get<Graph>(p.payload);
        if (v.size() != static_cast<std::size_t>(g.n())) {
            return false;
        }
        if (std::any_of(v.begin(), v.end(), [](int c) { return c < 1 || c > 3; })) {
            return false;
        }
        return std::all_of(g.edges().begin(), g.edges().end(),
                           [&](const Edge& e) { return v[e.u - 1] != v[e.v - 1]; });
    }
    case SourceKind::QN: {
        const int n = std::get<int>(p.payload);
        if (v.size() != static_cast<std::size_t>(n)) {
            return false;
        }
        for (int r = 0; r < n; ++r) {
            if (v[r] < 1 || v[r] > n) {
                return false;
            }
            for (int q = 0; q < r; ++q) {
                if (v[q] == v[r] || std::abs(v[q] - v[r]) == r - q) {
                    return false;
                }
            }
        }
        return true;
    }
    case SourceKind::SSP: {
        const auto& inst = std::get<SetSplitInstance>(p.payload);
        if (v.size() != static_cast<std::size_t>(inst.universe)) {
            return false;
        }
        auto splits = [&](const std::vector<int>& members) {
            bool zero = false, one = false;
            for (int e : members) {
                (v[e - 1] ? one : zero) = true;
            }
            return zero && one;
        };
        std::vector<int> all(static_cast<std::size_t>(inst.universe));
        std::iota(all.begin(), all.end(), 1);
        return splits(all) && std::all_of(inst.subsets.begin(), inst.subsets.end(), splits);
    }
    case SourceKind::II: {
        const auto& inst = std::get<InsanityInstance>(p.payload);
        if (v.size() != inst.cubes.size()) {
            return false;
        }
        const int k = inst.colours();
        for (int side = 0; side < 4; ++side) {
            std::vector<int> seen(static_cast<std::size_t>(k) + 1, 0);
            for (std::size_t i = 0; i < inst.cubes.size(); ++i) {
                if (v[i] < 0 || v[i] >= static_cast<int>(cube_rotations().size())) {
                    return false;
                }
                ++seen[side_colours(rotate_cube(inst.cubes[i], cube_rotations()[v[i]]))[side]];
            }
            if (std::any_of(seen.begin() + 1, seen.end(), [](int c) { return c != 1; })) {
                return false;
            }
        }
        return true;
    }
    }
    return false;
}

/// Maps a satisfying assignment of encode(p) back to a source solution.
inline SourceSolution solution_from_assignment(const SourceProblem& p, const std::vector<bool>& a)
{
    SourceSolution s{p.kind(), {}};
    switch (p.kind()) {
    case SourceKind::CNF: {
        const int vars = std::get<CnfFormula>(p.payload).num_vars;
        for (int i = 1; i <= vars; ++i) {
            s.values.push_back(a[i] ? 1 : 0);
        }
        break;
    }
    case SourceKind::COL3: {
        const auto& g = std::get<Graph>(p.payload);
        for (Vertex v = 1; v <= g.n(); ++v) {
            int colour = 0;
            for (int c = 1; c <= 3 && colour == 0; ++c) {
                if (a[col3_var(v, c)]) {
                    colour = c;
                }
            }
            s.values.push_back(colour);
        }
        break;
    }
    case SourceKind::QN: {
        const int n = std::get<int>(p.payload);
        for (int r = 0; r < n; ++r) {
            int col = 0;
            for (int c = 0; c < n && col == 0; ++c) {
                if (a[queen_var(n, r, c)]) {
                    col = c + 1;
                }
            }
            s.values.push_back(col);
        }
        break;
    }
    case SourceKind::SSP: {
        const int u = std::get<SetSplitInstance>(p.payload).universe;
        for (int e = 1; e <= u; ++e) {
            s.values.push_back(a[e] ? 1 : 0);
        }
        break;
    }
    case SourceKind::II: {
        const auto& inst = std::get<InsanityInstance>(p.payload);
        const InsanityLayout layout = insanity_layout(inst);
        for (std::size_t i = 0; i < inst.cubes.size(); ++i) {
            int rotation = -1;
            for (std::size_t j = 0; j < layout.orientations[i].size() && rotation < 0; ++j) {
                if (a[layout.first[i] + static_cast<int>(j)]) {
                    rotation = layout.orientations[i][j];
                }
            }
            s.values.push_back(rotation);
        }
        break;
    }
    }
    return s;
}

inline std::string describe(const SourceProblem& p, const SourceSolution& s)
{
    std::ostringstream out;
    switch (s.kind) {
    case SourceKind::CNF:
        out << "assignment:";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << ' ' << (s.values[i] ? "" : "-") << (i + 1);
        }
        break;
    case SourceKind::COL3:
        out << "colouring:";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << ' ' << (i + 1) << '=' << s.values[i];
        }
        break;
    case SourceKind::QN:
        out << "queens (row=column):";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << ' ' << (i + 1) << '=' << s.values[i];
        }
        break;
    case SourceKind::SSP: {
        out << "part A:";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (s.values[i]) {
                out << ' ' << (i + 1);
            }
        }
        out << "\npart B:";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!s.values[i]) {
                out << ' ' << (i + 1);
            }
        }
        break;
    }
    case SourceKind::II: {
        const auto& inst = std::get<InsanityInstance>(p.payload);
        out << "stack (front right back left):";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const auto sides = side_colours(rotate_cube(inst.cubes[i], cube_rotations()[s.values[i]]));
            out << "\ncube " << (i + 1) << ": " << sides[0] << ' ' << sides[1] << ' ' << sides[2] << ' ' << sides[3];
        }
        break;
    }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Certificates

struct ReductionCertificate {
    SourceProblem source;
    int cnf_vars = 0;
    std::size_t cnf_literals = 0;
    Graph graph;
    std::vector<VariableGadget> variables;
};

struct Reduced {
    Graph graph;
    ReductionCertificate certificate;
};

inline Reduced reduce(const SourceProblem& p)
{
    const CnfFormula f = encode(p);
    CnfReduction r = reduce_cnf_to_hcp(f);
    const std::string name = std::string(to_string(p.kind())) + "_" + std::to_string(r.graph.n());
    Graph g = r.graph.with_name(name);
    return {g, ReductionCertificate{p, f.num_vars, f.total_literals(), g, std::move(r.variables)}};
}

/// Decodes a Hamiltonian cycle of the reduced graph into a validated source
/// solution. Throws InvalidCertificate if t is not such a cycle, and
/// InvariantViolation if the decoded solution fails validation.
inline SourceSolution decode_hc(const ReductionCertificate& cert, const Tour& t)
{
    if (t.size() != static_cast<std::size_t>(cert.graph.n()) || !is_hamiltonian_cycle(cert.graph, t)) {
        throw InvalidCertificate("tour is not a Hamiltonian cycle of the reduced graph");
    }
    const auto assignment = assignment_from_tour(cert.variables, t);
    SourceSolution s = solution_from_assignment(cert.source, assignment);
    if (!is_valid_solution(cert.source, s)) {
        throw InvariantViolation("decoded solution is not valid for the source problem");
    }
    return s;
}

inline void write_certificate(std::ostream& out, const ReductionCertificate& cert)
{
    nlohmann::json j;
    j["format"] = "hcpforge-reduction-certificate";
    j["version"] = 1;
    j["kind"] = std::string(to_string(cert.source.kind()));
    j["source"] = format_source(cert.source);
    j["cnf_vars"] = cert.cnf_vars;
    j["cnf_literals"] = cert.cnf_literals;
    j["graph_name"] = cert.graph.name();
    j["vertices"] = cert.graph.n();
    j["edges"] = cert.graph.m();
    auto& vars = j["variables"] = nlohmann::json::array();
    for (const auto& g : cert.variables) {
        vars.push_back({g.head_out, g.true_in, g.false_in});
    }
    out << j.dump(1) << '\n';
}

/// Rebuilds the reduction from the embedded source and checks it against
/// the recorded gadget map.
inline ReductionCertificate read_certificate(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format") != "hcpforge-reduction-certificate") {
            throw ParseError("not a reduction certificate");
        }
        const SourceKind kind = source_kind_from_string(j.at("kind").get<std::string>());
        const SourceProblem source = parse_source(kind, j.at("source").get<std::string>());
        Reduced r = reduce(source);
        std::vector<VariableGadget> recorded;
        for (const auto& v : j.at("variables")) {
            recorded.push_back({v.at(0).get<Vertex>(), v.at(1).get<Vertex>(), v.at(2).get<Vertex>()});
        }
        if (j.at("vertices").get<int>() != r.graph.n() || j.at("edges").get<int>() != r.graph.m() ||
            recorded != r.certificate.variables) {
            throw InvalidCertificate("certificate does not match the reduction of its source");
        }
        return std::move(r.certificate);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
}

inline void write_certificate(const std::filesystem::path& path, const ReductionCertificate& cert)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_certificate(out, cert);
}

inline ReductionCertificate read_certificate(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_certificate(in);
}

} // namespace hcpforge
