#pragma once

// CNF formulas and the four source-problem encoders (3-colouring, n-queens,
// set splitting, instant insanity).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"

namespace hcpforge {

using Clause = std::vector<int>;

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;

    void validate() const
    {
        if (num_vars < 1) {
            throw InvalidArgument("a formula needs at least one variable");
        }
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            if (clauses[i].empty()) {
                throw InvalidArgument("clause " + std::to_string(i + 1) + " is empty");
            }
            for (int lit : clauses[i]) {
                if (lit == 0 || std::abs(lit) > num_vars) {
                    throw InvalidArgument("literal " + std::to_string(lit) + " outside 1.." +
                                          std::to_string(num_vars));
                }
            }
        }
    }

    std::size_t total_literals() const
    {
        std::size_t total = 0;
        for (const auto& c : clauses) {
            total += c.size();
        }
        return total;
    }

    /// assignment[v] for v in 1..num_vars; index 0 is ignored.
    bool satisfied_by(const std::vector<bool>& assignment) const
    {
        if (assignment.size() < static_cast<std::size_t>(num_vars) + 1) {
            throw InvalidArgument("assignment shorter than the variable count");
        }
        return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& c) {
            return std::any_of(c.begin(), c.end(), [&](int lit) { return assignment[std::abs(lit)] == (lit > 0); });
        });
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Accumulates clauses and hands out fresh (auxiliary) variables.
class CnfBuilder {
public:
    explicit CnfBuilder(int primary_vars) { f_.num_vars = primary_vars; }

    int fresh() { return ++f_.num_vars; }

    void clause(Clause c) { f_.clauses.push_back(std::move(c)); }

    void at_least_one(const std::vector<int>& lits) { clause(lits); }

    /// Pairwise below six literals, sequential counter from six on.
    void at_most_one(const std::vector<int>& lits)
    {
        const std::size_t m = lits.size();
        if (m < 2) {
            return;
        }
        if (m < 6) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = i + 1; j < m; ++j) {
                    clause({-lits[i], -lits[j]});
                }
            }
            return;
        }
        // s_i true iff some of lits[0..i] is true.
        std::vector<int> s(m - 1);
        for (auto& x : s) {
            x = fresh();
        }
        clause({-lits[0], s[0]});
        for (std::size_t i = 1; i + 1 < m; ++i) {
            clause({-lits[i], s[i]});
            clause({-s[i - 1], s[i]});
            clause({-lits[i], -s[i - 1]});
        }
        clause({-lits[m - 1], -s[m - 2]});
    }

    void exactly_one(const std::vector<int>& lits)
    {
        at_least_one(lits);
        at_most_one(lits);
    }

    CnfFormula build() &&
    {
        f_.validate();
        return std::move(f_);
    }

private:
    CnfFormula f_;
};

// ---------------------------------------------------------------------------
// DIMACS

inline void write_dimacs(std::ostream& out, const CnfFormula& f)
{
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int lit : c) {
            out << lit << ' ';
        }
        out << "0\n";
    }
}

inline CnfFormula read_dimacs(std::istream& in)
{
    CnfFormula f;
    bool header = false;
    std::size_t declared = 0;
    Clause current;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first) || first[0] == 'c' || first[0] == '%') {
            continue;
        }
        if (first == "p") {
            std::string kind;
            long long vars = 0, clauses = 0;
            if (!(ss >> kind >> vars >> clauses) || kind != "cnf" || vars < 1 || clauses < 0) {
                throw ParseError("malformed DIMACS header", number);
            }
            f.num_vars = static_cast<int>(vars);
            declared = static_cast<std::size_t>(clauses);
            header = true;
            continue;
        }
        if (!header) {
            throw ParseError("clause before the 'p cnf' header", number);
        }
        std::istringstream all(line);
        std::string token;
        while (all >> token) {
            char* tail = nullptr;
            const long value = std::strtol(token.c_str(), &tail, 10);
            if (*tail != '\0') {
                throw ParseError("bad literal '" + token + "'", number);
            }
            if (value == 0) {
                if (current.empty()) {
                    throw ParseError("empty clause", number);
                }
                f.clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (std::abs(value) > f.num_vars) {
                    throw ParseError("literal " + token + " exceeds the declared variable count", number);
                }
                current.push_back(static_cast<int>(value));
            }
        }
    }
    if (!header) {
        throw ParseError("missing 'p cnf' header", number);
    }
    if (!current.empty()) {
        f.clauses.push_back(std::move(current));
    }
    if (f.clauses.size() != declared) {
        throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(f.clauses.size()));
    }
    return f;
}

// ---------------------------------------------------------------------------
// 3-colouring: variable 3(v-1)+c is "vertex v has colour c", c in 1..3.

inline int col3_var(Vertex v, int colour) { return 3 * (v - 1) + colour; }

inline CnfFormula encode_col3(const Graph& g)
{
    if (g.n() < 1) {
        throw InvalidArgument("colouring needs at least one vertex");
    }
    CnfBuilder b(3 * g.n());
    for (Vertex v = 1; v <= g.n(); ++v) {
        b.exactly_one({col3_var(v, 1), col3_var(v, 2), col3_var(v, 3)});
    }
    for (const Edge& e : g.edges()) {
        for (int c = 1; c <= 3; ++c) {
            b.clause({-col3_var(e.u, c), -col3_var(e.v, c)});
        }
    }
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// n-queens: variable r*n+c+1 is "queen on row r, column c" (0-based r, c).

inline int queen_var(int n, int row, int col) { return row * n + col + 1; }

inline CnfFormula encode_nqueens(int n)
{
    if (n < 1) {
        throw InvalidArgument("board size must be at least 1");
    }
    CnfBuilder b(n * n);
    std::vector<int> lits;
    for (int r = 0; r < n; ++r) {
        lits.clear();
        for (int c = 0; c < n; ++c) {
            lits.push_back(queen_var(n, r, c));
        }
        b.exactly_one(lits);
    }
    for (int c = 0; c < n; ++c) {
        lits.clear();
        for (int r = 0; r < n; ++r) {
            lits.push_back(queen_var(n, r, c));
        }
        b.at_most_one(lits);
    }
    for (int d = -(n - 1); d <= n - 1; ++d) {
        lits.clear();
        for (int r = 0; r < n; ++r) {
            const int c = r + d;
            if (c >= 0 && c < n) {
                lits.push_back(queen_var(n, r, c));
            }
        }
        b.at_most_one(lits);
    }
    for (int s = 0; s <= 2 * (n - 1); ++s) {
        lits.clear();
        for (int r = 0; r < n; ++r) {
            const int c = s - r;
            if (c >= 0 && c < n) {
                lits.push_back(queen_var(n, r, c));
            }
        }
        b.at_most_one(lits);
    }
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Set splitting over the universe {1..universe}: variable e is "element e
// lies in the first part".

struct SetSplitInstance {
    int universe = 0;
    std::vector<std::vector<int>> subsets;

    void validate() const
    {
        if (universe < 1) {
            throw InvalidArgument("set splitting needs a nonempty universe");
        }
        for (const auto& s : subsets) {
            for (int e : s) {
                if (e < 1 || e > universe) {
                    throw InvalidArgument("element " + std::to_string(e) + " outside the universe 1.." +
                                          std::to_string(universe));
                }
            }
        }
    }
    friend bool operator==(const SetSplitInstance&, const SetSplitInstance&) = default;
};

inline CnfFormula encode_setsplit(const SetSplitInstance& inst)
{
    inst.validate();
    CnfBuilder b(inst.universe);
    auto both_sides = [&](const std::vector<int>& members) {
        if (members.empty()) {
            // An empty subset meets neither side.
            b.clause({1});
            b.clause({-1});
            return;
        }
        Clause pos, neg;
        for (int e : members) {
            pos.push_back(e);
            neg.push_back(-e);
        }
        b.clause(std::move(pos));
        b.clause(std::move(neg));
    };
    for (const auto& s : inst.subsets) {
        std::set<int> unique(s.begin(), s.end());
        both_sides(std::vector<int>(unique.begin(), unique.end()));
    }
    std::vector<int> all(static_cast<std::size_t>(inst.universe));
    for (int e = 1; e <= inst.universe; ++e) {
        all[e - 1] = e;
    }
    both_sides(all);
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Instant insanity. Faces are indexed front, back, left, right, top, bottom;
// colours run 1..k for k cubes. A stack is valid when each of the four side
// columns (front, right, back, left) shows every colour exactly once.

using Cube = std::array<int, 6>;
enum CubeFace { kFront = 0, kBack = 1, kLeft = 2, kRight = 3, kTop = 4, kBottom = 5 };

struct InsanityInstance {
    std::vector<Cube> cubes;

    int colours() const { return static_cast<int>(cubes.size()); }

    void validate() const
    {
        if (cubes.empty()) {
            throw InvalidArgument("instant insanity needs at least one cube");
        }
        const int k = colours();
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            for (int c : cubes[i]) {
                if (c < 1 || c > k) {
                    throw InvalidArgument("cube " + std::to_string(i + 1) + " has colour " + std::to_string(c) +
                                          " outside 1.." + std::to_string(k));
                }
            }
        }
    }
    friend bool operator==(const InsanityInstance&, const InsanityInstance&) = default;
};

/// A rotation as a face permutation: rotated[f] = original[rotation[f]].
using Rotation = std::array<int, 6>;

/// The 24 proper rotations of a cube, in a fixed order starting at identity.
inline const std::vector<Rotation>& cube_rotations()
{
    static const std::vector<Rotation> table = [] {
        // yaw about the vertical axis, pitch about the left-right axis
        constexpr Rotation yaw{kLeft, kRight, kBack, kFront, kTop, kBottom};
        constexpr Rotation pitch{kBottom, kTop, kLeft, kRight, kFront, kBack};
        auto compose = [](const Rotation& a, const Rotation& b) {
            Rotation r{};
            for (int f = 0; f < 6; ++f) {
                r[f] = a[b[f]];
            }
            return r;
        };
        std::vector<Rotation> out{{0, 1, 2, 3, 4, 5}};
        std::set<Rotation> seen(out.begin(), out.end());
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (const Rotation& g : {yaw, pitch}) {
                Rotation next = compose(out[i], g);
                if (seen.insert(next).second) {
                    out.push_back(next);
                }
            }
        }
        return out;
    }();
    return table;
}

inline Cube rotate_cube(const Cube& cube, const Rotation& r)
{
    Cube out{};
    for (int f = 0; f < 6; ++f) {
        out[f] = cube[r[f]];
    }
    return out;
}

/// Side colours (front, right, back, left) of a cube in some orientation.
inline std::array<int, 4> side_colours(const Cube& oriented)
{
    return {oriented[kFront], oriented[kRight], oriented[kBack], oriented[kLeft]};
}

/// Rotation indices whose side colour tuples are pairwise distinct; the
/// first rotation reaching each tuple is kept.
inline std::vector<int> distinct_orientations(const Cube& cube)
{
    std::vector<int> out;
    std::set<std::array<int, 4>> seen;
    const auto& rots = cube_rotations();
    for (int i = 0; i < static_cast<int>(rots.size()); ++i) {
        if (seen.insert(side_colours(rotate_cube(cube, rots[i]))).second) {
            out.push_back(i);
        }
    }
    return out;
}

/// Variable layout of encode_instant_insanity: cube i's j-th distinct
/// orientation is variable first[i] + j.
struct InsanityLayout {
    std::vector<int> first;
    std::vector<std::vector<int>> orientations;
};

/// One rotation per choice of vertical axis. Spinning the whole stack about
/// the vertical axis or turning it upside down keeps every side valid, so the
/// first cube can be pinned to these three without losing solutions.
inline std::vector<int> axis_representatives(const Cube& cube)
{
    std::vector<int> out;
    std::set<std::array<int, 4>> seen_tuples;
    std::set<std::pair<int, int>> seen_axes;
    const auto& rots = cube_rotations();
    for (int i = 0; i < static_cast<int>(rots.size()); ++i) {
        const auto axis = std::minmax(rots[i][kTop], rots[i][kBottom]);
        if (seen_axes.insert(axis).second && seen_tuples.insert(side_colours(rotate_cube(cube, rots[i]))).second) {
            out.push_back(i);
        }
    }
    return out;
}

inline InsanityLayout insanity_layout(const InsanityInstance& inst)
{
    InsanityLayout layout;
    int next = 1;
    for (std::size_t i = 0; i < inst.cubes.size(); ++i) {
        layout.first.push_back(next);
        layout.orientations.push_back(i == 0 ? axis_representatives(inst.cubes[i])
                                             : distinct_orientations(inst.cubes[i]));
        next += static_cast<int>(layout.orientations.back().size());
    }
    return layout;
}

inline CnfFormula encode_instant_insanity(const InsanityInstance& inst)
{
    inst.validate();
    const InsanityLayout layout = insanity_layout(inst);
    const int k = inst.colours();
    int vars = 0;
    for (const auto& o : layout.orientations) {
        vars += static_cast<int>(o.size());
    }
    CnfBuilder b(vars);
    // by_side[side][colour] collects the orientation variables showing it
    std::vector<std::vector<std::vector<int>>> by_side(4, std::vector<std::vector<int>>(static_cast<std::size_t>(k) + 1));
    for (std::size_t i = 0; i < inst.cubes.size(); ++i) {
        std::vector<int> choice;
        for (std::size_t j = 0; j < layout.orientations[i].size(); ++j) {
            const int var = layout.first[i] + static_cast<int>(j);
            choice.push_back(var);
            const auto sides = side_colours(rotate_cube(inst.cubes[i], cube_rotations()[layout.orientations[i][j]]));
            for (int s = 0; s < 4; ++s) {
                by_side[s][sides[s]].push_back(var);
            }
        }
        b.exactly_one(choice);
    }
    for (int s = 0; s < 4; ++s) {
        for (int c = 1; c <= k; ++c) {
            if (by_side[s][c].empty()) {
                // Colour c can never appear on this side.
                b.clause({1});
                b.clause({-1});
                continue;
            }
            b.exactly_one(by_side[s][c]);
        }
    }
    return std::move(b).build();
}

} // namespace hcpforge
