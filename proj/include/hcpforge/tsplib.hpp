#pragma once

// TSPLIB-style files: HCP instances (EDGE_LIST), binary TSP instances as an
// explicit FULL_MATRIX, and TOUR files.
//
// Writers are byte-deterministic: fixed key order, "KEY : value" headers,
// '\n' line endings, integers only. Readers accept "KEY: value" as well,
// repeated COMMENT lines and several integers per data line.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"

namespace hcpforge {

/// Symmetric 0/1 distance matrix: 0 on edges of the source graph, 1 on
/// non-edges, 0 on the diagonal.
class BinaryTspMatrix {
public:
    BinaryTspMatrix() = default;
    explicit BinaryTspMatrix(int n, std::string name = {})
        : n_(n), name_(std::move(name)), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 1)
    {
        for (int i = 1; i <= n; ++i) {
            set(i, i, 0);
        }
    }

    int dimension() const noexcept { return n_; }
    const std::string& name() const noexcept { return name_; }

    int at(Vertex i, Vertex j) const { return cells_[index(i, j)]; }
    void set(Vertex i, Vertex j, int value) { cells_[index(i, j)] = static_cast<std::uint8_t>(value); }

    friend bool operator==(const BinaryTspMatrix&, const BinaryTspMatrix&) = default;

private:
    std::size_t index(Vertex i, Vertex j) const
    {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1);
    }

    int n_ = 0;
    std::string name_;
    std::vector<std::uint8_t> cells_;
};

inline BinaryTspMatrix graph_to_tsp(const Graph& g)
{
    BinaryTspMatrix m(g.n(), g.name());
    for (const Edge& e : g.edges()) {
        m.set(e.u, e.v, 0);
        m.set(e.v, e.u, 0);
    }
    return m;
}

/// Inverse of graph_to_tsp. Throws ParseError if the matrix is not a
/// symmetric 0/1 matrix with zero diagonal.
inline Graph tsp_to_graph(const BinaryTspMatrix& m)
{
    std::vector<Edge> edges;
    for (Vertex i = 1; i <= m.dimension(); ++i) {
        if (m.at(i, i) != 0) {
            throw ParseError("nonzero diagonal entry at " + std::to_string(i));
        }
        for (Vertex j = i + 1; j <= m.dimension(); ++j) {
            if (m.at(i, j) != m.at(j, i)) {
                throw ParseError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (m.at(i, j) == 0) {
                edges.push_back({i, j});
            }
        }
    }
    return Graph(m.dimension(), std::move(edges), m.name());
}

/// Sum of the n wrapping entries; equals n minus the tour edges present in
/// the source graph.
inline long long tour_length(const BinaryTspMatrix& m, const Tour& t)
{
    if (t.size() != static_cast<std::size_t>(m.dimension())) {
        throw InvalidArgument("tour has " + std::to_string(t.size()) + " vertices but the matrix has dimension " +
                              std::to_string(m.dimension()));
    }
    long long total = 0;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        total += m.at(t[i], t[(i + 1) % n]);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Writers

inline std::string default_comment(const Graph& g)
{
    return std::to_string(g.n()) + " vertices, " + std::to_string(g.m()) + " edges";
}

inline void write_hcp(std::ostream& out, const Graph& g, const std::string& comment = {})
{
    out << "NAME : " << g.name() << '\n'
        << "TYPE : HCP\n"
        << "COMMENT : " << (comment.empty() ? default_comment(g) : comment) << '\n'
        << "DIMENSION : " << g.n() << '\n'
        << "EDGE_DATA_FORMAT : EDGE_LIST\n"
        << "EDGE_DATA_SECTION\n";
    for (const Edge& e : g.edges()) {
        out << e.u << ' ' << e.v << '\n';
    }
    out << "-1\nEOF\n";
}

inline void write_tsp(std::ostream& out, const BinaryTspMatrix& m, const std::string& comment = {})
{
    out << "NAME : " << m.name() << '\n'
        << "TYPE : TSP\n"
        << "COMMENT : " << (comment.empty() ? "binary TSP, 0 on graph edges" : comment) << '\n'
        << "DIMENSION : " << m.dimension() << '\n'
        << "EDGE_WEIGHT_TYPE : EXPLICIT\n"
        << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n"
        << "EDGE_WEIGHT_SECTION\n";
    std::string row;
    for (Vertex i = 1; i <= m.dimension(); ++i) {
        row.clear();
        for (Vertex j = 1; j <= m.dimension(); ++j) {
            if (j > 1) {
                row.push_back(' ');
            }
            row.push_back(static_cast<char>('0' + m.at(i, j)));
        }
        out << row << '\n';
    }
    out << "EOF\n";
}

inline void write_tour(std::ostream& out, const Tour& t, const std::string& name = {})
{
    out << "NAME : " << name << '\n' << "TYPE : TOUR\n" << "DIMENSION : " << t.size() << '\n' << "TOUR_SECTION\n";
    for (Vertex v : t.order()) {
        out << v << '\n';
    }
    out << "-1\nEOF\n";
}

namespace detail {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    writer(out);
    out.flush();
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

inline std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

/// Line reader that keeps track of the current line number.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line)
    {
        if (!std::getline(in_, line)) {
            return false;
        }
        ++number_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

/// Splits "KEY : value" / "KEY: value". Returns nullopt for non-header lines.
inline std::optional<std::pair<std::string, std::string>> split_header(const std::string& line)
{
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
        return std::nullopt;
    }
    return std::make_pair(trim(std::string_view(line).substr(0, colon)),
                          trim(std::string_view(line).substr(colon + 1)));
}

inline long long parse_integer(const std::string& token, std::size_t line)
{
    if (token.empty()) {
        throw ParseError("expected an integer", line);
    }
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(token, &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + token + "'", line);
    }
    if (used != token.size()) {
        throw ParseError("expected an integer, got '" + token + "'", line);
    }
    return value;
}

inline std::vector<long long> parse_integers(const std::string& line, std::size_t number)
{
    std::istringstream ss(line);
    std::vector<long long> out;
    std::string token;
    while (ss >> token) {
        out.push_back(parse_integer(token, number));
    }
    return out;
}

struct Header {
    std::string name;
    std::string type;
    std::vector<std::string> comments;
    std::optional<long long> dimension;
    std::string edge_data_format;
    std::string edge_weight_type;
    std::string edge_weight_format;
};

/// Reads header lines until a line equal to `section` (or a "section :"
/// variant). Returns false if the file ends first.
inline bool read_header(LineReader& reader, Header& h, std::string_view section)
{
    std::string line;
    while (reader.next(line)) {
        std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        auto kv = split_header(t);
        std::string key = kv ? kv->first : t;
        if (key == section) {
            return true;
        }
        if (!kv) {
            throw ParseError("unexpected line '" + t + "' in header", reader.number());
        }
        const std::string& value = kv->second;
        if (key == "NAME") {
            h.name = value;
        } else if (key == "TYPE") {
            h.type = value;
        } else if (key == "COMMENT") {
            h.comments.push_back(value);
        } else if (key == "DIMENSION") {
            h.dimension = parse_integer(value, reader.number());
            if (*h.dimension < 1) {
                throw ParseError("DIMENSION must be positive", reader.number());
            }
        } else if (key == "EDGE_DATA_FORMAT") {
            h.edge_data_format = value;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            h.edge_weight_type = value;
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            h.edge_weight_format = value;
        } else if (key == "EOF") {
            break;
        }
        // Other TSPLIB keys are ignored.
    }
    return false;
}

} // namespace detail

/// Reads an HCP file. Throws ParseError (with the line number) on a
/// malformed header, an out-of-range vertex, a self-loop or a missing -1
/// terminator. Repeated edges are merged.
inline Graph read_hcp(std::istream& in)
{
    detail::LineReader reader(in);
    detail::Header h;
    if (!detail::read_header(reader, h, "EDGE_DATA_SECTION")) {
        throw ParseError("missing EDGE_DATA_SECTION", reader.number());
    }
    if (!h.dimension) {
        throw ParseError("missing DIMENSION");
    }
    if (!h.type.empty() && h.type != "HCP") {
        throw ParseError("TYPE is '" + h.type + "', expected HCP");
    }
    if (!h.edge_data_format.empty() && h.edge_data_format != "EDGE_LIST") {
        throw ParseError("unsupported EDGE_DATA_FORMAT '" + h.edge_data_format + "'");
    }
    const long long n = *h.dimension;
    std::vector<Edge> edges;
    std::vector<long long> pending;
    bool terminated = false;
    std::string line;
    while (!terminated && reader.next(line)) {
        const std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        if (t == "EOF") {
            break;
        }
        for (long long value : detail::parse_integers(t, reader.number())) {
            if (value == -1) {
                if (!pending.empty()) {
                    throw ParseError("terminator inside an edge", reader.number());
                }
                terminated = true;
                break;
            }
            if (value < 1 || value > n) {
                throw ParseError("vertex " + std::to_string(value) + " outside 1.." + std::to_string(n),
                                 reader.number());
            }
            pending.push_back(value);
            if (pending.size() == 2) {
                if (pending[0] == pending[1]) {
                    throw ParseError("self-loop at vertex " + std::to_string(pending[0]), reader.number());
                }
                edges.push_back(make_edge(static_cast<Vertex>(pending[0]), static_cast<Vertex>(pending[1])));
                pending.clear();
            }
        }
    }
    if (!terminated) {
        throw ParseError("edge list not terminated by -1", reader.number());
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(static_cast<int>(n), std::move(edges), h.name);
}

inline BinaryTspMatrix read_tsp(std::istream& in)
{
    detail::LineReader reader(in);
    detail::Header h;
    if (!detail::read_header(reader, h, "EDGE_WEIGHT_SECTION")) {
        throw ParseError("missing EDGE_WEIGHT_SECTION", reader.number());
    }
    if (!h.dimension) {
        throw ParseError("missing DIMENSION");
    }
    if (h.edge_weight_type != "EXPLICIT" || h.edge_weight_format != "FULL_MATRIX") {
        throw ParseError("only EXPLICIT FULL_MATRIX weights are supported");
    }
    const int n = static_cast<int>(*h.dimension);
    BinaryTspMatrix m(n, h.name);
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::size_t read = 0;
    std::string line;
    while (read < total && reader.next(line)) {
        for (long long value : detail::parse_integers(line, reader.number())) {
            if (read == total) {
                throw ParseError("too many matrix entries", reader.number());
            }
            if (value != 0 && value != 1) {
                throw ParseError("binary TSP entry must be 0 or 1, got " + std::to_string(value), reader.number());
            }
            m.set(static_cast<Vertex>(read / static_cast<std::size_t>(n) + 1),
                  static_cast<Vertex>(read % static_cast<std::size_t>(n) + 1), static_cast<int>(value));
            ++read;
        }
    }
    if (read != total) {
        throw ParseError("expected " + std::to_string(total) + " matrix entries, found " + std::to_string(read),
                         reader.number());
    }
    return m;
}

/// Reads a TOUR_SECTION for an n-vertex instance. Throws ParseError on a
/// repeated, missing or out-of-range vertex, a DIMENSION mismatch or a
/// missing -1 terminator.
inline Tour read_tour(std::istream& in, int n)
{
    detail::LineReader reader(in);
    detail::Header h;
    if (!detail::read_header(reader, h, "TOUR_SECTION")) {
        throw ParseError("missing TOUR_SECTION", reader.number());
    }
    if (h.dimension && *h.dimension != n) {
        throw ParseError("tour DIMENSION " + std::to_string(*h.dimension) + " does not match instance size " +
                         std::to_string(n));
    }
    std::vector<Vertex> order;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    bool terminated = false;
    std::string line;
    while (!terminated && reader.next(line)) {
        const std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        if (t == "EOF") {
            break;
        }
        for (long long value : detail::parse_integers(t, reader.number())) {
            if (value == -1) {
                terminated = true;
                break;
            }
            if (value < 1 || value > n) {
                throw ParseError("tour vertex " + std::to_string(value) + " outside 1.." + std::to_string(n),
                                 reader.number());
            }
            if (seen[value]) {
                throw ParseError("tour repeats vertex " + std::to_string(value), reader.number());
            }
            seen[value] = 1;
            order.push_back(static_cast<Vertex>(value));
        }
    }
    if (!terminated) {
        throw ParseError("tour section not terminated by -1", reader.number());
    }
    if (order.size() != static_cast<std::size_t>(n)) {
        throw ParseError("tour lists " + std::to_string(order.size()) + " of " + std::to_string(n) + " vertices",
                         reader.number());
    }
    return Tour(std::move(order));
}

/// Parses "u v" lines describing the edges of a cycle (external solver
/// output) into a tour. Throws ParseError unless they form one n-cycle.
inline Tour read_edge_list_tour(std::istream& in, int n)
{
    detail::LineReader reader(in);
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n) + 1);
    std::string line;
    std::size_t count = 0;
    while (reader.next(line)) {
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t == "EOF") {
            continue;
        }
        auto values = detail::parse_integers(t, reader.number());
        if (values.size() == 1 && values[0] == -1) {
            break;
        }
        if (values.size() != 2) {
            throw ParseError("expected 'u v'", reader.number());
        }
        for (long long v : values) {
            if (v < 1 || v > n) {
                throw ParseError("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n), reader.number());
            }
        }
        const auto a = static_cast<Vertex>(values[0]);
        const auto b = static_cast<Vertex>(values[1]);
        adj[a].push_back(b);
        adj[b].push_back(a);
        if (adj[a].size() > 2 || adj[b].size() > 2) {
            throw ParseError("vertex used by more than two tour edges", reader.number());
        }
        ++count;
    }
    if (n < 3 || count != static_cast<std::size_t>(n)) {
        throw ParseError("expected " + std::to_string(n) + " tour edges, found " + std::to_string(count));
    }
    std::vector<Vertex> order{1};
    Vertex prev = 0, at = 1;
    while (true) {
        if (adj[at].size() != 2) {
            throw ParseError("vertex " + std::to_string(at) + " is not on the cycle");
        }
        Vertex next = adj[at][0] != prev ? adj[at][0] : adj[at][1];
        if (next == 1) {
            break;
        }
        order.push_back(next);
        prev = at;
        at = next;
        if (order.size() > static_cast<std::size_t>(n)) {
            throw ParseError("edges do not form a single cycle");
        }
    }
    if (order.size() != static_cast<std::size_t>(n)) {
        throw ParseError("edges form a cycle on " + std::to_string(order.size()) + " of " + std::to_string(n) +
                         " vertices");
    }
    return Tour(std::move(order));
}

// ---------------------------------------------------------------------------
// Path-based convenience wrappers

inline void write_hcp(const std::filesystem::path& path, const Graph& g, const std::string& comment = {})
{
    detail::write_file(path, [&](std::ostream& out) { write_hcp(out, g, comment); });
}

inline void write_tsp(const std::filesystem::path& path, const BinaryTspMatrix& m, const std::string& comment = {})
{
    detail::write_file(path, [&](std::ostream& out) { write_tsp(out, m, comment); });
}

inline void write_tour(const std::filesystem::path& path, const Tour& t, const std::string& name = {})
{
    detail::write_file(path, [&](std::ostream& out) { write_tour(out, t, name); });
}

namespace detail {
inline std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    return in;
}
} // namespace detail

inline Graph read_hcp(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_hcp(in);
}

inline BinaryTspMatrix read_tsp(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_tsp(in);
}

inline Tour read_tour(const std::filesystem::path& path, int n)
{
    auto in = detail::open_input(path);
    return read_tour(in, n);
}

} // namespace hcpforge
