#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcpforge/hcpforge.hpp"
#include "oracles.hpp"

using namespace hcpforge;

namespace {

Graph c4() { return Graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}, "C4"); }

std::string hcp_text(const Graph& g)
{
    std::ostringstream out;
    write_hcp(out, g);
    return out.str();
}

Graph parse_hcp(const std::string& text)
{
    std::istringstream in(text);
    return read_hcp(in);
}

Tour parse_tour(const std::string& text, int n)
{
    std::istringstream in(text);
    return read_tour(in, n);
}

int count_lines_between(const std::string& text, const std::string& start, const std::string& stop)
{
    std::istringstream in(text);
    std::string line;
    bool inside = false;
    int count = 0;
    while (std::getline(in, line)) {
        if (line == start) {
            inside = true;
        } else if (line == stop) {
            inside = false;
        } else if (inside) {
            ++count;
        }
    }
    return count;
}

} // namespace

TEST(Hcp, C4FileShapeAndDeterminism)
{
    const std::string text = hcp_text(c4());
    EXPECT_EQ(count_lines_between(text, "EDGE_DATA_SECTION", "-1"), 4);
    EXPECT_NE(text.find("DIMENSION : 4"), std::string::npos);
    EXPECT_NE(text.find("TYPE : HCP"), std::string::npos);
    const Graph back = parse_hcp(text);
    EXPECT_EQ(back, c4());
    EXPECT_EQ(hcp_text(back), text);
}

TEST(Hcp, Gpn122)
{
    const auto inst = gen_gp_benchmark(Family::GPN, 61);
    const std::string text = hcp_text(inst.graph);
    EXPECT_NE(text.find("DIMENSION : 122"), std::string::npos);
    EXPECT_EQ(count_lines_between(text, "EDGE_DATA_SECTION", "-1"), 183);
}

TEST(Hcp, ParseErrors)
{
    const std::string head = "NAME : X\nTYPE : HCP\nDIMENSION : 3\nEDGE_DATA_FORMAT : EDGE_LIST\nEDGE_DATA_SECTION\n";
    EXPECT_THROW(parse_hcp(head + "0 1\n-1\nEOF\n"), ParseError);
    EXPECT_THROW(parse_hcp(head + "1 4\n-1\nEOF\n"), ParseError);
    EXPECT_THROW(parse_hcp(head + "1 1\n-1\nEOF\n"), ParseError);
    EXPECT_THROW(parse_hcp(head + "1 x\n-1\nEOF\n"), ParseError);
    EXPECT_THROW(parse_hcp("NAME : X\nTYPE : TSP\nDIMENSION : 3\nEDGE_DATA_SECTION\n-1\n"), ParseError);
    EXPECT_THROW(parse_hcp("NAME : X\nTYPE : HCP\nEDGE_DATA_SECTION\n1 2\n-1\n"), ParseError);
    EXPECT_THROW(parse_hcp(""), ParseError);
    try {
        parse_hcp(head + "1 2\n0 1\n-1\nEOF\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("7"), std::string::npos) << e.what();
    }
}

TEST(Hcp, RequiresSentinelAndMergesRepeats)
{
    const std::string body = "NAME : X\nTYPE : HCP\nDIMENSION : 3\nEDGE_DATA_SECTION\n1 2\n2 1\n2 3\n";
    EXPECT_THROW(parse_hcp(body), ParseError);
    EXPECT_EQ(parse_hcp(body + "-1\nEOF\n").m(), 2);
}

TEST(Hcp, RoundTripRandomGraphs)
{
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(30));
        const Graph g = oracle::random_graph(n, rng.uniform01(), rng).with_name("R" + std::to_string(trial));
        ASSERT_EQ(parse_hcp(hcp_text(g)), g);
    }
}

TEST(Hcp, FileOverloads)
{
    const auto dir = std::filesystem::temp_directory_path() / "hcpforge_tsplib_test";
    std::filesystem::create_directories(dir);
    write_hcp(dir / "c4.hcp", c4());
    EXPECT_EQ(read_hcp(dir / "c4.hcp"), c4());
    write_tsp(dir / "c4.tsp", graph_to_tsp(c4()));
    EXPECT_TRUE(tsp_to_graph(read_tsp(dir / "c4.tsp")).same_structure(c4()));
    write_tour(dir / "c4.tour", Tour({1, 2, 3, 4}));
    EXPECT_EQ(read_tour(dir / "c4.tour", 4), Tour({1, 2, 3, 4}));
    EXPECT_THROW(read_hcp(dir / "missing.hcp"), Error);
    std::filesystem::remove_all(dir);
}

TEST(Tsp, C4Matrix)
{
    const BinaryTspMatrix m = graph_to_tsp(c4());
    ASSERT_EQ(m.dimension(), 4);
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            if (i != j) {
                EXPECT_EQ(m.at(i, j), c4().has_edge(i, j) ? 0 : 1) << i << "," << j;
            }
        }
    }
    EXPECT_EQ(tour_length(m, Tour({1, 2, 3, 4})), 0);
    EXPECT_EQ(tour_length(m, Tour({1, 3, 2, 4})), 2);
}

TEST(Tsp, EdgelessTriangle)
{
    const BinaryTspMatrix m = graph_to_tsp(Graph(3, {}));
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i != j) {
                EXPECT_EQ(m.at(i, j), 1);
            }
        }
    }
    EXPECT_EQ(tour_length(m, Tour({1, 2, 3})), 3);
}

TEST(Tsp, PetersenEveryTourCostsAtLeastOne)
{
    const BinaryTspMatrix m = graph_to_tsp(gen_generalized_petersen(5, 2));
    std::vector<Vertex> rest(9);
    std::iota(rest.begin(), rest.end(), 2);
    long best = 1000;
    long tours = 0;
    do {
        if (rest.front() > rest.back()) {
            continue;
        }
        std::vector<Vertex> order{1};
        order.insert(order.end(), rest.begin(), rest.end());
        best = std::min<long>(best, tour_length(m, Tour(order)));
        ++tours;
    } while (std::next_permutation(rest.begin(), rest.end()));
    EXPECT_EQ(tours, 181440);
    EXPECT_GE(best, 1);
}

TEST(Tsp, ZeroLengthToursAreExactlyHcs)
{
    Rng rng(202);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        const Graph g = oracle::random_graph(n, 0.3 + 0.6 * rng.uniform01(), rng);
        const BinaryTspMatrix m = graph_to_tsp(g);
        const auto hcs = oracle::all_hcs_by_permutation(g);
        const auto all = oracle::all_hcs_by_permutation(complete_graph(n));
        for (const auto& order : all) {
            const bool zero = tour_length(m, Tour(order)) == 0;
            ASSERT_EQ(zero, hcs.count(order) == 1);
        }
    }
}

TEST(Tsp, ReadWriteRoundTripAndValidation)
{
    const BinaryTspMatrix m = graph_to_tsp(gen_generalized_petersen(7, 2));
    std::ostringstream out;
    write_tsp(out, m);
    std::istringstream in(out.str());
    const BinaryTspMatrix back = read_tsp(in);
    EXPECT_TRUE(tsp_to_graph(back).same_structure(gen_generalized_petersen(7, 2)));

    BinaryTspMatrix asym(3);
    asym.set(1, 2, 1);
    asym.set(2, 1, 0);
    EXPECT_THROW(tsp_to_graph(asym), ParseError);

    std::istringstream bad("NAME : X\nTYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EXPLICIT\n"
                           "EDGE_WEIGHT_FORMAT : UPPER_ROW\nEDGE_WEIGHT_SECTION\n1\nEOF\n");
    EXPECT_THROW(read_tsp(bad), ParseError);
}

TEST(TourFile, Examples)
{
    EXPECT_EQ(parse_tour("TYPE : TOUR\nDIMENSION : 5\nTOUR_SECTION\n1\n2\n3\n4\n5\n-1\nEOF\n", 5),
              Tour({1, 2, 3, 4, 5}));
    EXPECT_THROW(parse_tour("TYPE : TOUR\nDIMENSION : 4\nTOUR_SECTION\n1\n2\n2\n4\n-1\nEOF\n", 4), ParseError);
    EXPECT_THROW(parse_tour("TYPE : TOUR\nDIMENSION : 4\nTOUR_SECTION\n1\n2\n", 4), ParseError);
    EXPECT_THROW(parse_tour("TYPE : TOUR\nDIMENSION : 4\nTOUR_SECTION\n1\n2\n3\n9\n-1\n", 4), ParseError);
    EXPECT_THROW(parse_tour("TYPE : TOUR\nDIMENSION : 5\nTOUR_SECTION\n1\n2\n3\n4\n5\n-1\n", 4), ParseError);
}

TEST(TourFile, RoundTripIsCanonicalFixpoint)
{
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(60));
        std::vector<Vertex> order(n);
        std::iota(order.begin(), order.end(), 1);
        rng.shuffle(order);
        const Tour t(order);
        std::ostringstream out;
        write_tour(out, t, "T");
        const Tour back = parse_tour(out.str(), n);
        ASSERT_EQ(back, t);
        ASSERT_EQ(back[0], 1);
    }
}

TEST(TourFile, EdgeList)
{
    std::istringstream in("1 2\n3 2\n3 4\n4 1\n");
    EXPECT_EQ(read_edge_list_tour(in, 4), Tour({1, 2, 3, 4}));
    std::istringstream broken("1 2\n2 1\n3 4\n4 3\n");
    EXPECT_THROW(read_edge_list_tour(broken, 4), ParseError);
}
