#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"
#include "gippo/errors.hpp"
#include "gippo/graph.hpp"
#include "gippo/lattice.hpp"
#include "oracle.hpp"

using namespace gippo;

namespace {

Layer unit_square_layer() {
    std::vector<Point3> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    std::vector<Segment> segs = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    Layer l;
    l.points = pts;
    l.segments = segs;
    l.label = "square";
    return l;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("a unit square becomes a 4-cycle of unit weights") {
    LatticeGraph g = build_graph(unit_square_layer());
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.total_weight() == doctest::Approx(4.0).epsilon(1e-15));
    for (const auto& adj : g.adjacency) {
        CHECK(adj.size() == 2);
        CHECK(std::is_sorted(adj.begin(), adj.end()));
    }
    CHECK(odd_degree_count(g) == 0);
    CHECK(path_count_lower_bound(g) == 1);
    CHECK(components(g).size() == 1);
}

TEST_CASE("node ids and weights mirror the layer exactly") {
    Layer l = gen_honeycomb(1.0, Contour::rect(8.0, 8.0));
    LatticeGraph g = build_graph(l);
    REQUIRE(g.node_count() == static_cast<int>(l.points.size()));
    for (int i = 0; i < g.node_count(); ++i) {
        CHECK(g.node_pos[i].x == l.points[i].x);
        CHECK(g.node_pos[i].y == l.points[i].y);
    }
    REQUIRE(g.edge_count() == static_cast<int>(l.segments.size()));
    double sum = 0.0;
    for (int i = 0; i < g.edge_count(); ++i) sum += l.segment_length(i);
    CHECK(g.total_weight() == doctest::Approx(sum).epsilon(1e-15));
}

TEST_CASE("other_end walks an edge from either side") {
    LatticeGraph g = LatticeGraph::from_weighted_edges(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    CHECK(g.other_end(0, 0) == 1);
    CHECK(g.other_end(0, 1) == 0);
    CHECK(g.other_end(1, 1) == 2);
}

TEST_CASE("components are sorted inside and ordered by smallest member") {
    // two triangles and an isolated node
    LatticeGraph g = LatticeGraph::from_weighted_edges(
        7,
        {{4, 5, 1.0}, {5, 6, 1.0}, {4, 6, 1.0}, {0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    auto comps = components(g);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<NodeId>{0, 1, 2});
    CHECK(comps[1] == std::vector<NodeId>{3});
    CHECK(comps[2] == std::vector<NodeId>{4, 5, 6});
}

TEST_CASE("components agree with a union-find oracle on random graphs") {
    Rng rng(411);
    for (int trial = 0; trial < 30; ++trial) {
        oracle::WeightedGraph wg = oracle::random_graph(rng, 5, 60);
        LatticeGraph g = LatticeGraph::from_weighted_edges(wg.n, wg.edges);
        oracle::UnionFind uf(wg.n);
        for (auto [u, v, w] : wg.edges) {
            (void)w;
            uf.unite(u, v);
        }
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < wg.n; ++i) groups[uf.find(i)].push_back(i);
        auto comps = components(g);
        REQUIRE(comps.size() == groups.size());
        std::map<int, std::vector<int>> got;
        for (const auto& c : comps) got[c.front()] = c;
        for (auto& [root, members] : groups) {
            std::sort(members.begin(), members.end());
            CHECK(got.at(members.front()) == members);
        }
    }
}

TEST_CASE("odd degree counting") {
    // path a-b-c: two odd ends
    LatticeGraph path = LatticeGraph::from_weighted_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(odd_degree_count(path) == 2);
    CHECK(path_count_lower_bound(path) == 1);

    // star with three leaves: all four nodes odd
    LatticeGraph star =
        LatticeGraph::from_weighted_edges(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    CHECK(odd_degree_count(star) == 4);
    CHECK(path_count_lower_bound(star) == 2);

    // two disjoint 3-cycles: no odd nodes but two walks needed
    LatticeGraph two = LatticeGraph::from_weighted_edges(
        6,
        {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}});
    CHECK(odd_degree_count(two) == 0);
    CHECK(path_count_lower_bound(two) == 2);
}

TEST_CASE("lower bound matches the independent computation on random graphs") {
    Rng rng(1812);
    for (int trial = 0; trial < 40; ++trial) {
        oracle::WeightedGraph wg = oracle::random_graph(rng, 5, 120);
        LatticeGraph g = LatticeGraph::from_weighted_edges(wg.n, wg.edges);
        CHECK(path_count_lower_bound(g) == oracle::walk_lower_bound(wg));
        // handshake
        std::size_t incid = 0;
        for (const auto& adj : g.adjacency) incid += adj.size();
        CHECK(incid == 2 * static_cast<std::size_t>(g.edge_count()));
    }
}

TEST_CASE("defective edge lists are rejected") {
    CHECK_THROWS_AS(LatticeGraph::from_weighted_edges(2, {{0, 0, 1.0}}), StructuralError);
    CHECK_THROWS_AS(
        LatticeGraph::from_weighted_edges(2, {{0, 1, 1.0}, {1, 0, 2.0}}),
        StructuralError);
    CHECK_THROWS_AS(LatticeGraph::from_weighted_edges(2, {{0, 5, 1.0}}), StructuralError);
    CHECK_THROWS_AS(LatticeGraph::from_weighted_edges(2, {{0, 1, 0.0}}), StructuralError);
    CHECK_THROWS_AS(LatticeGraph::from_weighted_edges(-1, {}), ParamError);
}

TEST_CASE("a design graph is the disjoint union of its layers") {
    Layer base = gen_honeycomb(1.0, Contour::rect(6.0, 6.0));
    Design d = stack_layers(base, 3, 0.148, 15.0);
    LatticeGraph g = build_design_graph(d);

    int nodes = 0, edges = 0, comps = 0;
    for (const auto& l : d.layers) {
        LatticeGraph lg = build_graph(l);
        nodes += lg.node_count();
        edges += lg.edge_count();
        comps += static_cast<int>(components(lg).size());
    }
    CHECK(g.node_count() == nodes);
    CHECK(g.edge_count() == edges);
    CHECK(static_cast<int>(components(g).size()) == comps);

    // no edge crosses a layer boundary
    std::vector<int> layer_of;
    for (std::size_t k = 0; k < d.layers.size(); ++k)
        layer_of.insert(layer_of.end(), d.layers[k].points.size(), static_cast<int>(k));
    for (const auto& e : g.edges) CHECK(layer_of[e.u] == layer_of[e.v]);
}

}  // TEST_SUITE
