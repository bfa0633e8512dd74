#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "gippo/geometry.hpp"
#include "gippo/lattice.hpp"

namespace gippo {

using NodeId = int;

// Canonical undirected edge: u < v, weight > 0 in mm.
struct GraphEdge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 0.0;
};

// Undirected weighted graph over welded lattice vertices. NodeIds are dense
// and assigned in layer point order, so identical layers yield identical ids.
struct LatticeGraph {
    std::vector<Point3> node_pos;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<int>> adjacency;  // node -> incident edge ids, ascending

    int node_count() const { return static_cast<int>(node_pos.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    NodeId other_end(int edge_id, NodeId n) const {
        const GraphEdge& e = edges[edge_id];
        return e.u == n ? e.v : e.u;
    }
    double total_weight() const {
        double s = 0.0;
        for (const GraphEdge& e : edges) s += e.weight;
        return s;
    }

    // Abstract construction for callers that already have weights; positions
    // are synthesized placeholders unless supplied. The geometric
    // weight-equals-distance guarantee only holds for build_graph.
    static LatticeGraph from_weighted_edges(int node_count,
                                            const std::vector<std::tuple<int, int, double>>& edges);
};

// One node per welded vertex, one edge per segment, weight = segment length.
// Duplicate segments and self-loops are structural errors naming the pair.
LatticeGraph build_graph(const Layer& layer);

// All layers of a design as one graph (disjoint union, node ids offset in
// layer order). Layers live at different z, so nothing welds across them.
LatticeGraph build_design_graph(const Design& design);

// Connected components as sorted node lists, ordered by smallest member.
std::vector<std::vector<NodeId>> components(const LatticeGraph& graph);

int odd_degree_count(const LatticeGraph& graph);

// Eulerian lower bound on the number of covering paths:
// sum over components with edges of max(1, odd_degree/2).
int path_count_lower_bound(const LatticeGraph& graph);

}  // namespace gippo
