#include "gippo/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <unordered_set>

namespace gippo {

namespace {

void index_edges(LatticeGraph& g) {
    g.adjacency.assign(g.node_pos.size(), {});
    std::unordered_set<uint64_t> seen;
    seen.reserve(g.edges.size() * 2);
    const int n = g.node_count();
    for (size_t i = 0; i < g.edges.size(); ++i) {
        GraphEdge& e = g.edges[i];
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n)
            throw StructuralError("graph: edge " + std::to_string(i) + " index out of bounds");
        if (e.u == e.v)
            throw StructuralError("graph: self-loop at node " + std::to_string(e.u));
        if (!(e.weight > 0.0))
            throw StructuralError("graph: edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ") has non-positive weight");
        const uint64_t key = (static_cast<uint64_t>(e.u) << 32) | static_cast<uint32_t>(e.v);
        if (!seen.insert(key).second)
            throw StructuralError("graph: duplicate segment (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
        g.adjacency[e.u].push_back(static_cast<int>(i));
        g.adjacency[e.v].push_back(static_cast<int>(i));
    }
    // Handshake: every edge contributes exactly two incidences.
    size_t incidences = 0;
    for (const auto& adj : g.adjacency) incidences += adj.size();
    if (incidences != 2 * g.edges.size())
        throw StructuralError("graph: handshake violation");
}

}  // namespace

LatticeGraph LatticeGraph::from_weighted_edges(
    int node_count, const std::vector<std::tuple<int, int, double>>& edge_list) {
    if (node_count < 0) throw ParamError("graph: negative node count");
    LatticeGraph g;
    g.node_pos.resize(node_count);
    for (int i = 0; i < node_count; ++i) g.node_pos[i] = {static_cast<double>(i), 0.0, 0.0};
    g.edges.reserve(edge_list.size());
    for (const auto& [u, v, w] : edge_list) g.edges.push_back({u, v, w});
    index_edges(g);
    return g;
}

LatticeGraph build_graph(const Layer& layer) {
    validate_layer(layer);
    LatticeGraph g;
    g.node_pos = layer.points;
    g.edges.reserve(layer.segments.size());
    for (const Segment& s : layer.segments) {
        const double w = dist3(layer.points[s.a], layer.points[s.b]);
        g.edges.push_back({std::min(s.a, s.b), std::max(s.a, s.b), w});
    }
    index_edges(g);
    return g;
}

LatticeGraph build_design_graph(const Design& design) {
    LatticeGraph g;
    int offset = 0;
    for (const Layer& layer : design.layers) {
        validate_layer(layer);
        for (const Point3& p : layer.points) g.node_pos.push_back(p);
        for (const Segment& s : layer.segments) {
            const double w = dist3(layer.points[s.a], layer.points[s.b]);
            g.edges.push_back(
                {offset + std::min(s.a, s.b), offset + std::max(s.a, s.b), w});
        }
        offset += static_cast<int>(layer.points.size());
    }
    index_edges(g);
    return g;
}

std::vector<std::vector<NodeId>> components(const LatticeGraph& graph) {
    const int n = graph.node_count();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<NodeId>> out;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<int> q;
        q.push(start);
        comp[start] = id;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            out[id].push_back(u);
            for (int ei : graph.adjacency[u]) {
                const int v = graph.other_end(ei, u);
                if (comp[v] < 0) {
                    comp[v] = id;
                    q.push(v);
                }
            }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

int odd_degree_count(const LatticeGraph& graph) {
    int n = 0;
    for (const auto& adj : graph.adjacency)
        if (adj.size() % 2 == 1) ++n;
    return n;
}

int path_count_lower_bound(const LatticeGraph& graph) {
    int bound = 0;
    for (const auto& comp : components(graph)) {
        int odd = 0;
        bool has_edges = false;
        for (NodeId n : comp) {
            if (!graph.adjacency[n].empty()) has_edges = true;
            if (graph.adjacency[n].size() % 2 == 1) ++odd;
        }
        if (has_edges) bound += std::max(1, odd / 2);
    }
    return bound;
}

}  // namespace gippo
