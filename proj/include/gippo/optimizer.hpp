#pragma once

#include <cstdint>
#include <vector>

#include "gippo/graph.hpp"
#include "gippo/rng.hpp"

namespace gippo {

enum class Mode { Max, Min };

// Open or closed walk with pairwise-distinct edges. nodes[i] -> nodes[i+1]
// traverses edge_ids[i]; interior nodes may repeat, edges never do.
struct Path {
    std::vector<NodeId> nodes;  // num_edges + 1 entries
    std::vector<int> edge_ids;
    double length_mm = 0.0;

    int num_edges() const { return static_cast<int>(edge_ids.size()); }
    int num_nodes() const { return static_cast<int>(nodes.size()); }
};

// Paths partition the graph's edges: every edge in exactly one path.
struct Solution {
    std::vector<Path> paths;
    double total_length_mm = 0.0;
    int total_paths = 0;
    int total_edges = 0;
    double score = 0.0;
};

struct OptimizerConfig {
    int iterations = 500;
    Mode mode = Mode::Max;
    uint64_t master_seed = 0;
    // Threshold for the "long" share in LTS / OE (path node count >= this).
    int long_path_min_nodes = 5;
    // Report classes: long > 15 nodes, medium 5..15, short < 5 by default.
    int classify_long_min_nodes = 16;
    int classify_medium_min_nodes = 5;
};

struct PathClassCounts {
    int long_count = 0;
    int medium_count = 0;
    int short_count = 0;
};

struct RunReport {
    OptimizerConfig config;
    Solution best;
    Solution worst;
    int best_iteration = 0;
    int worst_iteration = 0;
    std::vector<double> per_iteration_scores;
    double lts_percent = 0.0;       // of best
    double oe_best_percent = 0.0;
    double oe_worst_percent = 0.0;
    PathClassCounts classification;  // of best
};

// One randomized greedy pass: start a path at a uniformly random node that
// still has unused incident edges, pick the unused incident edge of extreme
// weight (heaviest for Max, lightest for Min), then repeatedly extend from
// whichever of the two walk extremes offers the extreme-weight unused edge.
// Ties break by lower edge id, then by preferring the tail (back) end. A path
// ends when both extremes are exhausted; passes repeat until every edge is
// covered. Works per connected component implicitly.
Solution build_solution(const LatticeGraph& graph, Mode mode, Rng& rng);

// Edge-weighted decomposition score:
// sum_i(length_i * num_edges_i) / (total_length * total_paths).
// A single path covering E edges scores exactly E.
double score(const Solution& solution);

// Percentage of total printed length carried by long paths.
double lts_percent(const Solution& solution, int long_min_nodes = 5);

// Long-path share weighted by edge counts:
// 100 * sum_long(length_i * num_edges_i) / (total_length * total_edges).
double oe_percent(const Solution& solution, int long_min_nodes = 5);

PathClassCounts classify_paths(const Solution& solution, int long_min_nodes = 16,
                               int medium_min_nodes = 5);

// Deterministic presentation order: num_edges desc, length desc, smallest
// first-node id, then lexicographic node sequence.
void sort_paths_canonical(Solution& solution);

// Throws StructuralError unless solution is a walk-valid exact edge cover.
void verify_edge_partition(const LatticeGraph& graph, const Solution& solution);

// Runs config.iterations independent passes (iteration i uses RNG stream
// hash(master_seed, i)), keeps the best and worst by score with ties going to
// the lower iteration index. Reported bytes are identical for any thread
// count. threads <= 0 picks the hardware concurrency.
RunReport optimize(const LatticeGraph& graph, const OptimizerConfig& config, int threads = 1);

}  // namespace gippo
