#pragma once

#include <string>
#include <vector>

#include "gippo/analyzer.hpp"
#include "gippo/graph.hpp"
#include "gippo/optimizer.hpp"

namespace gippo {

// All drawings are deterministic: fixed canvas, 3-decimal coordinates, no
// timestamps; identical inputs give identical bytes.

// Top view of a path decomposition on its lattice: the lattice edges in light
// gray underneath, one polyline per path classed long/medium/short by node
// count, plus a legend.
std::string svg_decomposition(const LatticeGraph& graph, const Solution& solution,
                              int classify_long_min_nodes = 16,
                              int classify_medium_min_nodes = 5);

// Score-per-iteration scatter: one circle per iteration, best marked.
std::string svg_score_scatter(const std::vector<double>& scores);

// Reconstructed extruding polylines drawn over the nominal lattice.
std::string svg_trajectory_overlay(const Trajectory& trajectory, const LatticeGraph& nominal);

}  // namespace gippo
