#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gippo/analyzer.hpp"
#include "gippo/lattice.hpp"
#include "gippo/optimizer.hpp"
#include "gippo/stats.hpp"

namespace gippo {

// All writers are byte-stable: keys sorted alphabetically, numbers printed
// with up to 9 significant digits, -0 normalized, '\n' line ends.

// Segment-list JSON: {label?, points: [[x,y,z],...], segments: [[a,b],...],
// units: "mm", z}. Readers accept missing label/units/z; units other than
// "mm" are rejected.
std::string write_layer_json(const Layer& layer);
Layer parse_layer_json(std::string_view text, const std::string& source_name,
                       double weld_tol = kDefaultWeldTol);

// Validated segment-list import (welds, then re-validates).
Layer import_segments(const std::string& path, double weld_tol = kDefaultWeldTol);

// Design JSON: {layer_thickness, layers: [Layer...], rotation_deg_per_layer}.
std::string write_design_json(const Design& design);
Design parse_design_json(std::string_view text, const std::string& source_name,
                         double weld_tol = kDefaultWeldTol);

// Accepts either format: a bare layer becomes a one-layer design.
bool looks_like_design_json(std::string_view text);
Design load_design(const std::string& path, double weld_tol = kDefaultWeldTol);

// Run-report JSON: optimizer settings at the top level plus one entry per
// layer carrying best/worst path lists, iteration indices, the score trace
// and the derived quality numbers.
std::string write_run_reports_json(const std::vector<RunReport>& reports);

struct StoredSolution {
    std::vector<std::vector<NodeId>> best_paths;
    std::vector<std::vector<NodeId>> worst_paths;
    std::vector<double> per_iteration_scores;  // empty when absent from the file
};
struct StoredRun {
    int long_path_min_nodes = 5;
    int classify_long_min_nodes = 16;
    int classify_medium_min_nodes = 5;
    std::vector<StoredSolution> layers;
};
StoredRun parse_run_reports_json(std::string_view text, const std::string& source_name);

// Rebinds stored node paths to a graph: each consecutive node pair must be an
// edge (FormatError otherwise, naming the pair), and the paths must cover the
// graph's edges exactly once. Restores edge ids, lengths and the score.
Solution solution_from_node_paths(const LatticeGraph& graph,
                                  const std::vector<std::vector<NodeId>>& node_paths,
                                  const std::string& source_name);

std::string write_trajectory_report_json(const TrajectoryReport& report);

struct StatsReport {
    ReplicateSet set;
    StdFormula formula = StdFormula::Standard;
};
std::string write_stats_json(const StatsReport& report);

// Graph dump for reports: nodes with positions, edges with endpoints/weights.
std::string write_graph_json(const LatticeGraph& graph);

// Score trace CSV: header then one "iteration,score" row per iteration; a
// leading layer column appears when more than one report is given.
std::string write_score_trace_csv(const std::vector<RunReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace gippo
