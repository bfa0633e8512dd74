#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gippo/graph.hpp"

namespace gippo {

// One G-code line after comment stripping and word parsing.
struct GMove {
    enum class Kind { G0, G1, Other };
    Kind kind = Kind::Other;
    std::string command;  // normalized first word, e.g. "G92", "M83"; empty for bare moves
    std::optional<double> x, y, z, e, f;
    bool absolute_xyz = true;  // modal state snapshot at this line
    bool absolute_e = true;
    int line_no = 0;  // 1-based
};

struct ParseResult {
    std::vector<GMove> moves;
    std::vector<std::string> warnings;  // lenient mode: undecodable lines land here
};

// Tokenizes arbitrary G-code. Comments (';', parentheses) and checksums ('*')
// are stripped; letter case is ignored; bare coordinate lines repeat the last
// G0/G1. In lenient mode (default) undecodable lines are skipped with a
// warning; strict mode throws FormatError naming the line. Never crashes on
// arbitrary bytes.
ParseResult parse_gcode(std::string_view text, bool strict = false);

// Chained extruding polylines recovered from a move stream.
struct Trajectory {
    std::vector<std::vector<Point3>> polylines;  // each has >= 2 points
    double total_extruding_length_mm = 0.0;
    double total_travel_length_mm = 0.0;
    int edge_count = 0;  // extruding linear moves (the "real" segment count)
    int arc_count = 0;   // unsupported G2/G3 encountered
    std::vector<std::string> warnings;
};

// Simulates positions and the extrusion axis. A move extrudes when it has
// positive displacement and pushes cumulative E beyond its previous high-water
// mark (so retract/prime pairs and absolute-E resets cancel out). Consecutive
// extruding segments sharing an endpoint chain into one polyline; travels,
// retracts, zero-E moves and G92 break the chain.
Trajectory extract_trajectories(const std::vector<GMove>& moves);

struct TrajectoryReport {
    double total_extruding_length_mm = 0.0;
    double total_travel_length_mm = 0.0;
    int polyline_count = 0;
    int edges_real = 0;
    double lts_percent = 0.0;  // long-polyline share of extruded length
    double nominal_total_length_mm = 0.0;
    int nominal_edge_count = 0;
    double raw_score = 0.0;        // edge-weighted path score of the polylines
    double corrected_score = 0.0;  // raw * nominal/real edges (or inverse if literal)
    double length_ratio = 0.0;     // extruded / nominal length
    bool literal_correction = false;
    std::vector<std::string> warnings;
};

// Scores the printed polylines as if they were an optimizer decomposition and
// normalizes against the nominal lattice. The default correction multiplies by
// nominal/real edge count so overprinting lowers the score;
// literal_correction flips the ratio.
TrajectoryReport compare_to_nominal(const Trajectory& trajectory, const LatticeGraph& nominal,
                                    int long_min_nodes = 5, bool literal_correction = false);

}  // namespace gippo
