#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gippo/lattice.hpp"
#include "gippo/optimizer.hpp"

namespace gippo {

struct PrintParams {
    double layer_thickness = 0.148;      // mm
    double extrusion_multiplier = 1.0;
    double nozzle_diameter = 0.2;        // mm
    double filament_diameter = 1.75;     // mm
    double k_factor = 1.0;               // material calibration factor
    double print_speed = 600.0;          // mm/min
    double travel_speed = 3000.0;        // mm/min
    double retraction_length = 0.0;      // mm of filament; 0 disables
    double retraction_speed = 1800.0;    // mm/min
    double first_layer_z = 0.148;        // mm
    std::optional<double> nozzle_temp_c;
    std::optional<double> bed_temp_c;
    // Paths with fewer segments than this print at print_speed * factor.
    int short_path_max_segments = 4;
    double short_path_speed_factor = 0.60;
};

// Filament length pushed for one printed segment:
// k * (4 * length * layer_thickness * extrusion_multiplier * nozzle_diameter)
//   / (pi * filament_diameter^2)
double e_value(double length_mm, const PrintParams& params);

// Planned motion; absent coordinates mean "axis not commanded" (e.g. a z-only
// hop or a pure filament move).
struct Move {
    enum class Kind { Travel, Extrude, Retract, Prime };
    Kind kind = Kind::Travel;
    std::optional<double> x, y, z;
    double feed = 0.0;     // mm/min
    double e_delta = 0.0;  // mm of filament, negative for retraction
};

struct PlannedLayer {
    int index = 0;
    double z = 0.0;  // program plane: first_layer_z + index * layer_thickness
    std::vector<Move> moves;
};

// Cumulative E never decreases except across a Retract, and every Retract is
// matched by an equal Prime before the next Extrude.
struct ToolpathProgram {
    std::vector<PlannedLayer> layers;
};

// Moves for one solution. Every emitted z is z_offset + node z, so callers
// pass node positions with z rebased to the layer relief (0 for planar).
// Per path: optional retract, travel to the first node, optional prime, then
// one extrude per edge. Paths shorter than short_path_max_segments extrude at
// print_speed * short_path_speed_factor, all others at print_speed.
std::vector<Move> plan_layer(const Solution& solution, std::span<const Point3> node_pos,
                             double z_offset, const PrintParams& params);

// Full program: one z hop + planned moves per layer, in design order.
ToolpathProgram plan_program(const Design& design, const std::vector<Solution>& per_layer,
                             const PrintParams& params);

// Marlin-flavored G-code: absolute positioning (G90), relative extrusion
// (M83), mm units (G21), optional heatup, motors off at the end. Fixed
// formatting: 5 decimals for X/Y/Z, 6 for E. Byte-stable.
std::string emit_marlin(const Design& design, const std::vector<Solution>& per_layer,
                        const PrintParams& params);
std::string emit_marlin(const ToolpathProgram& program, const PrintParams& params);

// CSV with columns layer,move_type,x,y,z,feed,e_delta; one record per planned
// move, empty cells for axes a move does not command. Byte-stable.
std::string emit_toolpath_csv(const Design& design, const std::vector<Solution>& per_layer,
                              const PrintParams& params);
std::string emit_toolpath_csv(const ToolpathProgram& program);

}  // namespace gippo
