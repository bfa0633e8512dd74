#pragma once

#include <string>
#include <vector>

#include "gippo/geometry.hpp"

namespace gippo {

// Ordered bottom-to-top stack of layers.
// Invariant: layers sorted by strictly increasing z; for planar stacks,
// layer k sits at layers[0].z + k * layer_thickness.
struct Design {
    std::vector<Layer> layers;
    double layer_thickness = 0.0;        // mm
    double rotation_deg_per_layer = 0.0;  // about the stack center
};

// All generators fill the region's bounding box (inflated 1.5x per axis plus
// one lattice period of margin so boundary cells are never missed), then clip
// against the contour itself. Shared cell vertices and edges weld into one.

// Regular hexagon tiling; hex_radius is the circumradius = side length.
Layer gen_honeycomb(double hex_radius, const Contour& region, double weld_tol = kDefaultWeldTol);

// Snub square tiling (vertex figure 3.3.4.3.4); cell_size is the edge length.
Layer gen_snub_square(double cell_size, const Contour& region, double weld_tol = kDefaultWeldTol);

// Double-arrow auxetic cells with horizontal period cell_width and vertical
// period cell_height. Cell shape documented by tests/fixtures/arrowhead_unit_cell.json:
// wings (0,0),(w,0), notch (w/2,h/2), tip (w/2,1.5h); darts interpenetrate.
Layer gen_arrowhead(double cell_width, double cell_height, const Contour& region,
                    double weld_tol = kDefaultWeldTol);

// Re-entrant (bow-tie) honeycomb: zigzag rows whose walls make
// reentrant_angle_deg with the horizontal, dipping by (w/2)*tan(angle), plus
// vertical struts at the dipped vertices. Lattice vectors (w,0) and (w/2,h).
// Cell shape documented by tests/fixtures/reentrant_unit_cell.json.
Layer gen_reentrant_honeycomb(double cell_width, double cell_height, double reentrant_angle_deg,
                              const Contour& region, double weld_tol = kDefaultWeldTol);

// Parallel infill lines at angle_deg, spaced strand_distance apart; the first
// line passes through the contour's minimum extent along the line normal.
Layer gen_rectilinear(double strand_distance, double angle_deg, const Contour& region,
                      double weld_tol = kDefaultWeldTol);

// Keep each segment's intersection with the contour (convex: one subsegment,
// possibly empty). New boundary vertices are welded; slivers are dropped.
Layer clip_layer(const Layer& layer, const Contour& contour, double weld_tol = kDefaultWeldTol);

// Rotate in the xy plane about center; z untouched, lengths preserved.
Layer rotate_layer(const Layer& layer, double angle_deg, const Point3& center = {});

// Layer k = base rotated by k * rotation_deg about center, z raised by
// k * layer_thickness.
Design stack_layers(const Layer& base, int n_layers, double layer_thickness, double rotation_deg,
                    const Point3& center = {});

// Replace each vertex z with surface(x, y) + the layer's nominal offset.
// A vertex outside the surface domain is a ParamError naming the vertex.
Layer project_layer(const Layer& layer, const HeightField& surface);

}  // namespace gippo
