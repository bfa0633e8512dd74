#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gippo/errors.hpp"

namespace gippo {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double dist3(const Point3& a, const Point3& b) {
    const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline bool point_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Indices into Layer::points. Unordered pair; kept with a < b after welding.
struct Segment {
    int a = 0;
    int b = 0;
};

constexpr double kDefaultWeldTol = 1e-6;  // mm

// A planar (or height-projected) batch of printable line segments.
// Invariants after welding: indices in bounds, a != b, no duplicate unordered
// pair, every segment longer than the weld tolerance, all coordinates finite,
// and no point closer than the weld tolerance to another.
struct Layer {
    std::vector<Point3> points;
    std::vector<Segment> segments;
    double z = 0.0;  // nominal plane offset in mm
    std::string label;

    double segment_length(int i) const {
        return dist3(points[segments[i].a], points[segments[i].b]);
    }
    double total_length() const {
        double sum = 0.0;
        for (int i = 0; i < static_cast<int>(segments.size()); ++i) sum += segment_length(i);
        return sum;
    }
};

struct Bounds {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Closed convex print region in the xy plane.
struct Contour {
    enum class Kind { Rect, Circle };

    Kind kind = Kind::Rect;
    double cx = 0.0, cy = 0.0;
    double width = 0.0, height = 0.0;  // rect
    double radius = 0.0;               // circle

    static Contour rect(double width, double height, double cx = 0.0, double cy = 0.0);
    static Contour circle(double radius, double cx = 0.0, double cy = 0.0);

    Bounds bounds() const;
    bool contains(double x, double y) const;

    // Portion of [p,q] inside the region, or nothing. Endpoints already inside
    // are returned bit-identical so downstream welding keeps their identity.
    std::optional<std::pair<Point3, Point3>> clip_segment(const Point3& p, const Point3& q) const;
};

struct WeldOptions {
    double tolerance = kDefaultWeldTol;
    // Import wants a hard error when welding collapses a segment to a point;
    // generators and clipping silently drop such slivers.
    bool error_on_degenerate = false;
};

// Merge vertices closer than the tolerance (first occurrence wins), remap and
// dedupe segments, drop unreferenced points. Point order, and therefore node
// labeling downstream, is deterministic.
Layer weld_layer(const std::vector<Point3>& points, const std::vector<Segment>& segments,
                 double z, const std::string& label, const WeldOptions& opts = {});

// Throws StructuralError when a Layer invariant does not hold.
void validate_layer(const Layer& layer, double tolerance = kDefaultWeldTol);

// Snap every coordinate (and z) to interchange precision (9 significant
// digits), re-weld, then renumber canonically (points lexicographic by
// (x, y, z), segments sorted by index pair). Producers call this on anything
// they hand out, so a layer used directly and the same layer written to JSON
// and read back are bit-identical, and the numbering depends only on the
// geometry rather than on construction order. Re-welding covers the rare
// case where snapping pulls two points inside the tolerance.
Layer quantize_layer(const Layer& layer, double weld_tol = kDefaultWeldTol);

// Scalar surface z = f(x, y); empty result means (x, y) is outside the domain.
struct HeightField {
    std::function<std::optional<double>(double, double)> sample;

    static HeightField flat(double z0 = 0.0);
    // Upper hemisphere of the sphere with the given radius centered at
    // (cx, cy, center_z): f = center_z + sqrt(r^2 - dx^2 - dy^2).
    static HeightField spherical_cap(double sphere_radius, double center_z,
                                     double cx = 0.0, double cy = 0.0);
};

}  // namespace gippo
