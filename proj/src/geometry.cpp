#include "gippo/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "gippo/fmtnum.hpp"

namespace gippo {

Contour Contour::rect(double width, double height, double cx, double cy) {
    if (!(width > 0.0) || !(height > 0.0))
        throw ParamError("contour rect: width and height must be positive");
    Contour c;
    c.kind = Kind::Rect;
    c.cx = cx;
    c.cy = cy;
    c.width = width;
    c.height = height;
    return c;
}

Contour Contour::circle(double radius, double cx, double cy) {
    if (!(radius > 0.0)) throw ParamError("contour circle: radius must be positive");
    Contour c;
    c.kind = Kind::Circle;
    c.cx = cx;
    c.cy = cy;
    c.radius = radius;
    return c;
}

Bounds Contour::bounds() const {
    if (kind == Kind::Rect)
        return {cx - width / 2.0, cy - height / 2.0, cx + width / 2.0, cy + height / 2.0};
    return {cx - radius, cy - radius, cx + radius, cy + radius};
}

bool Contour::contains(double x, double y) const {
    if (kind == Kind::Rect) {
        return x >= cx - width / 2.0 && x <= cx + width / 2.0 && y >= cy - height / 2.0 &&
               y <= cy + height / 2.0;
    }
    const double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= radius * radius;
}

namespace {

Point3 lerp(const Point3& p, const Point3& q, double t) {
    return {p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t, p.z + (q.z - p.z) * t};
}

// Clamp the parametric range [t0,t1] of p + t(q-p) against a half plane
// described as coef * t <= bound (Liang-Barsky step).
bool clip_half(double coef, double bound, double& t0, double& t1) {
    if (coef == 0.0) return bound >= 0.0;
    const double t = bound / coef;
    if (coef > 0.0) {
        if (t < t0) return false;
        t1 = std::min(t1, t);
    } else {
        if (t > t1) return false;
        t0 = std::max(t0, t);
    }
    return t0 <= t1;
}

}  // namespace

std::optional<std::pair<Point3, Point3>> Contour::clip_segment(const Point3& p,
                                                               const Point3& q) const {
    // Endpoints this close to the boundary count as inside and pass through
    // bit-identical. The slack tracks the region scale so it always exceeds
    // the displacement quantize_layer can introduce (half an ulp at 9
    // significant digits per coordinate); re-clipping a produced layer is then
    // an exact no-op rather than shaving boundary points by rounding noise.
    const Bounds bb = bounds();
    const double scale = std::max({std::fabs(bb.x0), std::fabs(bb.x1), std::fabs(bb.y0),
                                   std::fabs(bb.y1)});
    const double slack = 2e-8 * scale + 1e-12;
    const auto inside = [&](const Point3& v) {
        if (kind == Kind::Rect) {
            return v.x >= bb.x0 - slack && v.x <= bb.x1 + slack && v.y >= bb.y0 - slack &&
                   v.y <= bb.y1 + slack;
        }
        const double ex = v.x - cx, ey = v.y - cy;
        const double r = radius + slack;
        return ex * ex + ey * ey <= r * r;
    };
    if (inside(p) && inside(q)) return std::make_pair(p, q);

    double t0 = 0.0, t1 = 1.0;
    const double dx = q.x - p.x, dy = q.y - p.y;
    if (kind == Kind::Rect) {
        const Bounds b = bounds();
        if (!clip_half(-dx, p.x - b.x0, t0, t1)) return std::nullopt;
        if (!clip_half(dx, b.x1 - p.x, t0, t1)) return std::nullopt;
        if (!clip_half(-dy, p.y - b.y0, t0, t1)) return std::nullopt;
        if (!clip_half(dy, b.y1 - p.y, t0, t1)) return std::nullopt;
    } else {
        // |p + t d - c|^2 <= r^2 as a*t^2 + b*t + c0 <= 0
        const double ex = p.x - cx, ey = p.y - cy;
        const double a = dx * dx + dy * dy;
        const double b = 2.0 * (ex * dx + ey * dy);
        const double c0 = ex * ex + ey * ey - radius * radius;
        if (a == 0.0) {
            if (c0 > 0.0) return std::nullopt;
        } else {
            const double disc = b * b - 4.0 * a * c0;
            if (disc < 0.0) return std::nullopt;
            const double sq = std::sqrt(disc);
            const double r0 = (-b - sq) / (2.0 * a);
            const double r1 = (-b + sq) / (2.0 * a);
            t0 = std::max(t0, r0);
            t1 = std::min(t1, r1);
            if (t0 > t1) return std::nullopt;
        }
    }
    const Point3 a = (t0 <= 0.0) ? p : lerp(p, q, t0);
    const Point3 b2 = (t1 >= 1.0) ? q : lerp(p, q, t1);
    return std::make_pair(a, b2);
}

namespace {

struct CellKey {
    int64_t i, j, k;
    bool operator==(const CellKey& o) const { return i == o.i && j == o.j && k == o.k; }
};

struct CellKeyHash {
    size_t operator()(const CellKey& c) const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t v : {static_cast<uint64_t>(c.i), static_cast<uint64_t>(c.j),
                           static_cast<uint64_t>(c.k)}) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

int64_t cell_of(double v, double cell) { return static_cast<int64_t>(std::floor(v / cell)); }

}  // namespace

Layer weld_layer(const std::vector<Point3>& points, const std::vector<Segment>& segments,
                 double z, const std::string& label, const WeldOptions& opts) {
    const double tol = opts.tolerance;
    if (!(tol > 0.0)) throw ParamError("weld: tolerance must be positive");
    for (const Point3& p : points)
        if (!point_finite(p)) throw FormatError("weld: non-finite coordinate");

    // Representative per input point, first occurrence wins.
    std::unordered_map<CellKey, std::vector<int>, CellKeyHash> grid;
    std::vector<Point3> reps;
    std::vector<int> rep_of(points.size());
    const double tol2 = tol * tol;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        const Point3& p = points[pi];
        const int64_t ci = cell_of(p.x, tol), cj = cell_of(p.y, tol), ck = cell_of(p.z, tol);
        int found = -1;
        for (int64_t di = -1; di <= 1 && found < 0; ++di)
            for (int64_t dj = -1; dj <= 1 && found < 0; ++dj)
                for (int64_t dk = -1; dk <= 1 && found < 0; ++dk) {
                    auto it = grid.find({ci + di, cj + dj, ck + dk});
                    if (it == grid.end()) continue;
                    for (int r : it->second) {
                        const Point3& q = reps[r];
                        const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
                        if (dx * dx + dy * dy + dz * dz <= tol2) {
                            found = r;
                            break;
                        }
                    }
                }
        if (found < 0) {
            found = static_cast<int>(reps.size());
            reps.push_back(p);
            grid[{ci, cj, ck}].push_back(found);
        }
        rep_of[pi] = found;
    }

    // Remap, canonicalize, dedupe.
    std::vector<Segment> out;
    std::unordered_map<uint64_t, char> seen;
    out.reserve(segments.size());
    const int n_in = static_cast<int>(points.size());
    for (size_t si = 0; si < segments.size(); ++si) {
        const Segment& s = segments[si];
        if (s.a < 0 || s.b < 0 || s.a >= n_in || s.b >= n_in)
            throw FormatError("weld: segments[" + std::to_string(si) + "] index out of bounds");
        int a = rep_of[s.a], b = rep_of[s.b];
        if (a == b) {
            if (opts.error_on_degenerate)
                throw FormatError("weld: segments[" + std::to_string(si) +
                                  "] collapses to a self-loop after welding");
            continue;
        }
        if (a > b) std::swap(a, b);
        if (dist3(reps[a], reps[b]) <= tol) {
            if (opts.error_on_degenerate)
                throw FormatError("weld: segments[" + std::to_string(si) +
                                  "] shorter than weld tolerance");
            continue;
        }
        const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
        if (seen.emplace(key, 1).second) out.push_back({a, b});
    }

    // Drop unreferenced points, keeping relative order.
    std::vector<int> newid(reps.size(), -1);
    Layer layer;
    layer.z = z;
    layer.label = label;
    for (const Segment& s : out) {
        newid[s.a] = 0;
        newid[s.b] = 0;
    }
    int next = 0;
    for (size_t i = 0; i < reps.size(); ++i) {
        if (newid[i] == 0) {
            newid[i] = next++;
            layer.points.push_back(reps[i]);
        }
    }
    layer.segments.reserve(out.size());
    for (const Segment& s : out) layer.segments.push_back({newid[s.a], newid[s.b]});
    return layer;
}

void validate_layer(const Layer& layer, double tolerance) {
    const int n = static_cast<int>(layer.points.size());
    for (const Point3& p : layer.points)
        if (!point_finite(p)) throw StructuralError("layer: non-finite coordinate");
    std::unordered_map<uint64_t, char> seen;
    for (size_t i = 0; i < layer.segments.size(); ++i) {
        const Segment& s = layer.segments[i];
        if (s.a < 0 || s.b < 0 || s.a >= n || s.b >= n)
            throw StructuralError("layer: segment " + std::to_string(i) + " index out of bounds");
        if (s.a == s.b)
            throw StructuralError("layer: segment " + std::to_string(i) + " is a self-loop (" +
                                  std::to_string(s.a) + "," + std::to_string(s.b) + ")");
        const int a = std::min(s.a, s.b), b = std::max(s.a, s.b);
        const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
        if (!seen.emplace(key, 1).second)
            throw StructuralError("layer: duplicate segment (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
        if (layer.segment_length(static_cast<int>(i)) <= tolerance)
            throw StructuralError("layer: segment " + std::to_string(i) +
                                  " not longer than weld tolerance");
    }
}

Layer quantize_layer(const Layer& layer, double weld_tol) {
    std::vector<Point3> pts;
    pts.reserve(layer.points.size());
    for (const Point3& p : layer.points)
        pts.push_back({quantize_g9(p.x), quantize_g9(p.y), quantize_g9(p.z)});
    Layer w = weld_layer(pts, layer.segments, quantize_g9(layer.z), layer.label,
                         {weld_tol, /*error_on_degenerate=*/false});

    // Renumber canonically: points lexicographic by (x, y, z), segments sorted
    // by index pair. Welding numbers points by construction order, which is
    // not stable across equivalent constructions (a sliver dropped during
    // clipping can shift every later id); sorting makes the result a pure
    // function of the geometry. Strict order is guaranteed because welded
    // points are pairwise distinct.
    const int n = static_cast<int>(w.points.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const Point3 &a = w.points[i], &b = w.points[j];
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    });
    std::vector<int> newid(n);
    for (int i = 0; i < n; ++i) newid[order[i]] = i;

    Layer out;
    out.z = w.z;
    out.label = w.label;
    out.points.reserve(n);
    for (int i = 0; i < n; ++i) out.points.push_back(w.points[order[i]]);
    out.segments.reserve(w.segments.size());
    for (const Segment& s : w.segments) {
        const int a = newid[s.a], b = newid[s.b];
        out.segments.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(out.segments.begin(), out.segments.end(), [](const Segment& a, const Segment& b) {
        return a.a != b.a ? a.a < b.a : a.b < b.b;
    });
    return out;
}

HeightField HeightField::flat(double z0) {
    HeightField h;
    h.sample = [z0](double, double) -> std::optional<double> { return z0; };
    return h;
}

HeightField HeightField::spherical_cap(double sphere_radius, double center_z, double cx,
                                       double cy) {
    if (!(sphere_radius > 0.0)) throw ParamError("spherical_cap: radius must be positive");
    HeightField h;
    h.sample = [sphere_radius, center_z, cx, cy](double x, double y) -> std::optional<double> {
        const double dx = x - cx, dy = y - cy;
        const double rem = sphere_radius * sphere_radius - dx * dx - dy * dy;
        if (rem < 0.0) return std::nullopt;
        return center_z + std::sqrt(rem);
    };
    return h;
}

}  // namespace gippo
