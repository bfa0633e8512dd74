#include "gippo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gippo/fmtnum.hpp"

namespace gippo {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double d) { return d * kPi / 180.0; }

// Generation window: contour bounds inflated 1.5x per axis about the center,
// then padded by one lattice period on every side.
Bounds generation_window(const Contour& region, double period_x, double period_y) {
    const Bounds b = region.bounds();
    const double cx = (b.x0 + b.x1) / 2.0, cy = (b.y0 + b.y1) / 2.0;
    const double hw = (b.x1 - b.x0) * 0.75 + period_x;
    const double hh = (b.y1 - b.y0) * 0.75 + period_y;
    return {cx - hw, cy - hh, cx + hw, cy + hh};
}

struct RawMesh {
    std::vector<Point3> points;
    std::vector<Segment> segments;

    void edge(const Point3& a, const Point3& b) {
        const int i = static_cast<int>(points.size());
        points.push_back(a);
        points.push_back(b);
        segments.push_back({i, i + 1});
    }
};

Layer finish(const RawMesh& mesh, const Contour& region, double weld_tol,
             const std::string& label) {
    Layer raw = weld_layer(mesh.points, mesh.segments, 0.0, label, {weld_tol, false});
    return clip_layer(raw, region, weld_tol);
}

}  // namespace

Layer gen_honeycomb(double hex_radius, const Contour& region, double weld_tol) {
    if (!(hex_radius > 0.0)) throw ParamError("gen_honeycomb: hex_radius must be positive");
    const double r = hex_radius;
    const double ax = std::sqrt(3.0) * r;  // lattice vectors (ax,0), (ax/2, 1.5r)
    const Bounds w = generation_window(region, ax, 1.5 * r);

    RawMesh mesh;
    const int j0 = static_cast<int>(std::floor((w.y0 - region.cy) / (1.5 * r))) - 1;
    const int j1 = static_cast<int>(std::ceil((w.y1 - region.cy) / (1.5 * r))) + 1;
    for (int j = j0; j <= j1; ++j) {
        const double cyj = region.cy + j * 1.5 * r;
        const double xoff = region.cx + j * ax / 2.0;
        const int i0 = static_cast<int>(std::floor((w.x0 - xoff) / ax)) - 1;
        const int i1 = static_cast<int>(std::ceil((w.x1 - xoff) / ax)) + 1;
        for (int i = i0; i <= i1; ++i) {
            const double cxi = xoff + i * ax;
            Point3 v[6];
            for (int k = 0; k < 6; ++k) {
                const double th = deg2rad(90.0 + 60.0 * k);  // pointy-top
                v[k] = {cxi + r * std::cos(th), cyj + r * std::sin(th), 0.0};
            }
            for (int k = 0; k < 6; ++k) mesh.edge(v[k], v[(k + 1) % 6]);
        }
    }
    return finish(mesh, region, weld_tol, "honeycomb");
}

Layer gen_snub_square(double cell_size, const Contour& region, double weld_tol) {
    if (!(cell_size > 0.0)) throw ParamError("gen_snub_square: cell_size must be positive");
    const double s = cell_size;
    const double L = s * std::sqrt(2.0 + std::sqrt(3.0));  // translational period
    const double r = s / std::sqrt(2.0);                   // square corner radius
    const double e = s * std::sqrt(0.5);                   // tri-tri edge reach
    const Bounds w = generation_window(region, L, L);

    RawMesh mesh;
    const int i0 = static_cast<int>(std::floor((w.x0 - region.cx) / L)) - 1;
    const int i1 = static_cast<int>(std::ceil((w.x1 - region.cx) / L)) + 1;
    const int j0 = static_cast<int>(std::floor((w.y0 - region.cy) / L)) - 1;
    const int j1 = static_cast<int>(std::ceil((w.y1 - region.cy) / L)) + 1;
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            // square rotated +15 deg at the lattice point
            const double cx = region.cx + i * L, cy = region.cy + j * L;
            Point3 a[4];
            for (int k = 0; k < 4; ++k) {
                const double th = deg2rad(60.0 + 90.0 * k);
                a[k] = {cx + r * std::cos(th), cy + r * std::sin(th), 0.0};
            }
            for (int k = 0; k < 4; ++k) mesh.edge(a[k], a[(k + 1) % 4]);
            // square rotated -15 deg at the cell center
            const double dx = cx + L / 2.0, dy = cy + L / 2.0;
            Point3 b[4];
            for (int k = 0; k < 4; ++k) {
                const double th = deg2rad(30.0 + 90.0 * k);
                b[k] = {dx + r * std::cos(th), dy + r * std::sin(th), 0.0};
            }
            for (int k = 0; k < 4; ++k) mesh.edge(b[k], b[(k + 1) % 4]);
            // the two triangle-triangle edges owned by this cell
            mesh.edge(a[0], {a[0].x - e, a[0].y + e, 0.0});  // NW from the 60 deg corner
            mesh.edge(a[3], {a[3].x + e, a[3].y + e, 0.0});  // NE from the 330 deg corner
        }
    }
    return finish(mesh, region, weld_tol, "snub_square");
}

Layer gen_arrowhead(double cell_width, double cell_height, const Contour& region,
                    double weld_tol) {
    if (!(cell_width > 0.0) || !(cell_height > 0.0))
        throw ParamError("gen_arrowhead: cell dimensions must be positive");
    const double h = cell_width, v = cell_height;
    const Bounds w = generation_window(region, h, 1.5 * v);

    RawMesh mesh;
    const int i0 = static_cast<int>(std::floor((w.x0 - region.cx) / h)) - 1;
    const int i1 = static_cast<int>(std::ceil((w.x1 - region.cx) / h)) + 1;
    const int j0 = static_cast<int>(std::floor((w.y0 - region.cy) / v)) - 2;
    const int j1 = static_cast<int>(std::ceil((w.y1 - region.cy) / v)) + 1;
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            const double x0 = region.cx + i * h, y0 = region.cy + j * v;
            const Point3 w1{x0, y0, 0.0};
            const Point3 w2{x0 + h, y0, 0.0};
            const Point3 notch{x0 + h / 2.0, y0 + 0.5 * v, 0.0};
            const Point3 tip{x0 + h / 2.0, y0 + 1.5 * v, 0.0};  // = notch of cell above
            mesh.edge(tip, w1);
            mesh.edge(w1, notch);
            mesh.edge(notch, w2);
            mesh.edge(w2, tip);
        }
    }
    return finish(mesh, region, weld_tol, "arrowhead");
}

Layer gen_reentrant_honeycomb(double cell_width, double cell_height, double reentrant_angle_deg,
                              const Contour& region, double weld_tol) {
    if (!(cell_width > 0.0) || !(cell_height > 0.0))
        throw ParamError("gen_reentrant_honeycomb: cell dimensions must be positive");
    if (!(reentrant_angle_deg > 0.0) || !(reentrant_angle_deg < 90.0))
        throw ParamError("gen_reentrant_honeycomb: angle must be in (0, 90) degrees");
    const double h = cell_width, v = cell_height;
    const double d = (h / 2.0) * std::tan(deg2rad(reentrant_angle_deg));
    const Bounds w = generation_window(region, h, v + d);

    // Zigzag vertices: Z(k, j) = (k*h/2, j*v - d*((k + j) mod 2)); struts rise
    // from each dipped vertex to the row above.
    auto zv = [&](int k, int j) -> Point3 {
        const int dip = ((k + j) % 2 + 2) % 2;
        return {region.cx + k * h / 2.0, region.cy + j * v - d * dip, 0.0};
    };
    RawMesh mesh;
    const int j0 = static_cast<int>(std::floor((w.y0 - region.cy) / v)) - 1;
    const int j1 = static_cast<int>(std::ceil((w.y1 - region.cy) / v)) + 1;
    const int k0 = 2 * (static_cast<int>(std::floor((w.x0 - region.cx) / h)) - 1);
    const int k1 = 2 * (static_cast<int>(std::ceil((w.x1 - region.cx) / h)) + 1);
    for (int j = j0; j <= j1; ++j) {
        for (int k = k0; k <= k1; ++k) {
            mesh.edge(zv(k, j), zv(k + 1, j));
            if (((k + j) % 2 + 2) % 2 == 1) mesh.edge(zv(k, j), zv(k, j + 1));
        }
    }
    return finish(mesh, region, weld_tol, "reentrant_honeycomb");
}

Layer gen_rectilinear(double strand_distance, double angle_deg, const Contour& region,
                      double weld_tol) {
    if (!(strand_distance > 0.0))
        throw ParamError("gen_rectilinear: strand_distance must be positive");
    const double th = deg2rad(angle_deg);
    const double ux = std::cos(th), uy = std::sin(th);    // along the lines
    const double nx = -std::sin(th), ny = std::cos(th);   // line normal

    // Contour extent along the normal and along the line direction.
    double pmin, pmax, tmin, tmax;
    if (region.kind == Contour::Kind::Circle) {
        const double c = region.cx * nx + region.cy * ny;
        pmin = c - region.radius;
        pmax = c + region.radius;
        const double cu = region.cx * ux + region.cy * uy;
        tmin = cu - region.radius;
        tmax = cu + region.radius;
    } else {
        const Bounds b = region.bounds();
        pmin = pmax = b.x0 * nx + b.y0 * ny;
        tmin = tmax = b.x0 * ux + b.y0 * uy;
        for (auto [x, y] : {std::pair{b.x1, b.y0}, std::pair{b.x0, b.y1}, std::pair{b.x1, b.y1}}) {
            const double pn = x * nx + y * ny, pu = x * ux + y * uy;
            pmin = std::min(pmin, pn);
            pmax = std::max(pmax, pn);
            tmin = std::min(tmin, pu);
            tmax = std::max(tmax, pu);
        }
    }

    RawMesh mesh;
    const double eps = 1e-9 * std::max(1.0, std::abs(pmax));
    const double margin = strand_distance;  // overshoot; clipping trims it
    for (int k = 0;; ++k) {
        const double off = pmin + k * strand_distance;
        if (off > pmax + eps) break;
        const Point3 a{nx * off + ux * (tmin - margin), ny * off + uy * (tmin - margin), 0.0};
        const Point3 b{nx * off + ux * (tmax + margin), ny * off + uy * (tmax + margin), 0.0};
        mesh.edge(a, b);
    }
    return finish(mesh, region, weld_tol, "rectilinear");
}

Layer clip_layer(const Layer& layer, const Contour& contour, double weld_tol) {
    std::vector<Point3> pts;
    std::vector<Segment> segs;
    pts.reserve(layer.points.size());
    segs.reserve(layer.segments.size());
    for (const Segment& s : layer.segments) {
        const auto clipped = contour.clip_segment(layer.points[s.a], layer.points[s.b]);
        if (!clipped) continue;
        const int base = static_cast<int>(pts.size());
        pts.push_back(clipped->first);
        pts.push_back(clipped->second);
        segs.push_back({base, base + 1});
    }
    return quantize_layer(weld_layer(pts, segs, layer.z, layer.label, {weld_tol, false}),
                          weld_tol);
}

Layer rotate_layer(const Layer& layer, double angle_deg, const Point3& center) {
    const double th = deg2rad(angle_deg);
    const double c = std::cos(th), s = std::sin(th);
    Layer out = layer;
    for (Point3& p : out.points) {
        const double dx = p.x - center.x, dy = p.y - center.y;
        p.x = center.x + c * dx - s * dy;
        p.y = center.y + s * dx + c * dy;
    }
    return out;
}

Design stack_layers(const Layer& base, int n_layers, double layer_thickness, double rotation_deg,
                    const Point3& center) {
    if (n_layers < 1) throw ParamError("stack_layers: n_layers must be >= 1");
    if (!(layer_thickness > 0.0)) throw ParamError("stack_layers: layer_thickness must be positive");
    Design d;
    d.layer_thickness = layer_thickness;
    d.rotation_deg_per_layer = rotation_deg;
    d.layers.reserve(n_layers);
    for (int k = 0; k < n_layers; ++k) {
        Layer lk = rotate_layer(base, rotation_deg * k, center);
        const double dz = layer_thickness * k;
        lk.z = base.z + dz;
        for (Point3& p : lk.points) p.z += dz;
        d.layers.push_back(quantize_layer(lk));
    }
    return d;
}

Layer project_layer(const Layer& layer, const HeightField& surface) {
    if (!surface.sample) throw ParamError("project_layer: surface has no sample function");
    Layer out = layer;
    for (size_t i = 0; i < out.points.size(); ++i) {
        Point3& p = out.points[i];
        const auto zv = surface.sample(p.x, p.y);
        if (!zv)
            throw ParamError("project_layer: vertex " + std::to_string(i) + " at (" +
                             std::to_string(p.x) + ", " + std::to_string(p.y) +
                             ") is outside the surface domain");
        p.z = quantize_g9(*zv + layer.z);
    }
    return out;
}

}  // namespace gippo
