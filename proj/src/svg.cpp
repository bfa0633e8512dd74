#include "gippo/svg.hpp"

#include <algorithm>
#include <cmath>

#include "gippo/fmtnum.hpp"

namespace gippo {
namespace {

constexpr double kCanvasW = 640.0;
constexpr double kMargin = 24.0;

struct Box {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool any = false;

    void add(double x, double y) {
        if (!any) {
            x0 = x1 = x;
            y0 = y1 = y;
            any = true;
        } else {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    double w() const { return x1 - x0; }
    double h() const { return y1 - y0; }
};

// Maps model xy to canvas pixels, y flipped so +y points up on screen.
struct Mapper {
    Box box;
    double scale = 1.0;
    double canvas_h = 0.0;

    explicit Mapper(Box b) : box(b) {
        if (!box.any) box.add(0, 0);
        const double ew = std::max(box.w(), 1e-9);
        const double eh = std::max(box.h(), 1e-9);
        scale = (kCanvasW - 2 * kMargin) / ew;
        canvas_h = eh * scale + 2 * kMargin;
    }
    std::string x(double mx) const { return fmt_fixed((mx - box.x0) * scale + kMargin, 3); }
    std::string y(double my) const { return fmt_fixed((box.y1 - my) * scale + kMargin, 3); }
};

std::string svg_open(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_fixed(w, 0) +
           "\" height=\"" + fmt_fixed(h, 0) + "\" viewBox=\"0 0 " + fmt_fixed(w, 0) + " " +
           fmt_fixed(h, 0) + "\">\n";
}

void append_lattice_edges(std::string& out, const LatticeGraph& graph, const Mapper& m) {
    if (graph.edges.empty()) return;
    out += "  <g class=\"lattice\">\n";
    for (const GraphEdge& e : graph.edges) {
        const Point3& a = graph.node_pos[e.u];
        const Point3& b = graph.node_pos[e.v];
        out += "    <line x1=\"" + m.x(a.x) + "\" y1=\"" + m.y(a.y) + "\" x2=\"" + m.x(b.x) +
               "\" y2=\"" + m.y(b.y) + "\"/>\n";
    }
    out += "  </g>\n";
}

void append_polyline(std::string& out, const std::vector<Point3>& pts, const Mapper& m,
                     const std::string& cls) {
    out += "  <polyline class=\"" + cls + "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ' ';
        out += m.x(pts[i].x) + "," + m.y(pts[i].y);
    }
    out += "\"/>\n";
}

}  // namespace

std::string svg_decomposition(const LatticeGraph& graph, const Solution& solution,
                              int classify_long_min_nodes, int classify_medium_min_nodes) {
    Box box;
    for (const Point3& p : graph.node_pos) box.add(p.x, p.y);
    const Mapper m(box);
    const double legend_h = 22.0;
    const double h = m.canvas_h + legend_h;

    std::string out = svg_open(kCanvasW, h);
    out +=
        "  <style>\n"
        "    .lattice line { stroke: #d0d0d0; stroke-width: 1; }\n"
        "    polyline { fill: none; stroke-width: 2; stroke-linecap: round; }\n"
        "    .long { stroke: #2166ac; }\n"
        "    .medium { stroke: #1a9850; }\n"
        "    .short { stroke: #d73027; }\n"
        "    text { font: 12px sans-serif; fill: #333; }\n"
        "    .key rect { stroke: none; }\n"
        "  </style>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    append_lattice_edges(out, graph, m);
    for (const Path& p : solution.paths) {
        const char* cls = p.num_nodes() >= classify_long_min_nodes       ? "long"
                          : p.num_nodes() >= classify_medium_min_nodes ? "medium"
                                                                       : "short";
        std::vector<Point3> pts;
        pts.reserve(p.nodes.size());
        for (NodeId n : p.nodes) pts.push_back(graph.node_pos[n]);
        append_polyline(out, pts, m, cls);
    }
    // Legend strip along the bottom edge.
    const double ly = m.canvas_h + 4.0;
    const char* colors[3] = {"#2166ac", "#1a9850", "#d73027"};
    const std::string labels[3] = {
        "long (>= " + std::to_string(classify_long_min_nodes) + " nodes)",
        "medium (" + std::to_string(classify_medium_min_nodes) + "-" +
            std::to_string(classify_long_min_nodes - 1) + ")",
        "short (< " + std::to_string(classify_medium_min_nodes) + ")"};
    out += "  <g class=\"key\">\n";
    double lx = kMargin;
    for (int i = 0; i < 3; ++i) {
        out += "    <rect x=\"" + fmt_fixed(lx, 3) + "\" y=\"" + fmt_fixed(ly, 3) +
               "\" width=\"14\" height=\"14\" fill=\"" + colors[i] + "\"/>\n";
        out += "    <text x=\"" + fmt_fixed(lx + 18, 3) + "\" y=\"" + fmt_fixed(ly + 11.5, 3) +
               "\">" + labels[i] + "</text>\n";
        lx += 24.0 + 8.0 * static_cast<double>(labels[i].size());
    }
    out += "  </g>\n";
    out += "</svg>\n";
    return out;
}

std::string svg_score_scatter(const std::vector<double>& scores) {
    const double w = kCanvasW, h = 360.0;
    double lo = 0.0, hi = 1.0;
    if (!scores.empty()) {
        lo = *std::min_element(scores.begin(), scores.end());
        hi = *std::max_element(scores.begin(), scores.end());
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    const double px0 = kMargin * 2.5, px1 = w - kMargin;
    const double py0 = h - kMargin * 1.5, py1 = kMargin;  // py0 = bottom
    const auto sx = [&](size_t i) {
        const double n = scores.size() > 1 ? static_cast<double>(scores.size() - 1) : 1.0;
        return fmt_fixed(px0 + (px1 - px0) * static_cast<double>(i) / n, 3);
    };
    const auto sy = [&](double v) {
        return fmt_fixed(py0 - (py0 - py1) * (v - lo) / (hi - lo), 3);
    };

    std::string out = svg_open(w, h);
    out +=
        "  <style>\n"
        "    .axis { stroke: #333; stroke-width: 1; }\n"
        "    .pt { fill: #2166ac; }\n"
        "    .best { fill: #d73027; }\n"
        "    text { font: 11px sans-serif; fill: #333; }\n"
        "  </style>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "  <line class=\"axis\" x1=\"" + fmt_fixed(px0, 3) + "\" y1=\"" + fmt_fixed(py0, 3) +
           "\" x2=\"" + fmt_fixed(px1, 3) + "\" y2=\"" + fmt_fixed(py0, 3) + "\"/>\n";
    out += "  <line class=\"axis\" x1=\"" + fmt_fixed(px0, 3) + "\" y1=\"" + fmt_fixed(py0, 3) +
           "\" x2=\"" + fmt_fixed(px0, 3) + "\" y2=\"" + fmt_fixed(py1, 3) + "\"/>\n";
    out += "  <text x=\"4\" y=\"" + fmt_fixed(py1 + 4, 3) + "\">" + fmt_g9(hi) + "</text>\n";
    out += "  <text x=\"4\" y=\"" + fmt_fixed(py0, 3) + "\">" + fmt_g9(lo) + "</text>\n";
    out += "  <text x=\"" + fmt_fixed(px1 - 60, 3) + "\" y=\"" + fmt_fixed(h - 8, 3) +
           "\">iteration</text>\n";
    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    for (size_t i = 0; i < scores.size(); ++i) {
        out += std::string("  <circle class=\"") + (i == best && !scores.empty() ? "best" : "pt") +
               "\" cx=\"" + sx(i) + "\" cy=\"" + sy(scores[i]) + "\" r=\"2\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_trajectory_overlay(const Trajectory& trajectory, const LatticeGraph& nominal) {
    Box box;
    for (const Point3& p : nominal.node_pos) box.add(p.x, p.y);
    for (const std::vector<Point3>& poly : trajectory.polylines)
        for (const Point3& p : poly) box.add(p.x, p.y);
    const Mapper m(box);

    std::string out = svg_open(kCanvasW, m.canvas_h);
    out +=
        "  <style>\n"
        "    .lattice line { stroke: #d0d0d0; stroke-width: 3; }\n"
        "    .real { fill: none; stroke: #b2182b; stroke-width: 1.2; }\n"
        "  </style>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    append_lattice_edges(out, nominal, m);
    for (const std::vector<Point3>& poly : trajectory.polylines)
        append_polyline(out, poly, m, "real");
    out += "</svg>\n";
    return out;
}

}  // namespace gippo
