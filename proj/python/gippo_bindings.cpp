// Python bindings for the core pipeline: generate, optimize, emit, analyze.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gippo/analyzer.hpp"
#include "gippo/errors.hpp"
#include "gippo/gcode.hpp"
#include "gippo/graph.hpp"
#include "gippo/io.hpp"
#include "gippo/lattice.hpp"
#include "gippo/optimizer.hpp"
#include "gippo/stats.hpp"
#include "gippo/svg.hpp"

namespace py = pybind11;
using namespace gippo;

namespace {

Mode mode_from_string(const std::string& m) {
    if (m == "max" || m == "MAX") return Mode::Max;
    if (m == "min" || m == "MIN") return Mode::Min;
    throw ParamError("mode must be \"max\" or \"min\", got \"" + m + "\"");
}

StdFormula formula_from_string(const std::string& f) {
    if (f == "standard") return StdFormula::Standard;
    if (f == "total-weighted" || f == "total_weighted") return StdFormula::TotalWeighted;
    throw ParamError("formula must be \"standard\" or \"total-weighted\", got \"" + f + "\"");
}

py::list points_to_list(const std::vector<Point3>& pts) {
    py::list out;
    for (const Point3& p : pts) out.append(py::make_tuple(p.x, p.y, p.z));
    return out;
}

}  // namespace

PYBIND11_MODULE(_gippo, m) {
    m.doc() = "Greedy path decomposition and toolpath emission for printed lattices";

    py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<Point3>(m, "Point3")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
             py::arg("z") = 0.0)
        .def_readwrite("x", &Point3::x)
        .def_readwrite("y", &Point3::y)
        .def_readwrite("z", &Point3::z);

    py::class_<Contour>(m, "Contour")
        .def_static("rect", &Contour::rect, py::arg("width"), py::arg("height"),
                    py::arg("cx") = 0.0, py::arg("cy") = 0.0)
        .def_static("circle", &Contour::circle, py::arg("radius"), py::arg("cx") = 0.0,
                    py::arg("cy") = 0.0)
        .def("contains", &Contour::contains, py::arg("x"), py::arg("y"));

    py::class_<Layer>(m, "Layer")
        .def_property_readonly("points",
                               [](const Layer& l) { return points_to_list(l.points); })
        .def_property_readonly("segments",
                               [](const Layer& l) {
                                   py::list out;
                                   for (const Segment& s : l.segments)
                                       out.append(py::make_tuple(s.a, s.b));
                                   return out;
                               })
        .def_readonly("z", &Layer::z)
        .def_readonly("label", &Layer::label)
        .def("total_length", &Layer::total_length)
        .def("__repr__", [](const Layer& l) {
            return "<Layer '" + l.label + "': " + std::to_string(l.points.size()) +
                   " points, " + std::to_string(l.segments.size()) + " segments>";
        });

    py::class_<Design>(m, "Design")
        .def_readonly("layers", &Design::layers)
        .def_readonly("layer_thickness", &Design::layer_thickness)
        .def_readonly("rotation_deg_per_layer", &Design::rotation_deg_per_layer);

    m.def("gen_honeycomb", &gen_honeycomb, py::arg("hex_radius"), py::arg("region"),
          py::arg("weld_tol") = kDefaultWeldTol);
    m.def("gen_snub_square", &gen_snub_square, py::arg("cell_size"), py::arg("region"),
          py::arg("weld_tol") = kDefaultWeldTol);
    m.def("gen_arrowhead", &gen_arrowhead, py::arg("cell_width"), py::arg("cell_height"),
          py::arg("region"), py::arg("weld_tol") = kDefaultWeldTol);
    m.def("gen_reentrant_honeycomb", &gen_reentrant_honeycomb, py::arg("cell_width"),
          py::arg("cell_height"), py::arg("reentrant_angle_deg"), py::arg("region"),
          py::arg("weld_tol") = kDefaultWeldTol);
    m.def("gen_rectilinear", &gen_rectilinear, py::arg("strand_distance"), py::arg("angle_deg"),
          py::arg("region"), py::arg("weld_tol") = kDefaultWeldTol);
    m.def("clip_layer", &clip_layer, py::arg("layer"), py::arg("contour"),
          py::arg("weld_tol") = kDefaultWeldTol);
    m.def("rotate_layer", &rotate_layer, py::arg("layer"), py::arg("angle_deg"),
          py::arg("center") = Point3{});
    m.def(
        "stack_layers",
        [](const Layer& base, int n, double thickness, double rotation, double cx, double cy) {
            return stack_layers(base, n, thickness, rotation, Point3{cx, cy, 0.0});
        },
        py::arg("base"), py::arg("n_layers"), py::arg("layer_thickness"),
        py::arg("rotation_deg"), py::arg("cx") = 0.0, py::arg("cy") = 0.0);
    m.def(
        "project_sphere",
        [](const Layer& layer, double radius, std::optional<double> center_z, double cx,
           double cy) {
            const double cz = center_z ? *center_z : -radius;
            return project_layer(layer, HeightField::spherical_cap(radius, cz, cx, cy));
        },
        py::arg("layer"), py::arg("radius"), py::arg("center_z") = std::nullopt,
        py::arg("cx") = 0.0, py::arg("cy") = 0.0);

    m.def("write_layer_json", &write_layer_json, py::arg("layer"));
    m.def(
        "parse_layer_json",
        [](const std::string& text, double weld_tol) {
            return parse_layer_json(text, "<string>", weld_tol);
        },
        py::arg("text"), py::arg("weld_tol") = kDefaultWeldTol);
    m.def("import_segments", &import_segments, py::arg("path"),
          py::arg("weld_tol") = kDefaultWeldTol);
    m.def("write_design_json", &write_design_json, py::arg("design"));
    m.def(
        "parse_design_json",
        [](const std::string& text, double weld_tol) {
            return parse_design_json(text, "<string>", weld_tol);
        },
        py::arg("text"), py::arg("weld_tol") = kDefaultWeldTol);
    m.def("load_design", &load_design, py::arg("path"), py::arg("weld_tol") = kDefaultWeldTol);

    py::class_<GraphEdge>(m, "GraphEdge")
        .def_readonly("u", &GraphEdge::u)
        .def_readonly("v", &GraphEdge::v)
        .def_readonly("weight", &GraphEdge::weight);

    py::class_<LatticeGraph>(m, "LatticeGraph")
        .def_property_readonly("node_count", &LatticeGraph::node_count)
        .def_property_readonly("edge_count", &LatticeGraph::edge_count)
        .def_readonly("edges", &LatticeGraph::edges)
        .def_property_readonly("node_positions",
                               [](const LatticeGraph& g) { return points_to_list(g.node_pos); })
        .def("total_weight", &LatticeGraph::total_weight);

    m.def("build_graph", &build_graph, py::arg("layer"));
    m.def("build_design_graph", &build_design_graph, py::arg("design"));
    m.def("components", &components, py::arg("graph"));
    m.def("odd_degree_count", &odd_degree_count, py::arg("graph"));
    m.def("path_count_lower_bound", &path_count_lower_bound, py::arg("graph"));

    py::class_<Path>(m, "Path")
        .def_readonly("nodes", &Path::nodes)
        .def_readonly("edge_ids", &Path::edge_ids)
        .def_readonly("length_mm", &Path::length_mm)
        .def_property_readonly("num_edges", &Path::num_edges)
        .def_property_readonly("num_nodes", &Path::num_nodes);

    py::class_<Solution>(m, "Solution")
        .def_readonly("paths", &Solution::paths)
        .def_readonly("total_length_mm", &Solution::total_length_mm)
        .def_readonly("total_paths", &Solution::total_paths)
        .def_readonly("total_edges", &Solution::total_edges)
        .def_readonly("score", &Solution::score);

    py::class_<PathClassCounts>(m, "PathClassCounts")
        .def_readonly("long_count", &PathClassCounts::long_count)
        .def_readonly("medium_count", &PathClassCounts::medium_count)
        .def_readonly("short_count", &PathClassCounts::short_count);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("best", &RunReport::best)
        .def_readonly("worst", &RunReport::worst)
        .def_readonly("best_iteration", &RunReport::best_iteration)
        .def_readonly("worst_iteration", &RunReport::worst_iteration)
        .def_readonly("per_iteration_scores", &RunReport::per_iteration_scores)
        .def_readonly("lts_percent", &RunReport::lts_percent)
        .def_readonly("oe_best_percent", &RunReport::oe_best_percent)
        .def_readonly("oe_worst_percent", &RunReport::oe_worst_percent)
        .def_readonly("classification", &RunReport::classification);

    m.def(
        "optimize",
        [](const LatticeGraph& graph, int iterations, const std::string& mode, uint64_t seed,
           int threads, int long_path_min_nodes, int classify_long, int classify_medium) {
            OptimizerConfig cfg;
            cfg.iterations = iterations;
            cfg.mode = mode_from_string(mode);
            cfg.master_seed = seed;
            cfg.long_path_min_nodes = long_path_min_nodes;
            cfg.classify_long_min_nodes = classify_long;
            cfg.classify_medium_min_nodes = classify_medium;
            py::gil_scoped_release release;
            return optimize(graph, cfg, threads);
        },
        py::arg("graph"), py::arg("iterations") = 500, py::arg("mode") = "max",
        py::arg("seed") = 0, py::arg("threads") = 1, py::arg("long_path_min_nodes") = 5,
        py::arg("classify_long_min_nodes") = 16, py::arg("classify_medium_min_nodes") = 5);

    m.def(
        "write_run_reports_json",
        [](const std::vector<RunReport>& reports) { return write_run_reports_json(reports); },
        py::arg("reports"));

    py::class_<PrintParams>(m, "PrintParams")
        .def(py::init<>())
        .def_readwrite("layer_thickness", &PrintParams::layer_thickness)
        .def_readwrite("extrusion_multiplier", &PrintParams::extrusion_multiplier)
        .def_readwrite("nozzle_diameter", &PrintParams::nozzle_diameter)
        .def_readwrite("filament_diameter", &PrintParams::filament_diameter)
        .def_readwrite("k_factor", &PrintParams::k_factor)
        .def_readwrite("print_speed", &PrintParams::print_speed)
        .def_readwrite("travel_speed", &PrintParams::travel_speed)
        .def_readwrite("retraction_length", &PrintParams::retraction_length)
        .def_readwrite("retraction_speed", &PrintParams::retraction_speed)
        .def_readwrite("first_layer_z", &PrintParams::first_layer_z)
        .def_readwrite("nozzle_temp_c", &PrintParams::nozzle_temp_c)
        .def_readwrite("bed_temp_c", &PrintParams::bed_temp_c)
        .def_readwrite("short_path_max_segments", &PrintParams::short_path_max_segments)
        .def_readwrite("short_path_speed_factor", &PrintParams::short_path_speed_factor);

    m.def("e_value", &e_value, py::arg("length_mm"), py::arg("params"));
    m.def(
        "emit_marlin",
        [](const Design& d, const std::vector<Solution>& sols, const PrintParams& p) {
            return emit_marlin(d, sols, p);
        },
        py::arg("design"), py::arg("solutions"), py::arg("params"));
    m.def(
        "emit_toolpath_csv",
        [](const Design& d, const std::vector<Solution>& sols, const PrintParams& p) {
            return emit_toolpath_csv(d, sols, p);
        },
        py::arg("design"), py::arg("solutions"), py::arg("params"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("polylines",
                               [](const Trajectory& t) {
                                   py::list out;
                                   for (const auto& poly : t.polylines)
                                       out.append(points_to_list(poly));
                                   return out;
                               })
        .def_readonly("total_extruding_length_mm", &Trajectory::total_extruding_length_mm)
        .def_readonly("total_travel_length_mm", &Trajectory::total_travel_length_mm)
        .def_readonly("edge_count", &Trajectory::edge_count)
        .def_readonly("arc_count", &Trajectory::arc_count)
        .def_readonly("warnings", &Trajectory::warnings);

    py::class_<TrajectoryReport>(m, "TrajectoryReport")
        .def_readonly("total_extruding_length_mm", &TrajectoryReport::total_extruding_length_mm)
        .def_readonly("total_travel_length_mm", &TrajectoryReport::total_travel_length_mm)
        .def_readonly("polyline_count", &TrajectoryReport::polyline_count)
        .def_readonly("edges_real", &TrajectoryReport::edges_real)
        .def_readonly("lts_percent", &TrajectoryReport::lts_percent)
        .def_readonly("nominal_total_length_mm", &TrajectoryReport::nominal_total_length_mm)
        .def_readonly("nominal_edge_count", &TrajectoryReport::nominal_edge_count)
        .def_readonly("raw_score", &TrajectoryReport::raw_score)
        .def_readonly("corrected_score", &TrajectoryReport::corrected_score)
        .def_readonly("length_ratio", &TrajectoryReport::length_ratio)
        .def_readonly("warnings", &TrajectoryReport::warnings);

    m.def(
        "reconstruct",
        [](const std::string& gcode, bool strict) {
            return extract_trajectories(parse_gcode(gcode, strict).moves);
        },
        py::arg("gcode"), py::arg("strict") = false,
        "Parse G-code text and chain its extruding moves into polylines");
    m.def(
        "analyze_gcode",
        [](const std::string& gcode, const LatticeGraph& nominal, int long_min_nodes,
           bool literal_correction, bool strict) {
            const Trajectory t = extract_trajectories(parse_gcode(gcode, strict).moves);
            return compare_to_nominal(t, nominal, long_min_nodes, literal_correction);
        },
        py::arg("gcode"), py::arg("nominal"), py::arg("long_min_nodes") = 5,
        py::arg("literal_correction") = false, py::arg("strict") = false);

    m.def(
        "histogram_stats",
        [](const std::vector<std::pair<double, double>>& bins, const std::string& formula) {
            ThicknessHistogram h;
            for (const auto& [x, f] : bins) h.bins.push_back({x, f});
            double n = 0;
            for (const auto& b : h.bins) n += b.frequency;
            return py::make_tuple(n, hist_mean(h), hist_std(h, formula_from_string(formula)));
        },
        py::arg("bins"), py::arg("formula") = "standard",
        "(n, mean, std) of a [(thickness_um, frequency), ...] histogram");
    m.def(
        "pool_replicates",
        [](const std::vector<std::tuple<double, double, double>>& reps) {
            ReplicateSet set;
            for (const auto& [n, mean, sd] : reps) set.replicates.push_back({"", n, mean, sd});
            return py::make_tuple(combined_mean(set), combined_std(set));
        },
        py::arg("replicates"),
        "(mean, std) pooled from [(n, mean, std), ...] summaries");

    m.def("svg_decomposition", &svg_decomposition, py::arg("graph"), py::arg("solution"),
          py::arg("classify_long_min_nodes") = 16, py::arg("classify_medium_min_nodes") = 5);
    m.def("svg_score_scatter", &svg_score_scatter, py::arg("scores"));
}
