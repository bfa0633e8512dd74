// gippo: lattice toolpath planner and auditor.
//
// Subcommands: gen, optimize, emit, analyze, stats, report. Exit codes:
// 0 success, 2 bad usage/parameter, 3 malformed input file, 4 internal error.

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gippo/errors.hpp"
#include "gippo/gcode.hpp"
#include "gippo/graph.hpp"
#include "gippo/io.hpp"
#include "gippo/lattice.hpp"
#include "gippo/optimizer.hpp"
#include "gippo/stats.hpp"
#include "gippo/svg.hpp"

namespace {

using gippo::Contour;
using gippo::Design;
using gippo::FormatError;
using gippo::Layer;
using gippo::ParamError;
using json = nlohmann::json;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        gippo::write_text_file(path, content);
    }
}

json load_config_json(const std::string& path) {
    const std::string text = gippo::read_text_file(path);
    try {
        json j = json::parse(text);
        if (!j.is_object()) throw FormatError(path + ": config must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

double config_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw FormatError("config: " + what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError("config: " + what + " is not finite");
    return d;
}

int config_int(const json& v, const std::string& what) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw FormatError("config: " + what + " must be an integer");
    return v.get<int>();
}

uint64_t parse_seed_text(const std::string& text, const std::string& what) {
    if (text.empty()) throw ParamError(what + ": empty seed");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0' || text[0] == '-')
        throw ParamError(what + ": \"" + text + "\" is not an unsigned 64-bit integer");
    return v;
}

// Seed precedence: --seed flag, then config file, then GIPPO_SEED, then 0.
uint64_t resolve_seed(const std::optional<std::string>& flag_seed,
                      const std::optional<uint64_t>& config_seed) {
    if (flag_seed) return parse_seed_text(*flag_seed, "--seed");
    if (config_seed) return *config_seed;
    if (const char* env = std::getenv("GIPPO_SEED")) return parse_seed_text(env, "GIPPO_SEED");
    return 0;
}

// ---------------------------------------------------------------- gen

struct GenSettings {
    std::string type;  // honeycomb|snub-square|arrowhead|reentrant|rectilinear|import
    std::string import_path;
    std::optional<double> hex_radius, cell_size, cell_width, cell_height;
    double reentrant_angle_deg = 30.0;
    double angle_deg = 0.0;
    std::optional<double> strand_distance;
    std::optional<Contour> contour;
    int layers = 1;
    double layer_thickness = 0.148;
    double rotation_deg = 0.0;
    std::optional<double> sphere_radius;
    std::optional<double> sphere_center_z;
    double weld_tol = gippo::kDefaultWeldTol;
    std::string output;
};

Contour parse_contour_config(const json& j) {
    if (!j.is_object()) throw FormatError("config: geometry.contour must be an object");
    std::string shape;
    double width = 0, height = 0, radius = 0, cx = 0, cy = 0;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "shape") {
            if (!it->is_string()) throw FormatError("config: contour.shape must be a string");
            shape = it->get<std::string>();
        } else if (key == "width") {
            width = config_number(*it, "contour.width");
        } else if (key == "height") {
            height = config_number(*it, "contour.height");
        } else if (key == "radius") {
            radius = config_number(*it, "contour.radius");
        } else if (key == "cx") {
            cx = config_number(*it, "contour.cx");
        } else if (key == "cy") {
            cy = config_number(*it, "contour.cy");
        } else {
            throw FormatError("config: unknown contour key \"" + key + "\"");
        }
    }
    if (shape == "rect") return Contour::rect(width, height, cx, cy);
    if (shape == "circle") return Contour::circle(radius, cx, cy);
    throw FormatError("config: contour.shape must be \"rect\" or \"circle\"");
}

void apply_geometry_config(GenSettings& s, const json& sec,
                           const std::vector<std::pair<std::string, bool>>& flag_given) {
    const auto given = [&](const std::string& name) {
        for (const auto& [n, g] : flag_given)
            if (n == name) return g;
        return false;
    };
    for (auto it = sec.begin(); it != sec.end(); ++it) {
        const std::string& key = it.key();
        if (given(key)) continue;  // a flag wins over the config file
        if (key == "type") {
            if (!it->is_string()) throw FormatError("config: geometry.type must be a string");
            s.type = it->get<std::string>();
        } else if (key == "import_path") {
            if (!it->is_string())
                throw FormatError("config: geometry.import_path must be a string");
            s.import_path = it->get<std::string>();
        } else if (key == "hex_radius") {
            s.hex_radius = config_number(*it, "geometry.hex_radius");
        } else if (key == "cell_size") {
            s.cell_size = config_number(*it, "geometry.cell_size");
        } else if (key == "cell_width") {
            s.cell_width = config_number(*it, "geometry.cell_width");
        } else if (key == "cell_height") {
            s.cell_height = config_number(*it, "geometry.cell_height");
        } else if (key == "reentrant_angle_deg") {
            s.reentrant_angle_deg = config_number(*it, "geometry.reentrant_angle_deg");
        } else if (key == "angle_deg") {
            s.angle_deg = config_number(*it, "geometry.angle_deg");
        } else if (key == "strand_distance") {
            s.strand_distance = config_number(*it, "geometry.strand_distance");
        } else if (key == "contour") {
            s.contour = parse_contour_config(*it);
        } else if (key == "layers") {
            s.layers = config_int(*it, "geometry.layers");
        } else if (key == "layer_thickness") {
            s.layer_thickness = config_number(*it, "geometry.layer_thickness");
        } else if (key == "rotation_deg_per_layer") {
            s.rotation_deg = config_number(*it, "geometry.rotation_deg_per_layer");
        } else if (key == "sphere_radius") {
            s.sphere_radius = config_number(*it, "geometry.sphere_radius");
        } else if (key == "sphere_center_z") {
            s.sphere_center_z = config_number(*it, "geometry.sphere_center_z");
        } else {
            throw FormatError("config: unknown geometry key \"" + key + "\"");
        }
    }
}

void run_gen(const GenSettings& s) {
    Layer base;
    gippo::Point3 center{};
    if (s.contour) {
        center.x = s.contour->cx;
        center.y = s.contour->cy;
    }

    if (s.type == "import") {
        if (s.import_path.empty()) throw ParamError("--import requires a file path");
        base = gippo::import_segments(s.import_path, s.weld_tol);
        if (s.contour) base = gippo::clip_layer(base, *s.contour, s.weld_tol);
    } else {
        if (!s.contour)
            throw ParamError("a contour is required: pass --bbox WxH or --circle R");
        const Contour& c = *s.contour;
        if (s.type == "honeycomb") {
            if (!s.hex_radius) throw ParamError("--hex-radius is required for honeycomb");
            base = gippo::gen_honeycomb(*s.hex_radius, c, s.weld_tol);
        } else if (s.type == "snub-square") {
            if (!s.cell_size) throw ParamError("--cell-size is required for snub-square");
            base = gippo::gen_snub_square(*s.cell_size, c, s.weld_tol);
        } else if (s.type == "arrowhead") {
            if (!s.cell_width || !s.cell_height)
                throw ParamError("--cell-width and --cell-height are required for arrowhead");
            base = gippo::gen_arrowhead(*s.cell_width, *s.cell_height, c, s.weld_tol);
        } else if (s.type == "reentrant") {
            if (!s.cell_width || !s.cell_height)
                throw ParamError("--cell-width and --cell-height are required for reentrant");
            base = gippo::gen_reentrant_honeycomb(*s.cell_width, *s.cell_height,
                                                  s.reentrant_angle_deg, c, s.weld_tol);
        } else if (s.type == "rectilinear") {
            if (!s.strand_distance)
                throw ParamError("--strand-distance is required for rectilinear");
            base = gippo::gen_rectilinear(*s.strand_distance, s.angle_deg, c, s.weld_tol);
        } else if (s.type.empty()) {
            throw ParamError("pass --geometry NAME or --import FILE");
        } else {
            throw ParamError("unknown --geometry \"" + s.type +
                             "\" (choices: honeycomb, snub-square, arrowhead, reentrant, "
                             "rectilinear)");
        }
    }

    if (s.layers < 1) throw ParamError("--layers must be >= 1");

    const auto project = [&](Layer& layer) {
        if (!s.sphere_radius) return;
        const double r = *s.sphere_radius;
        if (!(r > 0)) throw ParamError("--sphere must be > 0");
        const double cz = s.sphere_center_z ? *s.sphere_center_z : -r;
        layer = gippo::project_layer(
            layer, gippo::HeightField::spherical_cap(r, cz, center.x, center.y));
    };

    if (s.layers == 1 && s.rotation_deg == 0.0) {
        project(base);
        write_output(s.output, gippo::write_layer_json(base));
        return;
    }
    Design design =
        gippo::stack_layers(base, s.layers, s.layer_thickness, s.rotation_deg, center);
    for (Layer& layer : design.layers) project(layer);
    write_output(s.output, gippo::write_design_json(design));
}

// ---------------------------------------------------------------- optimize

struct OptimizeSettings {
    std::string input;
    std::string output;
    std::string trace_path;
    std::optional<std::string> mode;
    std::optional<int> iterations;
    std::optional<std::string> seed_flag;
    std::optional<int> long_min_nodes, classify_long, classify_medium;
    std::optional<int> threads;
    double weld_tol = gippo::kDefaultWeldTol;
};

gippo::Mode parse_mode(std::string m, const std::string& what) {
    for (char& c : m) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (m == "max") return gippo::Mode::Max;
    if (m == "min") return gippo::Mode::Min;
    throw ParamError(what + " must be \"max\" or \"min\", got \"" + m + "\"");
}

void apply_optimizer_config(const json& sec, gippo::OptimizerConfig& cfg,
                            std::optional<uint64_t>& config_seed, int& threads) {
    for (auto it = sec.begin(); it != sec.end(); ++it) {
        const std::string& key = it.key();
        if (key == "iterations") {
            cfg.iterations = config_int(*it, "optimizer.iterations");
        } else if (key == "mode") {
            if (!it->is_string()) throw FormatError("config: optimizer.mode must be a string");
            cfg.mode = parse_mode(it->get<std::string>(), "config optimizer.mode");
        } else if (key == "master_seed") {
            if (!it->is_number_unsigned() && !it->is_number_integer())
                throw FormatError("config: optimizer.master_seed must be an integer");
            config_seed = it->get<uint64_t>();
        } else if (key == "long_path_min_nodes") {
            cfg.long_path_min_nodes = config_int(*it, "optimizer.long_path_min_nodes");
        } else if (key == "classify_long_min_nodes") {
            cfg.classify_long_min_nodes = config_int(*it, "optimizer.classify_long_min_nodes");
        } else if (key == "classify_medium_min_nodes") {
            cfg.classify_medium_min_nodes = config_int(*it, "optimizer.classify_medium_min_nodes");
        } else if (key == "threads") {
            threads = config_int(*it, "optimizer.threads");
        } else {
            throw FormatError("config: unknown optimizer key \"" + key + "\"");
        }
    }
}

void run_optimize(const OptimizeSettings& s, const json& config) {
    gippo::OptimizerConfig cfg;
    std::optional<uint64_t> config_seed;
    int threads = 0;
    if (auto it = config.find("optimizer"); it != config.end())
        apply_optimizer_config(*it, cfg, config_seed, threads);

    if (s.mode) cfg.mode = parse_mode(*s.mode, "--mode");
    if (s.iterations) cfg.iterations = *s.iterations;
    if (s.long_min_nodes) cfg.long_path_min_nodes = *s.long_min_nodes;
    if (s.classify_long) cfg.classify_long_min_nodes = *s.classify_long;
    if (s.classify_medium) cfg.classify_medium_min_nodes = *s.classify_medium;
    if (s.threads) threads = *s.threads;
    cfg.master_seed = resolve_seed(s.seed_flag, config_seed);

    const Design design = gippo::load_design(s.input, s.weld_tol);
    std::vector<gippo::RunReport> reports;
    reports.reserve(design.layers.size());
    for (const Layer& layer : design.layers) {
        const gippo::LatticeGraph graph = gippo::build_graph(layer);
        if (graph.edge_count() == 0)
            throw ParamError(s.input + ": layer " + std::to_string(reports.size()) +
                             " has no segments to optimize");
        reports.push_back(gippo::optimize(graph, cfg, threads));
    }
    write_output(s.output, gippo::write_run_reports_json(reports));
    if (!s.trace_path.empty())
        gippo::write_text_file(s.trace_path, gippo::write_score_trace_csv(reports));
}

// ---------------------------------------------------------------- emit

struct EmitSettings {
    std::string design_path;
    std::string solution_path;
    std::string output;
    std::string format;  // "", "marlin" or "csv"
    std::string which = "best";
    double weld_tol = gippo::kDefaultWeldTol;
};

struct PrintFlagOverrides {
    std::optional<double> layer_thickness, extrusion_multiplier, nozzle_diameter,
        filament_diameter, k_factor, print_speed, travel_speed, retraction_length,
        retraction_speed, first_layer_z, nozzle_temp, bed_temp, short_path_speed_factor;
    std::optional<int> short_path_max_segments;
};

void apply_print_config(const json& sec, gippo::PrintParams& p) {
    for (auto it = sec.begin(); it != sec.end(); ++it) {
        const std::string& key = it.key();
        if (key == "layer_thickness") {
            p.layer_thickness = config_number(*it, "print.layer_thickness");
        } else if (key == "extrusion_multiplier") {
            p.extrusion_multiplier = config_number(*it, "print.extrusion_multiplier");
        } else if (key == "nozzle_diameter") {
            p.nozzle_diameter = config_number(*it, "print.nozzle_diameter");
        } else if (key == "filament_diameter") {
            p.filament_diameter = config_number(*it, "print.filament_diameter");
        } else if (key == "k_factor") {
            p.k_factor = config_number(*it, "print.k_factor");
        } else if (key == "print_speed") {
            p.print_speed = config_number(*it, "print.print_speed");
        } else if (key == "travel_speed") {
            p.travel_speed = config_number(*it, "print.travel_speed");
        } else if (key == "retraction_length") {
            p.retraction_length = config_number(*it, "print.retraction_length");
        } else if (key == "retraction_speed") {
            p.retraction_speed = config_number(*it, "print.retraction_speed");
        } else if (key == "first_layer_z") {
            p.first_layer_z = config_number(*it, "print.first_layer_z");
        } else if (key == "nozzle_temp_c") {
            p.nozzle_temp_c = config_number(*it, "print.nozzle_temp_c");
        } else if (key == "bed_temp_c") {
            p.bed_temp_c = config_number(*it, "print.bed_temp_c");
        } else if (key == "short_path_max_segments") {
            p.short_path_max_segments = config_int(*it, "print.short_path_max_segments");
        } else if (key == "short_path_speed_factor") {
            p.short_path_speed_factor = config_number(*it, "print.short_path_speed_factor");
        } else {
            throw FormatError("config: unknown print key \"" + key + "\"");
        }
    }
}

gippo::PrintParams resolve_print_params(const json& config, const PrintFlagOverrides& f) {
    gippo::PrintParams p;
    if (auto it = config.find("print"); it != config.end()) apply_print_config(*it, p);
    if (f.layer_thickness) p.layer_thickness = *f.layer_thickness;
    if (f.extrusion_multiplier) p.extrusion_multiplier = *f.extrusion_multiplier;
    if (f.nozzle_diameter) p.nozzle_diameter = *f.nozzle_diameter;
    if (f.filament_diameter) p.filament_diameter = *f.filament_diameter;
    if (f.k_factor) p.k_factor = *f.k_factor;
    if (f.print_speed) p.print_speed = *f.print_speed;
    if (f.travel_speed) p.travel_speed = *f.travel_speed;
    if (f.retraction_length) p.retraction_length = *f.retraction_length;
    if (f.retraction_speed) p.retraction_speed = *f.retraction_speed;
    if (f.first_layer_z) p.first_layer_z = *f.first_layer_z;
    if (f.nozzle_temp) p.nozzle_temp_c = *f.nozzle_temp;
    if (f.bed_temp) p.bed_temp_c = *f.bed_temp;
    if (f.short_path_max_segments) p.short_path_max_segments = *f.short_path_max_segments;
    if (f.short_path_speed_factor) p.short_path_speed_factor = *f.short_path_speed_factor;
    return p;
}

std::vector<gippo::Solution> bind_solutions(const Design& design, const gippo::StoredRun& run,
                                            const std::string& which,
                                            const std::string& source) {
    if (run.layers.size() != design.layers.size())
        throw FormatError(source + ": solution has " + std::to_string(run.layers.size()) +
                          " layer(s) but the design has " +
                          std::to_string(design.layers.size()));
    std::vector<gippo::Solution> out;
    out.reserve(run.layers.size());
    for (size_t k = 0; k < run.layers.size(); ++k) {
        const gippo::LatticeGraph graph = gippo::build_graph(design.layers[k]);
        const auto& node_paths =
            which == "worst" ? run.layers[k].worst_paths : run.layers[k].best_paths;
        out.push_back(gippo::solution_from_node_paths(graph, node_paths, source));
    }
    return out;
}

void run_emit(const EmitSettings& s, const json& config, const PrintFlagOverrides& flags) {
    const Design design = gippo::load_design(s.design_path, s.weld_tol);
    const gippo::StoredRun run =
        gippo::parse_run_reports_json(gippo::read_text_file(s.solution_path), s.solution_path);
    const std::vector<gippo::Solution> sols =
        bind_solutions(design, run, s.which, s.solution_path);
    const gippo::PrintParams params = resolve_print_params(config, flags);

    std::string format = s.format;
    if (format.empty()) {
        format = s.output.size() >= 4 && s.output.substr(s.output.size() - 4) == ".csv"
                     ? "csv"
                     : "marlin";
    }
    if (format == "marlin") {
        write_output(s.output, gippo::emit_marlin(design, sols, params));
    } else if (format == "csv") {
        write_output(s.output, gippo::emit_toolpath_csv(design, sols, params));
    } else {
        throw ParamError("--format must be \"marlin\" or \"csv\", got \"" + format + "\"");
    }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeSettings {
    std::string gcode_path;
    std::string nominal_path;
    std::string output;
    std::string overlay_path;
    std::optional<int> long_min_nodes;
    std::optional<bool> literal_correction;
    bool strict = false;
    double weld_tol = gippo::kDefaultWeldTol;
};

void run_analyze(const AnalyzeSettings& s, const json& config) {
    int long_min_nodes = 5;
    bool literal = false;
    if (auto it = config.find("analyze"); it != config.end()) {
        for (auto f = it->begin(); f != it->end(); ++f) {
            if (f.key() == "long_path_min_nodes") {
                long_min_nodes = config_int(*f, "analyze.long_path_min_nodes");
            } else if (f.key() == "literal_correction") {
                if (!f->is_boolean())
                    throw FormatError("config: analyze.literal_correction must be a boolean");
                literal = f->get<bool>();
            } else {
                throw FormatError("config: unknown analyze key \"" + f.key() + "\"");
            }
        }
    }
    if (s.long_min_nodes) long_min_nodes = *s.long_min_nodes;
    if (s.literal_correction) literal = *s.literal_correction;

    const std::string text = gippo::read_text_file(s.gcode_path);
    const gippo::ParseResult parsed = gippo::parse_gcode(text, s.strict);
    const gippo::Trajectory traj = gippo::extract_trajectories(parsed.moves);

    const Design nominal = gippo::load_design(s.nominal_path, s.weld_tol);
    const gippo::LatticeGraph graph = gippo::build_design_graph(nominal);

    gippo::TrajectoryReport report =
        gippo::compare_to_nominal(traj, graph, long_min_nodes, literal);
    for (const std::string& w : parsed.warnings) report.warnings.push_back(w);

    write_output(s.output, gippo::write_trajectory_report_json(report));
    if (!s.overlay_path.empty())
        gippo::write_text_file(s.overlay_path, gippo::svg_trajectory_overlay(traj, graph));
}

// ---------------------------------------------------------------- stats

struct StatsSettings {
    std::vector<std::string> csv_paths;
    std::string output;
    std::string formula = "standard";
};

void run_stats(const StatsSettings& s) {
    gippo::StdFormula formula;
    if (s.formula == "standard") {
        formula = gippo::StdFormula::Standard;
    } else if (s.formula == "total-weighted") {
        formula = gippo::StdFormula::TotalWeighted;
    } else {
        throw ParamError("--formula must be \"standard\" or \"total-weighted\", got \"" +
                         s.formula + "\"");
    }
    gippo::StatsReport report;
    report.formula = formula;
    for (const std::string& path : s.csv_paths) {
        const gippo::ThicknessHistogram h = gippo::load_histogram_csv(path);
        gippo::Replicate r;
        r.name = path;
        for (const gippo::HistogramBin& b : h.bins) r.n += b.frequency;
        r.mean = gippo::hist_mean(h);
        r.stddev = gippo::hist_std(h, formula);
        report.set.replicates.push_back(std::move(r));
    }
    write_output(s.output, gippo::write_stats_json(report));
}

// ---------------------------------------------------------------- report

struct ReportSettings {
    std::string design_path;
    std::string solution_path;
    std::string which = "best";
    int layer = 0;
    std::string decomposition_path;
    std::string scatter_path;
    std::string graph_path;
    double weld_tol = gippo::kDefaultWeldTol;
};

void run_report(const ReportSettings& s) {
    if (s.decomposition_path.empty() && s.scatter_path.empty() && s.graph_path.empty())
        throw ParamError("nothing to do: pass --decomposition, --scatter and/or --graph");
    const Design design = gippo::load_design(s.design_path, s.weld_tol);
    const gippo::StoredRun run =
        gippo::parse_run_reports_json(gippo::read_text_file(s.solution_path), s.solution_path);
    if (run.layers.size() != design.layers.size())
        throw FormatError(s.solution_path + ": solution has " +
                          std::to_string(run.layers.size()) + " layer(s) but the design has " +
                          std::to_string(design.layers.size()));
    if (s.layer < 0 || s.layer >= static_cast<int>(design.layers.size()))
        throw ParamError("--layer " + std::to_string(s.layer) + " is out of range (design has " +
                         std::to_string(design.layers.size()) + " layer(s))");

    const gippo::LatticeGraph graph = gippo::build_graph(design.layers[s.layer]);
    if (!s.decomposition_path.empty()) {
        const auto& node_paths = s.which == "worst" ? run.layers[s.layer].worst_paths
                                                    : run.layers[s.layer].best_paths;
        const gippo::Solution sol =
            gippo::solution_from_node_paths(graph, node_paths, s.solution_path);
        gippo::write_text_file(
            s.decomposition_path,
            gippo::svg_decomposition(graph, sol, run.classify_long_min_nodes,
                                     run.classify_medium_min_nodes));
    }
    if (!s.scatter_path.empty()) {
        const std::vector<double>& scores = run.layers[s.layer].per_iteration_scores;
        if (scores.empty())
            throw FormatError(s.solution_path + ": no per_iteration_scores for layer " +
                              std::to_string(s.layer));
        gippo::write_text_file(s.scatter_path, gippo::svg_score_scatter(scores));
    }
    if (!s.graph_path.empty())
        gippo::write_text_file(s.graph_path, gippo::write_graph_json(graph));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gippo: greedy path decomposition and toolpath emission for printed lattices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gippo 0.1.0");

    std::string config_path;

    // gen ---------------------------------------------------------------
    GenSettings gen;
    std::string gen_bbox, gen_circle, gen_center;
    auto* cgen = app.add_subcommand("gen", "Generate or import lattice geometry");
    auto* o_type = cgen->add_option("--geometry", gen.type,
                                    "honeycomb | snub-square | arrowhead | reentrant | "
                                    "rectilinear");
    auto* o_import = cgen->add_option("--import", gen.import_path,
                                      "Import a segment-list JSON instead of generating");
    o_type->excludes(o_import);
    auto* o_hex = cgen->add_option("--hex-radius", gen.hex_radius, "Hexagon circumradius (mm)");
    auto* o_cell = cgen->add_option("--cell-size", gen.cell_size, "Snub-square edge length (mm)");
    auto* o_cw = cgen->add_option("--cell-width", gen.cell_width, "Auxetic cell width (mm)");
    auto* o_ch = cgen->add_option("--cell-height", gen.cell_height, "Auxetic cell height (mm)");
    auto* o_ra = cgen->add_option("--reentrant-angle", gen.reentrant_angle_deg,
                                  "Wall angle below horizontal, degrees (default 30)");
    auto* o_ang = cgen->add_option("--angle", gen.angle_deg,
                                   "Rectilinear line angle, degrees (default 0)");
    auto* o_sd = cgen->add_option("--strand-distance", gen.strand_distance,
                                  "Rectilinear line spacing (mm)");
    auto* o_bbox = cgen->add_option("--bbox", gen_bbox, "Rectangular contour, WxH (mm)");
    auto* o_circ = cgen->add_option("--circle", gen_circle, "Circular contour radius (mm)");
    o_bbox->excludes(o_circ);
    cgen->add_option("--center", gen_center, "Contour center X,Y (default 0,0)");
    auto* o_layers = cgen->add_option("--layers", gen.layers, "Number of stacked layers");
    auto* o_lt = cgen->add_option("--layer-thickness", gen.layer_thickness,
                                  "Z step between layers (mm, default 0.148)");
    auto* o_rot = cgen->add_option("--rotation", gen.rotation_deg,
                                   "Rotation per layer about the contour center (degrees)");
    auto* o_sph = cgen->add_option("--sphere", gen.sphere_radius,
                                   "Project onto a spherical cap of this radius (mm)");
    auto* o_sphz = cgen->add_option("--sphere-z", gen.sphere_center_z,
                                    "Sphere center z (default -radius: cap apex at z=0)");
    cgen->add_option("--weld-tol", gen.weld_tol, "Vertex merge tolerance (mm, default 1e-6)");
    cgen->add_option("-o,--output", gen.output, "Output file (default stdout)");
    cgen->add_option("--config", config_path, "JSON config file (flags override it)");

    cgen->callback([&] {
        json config;
        if (!config_path.empty()) config = load_config_json(config_path);
        if (auto it = config.find("weld_tol");
            it != config.end() && cgen->count("--weld-tol") == 0)
            gen.weld_tol = config_number(*it, "weld_tol");
        if (auto it = config.find("geometry"); it != config.end()) {
            if (!it->is_object()) throw FormatError("config: geometry must be an object");
            apply_geometry_config(
                gen, *it,
                {{"type", o_type->count() > 0},
                 {"import_path", o_import->count() > 0},
                 {"hex_radius", o_hex->count() > 0},
                 {"cell_size", o_cell->count() > 0},
                 {"cell_width", o_cw->count() > 0},
                 {"cell_height", o_ch->count() > 0},
                 {"reentrant_angle_deg", o_ra->count() > 0},
                 {"angle_deg", o_ang->count() > 0},
                 {"strand_distance", o_sd->count() > 0},
                 {"contour", o_bbox->count() > 0 || o_circ->count() > 0},
                 {"layers", o_layers->count() > 0},
                 {"layer_thickness", o_lt->count() > 0},
                 {"rotation_deg_per_layer", o_rot->count() > 0},
                 {"sphere_radius", o_sph->count() > 0},
                 {"sphere_center_z", o_sphz->count() > 0}});
        }
        if (o_import->count() > 0) gen.type = "import";
        if (!gen.import_path.empty() && o_type->count() == 0) gen.type = "import";

        if (!gen_bbox.empty() || !gen_circle.empty()) {
            double cx = 0, cy = 0;
            if (!gen_center.empty()) {
                double x = 0, y = 0;
                char extra = 0;
                if (std::sscanf(gen_center.c_str(), "%lf,%lf%c", &x, &y, &extra) != 2)
                    throw ParamError("--center must be X,Y, got \"" + gen_center + "\"");
                cx = x;
                cy = y;
            }
            if (!gen_bbox.empty()) {
                double w = 0, h = 0;
                char extra = 0;
                if (std::sscanf(gen_bbox.c_str(), "%lfx%lf%c", &w, &h, &extra) != 2)
                    throw ParamError("--bbox must be WxH, got \"" + gen_bbox + "\"");
                gen.contour = Contour::rect(w, h, cx, cy);
            } else {
                double r = 0;
                char extra = 0;
                if (std::sscanf(gen_circle.c_str(), "%lf%c", &r, &extra) != 1)
                    throw ParamError("--circle must be a radius, got \"" + gen_circle + "\"");
                gen.contour = Contour::circle(r, cx, cy);
            }
        }
        run_gen(gen);
    });

    // optimize ----------------------------------------------------------
    OptimizeSettings opt;
    auto* copt = app.add_subcommand("optimize",
                                    "Decompose a lattice into continuous printing paths");
    copt->add_option("input", opt.input, "Layer or design JSON")->required();
    copt->add_option("--mode", opt.mode, "max (longest edge first) or min")
        ->check(CLI::IsMember({"max", "min"}, CLI::ignore_case));
    copt->add_option("--iterations", opt.iterations, "Random restarts (default 500)");
    copt->add_option("--seed", opt.seed_flag, "Master seed (default: $GIPPO_SEED, else 0)");
    copt->add_option("--threads", opt.threads, "Worker threads (default: all cores)");
    copt->add_option("--long-min-nodes", opt.long_min_nodes,
                     "Node count from which a path counts as long (default 5)");
    copt->add_option("--classify-long", opt.classify_long,
                     "Node count for the long class (default 16)");
    copt->add_option("--classify-medium", opt.classify_medium,
                     "Node count for the medium class (default 5)");
    copt->add_option("--weld-tol", opt.weld_tol, "Vertex merge tolerance (mm)");
    copt->add_option("-o,--output", opt.output, "Run report JSON (default stdout)");
    copt->add_option("--trace", opt.trace_path, "Write per-iteration score CSV here");
    copt->add_option("--config", config_path, "JSON config file (flags override it)");
    copt->callback([&] {
        json config;
        if (!config_path.empty()) config = load_config_json(config_path);
        if (auto it = config.find("weld_tol");
            it != config.end() && copt->count("--weld-tol") == 0)
            opt.weld_tol = config_number(*it, "weld_tol");
        run_optimize(opt, config);
    });

    // emit ---------------------------------------------------------------
    EmitSettings emit;
    PrintFlagOverrides pf;
    auto* cemit = app.add_subcommand("emit", "Write G-code or CSV for an optimized design");
    cemit->add_option("design", emit.design_path, "Layer or design JSON")->required();
    cemit->add_option("solution", emit.solution_path, "Run report JSON from optimize")
        ->required();
    cemit->add_option("-o,--output", emit.output,
                      "Output file; .csv picks the CSV backend (default stdout, marlin)");
    cemit->add_option("--format", emit.format, "marlin or csv (overrides the extension rule)")
        ->check(CLI::IsMember({"marlin", "csv"}));
    cemit->add_option("--which", emit.which, "best (default) or worst solution")
        ->check(CLI::IsMember({"best", "worst"}));
    cemit->add_option("--weld-tol", emit.weld_tol, "Vertex merge tolerance (mm)");
    cemit->add_option("--layer-thickness", pf.layer_thickness, "LT in the flow formula (mm)");
    cemit->add_option("--extrusion-multiplier", pf.extrusion_multiplier, "EM flow scale");
    cemit->add_option("--nozzle-diameter", pf.nozzle_diameter, "Nozzle bore (mm)");
    cemit->add_option("--filament-diameter", pf.filament_diameter, "Filament stock (mm)");
    cemit->add_option("--k-factor", pf.k_factor, "Flow correction factor");
    cemit->add_option("--print-speed", pf.print_speed, "Extrusion feed (mm/min)");
    cemit->add_option("--travel-speed", pf.travel_speed, "Travel feed (mm/min)");
    cemit->add_option("--retraction-length", pf.retraction_length,
                      "Filament pulled back before travels (mm, 0 disables)");
    cemit->add_option("--retraction-speed", pf.retraction_speed, "Retract feed (mm/min)");
    cemit->add_option("--first-layer-z", pf.first_layer_z, "Z of the first layer (mm)");
    cemit->add_option("--nozzle-temp", pf.nozzle_temp, "M104 header temperature (C)");
    cemit->add_option("--bed-temp", pf.bed_temp, "M140 header temperature (C)");
    cemit->add_option("--short-path-max-segments", pf.short_path_max_segments,
                      "Paths below this segment count slow down (default 4)");
    cemit->add_option("--short-path-speed-factor", pf.short_path_speed_factor,
                      "Speed factor for short paths (default 0.6)");
    cemit->add_option("--config", config_path, "JSON config file (flags override it)");
    cemit->callback([&] {
        json config;
        if (!config_path.empty()) config = load_config_json(config_path);
        if (auto it = config.find("weld_tol");
            it != config.end() && cemit->count("--weld-tol") == 0)
            emit.weld_tol = config_number(*it, "weld_tol");
        run_emit(emit, config, pf);
    });

    // analyze -------------------------------------------------------------
    AnalyzeSettings ana;
    auto* cana = app.add_subcommand("analyze",
                                    "Reconstruct and score a G-code file against a design");
    cana->add_option("gcode", ana.gcode_path, "G-code file to audit")->required();
    cana->add_option("--nominal", ana.nominal_path, "Nominal layer or design JSON")->required();
    cana->add_option("-o,--output", ana.output, "Report JSON (default stdout)");
    cana->add_option("--overlay", ana.overlay_path, "Write an SVG overlay here");
    cana->add_option("--long-min-nodes", ana.long_min_nodes,
                     "Node count from which a polyline counts as long (default 5)");
    cana->add_flag("--literal-correction", [&](int64_t) { ana.literal_correction = true; },
                   "Multiply by real/nominal edges instead of nominal/real");
    cana->add_flag("--strict", ana.strict, "Fail on undecodable G-code lines");
    cana->add_option("--weld-tol", ana.weld_tol, "Vertex merge tolerance (mm)");
    cana->add_option("--config", config_path, "JSON config file (flags override it)");
    cana->callback([&] {
        json config;
        if (!config_path.empty()) config = load_config_json(config_path);
        if (auto it = config.find("weld_tol");
            it != config.end() && cana->count("--weld-tol") == 0)
            ana.weld_tol = config_number(*it, "weld_tol");
        run_analyze(ana, config);
    });

    // stats ----------------------------------------------------------------
    StatsSettings st;
    auto* cstats = app.add_subcommand("stats", "Pool strand-thickness histograms");
    cstats->add_option("csv", st.csv_paths, "Histogram CSV files (thickness_um,frequency)")
        ->required();
    cstats->add_option("-o,--output", st.output, "Stats JSON (default stdout)");
    cstats->add_option("--formula", st.formula,
                       "standard (default) or total-weighted spread denominator")
        ->check(CLI::IsMember({"standard", "total-weighted"}));
    cstats->callback([&] { run_stats(st); });

    // report ---------------------------------------------------------------
    ReportSettings rep;
    auto* crep = app.add_subcommand("report", "Render SVG views of an optimized run");
    crep->add_option("design", rep.design_path, "Layer or design JSON")->required();
    crep->add_option("solution", rep.solution_path, "Run report JSON from optimize")->required();
    crep->add_option("--which", rep.which, "best (default) or worst decomposition")
        ->check(CLI::IsMember({"best", "worst"}));
    crep->add_option("--layer", rep.layer, "Layer index to render (default 0)");
    crep->add_option("--decomposition", rep.decomposition_path,
                     "Write the classed path drawing here");
    crep->add_option("--scatter", rep.scatter_path, "Write the score-per-iteration plot here");
    crep->add_option("--graph", rep.graph_path, "Write the lattice graph JSON here");
    crep->add_option("--weld-tol", rep.weld_tol, "Vertex merge tolerance (mm)");
    crep->callback([&] { run_report(rep); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
