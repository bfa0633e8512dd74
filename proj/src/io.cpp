#include "gippo/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "gippo/errors.hpp"
#include "gippo/fmtnum.hpp"

namespace gippo {
namespace {

using nlohmann::json;

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

void append_layer_json(std::string& out, const Layer& layer, int indent) {
    const std::string pad(indent, ' ');
    const std::string pad2(indent + 2, ' ');
    const std::string pad4(indent + 4, ' ');
    out += "{\n";
    if (!layer.label.empty()) {
        out += pad2 + "\"label\": \"" + json_escape(layer.label) + "\",\n";
    }
    out += pad2 + "\"points\": [";
    if (layer.points.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < layer.points.size(); ++i) {
            const Point3& p = layer.points[i];
            out += pad4 + "[" + fmt_g9(p.x) + ", " + fmt_g9(p.y) + ", " + fmt_g9(p.z) + "]";
            out += i + 1 < layer.points.size() ? ",\n" : "\n";
        }
        out += pad2 + "],\n";
    }
    out += pad2 + "\"segments\": [";
    if (layer.segments.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < layer.segments.size(); ++i) {
            out += pad4 + "[" + std::to_string(layer.segments[i].a) + ", " +
                   std::to_string(layer.segments[i].b) + "]";
            out += i + 1 < layer.segments.size() ? ",\n" : "\n";
        }
        out += pad2 + "],\n";
    }
    out += pad2 + "\"units\": \"mm\",\n";
    out += pad2 + "\"z\": " + fmt_g9(layer.z) + "\n";
    out += pad + "}";
}

json parse_json(std::string_view text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(source + ": " + e.what());
    }
}

const json& require_field(const json& j, const char* key, const std::string& source) {
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(source + ": missing field \"" + std::string(key) + "\"");
    return *it;
}

double require_number(const json& v, const std::string& what, const std::string& source) {
    if (!v.is_number()) throw FormatError(source + ": " + what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError(source + ": " + what + " is not finite");
    return d;
}

int require_int(const json& v, const std::string& what, const std::string& source) {
    if (v.is_number_unsigned()) {
        const auto u = v.get<unsigned long long>();
        if (u > static_cast<unsigned long long>(std::numeric_limits<int>::max()))
            throw FormatError(source + ": " + what + " is out of range");
        return static_cast<int>(u);
    }
    if (v.is_number_integer()) {
        const auto s = v.get<long long>();
        if (s < std::numeric_limits<int>::min() || s > std::numeric_limits<int>::max())
            throw FormatError(source + ": " + what + " is out of range");
        return static_cast<int>(s);
    }
    throw FormatError(source + ": " + what + " must be an integer");
}

Layer parse_layer_value(const json& j, const std::string& source, double weld_tol) {
    if (!j.is_object()) throw FormatError(source + ": expected a JSON object");
    if (auto it = j.find("units"); it != j.end()) {
        if (!it->is_string() || it->get<std::string>() != "mm")
            throw FormatError(source + ": units must be \"mm\"");
    }
    std::string label;
    if (auto it = j.find("label"); it != j.end()) {
        if (!it->is_string()) throw FormatError(source + ": label must be a string");
        label = it->get<std::string>();
    }
    double z = 0.0;
    if (auto it = j.find("z"); it != j.end()) z = require_number(*it, "z", source);

    const json& jp = require_field(j, "points", source);
    if (!jp.is_array()) throw FormatError(source + ": points must be an array");
    std::vector<Point3> points;
    points.reserve(jp.size());
    for (size_t i = 0; i < jp.size(); ++i) {
        const json& row = jp[i];
        const std::string at = "points[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 3)
            throw FormatError(source + ": " + at + " must be [x, y, z]");
        points.push_back(Point3{require_number(row[0], at + "[0]", source),
                                require_number(row[1], at + "[1]", source),
                                require_number(row[2], at + "[2]", source)});
    }

    const json& js = require_field(j, "segments", source);
    if (!js.is_array()) throw FormatError(source + ": segments must be an array");
    std::vector<Segment> segments;
    segments.reserve(js.size());
    for (size_t i = 0; i < js.size(); ++i) {
        const json& row = js[i];
        const std::string at = "segments[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 2)
            throw FormatError(source + ": " + at + " must be [a, b]");
        segments.push_back(Segment{require_int(row[0], at + "[0]", source),
                                   require_int(row[1], at + "[1]", source)});
    }

    WeldOptions opts;
    opts.tolerance = weld_tol;
    opts.error_on_degenerate = true;  // imported self-loops are data errors
    Layer layer;
    try {
        layer = weld_layer(points, segments, z, label, opts);
    } catch (const Error& e) {
        throw FormatError(source + ": " + e.what());
    }
    validate_layer(layer, weld_tol);
    return layer;
}

Design parse_design_value(const json& j, const std::string& source, double weld_tol) {
    if (!j.is_object()) throw FormatError(source + ": expected a JSON object");
    Design d;
    d.layer_thickness = require_number(require_field(j, "layer_thickness", source),
                                       "layer_thickness", source);
    if (d.layer_thickness < 0)
        throw FormatError(source + ": layer_thickness must be >= 0");
    d.rotation_deg_per_layer = require_number(require_field(j, "rotation_deg_per_layer", source),
                                              "rotation_deg_per_layer", source);
    const json& jl = require_field(j, "layers", source);
    if (!jl.is_array()) throw FormatError(source + ": layers must be an array");
    d.layers.reserve(jl.size());
    for (size_t i = 0; i < jl.size(); ++i) {
        d.layers.push_back(
            parse_layer_value(jl[i], source + ": layers[" + std::to_string(i) + "]", weld_tol));
    }
    return d;
}

void append_solution_json(std::string& out, const Solution& s, int indent) {
    const std::string pad(indent, ' ');
    const std::string pad2(indent + 2, ' ');
    const std::string pad4(indent + 4, ' ');
    out += "{\n";
    out += pad2 + "\"paths\": [";
    if (s.paths.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < s.paths.size(); ++i) {
            const Path& p = s.paths[i];
            out += pad4 + "{\"edge_count\": " + std::to_string(p.num_edges()) +
                   ", \"length_mm\": " + fmt_g9(p.length_mm) + ", \"nodes\": [";
            for (size_t k = 0; k < p.nodes.size(); ++k) {
                if (k) out += ", ";
                out += std::to_string(p.nodes[k]);
            }
            out += "]}";
            out += i + 1 < s.paths.size() ? ",\n" : "\n";
        }
        out += pad2 + "],\n";
    }
    out += pad2 + "\"score\": " + fmt_g9(s.score) + ",\n";
    out += pad2 + "\"total_edges\": " + std::to_string(s.total_edges) + ",\n";
    out += pad2 + "\"total_length_mm\": " + fmt_g9(s.total_length_mm) + ",\n";
    out += pad2 + "\"total_paths\": " + std::to_string(s.total_paths) + "\n";
    out += pad + "}";
}

std::vector<std::vector<NodeId>> parse_node_paths(const json& jsol, const std::string& source,
                                                  const std::string& what) {
    if (!jsol.is_object()) throw FormatError(source + ": " + what + " must be an object");
    const json& jpaths = require_field(jsol, "paths", source);
    if (!jpaths.is_array()) throw FormatError(source + ": " + what + ".paths must be an array");
    std::vector<std::vector<NodeId>> out;
    out.reserve(jpaths.size());
    for (size_t i = 0; i < jpaths.size(); ++i) {
        const json& jp = jpaths[i];
        const std::string at = what + ".paths[" + std::to_string(i) + "]";
        if (!jp.is_object()) throw FormatError(source + ": " + at + " must be an object");
        const json& jnodes = require_field(jp, "nodes", source);
        if (!jnodes.is_array() || jnodes.size() < 2)
            throw FormatError(source + ": " + at + ".nodes needs at least 2 node ids");
        std::vector<NodeId> nodes;
        nodes.reserve(jnodes.size());
        for (size_t k = 0; k < jnodes.size(); ++k) {
            nodes.push_back(
                require_int(jnodes[k], at + ".nodes[" + std::to_string(k) + "]", source));
        }
        out.push_back(std::move(nodes));
    }
    return out;
}

}  // namespace

std::string write_layer_json(const Layer& layer) {
    std::string out;
    append_layer_json(out, layer, 0);
    out += "\n";
    return out;
}

Layer parse_layer_json(std::string_view text, const std::string& source_name, double weld_tol) {
    return parse_layer_value(parse_json(text, source_name), source_name, weld_tol);
}

Layer import_segments(const std::string& path, double weld_tol) {
    return parse_layer_json(read_text_file(path), path, weld_tol);
}

std::string write_design_json(const Design& design) {
    std::string out = "{\n";
    out += "  \"layer_thickness\": " + fmt_g9(design.layer_thickness) + ",\n";
    out += "  \"layers\": [";
    if (design.layers.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < design.layers.size(); ++i) {
            out += "    ";
            append_layer_json(out, design.layers[i], 4);
            out += i + 1 < design.layers.size() ? ",\n" : "\n";
        }
        out += "  ],\n";
    }
    out += "  \"rotation_deg_per_layer\": " + fmt_g9(design.rotation_deg_per_layer) + "\n";
    out += "}\n";
    return out;
}

Design parse_design_json(std::string_view text, const std::string& source_name, double weld_tol) {
    return parse_design_value(parse_json(text, source_name), source_name, weld_tol);
}

bool looks_like_design_json(std::string_view text) {
    const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    return j.is_object() && j.contains("layers");
}

Design load_design(const std::string& path, double weld_tol) {
    const std::string text = read_text_file(path);
    const json j = parse_json(text, path);
    if (!j.is_object()) throw FormatError(path + ": expected a JSON object");
    if (j.contains("layers")) return parse_design_value(j, path, weld_tol);
    Design d;
    d.layers.push_back(parse_layer_value(j, path, weld_tol));
    return d;
}

std::string write_run_reports_json(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw ParamError("no run reports to serialize");
    const OptimizerConfig& c = reports.front().config;
    std::string out = "{\n";
    out += "  \"classify_long_min_nodes\": " + std::to_string(c.classify_long_min_nodes) + ",\n";
    out += "  \"classify_medium_min_nodes\": " + std::to_string(c.classify_medium_min_nodes) +
           ",\n";
    out += "  \"iterations\": " + std::to_string(c.iterations) + ",\n";
    out += "  \"layers\": [\n";
    for (size_t k = 0; k < reports.size(); ++k) {
        const RunReport& r = reports[k];
        out += "    {\n";
        out += "      \"best\": ";
        append_solution_json(out, r.best, 6);
        out += ",\n";
        out += "      \"best_iteration\": " + std::to_string(r.best_iteration) + ",\n";
        out += "      \"classification\": {\"long\": " + std::to_string(r.classification.long_count) +
               ", \"medium\": " + std::to_string(r.classification.medium_count) +
               ", \"short\": " + std::to_string(r.classification.short_count) + "},\n";
        out += "      \"layer_index\": " + std::to_string(k) + ",\n";
        out += "      \"lts_percent\": " + fmt_g9(r.lts_percent) + ",\n";
        out += "      \"oe_best_percent\": " + fmt_g9(r.oe_best_percent) + ",\n";
        out += "      \"oe_worst_percent\": " + fmt_g9(r.oe_worst_percent) + ",\n";
        out += "      \"per_iteration_scores\": [";
        for (size_t i = 0; i < r.per_iteration_scores.size(); ++i) {
            if (i) out += ", ";
            out += fmt_g9(r.per_iteration_scores[i]);
        }
        out += "],\n";
        out += "      \"worst\": ";
        append_solution_json(out, r.worst, 6);
        out += ",\n";
        out += "      \"worst_iteration\": " + std::to_string(r.worst_iteration) + "\n";
        out += k + 1 < reports.size() ? "    },\n" : "    }\n";
    }
    out += "  ],\n";
    out += "  \"long_path_min_nodes\": " + std::to_string(c.long_path_min_nodes) + ",\n";
    out += "  \"master_seed\": " + std::to_string(c.master_seed) + ",\n";
    out += std::string("  \"mode\": \"") + (c.mode == Mode::Max ? "max" : "min") + "\"\n";
    out += "}\n";
    return out;
}

StoredRun parse_run_reports_json(std::string_view text, const std::string& source_name) {
    const json j = parse_json(text, source_name);
    if (!j.is_object()) throw FormatError(source_name + ": expected a JSON object");
    StoredRun run;
    if (auto it = j.find("long_path_min_nodes"); it != j.end())
        run.long_path_min_nodes = require_int(*it, "long_path_min_nodes", source_name);
    if (auto it = j.find("classify_long_min_nodes"); it != j.end())
        run.classify_long_min_nodes = require_int(*it, "classify_long_min_nodes", source_name);
    if (auto it = j.find("classify_medium_min_nodes"); it != j.end())
        run.classify_medium_min_nodes = require_int(*it, "classify_medium_min_nodes", source_name);
    const json& jl = require_field(j, "layers", source_name);
    if (!jl.is_array()) throw FormatError(source_name + ": layers must be an array");
    run.layers.reserve(jl.size());
    for (size_t k = 0; k < jl.size(); ++k) {
        const json& entry = jl[k];
        const std::string at = "layers[" + std::to_string(k) + "]";
        if (!entry.is_object()) throw FormatError(source_name + ": " + at + " must be an object");
        StoredSolution s;
        s.best_paths =
            parse_node_paths(require_field(entry, "best", source_name), source_name, at + ".best");
        s.worst_paths = parse_node_paths(require_field(entry, "worst", source_name), source_name,
                                         at + ".worst");
        if (auto it = entry.find("per_iteration_scores"); it != entry.end()) {
            if (!it->is_array())
                throw FormatError(source_name + ": " + at +
                                  ".per_iteration_scores must be an array");
            s.per_iteration_scores.reserve(it->size());
            for (size_t i = 0; i < it->size(); ++i) {
                s.per_iteration_scores.push_back(require_number(
                    (*it)[i], at + ".per_iteration_scores[" + std::to_string(i) + "]",
                    source_name));
            }
        }
        run.layers.push_back(std::move(s));
    }
    return run;
}

Solution solution_from_node_paths(const LatticeGraph& graph,
                                  const std::vector<std::vector<NodeId>>& node_paths,
                                  const std::string& source_name) {
    Solution sol;
    for (const std::vector<NodeId>& nodes : node_paths) {
        if (nodes.size() < 2)
            throw FormatError(source_name + ": a stored path needs at least 2 nodes");
        Path p;
        p.nodes = nodes;
        for (size_t i = 0; i + 1 < nodes.size(); ++i) {
            const NodeId a = nodes[i], b = nodes[i + 1];
            if (a < 0 || a >= graph.node_count() || b < 0 || b >= graph.node_count())
                throw FormatError(source_name + ": stored node id " +
                                  std::to_string(a < 0 || a >= graph.node_count() ? a : b) +
                                  " is outside the lattice graph");
            int found = -1;
            for (int ei : graph.adjacency[a]) {
                if (graph.other_end(ei, a) == b) {
                    found = ei;
                    break;
                }
            }
            if (found < 0)
                throw FormatError(source_name + ": no lattice edge between stored nodes " +
                                  std::to_string(a) + " and " + std::to_string(b));
            p.edge_ids.push_back(found);
            p.length_mm += graph.edges[found].weight;
        }
        sol.total_length_mm += p.length_mm;
        sol.total_edges += p.num_edges();
        sol.paths.push_back(std::move(p));
    }
    sol.total_paths = static_cast<int>(sol.paths.size());
    sol.score = sol.paths.empty() ? 0.0 : score(sol);
    try {
        verify_edge_partition(graph, sol);
    } catch (const Error& e) {
        throw FormatError(source_name + ": " + e.what());
    }
    return sol;
}

std::string write_trajectory_report_json(const TrajectoryReport& r) {
    std::string out = "{\n";
    out += "  \"corrected_score\": " + fmt_g9(r.corrected_score) + ",\n";
    out += "  \"edges_real\": " + std::to_string(r.edges_real) + ",\n";
    out += "  \"length_ratio\": " + fmt_g9(r.length_ratio) + ",\n";
    out += std::string("  \"literal_correction\": ") +
           (r.literal_correction ? "true" : "false") + ",\n";
    out += "  \"lts_percent\": " + fmt_g9(r.lts_percent) + ",\n";
    out += "  \"nominal_edge_count\": " + std::to_string(r.nominal_edge_count) + ",\n";
    out += "  \"nominal_total_length_mm\": " + fmt_g9(r.nominal_total_length_mm) + ",\n";
    out += "  \"polyline_count\": " + std::to_string(r.polyline_count) + ",\n";
    out += "  \"raw_score\": " + fmt_g9(r.raw_score) + ",\n";
    out += "  \"total_extruding_length_mm\": " + fmt_g9(r.total_extruding_length_mm) + ",\n";
    out += "  \"total_travel_length_mm\": " + fmt_g9(r.total_travel_length_mm) + ",\n";
    out += "  \"warnings\": [";
    if (r.warnings.empty()) {
        out += "]\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < r.warnings.size(); ++i) {
            out += "    \"" + json_escape(r.warnings[i]) + "\"";
            out += i + 1 < r.warnings.size() ? ",\n" : "\n";
        }
        out += "  ]\n";
    }
    out += "}\n";
    return out;
}

std::string write_stats_json(const StatsReport& report) {
    std::string out = "{\n";
    out += "  \"combined\": {\n";
    out += "    \"mean_um\": " + fmt_g9(combined_mean(report.set)) + ",\n";
    double n_total = 0.0;
    for (const Replicate& r : report.set.replicates) n_total += r.n;
    out += "    \"n\": " + fmt_g9(n_total) + ",\n";
    out += "    \"std_um\": " + fmt_g9(combined_std(report.set)) + "\n";
    out += "  },\n";
    out += "  \"replicates\": [";
    if (report.set.replicates.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < report.set.replicates.size(); ++i) {
            const Replicate& r = report.set.replicates[i];
            out += "    {\"mean_um\": " + fmt_g9(r.mean) + ", \"n\": " + fmt_g9(r.n) +
                   ", \"name\": \"" + json_escape(r.name) + "\", \"std_um\": " + fmt_g9(r.stddev) +
                   "}";
            out += i + 1 < report.set.replicates.size() ? ",\n" : "\n";
        }
        out += "  ],\n";
    }
    out += std::string("  \"std_formula\": \"") +
           (report.formula == StdFormula::Standard ? "standard" : "total_weighted") + "\"\n";
    out += "}\n";
    return out;
}

std::string write_graph_json(const LatticeGraph& graph) {
    std::string out = "{\n";
    out += "  \"edges\": [";
    if (graph.edges.empty()) {
        out += "],\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < graph.edges.size(); ++i) {
            const GraphEdge& e = graph.edges[i];
            out += "    {\"length_mm\": " + fmt_g9(e.weight) + ", \"u\": " + std::to_string(e.u) +
                   ", \"v\": " + std::to_string(e.v) + "}";
            out += i + 1 < graph.edges.size() ? ",\n" : "\n";
        }
        out += "  ],\n";
    }
    out += "  \"nodes\": [";
    if (graph.node_pos.empty()) {
        out += "]\n";
    } else {
        out += "\n";
        for (size_t i = 0; i < graph.node_pos.size(); ++i) {
            const Point3& p = graph.node_pos[i];
            out += "    [" + fmt_g9(p.x) + ", " + fmt_g9(p.y) + ", " + fmt_g9(p.z) + "]";
            out += i + 1 < graph.node_pos.size() ? ",\n" : "\n";
        }
        out += "  ]\n";
    }
    out += "}\n";
    return out;
}

std::string write_score_trace_csv(const std::vector<RunReport>& reports) {
    const bool multi = reports.size() > 1;
    std::string out = multi ? "layer,iteration,score\n" : "iteration,score\n";
    for (size_t k = 0; k < reports.size(); ++k) {
        const std::vector<double>& scores = reports[k].per_iteration_scores;
        for (size_t i = 0; i < scores.size(); ++i) {
            if (multi) {
                out += std::to_string(k);
                out += ',';
            }
            out += std::to_string(i);
            out += ',';
            out += fmt_g9(scores[i]);
            out += '\n';
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw ParamError("cannot read file: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParamError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ParamError("cannot write file: " + path);
}

}  // namespace gippo
