#include "gippo/gcode.hpp"

#include <cmath>
#include <numbers>

#include "gippo/fmtnum.hpp"

namespace gippo {

namespace {

void validate_params(const PrintParams& p) {
    if (!(p.layer_thickness > 0.0)) throw ParamError("print params: layer_thickness must be positive");
    if (!(p.nozzle_diameter > 0.0)) throw ParamError("print params: nozzle_diameter must be positive");
    if (!(p.filament_diameter > 0.0))
        throw ParamError("print params: filament_diameter must be positive");
    if (!(p.extrusion_multiplier > 0.0))
        throw ParamError("print params: extrusion_multiplier must be positive");
    if (!(p.k_factor > 0.0)) throw ParamError("print params: k_factor must be positive");
    if (!(p.print_speed > 0.0) || !(p.travel_speed > 0.0))
        throw ParamError("print params: speeds must be positive");
    if (p.retraction_length < 0.0)
        throw ParamError("print params: retraction_length must be >= 0");
    if (p.retraction_length > 0.0 && !(p.retraction_speed > 0.0))
        throw ParamError("print params: retraction_speed must be positive");
    if (p.short_path_max_segments < 0)
        throw ParamError("print params: short_path_max_segments must be >= 0");
    if (!(p.short_path_speed_factor > 0.0))
        throw ParamError("print params: short_path_speed_factor must be positive");
}

}  // namespace

double e_value(double length_mm, const PrintParams& p) {
    if (length_mm < 0.0) throw ParamError("e_value: negative length");
    if (!(p.filament_diameter > 0.0)) throw ParamError("e_value: filament_diameter must be > 0");
    const double fd2 = p.filament_diameter * p.filament_diameter;
    return p.k_factor *
           (4.0 * length_mm * p.layer_thickness * p.extrusion_multiplier * p.nozzle_diameter) /
           (std::numbers::pi * fd2);
}

std::vector<Move> plan_layer(const Solution& sol, std::span<const Point3> node_pos,
                             double z_offset, const PrintParams& p) {
    validate_params(p);
    std::vector<Move> moves;
    for (const Path& path : sol.paths) {
        for (NodeId n : path.nodes)
            if (n < 0 || n >= static_cast<int>(node_pos.size()))
                throw StructuralError("plan_layer: path references node " + std::to_string(n) +
                                      " without a position");
        const bool is_short = path.num_edges() < p.short_path_max_segments;
        const double feed = is_short ? p.print_speed * p.short_path_speed_factor : p.print_speed;

        if (p.retraction_length > 0.0) {
            Move r;
            r.kind = Move::Kind::Retract;
            r.feed = p.retraction_speed;
            r.e_delta = -p.retraction_length;
            moves.push_back(r);
        }
        const Point3& start = node_pos[path.nodes.front()];
        Move t;
        t.kind = Move::Kind::Travel;
        t.x = start.x;
        t.y = start.y;
        t.z = z_offset + start.z;
        t.feed = p.travel_speed;
        moves.push_back(t);
        if (p.retraction_length > 0.0) {
            Move pr;
            pr.kind = Move::Kind::Prime;
            pr.feed = p.retraction_speed;
            pr.e_delta = p.retraction_length;
            moves.push_back(pr);
        }
        for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
            const Point3& a = node_pos[path.nodes[i]];
            const Point3& b = node_pos[path.nodes[i + 1]];
            Move m;
            m.kind = Move::Kind::Extrude;
            m.x = b.x;
            m.y = b.y;
            m.z = z_offset + b.z;
            m.feed = feed;
            m.e_delta = e_value(dist3(a, b), p);
            moves.push_back(m);
        }
    }
    return moves;
}

ToolpathProgram plan_program(const Design& design, const std::vector<Solution>& per_layer,
                             const PrintParams& p) {
    validate_params(p);
    if (design.layers.size() != per_layer.size())
        throw ParamError("plan_program: design has " + std::to_string(design.layers.size()) +
                         " layers but " + std::to_string(per_layer.size()) +
                         " solutions were supplied");
    ToolpathProgram prog;
    for (size_t k = 0; k < design.layers.size(); ++k) {
        const Layer& layer = design.layers[k];
        const double hop_z = p.first_layer_z + static_cast<double>(k) * p.layer_thickness;

        PlannedLayer pl;
        pl.index = static_cast<int>(k);
        pl.z = hop_z;
        Move hop;
        hop.kind = Move::Kind::Travel;
        hop.z = hop_z;
        hop.feed = p.travel_speed;
        pl.moves.push_back(hop);

        // Rebase vertex z to the layer relief so planar layers land exactly on
        // the program plane and projected layers keep their height offsets.
        std::vector<Point3> rebased = layer.points;
        for (Point3& q : rebased) q.z -= layer.z;
        const std::vector<Move> body = plan_layer(per_layer[k], rebased, hop_z, p);
        pl.moves.insert(pl.moves.end(), body.begin(), body.end());
        prog.layers.push_back(std::move(pl));
    }
    return prog;
}

namespace {

void append_axis(std::string& line, char word, const std::optional<double>& v, int decimals) {
    if (!v) return;
    line += ' ';
    line += word;
    line += fmt_fixed(*v, decimals);
}

}  // namespace

std::string emit_marlin(const ToolpathProgram& program, const PrintParams& p) {
    std::string out;
    out += "G21\n";
    out += "G90\n";
    out += "M83\n";
    if (p.nozzle_temp_c) out += "M104 S" + fmt_g(*p.nozzle_temp_c) + "\n";
    if (p.bed_temp_c) out += "M140 S" + fmt_g(*p.bed_temp_c) + "\n";
    for (const PlannedLayer& pl : program.layers) {
        out += ";LAYER:" + std::to_string(pl.index) + "\n";
        for (const Move& m : pl.moves) {
            std::string line;
            switch (m.kind) {
                case Move::Kind::Travel:
                    line = "G0";
                    append_axis(line, 'X', m.x, 5);
                    append_axis(line, 'Y', m.y, 5);
                    append_axis(line, 'Z', m.z, 5);
                    break;
                case Move::Kind::Extrude:
                    line = "G1";
                    append_axis(line, 'X', m.x, 5);
                    append_axis(line, 'Y', m.y, 5);
                    append_axis(line, 'Z', m.z, 5);
                    line += " E" + fmt_fixed(m.e_delta, 6);
                    break;
                case Move::Kind::Retract:
                case Move::Kind::Prime:
                    line = "G1 E" + fmt_fixed(m.e_delta, 6);
                    break;
            }
            line += " F" + fmt_g(m.feed);
            out += line + "\n";
        }
    }
    out += "M84\n";
    return out;
}

std::string emit_marlin(const Design& design, const std::vector<Solution>& per_layer,
                        const PrintParams& p) {
    return emit_marlin(plan_program(design, per_layer, p), p);
}

std::string emit_toolpath_csv(const ToolpathProgram& program) {
    std::string out = "layer,move_type,x,y,z,feed,e_delta\n";
    auto cell = [](const std::optional<double>& v, int decimals) {
        return v ? fmt_fixed(*v, decimals) : std::string();
    };
    for (const PlannedLayer& pl : program.layers) {
        for (const Move& m : pl.moves) {
            const char* type = "travel";
            if (m.kind == Move::Kind::Extrude) type = "extrude";
            else if (m.kind == Move::Kind::Retract) type = "retract";
            else if (m.kind == Move::Kind::Prime) type = "prime";
            out += std::to_string(pl.index);
            out += ',';
            out += type;
            out += ',';
            out += cell(m.x, 5);
            out += ',';
            out += cell(m.y, 5);
            out += ',';
            out += cell(m.z, 5);
            out += ',';
            out += fmt_g(m.feed);
            out += ',';
            out += fmt_fixed(m.e_delta, 6);
            out += '\n';
        }
    }
    return out;
}

std::string emit_toolpath_csv(const Design& design, const std::vector<Solution>& per_layer,
                              const PrintParams& p) {
    return emit_toolpath_csv(plan_program(design, per_layer, p));
}

}  // namespace gippo
