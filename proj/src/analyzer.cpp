#include "gippo/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace gippo {

namespace {

constexpr double kChainTol = 1e-6;  // mm; endpoint matching and motion threshold

struct Word {
    char letter;
    double value;
};

// Parses "X1.5 Y-2 e0.3" style words; returns false on malformed input.
bool parse_words(std::string_view body, std::vector<Word>& words, std::string& err) {
    size_t i = 0;
    while (i < body.size()) {
        const unsigned char c = static_cast<unsigned char>(body[i]);
        if (std::isspace(c) || c == '\t') {
            ++i;
            continue;
        }
        if (!std::isalpha(c)) {
            err = "unexpected character '" + std::string(1, static_cast<char>(c)) + "'";
            return false;
        }
        const char letter = static_cast<char>(std::toupper(c));
        ++i;
        const size_t start = i;
        if (i < body.size() && (body[i] == '+' || body[i] == '-')) ++i;
        bool digits = false, dot = false, exp = false;
        while (i < body.size()) {
            const char d = body[i];
            if (d >= '0' && d <= '9') {
                digits = true;
                ++i;
            } else if (d == '.' && !dot && !exp) {
                dot = true;
                ++i;
            } else if ((d == 'e' || d == 'E') && digits && !exp) {
                exp = true;
                ++i;
                if (i < body.size() && (body[i] == '+' || body[i] == '-')) ++i;
                if (i >= body.size() || !(body[i] >= '0' && body[i] <= '9')) {
                    err = "malformed exponent after '" + std::string(1, letter) + "'";
                    return false;
                }
            } else {
                break;
            }
        }
        if (!digits) {
            err = "missing number after '" + std::string(1, letter) + "'";
            return false;
        }
        double value = 0.0;
        const auto res =
            std::from_chars(body.data() + start, body.data() + i, value, std::chars_format::general);
        if (res.ec != std::errc() || !std::isfinite(value)) {
            err = "unparseable number after '" + std::string(1, letter) + "'";
            return false;
        }
        words.push_back({letter, value});
    }
    return true;
}

std::string strip_comments(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    bool paren = false;
    for (char c : line) {
        if (paren) {
            if (c == ')') paren = false;
            continue;
        }
        if (c == ';' || c == '*') break;  // '*' starts a checksum
        if (c == '(') {
            paren = true;
            continue;
        }
        if (c == '\r' || c == '\0') continue;
        out += c;
    }
    return out;
}

}  // namespace

ParseResult parse_gcode(std::string_view text, bool strict) {
    ParseResult result;
    GMove::Kind modal = GMove::Kind::Other;
    bool abs_xyz = true, abs_e = true;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (raw.empty() && pos > text.size()) break;

        const std::string body = strip_comments(raw);
        std::vector<Word> words;
        std::string err;
        if (!parse_words(body, words, err)) {
            if (strict)
                throw FormatError("gcode line " + std::to_string(line_no) + ": " + err);
            result.warnings.push_back("line " + std::to_string(line_no) + " skipped: " + err);
            continue;
        }
        if (words.empty()) continue;

        GMove mv;
        mv.line_no = line_no;
        size_t first_param = 0;

        // Skip a leading N line number.
        if (words[0].letter == 'N' && words.size() > 1) first_param = 1;

        const Word* cmd = nullptr;
        if (first_param < words.size()) {
            const Word& w0 = words[first_param];
            if (w0.letter == 'G' || w0.letter == 'M' || w0.letter == 'T') {
                cmd = &w0;
                ++first_param;
            }
        }
        if (cmd) {
            const int code = static_cast<int>(std::llround(cmd->value));
            const bool integral = (cmd->value == static_cast<double>(code));
            mv.command = std::string(1, cmd->letter) +
                         (integral ? std::to_string(code) : std::to_string(cmd->value));
            if (cmd->letter == 'G' && integral) {
                if (code == 0) {
                    mv.kind = GMove::Kind::G0;
                    modal = mv.kind;
                } else if (code == 1) {
                    mv.kind = GMove::Kind::G1;
                    modal = mv.kind;
                } else if (code == 90) {
                    abs_xyz = true;
                } else if (code == 91) {
                    abs_xyz = false;
                }
            } else if (cmd->letter == 'M' && integral) {
                if (code == 82) abs_e = true;
                else if (code == 83) abs_e = false;
            }
        } else {
            // Bare coordinates repeat the last motion command.
            if (modal == GMove::Kind::Other) {
                if (strict)
                    throw FormatError("gcode line " + std::to_string(line_no) +
                                      ": coordinates with no active motion command");
                result.warnings.push_back("line " + std::to_string(line_no) +
                                          " skipped: no active motion command");
                continue;
            }
            mv.kind = modal;
        }

        bool dup = false;
        for (size_t i = first_param; i < words.size(); ++i) {
            const Word& w = words[i];
            auto set = [&](std::optional<double>& slot) {
                if (slot) dup = true;
                slot = w.value;
            };
            switch (w.letter) {
                case 'X': set(mv.x); break;
                case 'Y': set(mv.y); break;
                case 'Z': set(mv.z); break;
                case 'E': set(mv.e); break;
                case 'F': set(mv.f); break;
                default: break;  // unknown words are not errors
            }
        }
        if (dup) {
            if (strict)
                throw FormatError("gcode line " + std::to_string(line_no) + ": duplicate axis word");
            result.warnings.push_back("line " + std::to_string(line_no) +
                                      ": duplicate axis word, last value wins");
        }
        mv.absolute_xyz = abs_xyz;
        mv.absolute_e = abs_e;
        result.moves.push_back(std::move(mv));
    }
    return result;
}

namespace {

struct AxisState {
    std::optional<double> x, y, z;
};

double displacement(const AxisState& from, const AxisState& to) {
    auto d = [](const std::optional<double>& a, const std::optional<double>& b) {
        return (a && b) ? *b - *a : 0.0;
    };
    const double dx = d(from.x, to.x), dy = d(from.y, to.y), dz = d(from.z, to.z);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

Trajectory extract_trajectories(const std::vector<GMove>& moves) {
    Trajectory traj;
    AxisState pos;
    double e_cmd = 0.0;        // last commanded E axis value
    double cum_e = 0.0;        // virtual cumulative filament
    double high_water = 0.0;
    bool chain_open = false;

    auto break_chain = [&] { chain_open = false; };

    auto apply_axis = [](std::optional<double>& slot, const std::optional<double>& word,
                         bool absolute) {
        if (!word) return;
        if (absolute || !slot)
            slot = *word;
        else
            slot = *slot + *word;
    };

    for (const GMove& mv : moves) {
        if (mv.kind == GMove::Kind::Other) {
            if (mv.command == "G92") {
                // Axis re-zero: position jump, extrusion high-water reset.
                if (mv.x) pos.x = *mv.x;
                if (mv.y) pos.y = *mv.y;
                if (mv.z) pos.z = *mv.z;
                if (mv.e) {
                    e_cmd = *mv.e;
                    high_water = cum_e;
                }
                break_chain();
            } else if (mv.command == "G28") {
                // Home: establishes the named axes (all when none named) at 0.
                const bool any = mv.x || mv.y || mv.z;
                if (!any || mv.x) pos.x = 0.0;
                if (!any || mv.y) pos.y = 0.0;
                if (!any || mv.z) pos.z = 0.0;
                break_chain();
            } else if (mv.command == "G2" || mv.command == "G3") {
                // Arc: tracked as chord travel only.
                ++traj.arc_count;
                AxisState next = pos;
                apply_axis(next.x, mv.x, mv.absolute_xyz);
                apply_axis(next.y, mv.y, mv.absolute_xyz);
                apply_axis(next.z, mv.z, mv.absolute_xyz);
                traj.total_travel_length_mm += displacement(pos, next);
                pos = next;
                break_chain();
            }
            continue;
        }

        AxisState next = pos;
        apply_axis(next.x, mv.x, mv.absolute_xyz);
        apply_axis(next.y, mv.y, mv.absolute_xyz);
        apply_axis(next.z, mv.z, mv.absolute_xyz);

        const bool has_motion_words = mv.x || mv.y || mv.z;
        double delta_e = 0.0;
        if (mv.e) {
            delta_e = mv.absolute_e ? (*mv.e - e_cmd) : *mv.e;
            e_cmd = mv.absolute_e ? *mv.e : e_cmd + *mv.e;
        }

        if (mv.e && has_motion_words) {
            // Geometry matters here; refuse to guess where we started.
            if ((mv.x && !pos.x) || (mv.y && !pos.y) || (mv.z && !pos.z))
                throw StateError("gcode line " + std::to_string(mv.line_no) +
                                 ": extruding move before position established");
        }

        const double disp = displacement(pos, next);
        const double new_cum = cum_e + delta_e;
        const bool extruding = mv.kind == GMove::Kind::G1 && disp > kChainTol &&
                               new_cum > high_water;
        if (extruding) {
            const Point3 a{pos.x.value_or(0.0), pos.y.value_or(0.0), pos.z.value_or(0.0)};
            const Point3 b{next.x.value_or(0.0), next.y.value_or(0.0), next.z.value_or(0.0)};
            if (chain_open && !traj.polylines.empty() &&
                dist3(traj.polylines.back().back(), a) <= kChainTol) {
                traj.polylines.back().push_back(b);
            } else {
                traj.polylines.push_back({a, b});
            }
            chain_open = true;
            traj.total_extruding_length_mm += disp;
            ++traj.edge_count;
        } else if (disp > kChainTol) {
            traj.total_travel_length_mm += disp;
            break_chain();
        } else if (mv.kind == GMove::Kind::G0 && has_motion_words) {
            break_chain();  // commanded travel, even one that goes nowhere
        } else if (mv.e) {
            break_chain();  // retract, prime or zero-motion E adjustment
        }
        cum_e = new_cum;
        high_water = std::max(high_water, cum_e);
        pos = next;
    }
    if (traj.arc_count > 0)
        traj.warnings.push_back("unsupported arc moves (G2/G3): " +
                                std::to_string(traj.arc_count) + ", tracked as chord travel");
    return traj;
}

TrajectoryReport compare_to_nominal(const Trajectory& traj, const LatticeGraph& nominal,
                                    int long_min_nodes, bool literal_correction) {
    if (traj.polylines.empty())
        throw ParamError("compare_to_nominal: trajectory has no extruding moves");
    if (nominal.edge_count() == 0)
        throw ParamError("compare_to_nominal: nominal graph has no edges");

    TrajectoryReport rep;
    rep.warnings = traj.warnings;
    rep.total_travel_length_mm = traj.total_travel_length_mm;
    rep.polyline_count = static_cast<int>(traj.polylines.size());
    rep.literal_correction = literal_correction;

    double total_len = 0.0, score_num = 0.0, long_len = 0.0;
    int edges_real = 0;
    for (const auto& pl : traj.polylines) {
        double len = 0.0;
        for (size_t i = 0; i + 1 < pl.size(); ++i) len += dist3(pl[i], pl[i + 1]);
        const int nedges = static_cast<int>(pl.size()) - 1;
        total_len += len;
        score_num += len * nedges;
        edges_real += nedges;
        if (static_cast<int>(pl.size()) >= long_min_nodes) long_len += len;
    }
    rep.total_extruding_length_mm = total_len;
    rep.edges_real = edges_real;
    rep.lts_percent = 100.0 * long_len / total_len;
    rep.raw_score = score_num / (total_len * static_cast<double>(traj.polylines.size()));

    rep.nominal_total_length_mm = nominal.total_weight();
    rep.nominal_edge_count = nominal.edge_count();
    const double nominal_over_real =
        static_cast<double>(rep.nominal_edge_count) / static_cast<double>(edges_real);
    rep.corrected_score =
        rep.raw_score * (literal_correction ? 1.0 / nominal_over_real : nominal_over_real);
    rep.length_ratio = total_len / rep.nominal_total_length_mm;
    return rep;
}

}  // namespace gippo
