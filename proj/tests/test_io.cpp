#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "gippo/errors.hpp"
#include "gippo/graph.hpp"
#include "gippo/io.hpp"
#include "gippo/lattice.hpp"
#include "gippo/optimizer.hpp"
#include "test_util.hpp"

using namespace gippo;

TEST_SUITE("io") {

TEST_CASE("layer json round-trips byte for byte") {
    Layer l = gen_honeycomb(1.0, Contour::rect(8.0, 8.0));
    const std::string once = write_layer_json(l);
    Layer back = parse_layer_json(once, "<mem>");
    const std::string twice = write_layer_json(back);
    CHECK(once == twice);
    CHECK(back.points.size() == l.points.size());
    CHECK(back.segments.size() == l.segments.size());
}

TEST_CASE("layer json defaults and rejections") {
    Layer l = parse_layer_json(
        R"({"points": [[0,0,0],[1,0,0]], "segments": [[0,1]]})", "<mem>");
    CHECK(l.z == 0.0);
    CHECK(l.label.empty());
    CHECK(l.points.size() == 2);

    // explicit mm is accepted
    CHECK_NOTHROW(parse_layer_json(
        R"({"points": [[0,0,0],[1,0,0]], "segments": [[0,1]], "units": "mm"})", "<mem>"));
    // anything else is not
    CHECK_THROWS_AS(
        parse_layer_json(
            R"({"points": [[0,0,0],[1,0,0]], "segments": [[0,1]], "units": "cm"})",
            "<mem>"),
        FormatError);

    // 2-element points are malformed
    CHECK_THROWS_AS(
        parse_layer_json(R"({"points": [[0,0],[1,0]], "segments": [[0,1]]})", "<mem>"),
        FormatError);
    // segment indices must be in range
    CHECK_THROWS_AS(
        parse_layer_json(R"({"points": [[0,0,0],[1,0,0]], "segments": [[0,9]]})",
                         "<mem>"),
        FormatError);
    // not json at all
    CHECK_THROWS_AS(parse_layer_json("not json", "<mem>"), FormatError);
}

TEST_CASE("design json round-trips byte for byte") {
    Layer base = gen_arrowhead(1.2, 1.0, Contour::rect(6.0, 6.0));
    Design d = stack_layers(base, 3, 0.148, 30.0);
    const std::string once = write_design_json(d);
    Design back = parse_design_json(once, "<mem>");
    CHECK(write_design_json(back) == once);
    CHECK(back.layers.size() == 3);
    CHECK(back.layer_thickness == d.layer_thickness);
    CHECK(back.rotation_deg_per_layer == d.rotation_deg_per_layer);
}

TEST_CASE("design loader accepts a bare layer file") {
    Layer l = gen_honeycomb(1.0, Contour::rect(6.0, 6.0));
    const std::string layer_text = write_layer_json(l);
    CHECK_FALSE(looks_like_design_json(layer_text));

    const std::string path = "/tmp/gippo_test_bare_layer.json";
    write_text_file(path, layer_text);
    Design d = load_design(path);
    CHECK(d.layers.size() == 1);
    CHECK(d.layers[0].segments.size() == l.segments.size());

    Design stacked = stack_layers(l, 2, 0.2, 0.0);
    CHECK(looks_like_design_json(write_design_json(stacked)));
}

TEST_CASE("segment import fixtures weld shared corners") {
    Layer square = import_segments(fixture_path("arrowhead_unit_cell.json"));
    CHECK(square.points.size() == 4);
    CHECK(square.segments.size() == 4);
    const double expect = 2.0 * (std::sqrt(0.5) + std::sqrt(2.5));
    CHECK(square.total_length() == doctest::Approx(expect).epsilon(1e-9));

    Layer re = import_segments(fixture_path("reentrant_unit_cell.json"));
    CHECK(re.points.size() == 4);
    CHECK(re.segments.size() == 3);

    Layer vor = import_segments(fixture_path("voronoi_10x10.json"));
    CHECK(vor.segments.size() > 50);
    Layer pen = import_segments(fixture_path("penrose_10x10.json"));
    CHECK(pen.segments.size() > 50);

    CHECK_THROWS_AS(import_segments("/nonexistent/file.json"), ParamError);
}

TEST_CASE("a run report file reproduces the solution exactly") {
    Layer l = gen_honeycomb(1.0, Contour::rect(8.0, 8.0));
    LatticeGraph g = build_graph(l);
    OptimizerConfig cfg;
    cfg.iterations = 40;
    cfg.master_seed = 11;
    RunReport rep = optimize(g, cfg);

    const std::string text = write_run_reports_json({rep});
    StoredRun stored = parse_run_reports_json(text, "<mem>");
    REQUIRE(stored.layers.size() == 1);
    CHECK(stored.long_path_min_nodes == cfg.long_path_min_nodes);
    CHECK(stored.layers[0].per_iteration_scores.size() == 40);

    Solution best = solution_from_node_paths(g, stored.layers[0].best_paths, "<mem>");
    CHECK(best.score == doctest::Approx(rep.best.score).epsilon(1e-12));
    CHECK(best.total_length_mm == doctest::Approx(rep.best.total_length_mm).epsilon(1e-12));
    CHECK(best.paths.size() == rep.best.paths.size());
    CHECK_NOTHROW(verify_edge_partition(g, best));

    // writing again is byte-identical
    CHECK(write_run_reports_json({rep}) == text);
}

TEST_CASE("stored paths that do not match the lattice are rejected") {
    LatticeGraph g = LatticeGraph::from_weighted_edges(
        3, {{0, 1, 1.0}, {1, 2, 1.0}});
    // node pair (0,2) is not an edge
    CHECK_THROWS_AS(solution_from_node_paths(g, {{0, 2}}, "<mem>"), FormatError);
    // covering an edge twice
    CHECK_THROWS_AS(solution_from_node_paths(g, {{0, 1}, {1, 0}, {1, 2}}, "<mem>"),
                    FormatError);
    // leaving an edge out
    CHECK_THROWS_AS(solution_from_node_paths(g, {{0, 1}}, "<mem>"), FormatError);
    // just right
    CHECK_NOTHROW(solution_from_node_paths(g, {{0, 1, 2}}, "<mem>"));
}

TEST_CASE("trajectory report json carries the scores") {
    TrajectoryReport tr;
    tr.total_extruding_length_mm = 12.5;
    tr.total_travel_length_mm = 3.25;
    tr.polyline_count = 2;
    tr.edges_real = 9;
    tr.lts_percent = 80.0;
    tr.nominal_total_length_mm = 12.5;
    tr.nominal_edge_count = 9;
    tr.raw_score = 4.5;
    tr.corrected_score = 4.5;
    tr.length_ratio = 1.0;
    tr.warnings = {"example warning"};
    const std::string js = write_trajectory_report_json(tr);
    CHECK(js.find("\"corrected_score\": 4.5") != std::string::npos);
    CHECK(js.find("\"polyline_count\": 2") != std::string::npos);
    CHECK(js.find("example warning") != std::string::npos);
    CHECK(write_trajectory_report_json(tr) == js);
}

TEST_CASE("stats json names the formula") {
    ReplicateSet set;
    set.replicates.push_back({"a", 4, 10.0, 1.0});
    set.replicates.push_back({"b", 4, 12.0, 1.0});
    StatsReport rep;
    rep.set = set;
    rep.formula = StdFormula::Standard;
    const std::string js = write_stats_json(rep);
    CHECK(js.find("\"mean_um\": 11") != std::string::npos);
    CHECK(js.find("\"std_formula\": \"standard\"") != std::string::npos);
    rep.formula = StdFormula::TotalWeighted;
    const std::string js2 = write_stats_json(rep);
    CHECK(js2.find("\"std_formula\": \"total_weighted\"") != std::string::npos);
}

TEST_CASE("graph json lists nodes and weighted edges") {
    LatticeGraph g = LatticeGraph::from_weighted_edges(2, {{0, 1, 2.5}});
    const std::string js = write_graph_json(g);
    CHECK(js.find("\"length_mm\": 2.5") != std::string::npos);
    CHECK(js.find("\"edges\"") != std::string::npos);
    CHECK(js.find("\"nodes\"") != std::string::npos);
}

TEST_CASE("score trace csv adds the layer column only for stacks") {
    Layer l = gen_honeycomb(1.0, Contour::rect(6.0, 6.0));
    LatticeGraph g = build_graph(l);
    OptimizerConfig cfg;
    cfg.iterations = 5;
    RunReport rep = optimize(g, cfg);

    const std::string one = write_score_trace_csv({rep});
    CHECK(one.rfind("iteration,score\n", 0) == 0);
    CHECK(std::count(one.begin(), one.end(), '\n') == 6);  // header + 5 rows

    const std::string two = write_score_trace_csv({rep, rep});
    CHECK(two.rfind("layer,iteration,score\n", 0) == 0);
    CHECK(std::count(two.begin(), two.end(), '\n') == 11);
}

TEST_CASE("text file helpers") {
    const std::string path = "/tmp/gippo_test_roundtrip.txt";
    write_text_file(path, "hello\n");
    CHECK(read_text_file(path) == "hello\n");
    CHECK_THROWS_AS(read_text_file("/nonexistent/nope.txt"), ParamError);
}

}  // TEST_SUITE
