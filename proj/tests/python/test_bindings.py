# Smoke tests for the compiled python module: the whole pipeline end to end
# plus the exception mapping. PYTHONPATH is set by ctest.

import json
import math
import os
from pathlib import Path

import pytest

import gippo

FIXTURES = Path(os.environ["GIPPO_FIXTURES"])


@pytest.fixture(scope="module")
def lattice():
    return gippo.gen_honeycomb(0.8, gippo.Contour.rect(10, 10))


@pytest.fixture(scope="module")
def run(lattice):
    graph = gippo.build_graph(lattice)
    return graph, gippo.optimize(graph, iterations=40, seed=11)


def test_generator_and_graph(lattice):
    assert len(lattice.points) > 50
    assert len(lattice.segments) > 50
    graph = gippo.build_graph(lattice)
    assert graph.node_count == len(lattice.points)
    assert graph.edge_count == len(lattice.segments)
    assert math.isclose(graph.total_weight(), lattice.total_length(), rel_tol=1e-12)


def test_optimize_partition_and_score(run):
    graph, report = run
    assert len(report.per_iteration_scores) == 40
    assert report.best.score >= report.worst.score
    assert report.best.score == max(report.per_iteration_scores)
    covered = sorted(eid for p in report.best.paths for eid in p.edge_ids)
    assert covered == list(range(graph.edge_count))
    assert report.best.total_paths >= gippo.path_count_lower_bound(graph)


def test_optimize_is_deterministic(run):
    graph, report = run
    again = gippo.optimize(graph, iterations=40, seed=11, threads=4)
    assert gippo.write_run_reports_json([again]) == gippo.write_run_reports_json([report])
    other_seed = gippo.optimize(graph, iterations=40, seed=12)
    assert other_seed.per_iteration_scores != report.per_iteration_scores


def test_modes_differ(run):
    graph, report = run
    low = gippo.optimize(graph, iterations=40, seed=11, mode="min")
    assert low.per_iteration_scores != report.per_iteration_scores
    with pytest.raises(ValueError):
        gippo.optimize(graph, iterations=40, mode="typo")


def test_e_value_model():
    p = gippo.PrintParams()
    expected = 1.184 / (math.pi * 1.75**2)
    assert math.isclose(gippo.e_value(10.0, p), expected, rel_tol=1e-12)
    p.k_factor = 2.0
    assert math.isclose(gippo.e_value(10.0, p), 2 * expected, rel_tol=1e-12)
    with pytest.raises(ValueError):
        gippo.e_value(-1.0, gippo.PrintParams())


def test_emit_analyze_roundtrip(lattice, run):
    graph, report = run
    design = gippo.stack_layers(lattice, 1, 0.148, 0.0)
    gcode = gippo.emit_marlin(design, [report.best], gippo.PrintParams())
    assert gcode.startswith("G21\nG90\nM83\n")

    traj = gippo.reconstruct(gcode)
    assert len(traj.polylines) == report.best.total_paths
    assert math.isclose(
        traj.total_extruding_length_mm, report.best.total_length_mm, abs_tol=1e-3
    )

    audit = gippo.analyze_gcode(gcode, graph)
    assert audit.polyline_count == report.best.total_paths
    # coordinates travel through 5-decimal G-code, so scores drift a little
    assert abs(audit.corrected_score - report.best.score) < 1e-6
    assert abs(audit.length_ratio - 1.0) < 1e-6

    csv_text = gippo.emit_toolpath_csv(design, [report.best], gippo.PrintParams())
    assert csv_text.splitlines()[0] == "layer,move_type,x,y,z,feed,e_delta"


def test_layer_json_roundtrip(lattice):
    text = gippo.write_layer_json(lattice)
    back = gippo.parse_layer_json(text)
    assert gippo.write_layer_json(back) == text
    with pytest.raises(ValueError):
        gippo.parse_layer_json("{ not json")


def test_design_json_roundtrip(lattice):
    design = gippo.stack_layers(lattice, 3, 0.2, 30.0)
    text = gippo.write_design_json(design)
    back = gippo.parse_design_json(text)
    assert gippo.write_design_json(back) == text
    assert [l.z for l in back.layers] == [l.z for l in design.layers]


def test_import_and_components():
    layer = gippo.import_segments(str(FIXTURES / "penrose_10x10.json"))
    graph = gippo.build_graph(layer)
    comps = gippo.components(graph)
    assert sum(len(c) for c in comps) == graph.node_count
    assert gippo.path_count_lower_bound(graph) >= len(comps)
    assert gippo.odd_degree_count(graph) % 2 == 0
    with pytest.raises(ValueError):
        gippo.import_segments(str(FIXTURES / "does_not_exist.json"))


def test_stats_helpers():
    n, mean, std = gippo.histogram_stats([(1, 1), (3, 1)])
    assert (n, mean) == (2, 2)
    assert math.isclose(std, 1.0, abs_tol=1e-12)
    _, _, literal = gippo.histogram_stats([(1, 1), (3, 1)], formula="total-weighted")
    assert math.isclose(literal, 0.7071067811865476, abs_tol=1e-12)

    mean, std = gippo.pool_replicates([(2, 2.0, 1.0), (4, 2.0, 1.0)])
    assert math.isclose(mean, 2.0, abs_tol=1e-12)
    assert math.isclose(std, 1.0, abs_tol=1e-12)
    with pytest.raises(ValueError):
        gippo.histogram_stats([])


def test_svg_helpers(run):
    graph, report = run
    svg = gippo.svg_decomposition(graph, report.best)
    assert svg.startswith("<svg")
    assert svg.count("<polyline") == report.best.total_paths
    scatter = gippo.svg_score_scatter(report.per_iteration_scores)
    assert scatter.count("<circle") >= 40


def test_exception_types_are_value_errors():
    assert issubclass(gippo.ParamError, ValueError)
    assert issubclass(gippo.FormatError, ValueError)
    with pytest.raises(gippo.ParamError):
        gippo.gen_honeycomb(0.0, gippo.Contour.rect(4, 4))
    with pytest.raises(gippo.FormatError):
        gippo.parse_layer_json('{"units": "inch", "points": [], "segments": []}')
