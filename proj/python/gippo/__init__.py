"""Greedy path decomposition and toolpath emission for printed lattices.

The heavy lifting lives in the compiled ``_gippo`` module; this package just
re-exports it under stable names.
"""

from ._gippo import (  # noqa: F401
    Contour,
    Design,
    FormatError,
    GraphEdge,
    Layer,
    LatticeGraph,
    ParamError,
    Path,
    PathClassCounts,
    Point3,
    PrintParams,
    RunReport,
    Solution,
    Trajectory,
    TrajectoryReport,
    analyze_gcode,
    build_design_graph,
    build_graph,
    clip_layer,
    components,
    e_value,
    emit_marlin,
    emit_toolpath_csv,
    gen_arrowhead,
    gen_honeycomb,
    gen_rectilinear,
    gen_reentrant_honeycomb,
    gen_snub_square,
    histogram_stats,
    import_segments,
    load_design,
    odd_degree_count,
    optimize,
    parse_design_json,
    parse_layer_json,
    path_count_lower_bound,
    pool_replicates,
    project_sphere,
    reconstruct,
    rotate_layer,
    stack_layers,
    svg_decomposition,
    svg_score_scatter,
    write_design_json,
    write_layer_json,
    write_run_reports_json,
)

__version__ = "0.1.0"
