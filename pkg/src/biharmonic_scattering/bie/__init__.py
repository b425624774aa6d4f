"""Nystrom boundary-integral solver for the plate transmission problem."""

from .curves import BoundaryNodes, ParametricCurve, circle, ellipse, kite, load_curve, save_curve
from .operators import layer_matrix_J, layer_matrix_K, layer_matrix_V, layer_matrix_W
from .system import (
    DensitySet,
    IncidentTraces,
    MaterialPair,
    TransmissionSolver,
    assemble_block_system,
    evaluate_fields,
    field_evaluation_matrix,
    incident_traces_plane_wave,
    incident_traces_point_source,
    solve_point_source,
)
