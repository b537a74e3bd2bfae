"""Dynamic graph wavelets: wave-driven time-vertex frames, sparse coding and source localization."""

from .errors import (DGWError, NoEventError, NumericError, ParameterError,
                     SolverDivergenceError, StabilityError)
from .frame import DGWFrame, FrameBounds, build_frame, frame_bounds, scale_grid
from .graph_core import (Graph, SpectralBasis, StationTable, build_knn_graph,
                         eigendecompose, haversine_km)
from .localization import EventEstimate, estimate_epicenter, localization_error_km
from .simulator import EventSpec, add_noise, random_geometric_graph, synth_event
from .solver import SolverConfig, SolverResult, fista, soft_threshold

__version__ = "0.1.0"

__all__ = [
    "DGWError", "NoEventError", "NumericError", "ParameterError", "SolverDivergenceError",
    "StabilityError", "DGWFrame", "FrameBounds", "build_frame", "frame_bounds", "scale_grid",
    "Graph", "SpectralBasis", "StationTable", "build_knn_graph", "eigendecompose",
    "haversine_km", "EventEstimate", "estimate_epicenter", "localization_error_km",
    "EventSpec", "add_noise", "random_geometric_graph", "synth_event", "SolverConfig",
    "SolverResult", "fista", "soft_threshold",
]
