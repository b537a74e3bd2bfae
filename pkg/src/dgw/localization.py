"""Source estimates from DGW coefficient tensors."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NoEventError, ParameterError
from .graph_core import StationTable, haversine_km


@dataclass(frozen=True)
class EventEstimate:
    """Estimated source of a propagating event.

    ``contributors`` lists ``(vertex, weight)`` pairs with weights summing to 1.
    ``onset_tau``, ``scale_index`` and ``amplitude`` come from the single
    largest-energy coefficient, whose vertex is ``dominant_vertex``.
    """

    est_lat: float
    est_lon: float
    contributors: Tuple[Tuple[int, float], ...]
    dominant_vertex: int
    onset_tau: int
    scale_index: int
    dominant_scale: Optional[float]
    amplitude: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["contributors"] = [{"vertex": v, "weight": w} for v, w in self.contributors]
        return d


def _to_xyz(lat, lon) -> np.ndarray:
    la, lo = np.radians(lat), np.radians(lon)
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1)


def spherical_mean(lat, lon, weights) -> Tuple[float, float]:
    """Weighted mean direction of points on the sphere, as ``(lat, lon)`` degrees."""
    w = np.asarray(weights, dtype=float)
    v = (w[:, None] * _to_xyz(np.asarray(lat, float), np.asarray(lon, float))).sum(axis=0)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ParameterError("weighted mean direction is undefined (antipodal cancellation)")
    x, y, z = v / norm
    return float(np.degrees(np.arcsin(np.clip(z, -1.0, 1.0)))), float(np.degrees(np.arctan2(y, x)))


def dominant_index(c: np.ndarray) -> Tuple[int, int, int]:
    """Index ``(scale, vertex, tau)`` of the largest ``|c|``.

    Ties go to the lowest vertex, then the lowest tau, then the lowest scale.
    """
    energy = np.abs(c)
    # reorder to (vertex, tau, scale) so C-order argmax applies the tie rule
    flat = np.argmax(np.transpose(energy, (1, 2, 0)))
    m, tau, si = np.unravel_index(flat, (c.shape[1], c.shape[2], c.shape[0]))
    return int(si), int(m), int(tau)


def estimate_epicenter(c, stations: StationTable, rho: float = 0.5,
                       scales: Optional[Sequence[float]] = None) -> EventEstimate:
    """Energy-weighted spherical mean of the stations hosting the strongest coefficients.

    Coefficients with ``|c|**2 >= rho * max |c|**2`` are kept; their energies
    are summed per vertex and used as weights.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 3:
        raise ParameterError(f"coefficients must be (S, N, T), got shape {c.shape}")
    if c.shape[1] != len(stations):
        raise ParameterError(f"coefficients cover {c.shape[1]} vertices, stations {len(stations)}")
    if not 0 < rho <= 1:
        raise ParameterError(f"rho must be in (0, 1], got {rho}")
    energy = c * c
    peak = float(energy.max(initial=0.0))
    if not peak > 0:
        raise NoEventError("no event detected: all coefficients are zero")

    si, m, tau = dominant_index(c)
    if rho == 1.0:
        per_vertex = np.zeros(c.shape[1])
        per_vertex[m] = 1.0
    else:
        per_vertex = np.where(energy >= rho * peak, energy, 0.0).sum(axis=(0, 2))
    verts = np.flatnonzero(per_vertex > 0)
    w = per_vertex[verts] / per_vertex[verts].sum()
    if verts.size == 1:
        lat, lon = stations.coords(int(verts[0]))
    else:
        lat, lon = spherical_mean(stations.lat[verts], stations.lon[verts], w)

    contributors = tuple((int(v), float(x)) for v, x in zip(verts, w))
    return EventEstimate(
        est_lat=lat, est_lon=lon, contributors=contributors, dominant_vertex=m,
        onset_tau=tau, scale_index=si,
        dominant_scale=None if scales is None else float(scales[si]),
        amplitude=float(c[si, m, tau]))


def localization_error_km(est: EventEstimate, truth: Tuple[float, float]) -> float:
    return haversine_km((est.est_lat, est.est_lon), truth)


def mean_nearest_neighbor_km(stations: StationTable) -> float:
    """Average distance from each station to its closest other station."""
    from .graph_core import knn_distances, pairwise_distances_km

    return float(knn_distances(pairwise_distances_km(stations), 1).mean())
