"""Sensor graphs: k-NN construction on the sphere, Laplacian, spectral basis."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DisconnectedGraphWarning, NumericError, ParameterError

EARTH_RADIUS_KM = 6371.0

# relative tolerance used to decide that two k-NN candidate distances tie
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class StationTable:
    """Station identifiers with geographic coordinates in decimal degrees."""

    ids: Tuple[str, ...]
    lat: np.ndarray
    lon: np.ndarray

    def __post_init__(self):
        lat = np.asarray(self.lat, dtype=float).reshape(-1)
        lon = np.asarray(self.lon, dtype=float).reshape(-1)
        ids = tuple(str(i) for i in self.ids)
        if not (len(ids) == lat.size == lon.size):
            raise ParameterError("ids, lat and lon must have equal length")
        if len(ids) < 2:
            raise ParameterError("a station table needs at least 2 entries")
        if len(set(ids)) != len(ids):
            raise ParameterError("station ids must be unique")
        if not (np.all(np.isfinite(lat)) and np.all(np.isfinite(lon))):
            raise ParameterError("coordinates must be finite")
        if np.any(np.abs(lat) > 90.0):
            raise ParameterError("latitude outside [-90, 90]")
        if np.any(np.abs(lon) > 180.0):
            raise ParameterError("longitude outside [-180, 180]")
        lat.setflags(write=False)
        lon.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)

    def __len__(self) -> int:
        return len(self.ids)

    @classmethod
    def from_records(cls, records: Sequence[Tuple[str, float, float]]) -> "StationTable":
        ids, lat, lon = zip(*records) if records else ((), (), ())
        return cls(ids, np.array(lat, dtype=float), np.array(lon, dtype=float))

    def coords(self, i: int) -> Tuple[float, float]:
        return float(self.lat[i]), float(self.lon[i])

    def take(self, order: Sequence[int]) -> "StationTable":
        order = list(order)
        return StationTable(tuple(self.ids[i] for i in order), self.lat[order], self.lon[order])


@dataclass(frozen=True)
class SpectralBasis:
    """Eigenpairs of a graph Laplacian, eigenvalues ascending.

    Column ``l`` of ``eigenvectors`` is the eigenvector for ``eigenvalues[l]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def n_zero_modes(self, tol: float = 1e-10) -> int:
        scale = max(1.0, abs(self.lambda_max))
        return int(np.sum(np.abs(self.eigenvalues) <= tol * scale))


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted undirected graph with its combinatorial Laplacian ``D - W``.

    ``stations`` is carried along when the graph was built from coordinates,
    so that coefficient locations can be mapped back to the sphere.
    """

    weights: np.ndarray
    stations: Optional[StationTable] = field(default=None)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ParameterError(f"weights must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ParameterError("weights must be finite")
        if np.any(w < 0):
            raise ParameterError("weights must be nonnegative")
        if not np.allclose(w, w.T, rtol=0.0, atol=1e-12):
            raise ParameterError("weights must be symmetric")
        w = 0.5 * (w + w.T)
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.stations is not None and len(self.stations) != w.shape[0]:
            raise ParameterError("station table does not match the number of vertices")

    @property
    def n_vertices(self) -> int:
        return self.weights.shape[0]

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @cached_property
    def laplacian(self) -> np.ndarray:
        lap = np.diag(self.degrees) - self.weights
        lap.setflags(write=False)
        return lap

    @cached_property
    def basis(self) -> SpectralBasis:
        return eigendecompose(self)

    def edges(self):
        """Yield ``(i, j, w)`` for every edge with ``i < j``."""
        iu, ju = np.nonzero(np.triu(self.weights, k=1))
        for i, j in zip(iu, ju):
            yield int(i), int(j), float(self.weights[i, j])

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.weights[i] > 0)


def haversine_km(a, b) -> Union[float, np.ndarray]:
    """Great-circle distance in km between ``a=(lat, lon)`` and ``b=(lat, lon)``.

    Broadcasts over array-valued coordinates.
    """
    lat1, lon1 = np.radians(a[0]), np.radians(a[1])
    lat2, lon2 = np.radians(b[0]), np.radians(b[1])
    h = (np.sin((lat2 - lat1) / 2.0) ** 2
         + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2.0) ** 2)
    d = 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    return float(d) if np.ndim(d) == 0 else d


def pairwise_distances_km(stations: StationTable) -> np.ndarray:
    lat, lon = stations.lat, stations.lon
    d = haversine_km((lat[:, None], lon[:, None]), (lat[None, :], lon[None, :]))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def knn_distances(dist: np.ndarray, k: int) -> np.ndarray:
    """Distances to the k nearest other vertices, one row per vertex, sorted."""
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    return np.sort(d, axis=1)[:, :k]


def build_knn_graph(stations: StationTable, k: int = 5,
                    sigma: Union[float, str, None] = "auto") -> Graph:
    """Gaussian-weighted k-nearest-neighbour graph on great-circle distance.

    Each vertex selects its ``k`` nearest stations (candidates tied with the
    k-th distance are all kept) and an edge exists if either endpoint selects
    it. Weights are ``exp(-d**2 / sigma**2)``; ``sigma="auto"`` uses the mean
    k-NN distance over all vertices.
    """
    n = len(stations)
    if not isinstance(k, (int, np.integer)) or k < 1 or k >= n:
        raise ParameterError(f"k must satisfy 1 <= k < N={n}, got {k}")
    dist = pairwise_distances_km(stations)
    nn = knn_distances(dist, k)

    if sigma is None or (isinstance(sigma, str) and sigma == "auto"):
        sigma = float(nn.mean())
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma < 0:
        raise ParameterError(f"sigma must be a nonnegative finite distance, got {sigma}")

    kth = nn[:, -1:]
    d_off = dist + np.diag(np.full(n, np.inf))
    selected = d_off <= kth * (1.0 + _TIE_RTOL) + 1e-12
    adj = selected | selected.T

    if sigma > 0:
        w = np.exp(-(dist / sigma) ** 2)
    else:
        # every selected distance is zero; all such edges clamp to unit weight
        w = np.ones_like(dist)
    w = np.where(adj, w, 0.0)
    np.fill_diagonal(w, 0.0)
    return Graph(w, stations=stations)


def eigendecompose(g: Graph) -> SpectralBasis:
    """Full symmetric eigendecomposition of the Laplacian, ascending order."""
    try:
        lam, u = np.linalg.eigh(g.laplacian)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"symmetric eigensolver failed on a {g.n_vertices}x{g.n_vertices} Laplacian "
            f"(trace={np.trace(g.laplacian):.6g}): {exc}") from exc
    order = np.argsort(lam, kind="stable")
    lam, u = lam[order], u[:, order]
    # fix the sign of each eigenvector for determinism across LAPACK builds
    pivot = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    u = u * signs
    lam.setflags(write=False)
    u.setflags(write=False)
    basis = SpectralBasis(lam, u)
    zeros = basis.n_zero_modes()
    if zeros > 1:
        warnings.warn(f"graph is disconnected: {zeros} zero Laplacian eigenvalues",
                      DisconnectedGraphWarning, stacklevel=2)
    return basis


def is_connected(g: Graph) -> bool:
    from scipy.sparse.csgraph import connected_components

    n_comp, _ = connected_components(g.weights > 0, directed=False)
    return n_comp == 1
