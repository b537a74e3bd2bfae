"""Synthetic propagating events and noisy observations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NoiseWarning, ParameterError, StabilityError
from .graph_core import Graph, StationTable
from .time_vertex import as_signal

METHODS = ("atom", "leapfrog")


@dataclass(frozen=True)
class EventSpec:
    """A point source: vertex ``m``, onset ``tau``, wave scale ``s``."""

    m: int
    tau: int
    s: float
    amplitude: float = 1.0
    beta: float = 0.0
    method: str = "atom"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.s < 0 or self.beta < 0:
            raise ParameterError("s and beta must be >= 0")

    @classmethod
    def from_dict(cls, d: dict) -> "EventSpec":
        known = {k: d[k] for k in ("m", "tau", "s", "amplitude", "beta", "method") if k in d}
        return cls(**known)


def _check_event(g: Graph, spec: EventSpec, n_steps: int) -> None:
    if not 0 <= spec.m < g.n_vertices:
        raise ParameterError(f"source vertex {spec.m} out of range [0, {g.n_vertices})")
    if not 0 <= spec.tau < n_steps:
        raise ParameterError(f"onset {spec.tau} out of range [0, {n_steps})")
    lam_max = max(g.basis.lambda_max, 0.0)
    if spec.s * lam_max >= 4.0:
        raise StabilityError(
            f"scale s={spec.s:.12g} violates s < 4/lambda_max = {4.0 / lam_max:.12g}")


def synth_event(g: Graph, spec: EventSpec, n_steps: int, method: str | None = None) -> np.ndarray:
    """Render an event as an ``(N, T)`` signal, zero before the onset.

    ``atom`` evaluates the damped wave kernel on the Laplacian spectrum.
    ``leapfrog`` time-steps ``x[t+1] = 2 x[t] - x[t-1] - s L x[t]`` from a unit
    impulse at ``m`` with zero initial velocity, discretized by the ghost step
    ``x[tau-1] = x[tau+1]``, then applies the ``exp(-beta (t - tau))`` envelope.
    The two agree up to round-off.
    """
    method = method or spec.method
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}, got {method!r}")
    _check_event(g, spec, n_steps)
    n = g.n_vertices
    x = np.zeros((n, n_steps))
    lags = np.arange(n_steps - spec.tau)

    if method == "atom":
        basis = g.basis
        u = basis.eigenvectors
        prof = kernels.damped_wave_profiles(spec.s, 0.0, basis.eigenvalues, lags.size)
        x[:, spec.tau:] = (u * u[spec.m][None, :]) @ prof
    else:
        lap = g.laplacian
        cur = np.zeros(n)
        cur[spec.m] = 1.0
        x[:, spec.tau] = cur
        if lags.size > 1:
            nxt = cur - 0.5 * spec.s * (lap @ cur)
            x[:, spec.tau + 1] = nxt
            prev, cur = cur, nxt
            for t in range(spec.tau + 2, n_steps):
                nxt = 2.0 * cur - prev - spec.s * (lap @ cur)
                x[:, t] = nxt
                prev, cur = cur, nxt

    x[:, spec.tau:] *= spec.amplitude * np.exp(-spec.beta * lags)[None, :]
    return x


def make_noise(x, snr_db: float, seed: int | None = None) -> np.ndarray:
    """White Gaussian noise whose power gives each row exactly ``snr_db``.

    The drawn noise row is rescaled to the target power, so the realized
    per-row SNR equals the request. All-zero rows receive no noise.
    """
    x = as_signal(x)
    if not np.any(x):
        raise ParameterError("cannot set an SNR on an all-zero signal")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(x.shape)
    p_sig = np.mean(x * x, axis=1)
    p_noise = np.mean(noise * noise, axis=1)
    zero_rows = p_sig == 0
    if np.any(zero_rows):
        warnings.warn(f"{int(zero_rows.sum())} all-zero row(s) left noiseless (SNR undefined)",
                      NoiseWarning, stacklevel=2)
    target = p_sig / 10.0 ** (snr_db / 10.0)
    gain = np.where(zero_rows | (p_noise == 0), 0.0, np.sqrt(target / np.where(p_noise > 0, p_noise, 1.0)))
    return noise * gain[:, None]


def add_noise(x, snr_db: float, seed: int | None = None) -> np.ndarray:
    """``x + make_noise(x, snr_db, seed)``."""
    x = as_signal(x)
    return x + make_noise(x, snr_db, seed)


def measured_snr_db(clean, noisy) -> np.ndarray:
    clean = np.asarray(clean, float)
    noise = np.asarray(noisy, float) - clean
    return 10.0 * np.log10(np.mean(clean ** 2, axis=1) / np.mean(noise ** 2, axis=1))


def random_geometric_graph(n: int, radius: float = 1.0, seed: int | None = None,
                           origin=(45.0, 7.0)) -> StationTable:
    """``n`` stations uniform in a ``radius`` x ``radius`` degree box at mid-latitude.

    ``origin`` is the box's south-west corner. The name follows the usual
    random geometric graph fixture; connectivity comes from the k-NN builder.
    """
    if n < 2:
        raise ParameterError(f"need at least 2 stations, got {n}")
    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2)) * radius
    ids = tuple(f"S{i:03d}" for i in range(n))
    return StationTable(ids, origin[0] + pts[:, 0], origin[1] + pts[:, 1])
