"""Time-vertex signals: ring-graph time Laplacian and joint Fourier transform.

Signals are ``(N, T)`` arrays, one row per vertex. Time is periodic. The time
Laplacian is the raw second difference ``x[t+1] - 2 x[t] + x[t-1]`` (negative
semi-definite), and the DFT along time uses phase ``exp(-2j*pi*k*t/T)`` with
unitary ``1/sqrt(T)`` scaling in both directions.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .graph_core import Graph, SpectralBasis


def as_signal(x, n_vertices: int | None = None, n_steps: int | None = None) -> np.ndarray:
    """Validate and return a real ``(N, T)`` float array."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or min(x.shape) < 1:
        raise ParameterError(f"time-vertex signal must be a non-empty 2-D array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ParameterError("time-vertex signal has non-finite entries")
    if n_vertices is not None and x.shape[0] != n_vertices:
        raise ParameterError(f"signal has {x.shape[0]} vertices, expected {n_vertices}")
    if n_steps is not None and x.shape[1] != n_steps:
        raise ParameterError(f"signal has {x.shape[1]} time steps, expected {n_steps}")
    return x


def ring_laplacian_apply(x) -> np.ndarray:
    """Periodic second temporal difference of each row."""
    x = as_signal(x)
    if x.shape[1] < 3:
        raise ParameterError(f"ring Laplacian needs T >= 3, got T={x.shape[1]}")
    return np.roll(x, -1, axis=1) - 2.0 * x + np.roll(x, 1, axis=1)


def ring_laplacian_matrix(n_steps: int) -> np.ndarray:
    """Dense ``T x T`` circulant matrix ``L_T`` acting on the right: ``X @ L_T``."""
    if n_steps < 3:
        raise ParameterError(f"ring Laplacian needs T >= 3, got T={n_steps}")
    eye = np.eye(n_steps)
    return np.roll(eye, 1, axis=1) - 2.0 * eye + np.roll(eye, -1, axis=1)


def ring_eigenvalues(n_steps: int) -> np.ndarray:
    """Eigenvalues ``2 (cos(2 pi k / T) - 1)`` of the periodic second difference."""
    if n_steps < 1:
        raise ParameterError(f"T must be >= 1, got {n_steps}")
    k = np.arange(n_steps)
    return 2.0 * (np.cos(2.0 * np.pi * k / n_steps) - 1.0)


def joint_laplacian_apply(x, g: Graph) -> np.ndarray:
    """``L_G X + X L_T``."""
    x = as_signal(x, n_vertices=g.n_vertices)
    return g.laplacian @ x + ring_laplacian_apply(x)


def _check_basis(x: np.ndarray, basis: SpectralBasis) -> None:
    if x.shape[-2] != basis.n_vertices:
        raise ParameterError(
            f"signal has {x.shape[-2]} vertices but basis has {basis.n_vertices}")


def jft(x, basis: SpectralBasis) -> np.ndarray:
    """Joint Fourier transform: GFT along vertices, unitary DFT along time.

    Accepts ``(N, T)`` or a stack ``(..., N, T)``; returns complex of the same shape.
    """
    x = np.asarray(x)
    _check_basis(x, basis)
    return np.fft.fft(basis.eigenvectors.T @ x, axis=-1, norm="ortho")


def ijft(s, basis: SpectralBasis, *, real: bool = True, imag_tol: float = 1e-10) -> np.ndarray:
    """Inverse joint Fourier transform.

    With ``real=True`` the imaginary residue is checked against ``imag_tol``
    (relative to the output scale) and discarded.
    """
    s = np.asarray(s)
    _check_basis(s, basis)
    out = basis.eigenvectors @ np.fft.ifft(s, axis=-1, norm="ortho")
    if not real:
        return out
    scale = max(1.0, float(np.max(np.abs(out.real), initial=0.0)))
    resid = float(np.max(np.abs(out.imag), initial=0.0))
    if resid > imag_tol * scale:
        raise ParameterError(
            f"spectrum is not Hermitian-symmetric in time: imaginary residue {resid:.3g}")
    return out.real.copy()
