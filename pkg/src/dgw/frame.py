"""Dynamic graph wavelet frame built from causal damped wave atoms.

Each atom is a damped wave started by a unit impulse at vertex ``m`` and
time ``tau``. The frame stores, per scale, the joint spectral multiplier

    M_s(l, k) = sum_{t=0}^{T-1} exp(-beta t) cos(t theta_{s,l}) exp(-2j pi k t / T)

with ``theta_{s,l} = arccos(1 - s lam_l / 2)``. Analysis and synthesis are
diagonal in the joint spectral domain, so time is treated as periodic: atoms
launched near the end of the window wrap around. The damping makes the
wrapped part negligible once ``exp(-beta T)`` is small.

Coefficient tensors are ``(S, N, T)`` arrays indexed ``(scale, vertex, tau)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import FrameWarning, NumericError, ParameterError, StabilityError
from .graph_core import SpectralBasis
from .time_vertex import as_signal

# largest admissible exp(-beta T) before periodic wrap-around is reported
WRAP_WARN_LEVEL = 1e-3


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float

    @property
    def condition(self) -> float:
        return self.B / self.A if self.A > 0 else np.inf


def scale_grid(num_scales: int = 10, s_max: float = 2.0, lambda_max: Optional[float] = None,
               s_min: Optional[float] = None, margin: float = 3.99) -> np.ndarray:
    """Linearly spaced scales on ``(0, s_max]``, zero excluded.

    When ``lambda_max`` is given the top scale is clamped to ``margin / lambda_max``
    so that every scale is stable. ``s_min`` replaces the implicit first point
    ``s_max / num_scales``.
    """
    if num_scales < 1:
        raise ParameterError(f"num_scales must be >= 1, got {num_scales}")
    top = float(s_max)
    if lambda_max is not None and lambda_max > 0:
        top = min(top, margin / lambda_max)
    if top <= 0:
        raise ParameterError(f"s_max must be positive, got {top}")
    if s_min is None:
        return np.linspace(0.0, top, num_scales + 1)[1:]
    if not 0 < s_min <= top:
        raise ParameterError(f"need 0 < s_min <= s_max, got s_min={s_min}, s_max={top}")
    return np.linspace(s_min, top, num_scales)


class DGWFrame:
    """Frame of causal damped wave atoms over a fixed graph and time horizon.

    Use :func:`build_frame` to construct one; instances are read-only.
    """

    def __init__(self, basis: SpectralBasis, n_steps: int, scales: Sequence[float], beta: float):
        scales = np.asarray(scales, dtype=float).reshape(-1)
        if scales.size == 0:
            raise ParameterError("scale list is empty")
        if n_steps < 2:
            raise ParameterError(f"T must be >= 2, got {n_steps}")
        if not np.isfinite(beta) or beta < 0:
            raise ParameterError(f"beta must be >= 0, got {beta}")
        if np.any(~np.isfinite(scales)) or np.any(scales < 0):
            raise ParameterError("scales must be finite and nonnegative")
        lam_max = max(basis.lambda_max, 0.0)
        for i, s in enumerate(scales):
            if s * lam_max >= 4.0:
                raise StabilityError(
                    f"scale #{i} s={s:.12g} violates s < 4/lambda_max = {4.0 / lam_max:.12g}")
        if beta <= 0:
            warnings.warn("beta <= 0: frame not guaranteed (the lower bound needs beta > 0)",
                          FrameWarning, stacklevel=2)
        elif np.exp(-beta * n_steps) > WRAP_WARN_LEVEL:
            warnings.warn(
                f"exp(-beta*T) = {np.exp(-beta * n_steps):.3g} > {WRAP_WARN_LEVEL}: atoms do not "
                "decay within the window and periodic wrap-around is not negligible",
                FrameWarning, stacklevel=2)

        self.basis = basis
        self.n_steps = int(n_steps)
        self.scales = scales
        self.beta = float(beta)
        lam = basis.eigenvalues
        profiles = np.stack([kernels.damped_wave_profiles(s, beta, lam, n_steps) for s in scales])
        self.profiles = profiles
        self.multipliers = np.fft.fft(profiles, axis=-1)
        # operators run on the half spectrum; real profiles make it sufficient
        self._half = np.fft.rfft(profiles, axis=-1)
        self._check_hermitian()
        self._power = np.sum(np.abs(self.multipliers) ** 2, axis=0)
        self._power_half = np.sum(np.abs(self._half) ** 2, axis=0)
        for arr in (self.scales, self.profiles, self.multipliers, self._half,
                    self._power, self._power_half):
            arr.setflags(write=False)

    def _check_hermitian(self):
        m = self.multipliers
        mirrored = np.conj(m[..., (-np.arange(self.n_steps)) % self.n_steps])
        resid = float(np.max(np.abs(m - mirrored)))
        if resid > 1e-8 * max(1.0, float(np.max(np.abs(m)))):
            raise NumericError(f"frame multipliers are not Hermitian in time (residue {resid:.3g})")

    @property
    def n_vertices(self) -> int:
        return self.basis.n_vertices

    @property
    def n_scales(self) -> int:
        return self.scales.size

    @property
    def coefficient_shape(self):
        return (self.n_scales, self.n_vertices, self.n_steps)

    @property
    def power(self) -> np.ndarray:
        """``sum_s |M_s(l, k)|**2`` on the joint spectral grid."""
        return self._power

    def __repr__(self):
        return (f"DGWFrame(N={self.n_vertices}, T={self.n_steps}, "
                f"scales={np.array2string(self.scales, precision=4)}, beta={self.beta})")

    def _vertex_rfft(self, x: np.ndarray) -> np.ndarray:
        return np.fft.rfft(self.basis.eigenvectors.T @ x, axis=-1)

    def _vertex_irfft(self, xh: np.ndarray) -> np.ndarray:
        return self.basis.eigenvectors @ np.fft.irfft(xh, n=self.n_steps, axis=-1)

    def analyze(self, x) -> np.ndarray:
        """Inner products of ``x`` with every atom, shape ``(S, N, T)``."""
        x = as_signal(x, self.n_vertices, self.n_steps)
        return self._vertex_irfft(np.conj(self._half) * self._vertex_rfft(x)[None])

    def synthesize(self, c) -> np.ndarray:
        """Adjoint of :meth:`analyze`: ``sum`` of atoms weighted by ``c``."""
        c = self.check_coefficients(c)
        return self._vertex_irfft(np.sum(self._half * self._vertex_rfft(c), axis=0))

    def gram_apply(self, x) -> np.ndarray:
        """``synthesize(analyze(x))`` evaluated as one spectral multiplication."""
        x = as_signal(x, self.n_vertices, self.n_steps)
        return self._vertex_irfft(self._power_half * self._vertex_rfft(x))

    def check_coefficients(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape != self.coefficient_shape:
            raise ParameterError(
                f"coefficient tensor has shape {c.shape}, expected {self.coefficient_shape}")
        if not np.all(np.isfinite(c)):
            raise ParameterError("coefficient tensor has non-finite entries")
        return c

    def atom(self, m: int, tau: int, s_index: int, *, wrap: bool = False) -> np.ndarray:
        """Atom launched at vertex ``m``, time ``tau`` with scale ``scales[s_index]``.

        By default the atom is causal and truncated at the end of the window
        (zero for ``t < tau``). ``wrap=True`` returns the periodic atom that the
        analysis and synthesis operators actually use.
        """
        n, T = self.n_vertices, self.n_steps
        for name, v, hi in (("m", m, n), ("tau", tau, T), ("s_index", s_index, self.n_scales)):
            if not 0 <= v < hi:
                raise ParameterError(f"{name}={v} out of range [0, {hi})")
        u = self.basis.eigenvectors
        prof = self.profiles[s_index]                    # (N_l, T) indexed by lag
        lag = np.arange(T) - tau
        if wrap:
            k = prof[:, lag % T]
        else:
            k = np.where(lag >= 0, prof[:, np.maximum(lag, 0)], 0.0)
        return (u * u[m][None, :]) @ k

    def bounds(self) -> FrameBounds:
        """Optimal frame bounds: extremes of ``sum_s |M_s|**2`` over the spectral grid."""
        return FrameBounds(float(self._power.min()), float(self._power.max()))

    def to_dense(self) -> np.ndarray:
        """Materialize the analysis operator as an ``(S*N*T, N*T)`` matrix.

        Row ``(s, m, tau)`` is the flattened periodic atom. Intended for small
        verification problems only.
        """
        S, n, T = self.coefficient_shape
        rows = np.empty((S * n * T, n * T))
        r = 0
        for si in range(S):
            for m in range(n):
                for tau in range(T):
                    rows[r] = self.atom(m, tau, si, wrap=True).ravel()
                    r += 1
        return rows


def build_frame(basis: SpectralBasis, n_steps: int, scales: Sequence[float],
                beta: float) -> DGWFrame:
    """Build a :class:`DGWFrame`; see the class for the atom definition."""
    return DGWFrame(basis, n_steps, scales, beta)


def frame_bounds(frame: DGWFrame) -> FrameBounds:
    return frame.bounds()
