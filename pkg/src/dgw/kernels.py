"""Spectral kernels of dynamic processes on graphs.

All kernels take the scale ``s``, a Laplacian eigenvalue ``lam`` and an
integer time step ``t``, and broadcast over array arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StabilityError

# s*lam within this distance outside [0, 4] is treated as round-off and clamped
CLAMP_TOL = 1e-9

KINDS = ("heat", "wave", "damped_wave")


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "damped_wave"
    s: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"kernel kind must be one of {KINDS}, got {self.kind!r}")
        if not np.isfinite(self.s) or self.s < 0:
            raise ParameterError(f"scale must be >= 0, got {self.s}")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ParameterError(f"damping must be >= 0, got {self.beta}")


def _scaled_eigenvalue(s, lam) -> np.ndarray:
    """Return ``s*lam`` clamped into [0, 4], raising outside the round-off band."""
    x = np.asarray(s, dtype=float) * np.asarray(lam, dtype=float)
    if np.any(x > 4.0 + CLAMP_TOL):
        worst = float(np.max(x))
        raise StabilityError(
            f"s*lambda = {worst:.12g} exceeds 4; stability requires s < 4/lambda_max")
    if np.any(x < -CLAMP_TOL):
        raise ParameterError(f"s*lambda must be >= 0, got {float(np.min(x)):.12g}")
    return np.clip(x, 0.0, 4.0)


def wave_angle(s, lam) -> np.ndarray:
    """Angular frequency ``arccos(1 - s*lam/2)`` of the discrete wave recurrence."""
    return np.arccos(np.clip(1.0 - _scaled_eigenvalue(s, lam) / 2.0, -1.0, 1.0))


def heat_kernel(s, lam, t):
    """``exp(-s * lam * t)``."""
    s, lam, t = np.asarray(s, float), np.asarray(lam, float), np.asarray(t, float)
    if np.any(s < 0) or np.any(t < 0) or np.any(lam < -CLAMP_TOL):
        raise ParameterError("heat kernel requires s, lambda, t >= 0")
    out = np.exp(-s * np.maximum(lam, 0.0) * t)
    return out if out.ndim else float(out)


def wave_kernel(s, lam, t):
    """``cos(t * arccos(1 - s*lam/2))``, the zero-initial-velocity wave solution."""
    out = np.cos(np.asarray(t, dtype=float) * wave_angle(s, lam))
    return out if out.ndim else float(out)


def damped_wave_kernel(spec: KernelSpec, lam, t):
    """Causal damped wave ``H(t) exp(-beta t) cos(t arccos(1 - s lam / 2))`` with ``H(0)=1``."""
    t = np.asarray(t, dtype=float)
    theta = wave_angle(spec.s, lam)
    tt = np.maximum(t, 0.0)
    out = np.where(t >= 0, np.exp(-spec.beta * tt) * np.cos(tt * theta), 0.0)
    return out if out.ndim else float(out)


def evaluate(spec: KernelSpec, lam, t):
    if spec.kind == "heat":
        return heat_kernel(spec.s, lam, t)
    if spec.kind == "wave":
        return wave_kernel(spec.s, lam, t)
    return damped_wave_kernel(spec, lam, t)


def damped_wave_profiles(s: float, beta: float, lam, n_steps: int) -> np.ndarray:
    """Time profiles ``k_l(t)``, ``t = 0..T-1``, one row per eigenvalue."""
    theta = wave_angle(s, np.atleast_1d(lam))
    t = np.arange(n_steps, dtype=float)
    return np.exp(-beta * t)[None, :] * np.cos(theta[:, None] * t[None, :])


def closed_form_spectrum(spec: KernelSpec, lam, omega) -> np.ndarray:
    """Infinite-horizon sum ``sum_{t>=0} exp(-beta t) cos(t theta) exp(-1j omega t)``.

    Equals ``(1 - z cos(theta)) / (1 - 2 z cos(theta) + z**2)`` with
    ``z = exp(-beta - 1j omega)``; converges for ``beta > 0``.
    """
    theta = wave_angle(spec.s, lam)
    z = np.exp(-spec.beta - 1j * np.asarray(omega, dtype=float))
    c = np.cos(theta)
    return (1.0 - z * c) / (1.0 - 2.0 * z * c + z * z)


def kernel_time_spectrum(spec: KernelSpec, lam: float, n_steps: int, *,
                         normalized: bool = True, closed_form: bool = False) -> np.ndarray:
    """DFT over ``k = 0..T-1`` of the damped-wave time profile at eigenvalue ``lam``.

    By default this is the unitary DFT of the profile truncated to
    ``t = 0..T-1``. ``closed_form=True`` instead evaluates the infinite-horizon
    geometric sum at the angular frequencies ``2 pi k / T``; the truncation
    gap between the two is of order ``exp(-beta T)``. ``normalized=False``
    drops the ``1/sqrt(T)`` factor, which is the convention the frame uses.
    """
    if spec.kind != "damped_wave":
        raise ParameterError("kernel_time_spectrum is defined for damped_wave kernels")
    if n_steps < 2:
        raise ParameterError(f"T must be >= 2, got {n_steps}")
    if closed_form:
        omega = 2.0 * np.pi * np.arange(n_steps) / n_steps
        out = closed_form_spectrum(spec, lam, omega)
    else:
        out = np.fft.fft(damped_wave_profiles(spec.s, spec.beta, lam, n_steps)[0])
    return out / np.sqrt(n_steps) if normalized else out


def corollary_lower_bound(beta: float) -> float:
    """Lower bound ``((1 - exp(-beta)) / 4)**2`` on each squared multiplier."""
    return ((1.0 - np.exp(-beta)) / 4.0) ** 2


def truncation_tolerance(beta: float, n_steps: int) -> float:
    """Slack on :func:`corollary_lower_bound` for profiles truncated to ``T`` steps.

    The neglected tail has magnitude at most ``exp(-beta T) / (1 - exp(-beta))``,
    so each truncated squared multiplier is at least ``(sqrt(bound) - tail)**2``.
    """
    if beta <= 0:
        return 0.0
    root = (1.0 - np.exp(-beta)) / 4.0
    tail = np.exp(-beta * n_steps) / (1.0 - np.exp(-beta))
    return float(root ** 2 - max(root - tail, 0.0) ** 2)
