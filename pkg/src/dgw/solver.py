"""FISTA for synthesis-sparse coding over a DGW frame.

Solves

    min_C  ||synthesize(C) - Y||^2 + gamma * ||C||_1

with the accelerated proximal gradient method of Beck and Teboulle. The
gradient of the quadratic term is ``2 analyze(synthesize(C) - Y)`` and is
Lipschitz with constant ``2 B`` where ``B`` is the upper frame bound, so the
default step is ``1 / (2 B)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ParameterError, SolverDivergenceError
from .frame import DGWFrame
from .time_vertex import as_signal

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """FISTA settings.

    Attributes:
        gamma: l1 weight. Must be positive.
        max_iters: iteration cap ``J``.
        epsilon: relative tolerance on successive extrapolated iterates.
        delta: guard added to the denominator of the stopping rule.
        step: explicit step size; ``None`` selects ``1 / (2 B)``.
    """

    gamma: float = 1e-2
    max_iters: int = 2000
    epsilon: float = 1e-12
    delta: float = 1e-12
    step: Optional[float] = None

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ParameterError(f"gamma must be > 0, got {self.gamma}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be > 0, got {self.epsilon}")
        if self.delta < 0:
            raise ParameterError(f"delta must be >= 0, got {self.delta}")
        if self.step is not None and not self.step > 0:
            raise ParameterError(f"step must be > 0, got {self.step}")


@dataclass
class SolverResult:
    coefficients: np.ndarray
    objective_history: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    kkt_residual: float = 0.0
    objective: float = 0.0

    def diagnostics(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "objective_history": list(self.objective_history),
            "kkt_residual": self.kkt_residual,
        }


def soft_threshold(c, threshold: float) -> np.ndarray:
    """Proximal operator of ``threshold * ||.||_1``: ``sign(c) max(|c| - threshold, 0)``."""
    if threshold < 0:
        raise ParameterError(f"threshold must be >= 0, got {threshold}")
    c = np.asarray(c, dtype=float)
    return np.sign(c) * np.maximum(np.abs(c) - threshold, 0.0)


def gradient_g(frame: DGWFrame, c, y) -> np.ndarray:
    """Gradient ``2 analyze(synthesize(c) - y)`` of the data-fidelity term."""
    y = as_signal(y, frame.n_vertices, frame.n_steps)
    return 2.0 * frame.analyze(frame.synthesize(c) - y)


def objective(frame: DGWFrame, c, y, gamma: float) -> float:
    r = frame.synthesize(c) - y
    return float(np.sum(r * r) + gamma * np.sum(np.abs(c)))


def gamma_max(frame: DGWFrame, y) -> float:
    """Smallest ``gamma`` for which ``C = 0`` is a minimizer."""
    return 2.0 * float(np.max(np.abs(frame.analyze(y)), initial=0.0))


def kkt_residual(grad: np.ndarray, c: np.ndarray, gamma: float) -> float:
    """Sup-norm violation of ``0 in grad + gamma * subdiff ||c||_1``."""
    nz = c != 0
    on_support = np.abs(grad[nz] + gamma * np.sign(c[nz]))
    off_support = np.maximum(np.abs(grad[~nz]) - gamma, 0.0)
    return float(max(np.max(on_support, initial=0.0), np.max(off_support, initial=0.0)))


def fista(frame: DGWFrame, y, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """Minimize ``||synthesize(C) - y||^2 + gamma ||C||_1`` with FISTA.

    Starts from ``analyze(y)``, uses no momentum restart, and returns the
    lowest-objective iterate seen. If ``gamma >= gamma_max(frame, y)`` the zero
    tensor is optimal and is returned without iterating.
    """
    y = as_signal(y, frame.n_vertices, frame.n_steps)
    gamma = cfg.gamma
    shape = frame.coefficient_shape
    y_energy = float(np.sum(y * y))

    a_y = frame.analyze(y)
    if 2.0 * float(np.max(np.abs(a_y), initial=0.0)) <= gamma:
        zero = np.zeros(shape)
        return SolverResult(zero, [y_energy], 0, True,
                            kkt_residual(-2.0 * a_y, zero, gamma), y_energy)

    step = cfg.step if cfg.step is not None else 1.0 / (2.0 * frame.bounds().B)
    thresh = step * gamma

    # synthesize is linear, so the extrapolated point's synthesis is tracked
    # alongside the iterates instead of being recomputed
    c = a_y.copy()                      # extrapolated point
    xc = frame.synthesize(c)
    u_prev, xu_prev = c, xc
    t = 1.0
    best_u, best_obj = np.zeros(shape), y_energy
    history: List[float] = []
    converged = False
    j = 0
    for j in range(1, cfg.max_iters + 1):
        grad = 2.0 * frame.analyze(xc - y)
        u = soft_threshold(c - step * grad, thresh)
        xu = frame.synthesize(u)
        r = xu - y
        with np.errstate(over="ignore", invalid="ignore"):
            obj = float(np.sum(r * r) + gamma * np.sum(np.abs(u)))
        if not np.isfinite(obj):
            raise SolverDivergenceError(
                f"objective became non-finite at iteration {j}; step size {step:.3g} "
                f"may exceed 1/(2B)")
        history.append(obj)
        if obj < best_obj:
            best_u, best_obj = u, obj

        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        mom = (t - 1.0) / t_next
        c_next = u + mom * (u - u_prev)
        change = float(np.sum((c_next - c) ** 2)) / (float(np.sum(c * c)) + cfg.delta)
        c, xc = c_next, xu + mom * (xu - xu_prev)
        u_prev, xu_prev, t = u, xu, t_next
        if change < cfg.epsilon:
            converged = True
            break

    kkt = kkt_residual(gradient_g(frame, best_u, y), best_u, gamma)
    log.debug("fista: %d iterations, objective %.6g, kkt %.3g", j, best_obj, kkt)
    return SolverResult(best_u, history, j, converged, kkt, best_obj)
