"""Heat flow on the circle, solved two ways, and the theta identity.

The semigroup trace computed through the eigenbasis gives the sum of
exp(-4 pi^2 k^2 t); computed through the periodized Gaussian kernel it
gives the dual sum — equating them is the transformation formula
theta(s) = theta(1/s)/sqrt(s) with s = 4 pi t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fileio import write_csv
from .kernels import apply_kernel, diagonal_trace, heat_circle
from .quadrature import MIDPOINT, Grid, _check_sampled
from .sturm import PERIODIC_BASIS

_TERM_CUTOFF = 1e-18
_MAX_TERMS = 10**6


@dataclass(frozen=True)
class ThetaEvaluation:
    """Value of theta(s) = sum over integers k of exp(-s pi k^2)."""

    s: float
    value: float
    k_used: int
    tail_estimate: float


def _terms_needed(s: float) -> float:
    # first k with exp(-s pi k^2) < cutoff
    return math.sqrt(-math.log(_TERM_CUTOFF) / (math.pi * s))


def theta(s: float) -> ThetaEvaluation:
    """Evaluate theta(s) by direct summation.

    Terms are added until one drops below 1e-18; the remainder is bounded
    by a geometric series since consecutive term ratios shrink.  For s so
    small that more than a million terms would be needed, evaluation is
    refused: use the transformed side theta(1/s)/sqrt(s) instead, which
    converges fast exactly when this side does not.
    """
    if s <= 0.0:
        raise ValueError(f"theta needs s > 0, got {s}")
    if _terms_needed(s) > _MAX_TERMS:
        raise ValueError(
            f"theta(s) at s={s} needs more than {_MAX_TERMS} terms; "
            "evaluate theta(1/s)/sqrt(s) instead"
        )
    total = 1.0
    k = 0
    while True:
        k += 1
        term = math.exp(-s * math.pi * k * k)
        total += 2.0 * term
        if term < _TERM_CUTOFF:
            break
    next_term = math.exp(-s * math.pi * (k + 1) ** 2)
    ratio = math.exp(-s * math.pi * (2 * k + 3))
    tail = 2.0 * next_term / (1.0 - ratio)
    return ThetaEvaluation(s=s, value=total, k_used=k, tail_estimate=tail)


def theta_transform_residual(s: float) -> float:
    """|theta(s) - theta(1/s)/sqrt(s)|; exactly zero in exact arithmetic."""
    direct = theta(s).value
    transformed = theta(1.0 / s).value / math.sqrt(s)
    return abs(direct - transformed)


SPECTRAL = "spectral"
KERNEL = "kernel"


def heat_evolve(f: np.ndarray, grid: Grid, t: float, method: str = SPECTRAL,
                k_max: int | None = None, l_max: int | None = None) -> np.ndarray:
    """Evolve 1-periodic initial data f for time t.

    spectral: project f on the real trigonometric modes (exact discrete
    orthogonality on a midpoint grid), damp coefficient k by
    exp(-4 pi^2 k^2 t), resum.  k_max defaults to every mode below the
    grid Nyquist limit.
    kernel: quadrature against the periodized heat kernel with cutoff
    l_max (defaulting per the Gaussian tail rule).
    """
    if t <= 0.0:
        raise ValueError(f"heat evolution needs t > 0, got {t}")
    if grid.kind != MIDPOINT:
        raise ValueError("heat_evolve expects a uniform-midpoint grid "
                         "(periodic sampling without duplicated endpoints)")
    values = _check_sampled(f, grid)
    if method == SPECTRAL:
        if k_max is None:
            k_max = (grid.n - 1) // 2
        if k_max < 1:
            raise ValueError(f"spectral method needs k_max >= 1, got {k_max}")
        x = grid.nodes
        mean = float(np.dot(grid.weights, values))
        u = np.full_like(values, mean)
        for k in range(1, k_max + 1):
            damp = math.exp(-PERIODIC_BASIS.mu(k) * t)
            cos_k = PERIODIC_BASIS.cos_mode(k, x)
            sin_k = PERIODIC_BASIS.sin_mode(k, x)
            a_k = float(np.dot(grid.weights, values * cos_k))
            b_k = float(np.dot(grid.weights, values * sin_k))
            u += damp * (a_k * cos_k + b_k * sin_k)
        return u
    if method == KERNEL:
        return apply_kernel(heat_circle(t, l_max=l_max), values, grid)
    raise ValueError(f"unknown method {method!r}")


def random_trig_sample(grid: Grid, modes: int = 5, seed: int = 0) -> np.ndarray:
    """Seeded random 1-periodic function: constant plus `modes` cos/sin pairs."""
    rng = np.random.default_rng(seed)
    f = np.full_like(grid.nodes, rng.standard_normal())
    for k in range(1, modes + 1):
        f += rng.standard_normal() * PERIODIC_BASIS.cos_mode(k, grid.nodes)
        f += rng.standard_normal() * PERIODIC_BASIS.sin_mode(k, grid.nodes)
    return f


@dataclass(frozen=True)
class HeatTraceReport:
    spectral_side: float
    kernel_side: float
    residual: float


def heat_trace_check(t: float, grid: Grid) -> HeatTraceReport:
    """Semigroup trace two ways: eigenvalue sum vs periodized-kernel diagonal.

    spectral_side sums exp(-4 pi^2 k^2 t) over all integers (truncated as
    in theta; note this is theta(4 pi t)); kernel_side is the quadrature
    of the periodized kernel diagonal, which is constant in x, so the
    residual probes the theta transformation identity itself.
    """
    if t <= 0.0:
        raise ValueError(f"heat trace needs t > 0, got {t}")
    spectral_side = theta(4.0 * math.pi * t).value
    kernel_side = diagonal_trace(heat_circle(t), grid)
    return HeatTraceReport(spectral_side=spectral_side, kernel_side=kernel_side,
                           residual=abs(spectral_side - kernel_side))


def trace_sweep_to_csv(ts, reports, path) -> None:
    """Write heat-trace results as CSV rows t,lhs,rhs,residual."""
    rows = [(t, r.spectral_side, r.kernel_side, r.residual)
            for t, r in zip(ts, reports)]
    write_csv(path, ("t", "lhs", "rhs", "residual"), rows)
