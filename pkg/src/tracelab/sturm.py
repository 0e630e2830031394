"""The two-point boundary value problem -u'' = f, u(0) = u(1) = 0.

Solved two independent ways: directly via the split form of the Green
integral (cumulative trapezoid sums, O(n)), and spectrally through the
sine eigenbasis.  Their agreement for arbitrary continuous data is the
point of the exercise; each solver is the oracle for the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fileio import write_csv
from .quadrature import Grid, _check_sampled, inner_product


@dataclass(frozen=True)
class SpectralBasis:
    """Analytic eigendata of -d^2/dx^2 on [0,1].

    dirichlet family: mu_k = (pi k)^2 with modes sqrt(2) sin(k pi x),
    k >= 1; the inverse operator has eigenvalues lam_k = 1/mu_k.
    periodic family: mu_k = 4 pi^2 k^2 carried by the real modes
    {1, sqrt(2) cos(2 pi k x), sqrt(2) sin(2 pi k x)} (multiplicity 2 for
    k >= 1, realized over the reals instead of complex exponentials).
    """

    family: str

    def __post_init__(self):
        if self.family not in ("dirichlet", "periodic"):
            raise ValueError(f"unknown basis family {self.family!r}")

    def mu(self, k: int) -> float:
        if self.family == "dirichlet":
            if k < 1:
                raise ValueError("dirichlet modes are indexed k >= 1")
            return math.pi**2 * k**2
        if k < 0:
            raise ValueError("periodic modes are indexed k >= 0")
        return 4.0 * math.pi**2 * k**2

    def lam(self, k: int) -> float:
        mu = self.mu(k)
        if mu == 0.0:
            raise ValueError("the constant periodic mode has no inverse eigenvalue")
        return 1.0 / mu

    def mode(self, k: int, x: np.ndarray) -> np.ndarray:
        """Dirichlet eigenfunction sqrt(2) sin(k pi x) sampled at x."""
        if self.family != "dirichlet":
            raise ValueError("mode() is the dirichlet sine mode; use cos_mode/sin_mode")
        if k < 1:
            raise ValueError("dirichlet modes are indexed k >= 1")
        return math.sqrt(2.0) * np.sin(k * math.pi * np.asarray(x, dtype=float))

    def cos_mode(self, k: int, x: np.ndarray) -> np.ndarray:
        if self.family != "periodic":
            raise ValueError("cos_mode belongs to the periodic family")
        xv = np.asarray(x, dtype=float)
        if k == 0:
            return np.ones_like(xv)
        return math.sqrt(2.0) * np.cos(2.0 * math.pi * k * xv)

    def sin_mode(self, k: int, x: np.ndarray) -> np.ndarray:
        if self.family != "periodic":
            raise ValueError("sin_mode belongs to the periodic family")
        if k < 1:
            raise ValueError("periodic sine modes are indexed k >= 1")
        return math.sqrt(2.0) * np.sin(2.0 * math.pi * k * np.asarray(x, dtype=float))


DIRICHLET_BASIS = SpectralBasis(family="dirichlet")
PERIODIC_BASIS = SpectralBasis(family="periodic")


def _cumulative_trapezoid(values: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    increments = 0.5 * (values[1:] + values[:-1]) * np.diff(nodes)
    out = np.empty_like(values)
    out[0] = 0.0
    np.cumsum(increments, out=out[1:])
    return out


def solve_direct(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Solve -u'' = f, u(0)=u(1)=0 via the split Green-integral form.

    u(x) = (1-x) * int_0^x y f(y) dy + x * int_x^1 (1-y) f(y) dy, evaluated
    with cumulative trapezoid sums: O(n) work and exactly zero boundary
    values whenever the grid includes the endpoints.
    """
    values = _check_sampled(f, grid)
    x = grid.nodes
    lower = _cumulative_trapezoid(x * values, x)
    upper_from_zero = _cumulative_trapezoid((1.0 - x) * values, x)
    upper = upper_from_zero[-1] - upper_from_zero
    return (1.0 - x) * lower + x * upper


def solve_spectral(f: np.ndarray, grid: Grid, k_max: int) -> np.ndarray:
    """Solve the same problem by sine-series truncation.

    Projects f on the first k_max Dirichlet modes with the discrete inner
    product, scales coefficient k by 1/(pi k)^2, and resums on the grid.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    values = _check_sampled(f, grid)
    u = np.zeros_like(values)
    for k in range(1, k_max + 1):
        mode = DIRICHLET_BASIS.mode(k, grid.nodes)
        alpha = inner_product(values, mode, grid)
        u += DIRICHLET_BASIS.lam(k) * alpha * mode
    return u


def random_fourier_sum(grid: Grid, modes: int = 30, seed: int = 0) -> np.ndarray:
    """Seeded random smooth function: sine series with 1/k^2 coefficient decay."""
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(modes) / np.arange(1, modes + 1) ** 2
    f = np.zeros_like(grid.nodes)
    for k, c in enumerate(coeffs, start=1):
        f += c * DIRICHLET_BASIS.mode(k, grid.nodes)
    return f


def residual_check(u: np.ndarray, f: np.ndarray, grid: Grid) -> float:
    """Second-order finite-difference verification of -u'' = f.

    Max over interior nodes of |-(u_{i-1} - 2 u_i + u_{i+1})/h^2 - f_i|
    plus the absolute boundary values of u.  Requires a uniform grid with
    at least 5 nodes.
    """
    uv = _check_sampled(u, grid, name="u")
    fv = _check_sampled(f, grid)
    if grid.n < 5:
        raise ValueError(f"residual check needs n >= 5, got {grid.n}")
    steps = np.diff(grid.nodes)
    h = steps[0]
    if np.any(np.abs(steps - h) > 1e-12 * max(h, 1.0)):
        raise ValueError("residual check requires a uniform grid")
    laplacian = (uv[:-2] - 2.0 * uv[1:-1] + uv[2:]) / h**2
    interior = float(np.abs(-laplacian - fv[1:-1]).max())
    return interior + abs(float(uv[0])) + abs(float(uv[-1]))


def solution_to_csv(grid: Grid, u: np.ndarray, f: np.ndarray, path) -> None:
    """Write a solved problem as CSV rows node,u,f."""
    write_csv(path, ("node", "u", "f"), zip(grid.nodes, u, f))
