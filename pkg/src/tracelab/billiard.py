"""Specular billiards in rectangles and discs, and their length spectra.

Trajectories are computed event by event from closed-form ray/boundary
intersections — no time stepping — so the reflection law is testable at
the 1e-12 level and closed orbits can be certified against the analytic
length formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fileio import write_csv

RECTANGLE = "rectangle"
DISC = "disc"

LENGTH_BUDGET = "length-budget"
CORNER_HIT = "corner-hit"

# orbits landing this close to a rectangle corner terminate the simulation;
# the reflection there is not defined
CORNER_TOL = 1e-12

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Table:
    """Billiard table: rectangle [0,a] x [0,b] or disc of given radius."""

    shape: str
    a: float | None = None
    b: float | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.shape == RECTANGLE:
            if self.a is None or self.b is None or self.a <= 0.0 or self.b <= 0.0:
                raise ValueError(f"rectangle needs positive sides, got a={self.a} b={self.b}")
        elif self.shape == DISC:
            if self.radius is None or self.radius <= 0.0:
                raise ValueError(f"disc needs a positive radius, got {self.radius}")
        else:
            raise ValueError(f"unknown table shape {self.shape!r}")


def rectangle(a: float, b: float) -> Table:
    return Table(shape=RECTANGLE, a=a, b=b)


def disc(radius: float) -> Table:
    return Table(shape=DISC, radius=radius)


@dataclass(frozen=True, eq=False)
class Segment:
    start: np.ndarray
    direction: np.ndarray
    length: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    segments: tuple
    total_length: float
    terminated_by: str


@dataclass(frozen=True)
class ClosedOrbit:
    length: float


def _unit(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(d))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, |d| = {norm}")
    return d / norm


def _validate_rect_start(table: Table, p: np.ndarray, d: np.ndarray) -> None:
    a, b = table.a, table.b
    if p[0] < -_BOUNDARY_TOL or p[0] > a + _BOUNDARY_TOL \
            or p[1] < -_BOUNDARY_TOL or p[1] > b + _BOUNDARY_TOL:
        raise ValueError(f"start {p.tolist()} lies outside the rectangle")
    on_left = p[0] <= _BOUNDARY_TOL
    on_right = p[0] >= a - _BOUNDARY_TOL
    on_bottom = p[1] <= _BOUNDARY_TOL
    on_top = p[1] >= b - _BOUNDARY_TOL
    if (on_left or on_right) and (on_bottom or on_top):
        raise ValueError(f"start {p.tolist()} is a corner")
    # boundary starts are allowed when aimed strictly into the interior
    if on_left and d[0] <= 0.0 or on_right and d[0] >= 0.0:
        raise ValueError("start on a vertical wall must point inward")
    if on_bottom and d[1] <= 0.0 or on_top and d[1] >= 0.0:
        raise ValueError("start on a horizontal wall must point inward")


def _simulate_rectangle(table: Table, p: np.ndarray, d: np.ndarray,
                        budget: float) -> Trajectory:
    a, b = table.a, table.b
    corners = np.array([[0.0, 0.0], [a, 0.0], [0.0, b], [a, b]])
    segments = []
    spent = 0.0
    while True:
        remaining = budget - spent
        # distance to the wall ahead on each axis
        if d[0] > 0.0:
            tx, wall_x = (a - p[0]) / d[0], a
        elif d[0] < 0.0:
            tx, wall_x = -p[0] / d[0], 0.0
        else:
            tx, wall_x = math.inf, None
        if d[1] > 0.0:
            ty, wall_y = (b - p[1]) / d[1], b
        elif d[1] < 0.0:
            ty, wall_y = -p[1] / d[1], 0.0
        else:
            ty, wall_y = math.inf, None
        t_hit = float(min(tx, ty))
        if t_hit >= remaining:
            segments.append(Segment(start=p, direction=d, length=remaining))
            spent += remaining
            return Trajectory(segments=tuple(segments), total_length=spent,
                              terminated_by=LENGTH_BUDGET)
        q = p + t_hit * d
        if tx <= ty:
            q[0] = wall_x  # snap onto the wall to stop drift
        if ty <= tx:
            q[1] = wall_y
        segments.append(Segment(start=p, direction=d, length=t_hit))
        spent += t_hit
        if np.min(np.linalg.norm(corners - q, axis=1)) <= CORNER_TOL:
            return Trajectory(segments=tuple(segments), total_length=spent,
                              terminated_by=CORNER_HIT)
        d = d.copy()
        if tx <= ty:
            d[0] = -d[0]
        if ty <= tx:
            d[1] = -d[1]
        p = q


def _validate_disc_start(table: Table, p: np.ndarray, d: np.ndarray) -> None:
    r = float(np.linalg.norm(p))
    if r > table.radius + _BOUNDARY_TOL:
        raise ValueError(f"start {p.tolist()} lies outside the disc")
    if r >= table.radius - _BOUNDARY_TOL:
        if float(p @ d) >= 0.0:
            raise ValueError("start on the circle must point inward")


def _simulate_disc(table: Table, p: np.ndarray, d: np.ndarray,
                   budget: float) -> Trajectory:
    radius = table.radius
    segments = []
    spent = 0.0
    while True:
        remaining = budget - spent
        # positive root of |p + t d|^2 = R^2
        beta = float(p @ d)
        gamma = float(p @ p) - radius * radius
        t_hit = float(-beta + math.sqrt(max(beta * beta - gamma, 0.0)))
        if t_hit >= remaining:
            segments.append(Segment(start=p, direction=d, length=remaining))
            spent += remaining
            return Trajectory(segments=tuple(segments), total_length=spent,
                              terminated_by=LENGTH_BUDGET)
        q = p + t_hit * d
        q *= radius / float(np.linalg.norm(q))  # snap onto the circle
        segments.append(Segment(start=p, direction=d, length=t_hit))
        spent += t_hit
        normal = q / radius
        d = d - 2.0 * float(d @ normal) * normal
        d /= float(np.linalg.norm(d))
        p = q


def simulate(table: Table, start, direction, length_budget: float) -> Trajectory:
    """Roll a billiard ball until the length budget is spent.

    Starts strictly inside the table, or on its boundary aimed strictly
    inward (corners excluded).  Rectangle trajectories that land within
    1e-12 of a corner stop early with the corner-hit tag, since no
    reflection is defined there.
    """
    if length_budget <= 0.0:
        raise ValueError(f"length budget must be positive, got {length_budget}")
    p = np.asarray(start, dtype=float).copy()
    if p.shape != (2,):
        raise ValueError(f"start must be a point in the plane, got shape {p.shape}")
    d = _unit(direction)
    if table.shape == RECTANGLE:
        _validate_rect_start(table, p, d)
        return _simulate_rectangle(table, p, d, length_budget)
    _validate_disc_start(table, p, d)
    return _simulate_disc(table, p, d, length_budget)


def trajectory_end(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Final position and direction of a trajectory."""
    last = traj.segments[-1]
    return last.start + last.length * last.direction, last.direction


def is_closed(traj: Trajectory, start, direction, tol: float = 1e-9):
    """Smallest arc length at which the path returns to (start, direction).

    Scans each segment for a point matching the start position with the
    same running direction, both within tol; returns a ClosedOrbit with
    that length, or None if the trajectory never closes within budget.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    p0 = np.asarray(start, dtype=float)
    d0 = _unit(direction)
    cumulative = 0.0
    for seg in traj.segments:
        along = float((p0 - seg.start) @ seg.direction)
        if -tol <= along <= seg.length + tol:
            along = min(max(along, 0.0), seg.length)
            point = seg.start + along * seg.direction
            if (np.linalg.norm(point - p0) <= tol
                    and np.linalg.norm(seg.direction - d0) <= tol):
                length = cumulative + along
                if length > tol:
                    return ClosedOrbit(length=float(length))
        cumulative += seg.length
    return None


@dataclass(frozen=True, eq=False)
class LengthSpectrum:
    """Sorted distinct closed-orbit lengths with one descriptor per length.

    Rectangle descriptors are unfolding winding pairs (p, q); disc
    descriptors are (bounces, turning number).  Iterates of primitive
    orbits appear as their own entries — e.g. (2,0) alongside (1,0) —
    because the enumeration is over all winding pairs up to the cutoff.
    """

    lengths: np.ndarray
    descriptors: tuple


def length_spectrum(table: Table, l_max: float, max_bounces: int = 64) -> LengthSpectrum:
    """All closed-orbit lengths up to l_max.

    Rectangle: 2 sqrt((p a)^2 + (q b)^2) over integer winding pairs
    (p, q) != (0, 0), which covers the bouncing-ball families (p, 0) and
    (0, q).  Disc: 2 n R sin(pi q / n) over polygonal orbits with n
    bounces and turning number q coprime to n, plus the diameter.  The
    disc lengths accumulate at multiples of the circumference, so the
    bounce count is capped at max_bounces.
    """
    if l_max <= 0.0:
        raise ValueError(f"l_max must be positive, got {l_max}")
    entries = []
    if table.shape == RECTANGLE:
        p_max = int(math.floor(l_max / (2.0 * table.a)))
        q_max = int(math.floor(l_max / (2.0 * table.b)))
        for p in range(p_max + 1):
            for q in range(q_max + 1):
                if p == 0 and q == 0:
                    continue
                length = 2.0 * math.hypot(p * table.a, q * table.b)
                if length <= l_max:
                    entries.append((length, (p, q)))
    else:
        candidates = [(2, 1)]
        for n in range(3, max_bounces + 1):
            candidates.extend((n, q) for q in range(1, (n + 1) // 2)
                              if math.gcd(q, n) == 1)
        for n, q in candidates:
            length = 2.0 * n * table.radius * math.sin(math.pi * q / n)
            if length <= l_max:
                entries.append((length, (n, q)))
    entries.sort()
    lengths = []
    descriptors = []
    for length, descriptor in entries:
        if lengths and length - lengths[-1] <= 1e-9:
            continue
        lengths.append(length)
        descriptors.append(descriptor)
    return LengthSpectrum(lengths=np.array(lengths), descriptors=tuple(descriptors))


def trajectory_to_csv(traj: Trajectory, path) -> None:
    rows = [(i, s.start[0], s.start[1], s.direction[0], s.direction[1], s.length)
            for i, s in enumerate(traj.segments)]
    write_csv(path, ("segment", "start_x", "start_y", "dir_x", "dir_y", "length"), rows)


def spectrum_to_csv(spectrum: LengthSpectrum, path) -> None:
    rows = [(length, f"{d[0]},{d[1]}")
            for length, d in zip(spectrum.lengths, spectrum.descriptors)]
    write_csv(path, ("length", "descriptor"), rows)
