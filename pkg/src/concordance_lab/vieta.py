"""Real dynamics on the deformation family of (2,2,2)-surfaces in (P^1)^3.

The surface X^t is cut out (in the affine chart) by

    (x1^2 + 1)(x2^2 + 1)(x3^2 + 1) + t * x1 * x2 * x3 = 2.

Viewing the equation as a quadratic in one coordinate gives the three
Vieta root-swap involutions; their composition f = s1 o s2 o s3 is the
dynamical system whose real entropy this module estimates by measuring
the length growth of an arc under iteration, with adaptive bisection
refinement re-traced from the seed so every sample stays on the surface.

The estimated growth rate divided by the complex entropy log(9 + 4*sqrt(5))
is an upper-bound indicator for the concordance of X^t.  At t = 0 the
composed map degenerates to coordinate negation, so lengths stay constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: complex entropy of the composed map, log(9 + 4 sqrt 5)
H_COMPLEX = math.log(9 + 4 * math.sqrt(5))

#: affine window; orbits leaving it abort with AffineWindowError
X_MAX = 10.0

#: empirical compactness bound for |t| <= 1 (the true bound is 1)
_COMPACT_BOUND = 1.5

_RESIDUAL_TOL = 1e-9
_PROJECT_TOL = 1e-12
_ENDPOINT_MARGIN = 1e-3


class AffineWindowError(RuntimeError):
    """An orbit point left the affine window |x_i| <= X_MAX."""


@dataclass(frozen=True)
class SurfacePoint:
    x1: float
    x2: float
    x3: float
    t: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3], dtype=float)


@dataclass
class Arc:
    """Adaptively refined polyline on X^t(R).

    ``params`` are the seed parameters in [0, 1] that generated each
    point; they allow refinement to re-trace new points from the seed so
    that inserted samples lie exactly on the surface.
    """

    points: np.ndarray  # (n, 3)
    t: float
    params: np.ndarray | None = None
    x3_slice: float = 0.0
    x1_window: tuple[float, float] = (-1.0, 1.0)
    steps_applied: int = 0

    def surface_points(self) -> list[SurfacePoint]:
        return [SurfacePoint(*xyz, t=self.t) for xyz in self.points]

    def length(self) -> float:
        return polyline_length(self.points)


@dataclass
class GrowthRecord:
    t: float
    lengths: list[tuple[int, float]]
    h_estimate: float
    alpha_upper: float
    refinements: int = 0
    truncated: bool = False


def polyline_length(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())


# ---------------------------------------------------------------------------
# pointwise surface algebra
# ---------------------------------------------------------------------------


def residual(p: SurfacePoint) -> float:
    """Defining-equation residual; zero exactly on the surface."""
    return _residual_xyz(p.x1, p.x2, p.x3, p.t)


def _residual_xyz(x1, x2, x3, t):
    return (x1 * x1 + 1) * (x2 * x2 + 1) * (x3 * x3 + 1) + t * x1 * x2 * x3 - 2


def gradient_norm(p: SurfacePoint) -> float:
    """Norm of the gradient of the defining polynomial at p (smoothness
    probe for the real locus)."""
    x1, x2, x3, t = p.x1, p.x2, p.x3, p.t
    q1, q2, q3 = x1 * x1 + 1, x2 * x2 + 1, x3 * x3 + 1
    g = (
        2 * x1 * q2 * q3 + t * x2 * x3,
        2 * x2 * q1 * q3 + t * x1 * x3,
        2 * x3 * q1 * q2 + t * x1 * x2,
    )
    return math.hypot(*g)


def _vieta_swap_arrays(x: np.ndarray, t: float, j: int) -> np.ndarray:
    """Vieta involution on an (n, 3) array, axis j in {1, 2, 3}."""
    k, l = [i for i in (0, 1, 2) if i != j - 1]
    out = x.copy()
    xk, xl = x[:, k], x[:, l]
    p = (xk * xk + 1) * (xl * xl + 1)
    new = -t * xk * xl / p - x[:, j - 1]
    out[:, j - 1] = new
    # one Newton step on the swapped coordinate where roundoff is visible
    res = _residual_xyz(out[:, 0], out[:, 1], out[:, 2], t)
    bad = np.abs(res) > _PROJECT_TOL
    if bad.any():
        deriv = 2 * new[bad] * p[bad] + t * xk[bad] * xl[bad]
        safe = np.abs(deriv) > 1e-12
        corr = np.where(safe, res[bad] / np.where(safe, deriv, 1.0), 0.0)
        out[bad, j - 1] = new[bad] - corr
    if np.abs(out[:, j - 1]).max(initial=0.0) > X_MAX:
        raise AffineWindowError("left affine window")
    if abs(t) <= 1 and np.abs(out).max(initial=0.0) > _COMPACT_BOUND:
        raise AffineWindowError(
            "orbit left the compact real locus expected for |t| <= 1"
        )
    return out


def involution(p: SurfacePoint, j: int) -> SurfacePoint:
    """Vieta root swap in coordinate j (1, 2 or 3); fixes the other two."""
    if j not in (1, 2, 3):
        raise ValueError("axis index must be 1, 2 or 3")
    if abs(residual(p)) > _RESIDUAL_TOL:
        raise ValueError("point is not on the surface")
    out = _vieta_swap_arrays(p.as_array()[None, :], p.t, j)[0]
    return SurfacePoint(float(out[0]), float(out[1]), float(out[2]), p.t)


def _f_map_arrays(x: np.ndarray, t: float) -> np.ndarray:
    for j in (3, 2, 1):
        x = _vieta_swap_arrays(x, t, j)
    return x


def f_map(p: SurfacePoint) -> SurfacePoint:
    """Composition s1 o s2 o s3 (s3 applied first)."""
    q = involution(p, 3)
    q = involution(q, 2)
    return involution(q, 1)


def sample_points(t: float, count: int, seed: int) -> list[SurfacePoint]:
    """Deterministic rejection sample of on-surface points.

    x1, x2 are drawn uniformly, then x3 solves the defining quadratic
    (when its discriminant is nonnegative) with a random choice of root.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    while len(out) < count:
        x1, x2 = rng.uniform(-1.05, 1.05, size=2)
        p = (x1 * x1 + 1) * (x2 * x2 + 1)
        disc = (t * x1 * x2) ** 2 - 4 * p * (p - 2)
        if disc < 0:
            continue
        sign = 1.0 if rng.random() < 0.5 else -1.0
        x3 = (-t * x1 * x2 + sign * math.sqrt(disc)) / (2 * p)
        point = SurfacePoint(float(x1), float(x2), float(x3), t)
        if abs(residual(point)) <= _RESIDUAL_TOL:
            out.append(point)
    return out


# ---------------------------------------------------------------------------
# seed arcs and iteration
# ---------------------------------------------------------------------------


def _seed_window(t: float, x3: float) -> tuple[float, float]:
    """Maximal symmetric x1-window (around 0) where the x3-slice solves."""
    if x3 == 0.0:
        return (-1.0 + _ENDPOINT_MARGIN, 1.0 - _ENDPOINT_MARGIN)
    grid = np.linspace(-1.0, 1.0, 4001)
    a = (grid * grid + 1) * (x3 * x3 + 1)
    disc = (t * grid * x3) ** 2 - 4 * a * (a - 2)
    valid = disc >= 0
    if not valid[2000]:
        raise ValueError(f"x3 = {x3} slice is empty near x1 = 0 for t = {t}")
    left = 2000
    while left > 0 and valid[left - 1]:
        left -= 1
    right = 2000
    while right < 4000 and valid[right + 1]:
        right += 1
    lo, hi = grid[left], grid[right]
    margin = _ENDPOINT_MARGIN * (hi - lo)
    return (lo + margin, hi - margin)


def _trace_seed(params: np.ndarray, t: float, x3: float, window) -> np.ndarray:
    """Points of the seed arc at the given parameters, exactly on X^t."""
    lo, hi = window
    x1 = lo + params * (hi - lo)
    q3 = x3 * x3 + 1
    a = (x1 * x1 + 1) * q3
    b = t * x1 * x3
    disc = b * b - 4 * a * (a - 2)
    disc = np.maximum(disc, 0.0)
    x2 = (-b + np.sqrt(disc)) / (2 * a)
    return np.column_stack([x1, x2, np.full_like(x1, x3)])


def seed_arc(t: float, m: int, x3: float = 0.0) -> Arc:
    """Canonical arc in the slice x3 = const (default 0, which lies on
    X^t for every t because the t-term vanishes there)."""
    if m < 16:
        raise ValueError("at least 16 seed points are required")
    window = _seed_window(t, x3)
    params = np.linspace(0.0, 1.0, m)
    points = _trace_seed(params, t, x3, window)
    return Arc(points=points, t=t, params=params, x3_slice=x3, x1_window=window)


@dataclass
class _Budget:
    limit: int
    used: int = 0
    truncated: bool = False
    refinements: int = 0


def _refine_step(arc_params, images, step, t, x3, window, eps, budget: _Budget):
    """Insert midpoints until consecutive step-images are within eps.

    New points are re-traced from the seed (so they are on-surface) and
    pushed forward `step` times.  The split decision for an interval
    depends only on its own endpoints, which makes the refined set a
    deterministic function of (seed, eps) and monotone under smaller eps.
    """
    while True:
        gaps = np.linalg.norm(np.diff(images, axis=0), axis=1)
        bad = np.flatnonzero(gaps > eps)
        if bad.size == 0:
            return arc_params, images
        allowance = budget.limit - budget.used
        if allowance <= 0:
            budget.truncated = True
            return arc_params, images
        if bad.size > allowance:
            bad = bad[:allowance]
            budget.truncated = True
        mids = (arc_params[bad] + arc_params[bad + 1]) / 2.0
        new_pts = _trace_seed(mids, t, x3, window)
        for _ in range(step):
            new_pts = _f_map_arrays(new_pts, t)
        budget.used += mids.size
        budget.refinements += mids.size
        arc_params = np.concatenate([arc_params, mids])
        images = np.concatenate([images, new_pts])
        order = np.argsort(arc_params, kind="stable")
        arc_params = arc_params[order]
        images = images[order]
        if budget.truncated:
            return arc_params, images


def iterate_arc(arc: Arc, n: int, eps: float, budget: int):
    """Push the arc forward n times, measuring polyline lengths L_0..L_n.

    Adaptive refinement keeps consecutive image points within eps until
    the total point budget is exhausted (then lengths keep being reported
    but the record is flagged as truncated).  Returns the final arc and
    the list of lengths.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if arc.params is None:
        raise ValueError("arc does not carry seed parameters")
    state = _Budget(limit=max(0, budget - len(arc.params)))
    params = arc.params.copy()
    images = arc.points.copy()
    t, x3, window = arc.t, arc.x3_slice, arc.x1_window

    params, images = _refine_step(params, images, 0, t, x3, window, eps, state)
    lengths = [polyline_length(images)]
    for step in range(1, n + 1):
        images = _f_map_arrays(images, t)
        params, images = _refine_step(params, images, step, t, x3, window, eps, state)
        lengths.append(polyline_length(images))
    out = Arc(
        points=images,
        t=t,
        params=params,
        x3_slice=x3,
        x1_window=window,
        steps_applied=arc.steps_applied + n,
    )
    out_record = {
        "refinements": state.refinements,
        "truncated": state.truncated,
    }
    return out, lengths, out_record


def entropy_estimate(
    t: float,
    n_max: int = 10,
    eps: float = 0.02,
    budget: int = 10**6,
    m: int = 64,
    x3: float = 0.0,
) -> GrowthRecord:
    """Arc-growth entropy estimate and concordance upper-bound indicator.

    h_estimate is the least-squares slope of log L_n over the window
    n in [ceil(n_max/3), n_max] (the early transient is skipped),
    clamped at 0; alpha_upper = h_estimate / log(9 + 4 sqrt 5).
    """
    if n_max < 1 or eps <= 0 or budget <= 0:
        raise ValueError("parameters must be positive")
    arc = seed_arc(t, m, x3)
    _, lengths, info = iterate_arc(arc, n_max, eps, budget)
    start = math.ceil(n_max / 3)
    window = [(n, L) for n, L in enumerate(lengths) if n >= start and L > 0]
    if len(window) < 3:
        raise ValueError("not enough usable lengths for a growth estimate")
    ns = np.array([n for n, _ in window], dtype=float)
    logs = np.log([L for _, L in window])
    slope = float(np.polyfit(ns, logs, 1)[0])
    h_estimate = max(slope, 0.0)
    return GrowthRecord(
        t=t,
        lengths=list(enumerate(lengths)),
        h_estimate=h_estimate,
        alpha_upper=h_estimate / H_COMPLEX,
        refinements=info["refinements"],
        truncated=info["truncated"],
    )
