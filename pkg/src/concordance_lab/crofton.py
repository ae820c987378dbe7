"""Monte Carlo Cauchy-Crofton length estimation for curves in P^d(R).

Projective space carries the Fubini-Study metric induced by the unit
sphere quotient, so distances are arccos |<u, v>| and a full projective
line has length pi.  The length of a curve equals pi times the mean
number of intersections with hyperplanes drawn rotation-invariantly;
sampling hyperplane normals as normalized Gaussian vectors and counting
sign changes along the lifted polyline gives the estimator.

Degree bounds: a real algebraic curve of degree k meets a generic
hyperplane in at most k real points, so its length is at most k * pi,
with equality exactly for unions of real projective lines.

Randomness is counter-based (Philox keyed by (seed, batch)), so the
result for a given (seed, n_samples) does not depend on how batches
would be distributed across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_BATCH = 2048
_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class CroftonResult:
    estimate: float
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class DegreeBoundReport:
    length_mc: float
    length_direct: float
    bound: float
    satisfied: bool
    slack: float
    stderr: float


class ProjCurve:
    """Polyline of unit representatives of a curve in P^d(R).

    Consecutive representatives are sign-aligned into a common hemisphere
    so the lift is continuous.  ``closed`` joins the last point back to
    the first (through the antipode when the lift ends at minus its
    start, as happens for a full projective line).
    """

    def __init__(self, points, closed: bool = False, degree_hint: int | None = None):
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, 0)
        if pts.ndim != 2 and len(pts):
            raise ValueError("points must be a 2d array")
        if len(pts):
            norms = np.linalg.norm(pts, axis=1)
            if (norms < _UNIT_TOL).any():
                raise ValueError("zero vector cannot represent a projective point")
            pts = pts / norms[:, None]
            for i in range(1, len(pts)):
                if float(pts[i - 1] @ pts[i]) < 0:
                    pts[i] = -pts[i]
        self.points = pts
        self.closed = bool(closed)
        self.degree_hint = degree_hint

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim_ambient(self) -> int:
        """d+1, the number of homogeneous coordinates."""
        return self.points.shape[1] if len(self.points) else 0

    def wrap_is_antipodal(self) -> bool:
        return len(self) >= 2 and float(self.points[-1] @ self.points[0]) < 0


def projective_line(d: int = 2, n_points: int = 1024) -> ProjCurve:
    """A full projective line in P^d(R): half a great circle."""
    theta = np.linspace(0.0, math.pi, n_points)
    pts = np.zeros((n_points, d + 1))
    pts[:, 0] = np.cos(theta)
    pts[:, 1] = np.sin(theta)
    return ProjCurve(pts, closed=True, degree_hint=1)


def conic_circle(n_points: int = 1024) -> ProjCurve:
    """The unit circle in the affine chart x3 = 1 of P^2(R), a degree-2 curve."""
    theta = np.linspace(0.0, 2 * math.pi, n_points, endpoint=False)
    pts = np.column_stack([np.cos(theta), np.sin(theta), np.ones(n_points)])
    return ProjCurve(pts, closed=True, degree_hint=2)


def union_of_two_lines(n_points: int = 1024) -> ProjCurve:
    """Two projective lines through a common point, traversed as one
    continuous lift (a degree-2 curve realizing the length bound)."""
    half = n_points // 2
    theta = np.linspace(0.0, math.pi, half)
    first = np.column_stack([np.cos(theta), np.sin(theta), np.zeros(half)])
    phi = np.linspace(0.0, math.pi, n_points - half)
    second = np.column_stack([-np.cos(phi), np.zeros(n_points - half), np.sin(phi)])
    return ProjCurve(np.vstack([first, second]), closed=True, degree_hint=2)


def fs_length_diagnostics(curve: ProjCurve) -> tuple[float, int]:
    """(Fubini-Study polyline length, number of degenerate pairs skipped)."""
    pts = curve.points
    if len(pts) < 2:
        return 0.0, 0
    dots = np.abs(np.einsum("ij,ij->i", pts[:-1], pts[1:]))
    if curve.closed:
        dots = np.append(dots, abs(float(pts[-1] @ pts[0])))
    dots = np.clip(dots, -1.0, 1.0)
    degenerate = dots >= 1.0 - 1e-15
    length = float(np.arccos(dots[~degenerate]).sum())
    return length, int(degenerate.sum())


def fs_length(curve: ProjCurve) -> float:
    """Fubini-Study length of the polyline (sum of arccos |<p_i, p_i+1>|)."""
    return fs_length_diagnostics(curve)[0]


def sample_hyperplane(rng: np.random.Generator, dim_ambient: int) -> np.ndarray:
    """Rotation-invariant hyperplane normal: a normalized Gaussian vector."""
    while True:
        u = rng.standard_normal(dim_ambient)
        norm = np.linalg.norm(u)
        if norm > 1e-8:
            return u / norm


def _counts_for_normals(curve: ProjCurve, normals: np.ndarray) -> np.ndarray:
    """Sign-change counts for a batch of hyperplane normals (rows)."""
    dots = normals @ curve.points.T
    signs = np.where(dots >= 0, 1, -1)
    counts = (signs[:, 1:] != signs[:, :-1]).sum(axis=1)
    if curve.closed and len(curve) >= 2:
        if curve.wrap_is_antipodal():
            counts += signs[:, -1] == signs[:, 0]
        else:
            counts += signs[:, -1] != signs[:, 0]
    return counts


def intersection_count(curve: ProjCurve, u) -> int:
    """Number of crossings of the lifted polyline with the hyperplane
    u-perp.  Exact-zero dots are resolved as if u were perturbed to the
    positive side (callers doing Monte Carlo redraw instead)."""
    if len(curve) < 2:
        return 0
    u = np.asarray(u, dtype=float)
    return int(_counts_for_normals(curve, u[None, :])[0])


def _batch_rng(seed: int, batch: int, redraw: int | None = None) -> np.random.Generator:
    key = (seed & 0xFFFFFFFFFFFFFFFF, batch if redraw is None else (1 << 63) | redraw)
    return np.random.Generator(np.random.Philox(key=np.array(key, dtype=np.uint64)))


def iter_batch_counts(curve: ProjCurve, n_samples: int, seed: int):
    """Yield per-batch intersection-count arrays for the Monte Carlo run.

    Batches are keyed by (seed, batch index), so the concatenated counts
    for a given (seed, n_samples) are independent of scheduling.
    """
    dim = curve.dim_ambient
    filled = 0
    batch_index = 0
    redraw_counter = 0
    while filled < n_samples:
        take = min(_BATCH, n_samples - filled)
        rng = _batch_rng(seed, batch_index)
        normals = rng.standard_normal((take, dim))
        norms = np.linalg.norm(normals, axis=1)
        normals /= np.where(norms > 1e-8, norms, 1.0)[:, None]
        dots = normals @ curve.points.T
        needs_redraw = np.flatnonzero((dots == 0.0).any(axis=1) | (norms <= 1e-8))
        for row in needs_redraw:
            sub = _batch_rng(seed, batch_index, redraw=redraw_counter)
            redraw_counter += 1
            while True:
                u = sample_hyperplane(sub, dim)
                if (u @ curve.points.T == 0.0).sum() == 0:
                    normals[row] = u
                    break
        yield _counts_for_normals(curve, normals)
        filled += take
        batch_index += 1


def crofton_length(curve: ProjCurve, n_samples: int, seed: int) -> CroftonResult:
    """Monte Carlo length: pi times the mean intersection count.

    Deterministic for a given (seed, n_samples).  Hyperplanes that hit a
    polyline vertex exactly (dot product 0) are redrawn.
    """
    if n_samples < 100:
        raise ValueError("at least 100 samples are required")
    if len(curve) < 2:
        return CroftonResult(estimate=0.0, stderr=0.0, samples=n_samples, seed=seed)
    counts = np.concatenate(list(iter_batch_counts(curve, n_samples, seed)))
    mean = float(counts.mean())
    spread = float(counts.std(ddof=1)) / math.sqrt(n_samples) if n_samples > 1 else 0.0
    return CroftonResult(
        estimate=math.pi * mean,
        stderr=math.pi * spread,
        samples=n_samples,
        seed=seed,
    )


def degree_bound_report(
    curve: ProjCurve, deg: int, n_samples: int, seed: int
) -> DegreeBoundReport:
    """Check the length bound length <= deg * pi on a sampled curve.

    slack = bound - Monte Carlo length; `satisfied` allows 3 standard
    errors of Monte Carlo noise.
    """
    if deg < 1:
        raise ValueError("degree must be a positive integer")
    if curve.degree_hint is not None and curve.degree_hint != deg:
        raise ValueError(
            f"degree {deg} conflicts with the curve's degree hint {curve.degree_hint}"
        )
    result = crofton_length(curve, n_samples, seed)
    bound = deg * math.pi
    slack = bound - result.estimate
    return DegreeBoundReport(
        length_mc=result.estimate,
        length_direct=fs_length(curve),
        bound=bound,
        satisfied=slack >= -3 * result.stderr,
        slack=slack,
        stderr=result.stderr,
    )
