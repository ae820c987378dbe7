"""Fundamental-domain reduction for hyperbolic isometries in rank 2.

A hyperbolic isometry f of a rank-2 hyperbolic lattice has two isotropic
eigen-halflines bounding the positive cone.  Fixing a primitive ample
class theta1 and its image theta2 = f(theta1), the cone D spanned by
theta1 and theta2 tiles the ample cone under the f-action, and every
ample class decomposes uniquely as f^n(k1 theta1 + k2 theta2 [+ p]) with
k1, k2 nonnegative integers and p one of the finitely many lattice
points inside the (theta1, theta2) parallelogram.

Convention: D is half-open, the theta1-edge belongs to D and the
theta2-edge does not, which is what makes the decomposition unique.
All membership tests are exact integer sign tests (the eigen-directions
are irrational, so floating comparisons near the edges are unsafe).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _intmat
from .lattice import GramMatrix, LatticeMap, is_isometry

_SEARCH_LIMIT = 10**6


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class ConeBasis:
    """A rank-2 hyperbolic gram, a cone-preserving hyperbolic isometry f
    with det 1, and a primitive ample class theta1."""

    gram: GramMatrix
    f: LatticeMap
    theta1: tuple[int, int]

    def __post_init__(self):
        gram = self.gram if isinstance(self.gram, GramMatrix) else GramMatrix(self.gram)
        f = self.f if isinstance(self.f, LatticeMap) else LatticeMap(self.f)
        theta1 = tuple(int(x) for x in self.theta1)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "theta1", theta1)
        if gram.dim != 2 or f.dim != 2 or len(theta1) != 2:
            raise ValueError("rank-2 data required")
        if gram.det() >= 0:
            raise ValueError("gram must be hyperbolic")
        if f.det() != 1:
            raise ValueError("f must have determinant 1")
        if not is_isometry(gram, f):
            raise ValueError("f must be an isometry of the gram")
        if abs(f.trace()) <= 2:
            raise ValueError("f is not hyperbolic")
        if gram.square(theta1) <= 0:
            raise ValueError("theta1 must have positive square")
        if gcd(abs(theta1[0]), abs(theta1[1])) != 1:
            raise ValueError("theta1 must be primitive")
        if gram.pairing(theta1, f.apply(theta1)) <= 0:
            raise ValueError("f must preserve the component of theta1")

    @property
    def theta2(self) -> tuple[int, int]:
        return self.f.apply(self.theta1)

    def in_positive_cone(self, theta) -> bool:
        theta = tuple(int(x) for x in theta)
        return self.gram.square(theta) > 0 and self.gram.pairing(theta, self.theta1) > 0


def isotropic_halflines(cb: ConeBasis):
    """Unit eigenvectors of f for its eigenvalues lambda > 1 and 1/lambda,
    signed to lie on the boundary of the positive-cone component of
    theta1.  Both are isotropic for the gram.
    """
    (a, b), (c, d) = cb.f.entries
    tr = a + d
    if abs(tr) <= 2:
        raise ValueError("f is not hyperbolic")
    disc = math.sqrt(tr * tr - 4)
    out = []
    for lam in ((tr + disc) / 2, (tr - disc) / 2):
        # rows of (f - lam I) give the orthogonal of the eigenvector
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        v = max(v1, v2, key=lambda w: w[0] * w[0] + w[1] * w[1])
        norm = math.hypot(*v)
        v = (v[0] / norm, v[1] / norm)
        gv = (
            cb.gram.entries[0][0] * v[0] + cb.gram.entries[0][1] * v[1],
            cb.gram.entries[1][0] * v[0] + cb.gram.entries[1][1] * v[1],
        )
        if gv[0] * cb.theta1[0] + gv[1] * cb.theta1[1] < 0:
            v = (-v[0], -v[1])
        out.append(v)
    return out[0], out[1]


def _hnf_coset_reps(a_mat):
    """Coset representatives of Z^2 / A Z^2 via the column Hermite form."""
    (a11, a12), _ = a_mat
    g, x, y = _xgcd(a11, a12)
    v = ((x, -(a12 // g)), (y, a11 // g))
    h = _intmat.mat_mul(a_mat, v)
    assert h[0][1] == 0
    h11, h22 = abs(h[0][0]), abs(h[1][1])
    for i in range(h11):
        for j in range(h22):
            yield (i, j)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_points_in_parallelogram(theta1, theta2) -> list[tuple[int, int]]:
    """Nonzero integer points s*theta1 + t*theta2 with s, t in [0, 1).

    Enumerated exactly through the Hermite form of (theta1 | theta2);
    the count is |det(theta1 | theta2)| - 1.  Points are ordered by
    their exact (s, t) coordinates.
    """
    theta1 = tuple(int(x) for x in theta1)
    theta2 = tuple(int(x) for x in theta2)
    a_mat = ((theta1[0], theta2[0]), (theta1[1], theta2[1]))
    d = _intmat.det(a_mat)
    if d == 0:
        raise ValueError("theta1 and theta2 are collinear")
    adj = _intmat.adjugate(a_mat)
    found = []
    for rep in _hnf_coset_reps(a_mat):
        coeffs = [Fraction(v, d) for v in _intmat.mat_vec(adj, rep)]
        frac = [c - math.floor(c) for c in coeffs]
        if frac[0] == 0 and frac[1] == 0:
            continue
        point = (
            theta1[0] * frac[0] + theta2[0] * frac[1],
            theta1[1] * frac[0] + theta2[1] * frac[1],
        )
        assert point[0].denominator == 1 and point[1].denominator == 1
        found.append(((frac[0], frac[1]), (int(point[0]), int(point[1]))))
    found.sort(key=lambda item: item[0])
    assert len(found) == abs(d) - 1
    return [p for _, p in found]


def parallelogram_points(cb: ConeBasis) -> list[tuple[int, int]]:
    """Interior-plus-edge lattice representatives of the fundamental
    parallelogram spanned by theta1 and theta2 = f(theta1)."""
    return lattice_points_in_parallelogram(cb.theta1, cb.theta2)


def reduce_by_dynamics(cb: ConeBasis, theta) -> tuple[int, tuple[int, int]]:
    """n and residue = f^(-n)(theta) inside the half-open domain D.

    The residue satisfies residue = c1 theta1 + c2 theta2 with exact
    rational c1 > 0 and c2 >= 0 (theta2-edge excluded).
    """
    theta = tuple(int(x) for x in theta)
    if not cb.in_positive_cone(theta):
        raise ValueError(f"class {theta} is not in the positive cone")
    f = cb.f.entries
    f_inv = _intmat.unimodular_inverse(f)
    orientation = _cross(cb.theta1, cb.theta2)
    sign = 1 if orientation > 0 else -1

    n = 0
    lo = cb.theta1  # f^n(theta1)
    hi = cb.theta2  # f^(n+1)(theta1)
    for _ in range(_SEARCH_LIMIT):
        below = sign * _cross(lo, theta)  # >= 0 iff theta on the theta2 side of lo
        above = sign * _cross(hi, theta)  # < 0 iff theta strictly before hi
        if below >= 0 and above < 0:
            residue = theta
            step = f_inv if n > 0 else f
            for _ in range(abs(n)):
                residue = _intmat.mat_vec(step, residue)
            return n, tuple(residue)
        if below < 0:
            n -= 1
            hi = lo
            lo = _intmat.mat_vec(f_inv, lo)
        else:
            n += 1
            lo = hi
            hi = _intmat.mat_vec(f, hi)
    raise RuntimeError("fundamental-domain search did not terminate")


def decompose(cb: ConeBasis, theta):
    """(n, k1, k2, j): exact decomposition f^(-n)(theta) = k1 theta1 +
    k2 theta2 + p_j, with j = None when there is no parallelogram part."""
    n, residue = reduce_by_dynamics(cb, theta)
    theta1, theta2 = cb.theta1, cb.theta2
    a_mat = ((theta1[0], theta2[0]), (theta1[1], theta2[1]))
    d = _intmat.det(a_mat)
    adj = _intmat.adjugate(a_mat)
    coeffs = [Fraction(v, d) for v in _intmat.mat_vec(adj, residue)]
    k1, k2 = (math.floor(c) for c in coeffs)
    assert k1 >= 0 and k2 >= 0
    remainder = (
        residue[0] - k1 * theta1[0] - k2 * theta2[0],
        residue[1] - k1 * theta1[1] - k2 * theta2[1],
    )
    if remainder == (0, 0):
        return n, k1, k2, None
    j = parallelogram_points(cb).index(remainder)
    return n, k1, k2, j
