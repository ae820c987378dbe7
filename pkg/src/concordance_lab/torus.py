"""Concordance certificates on the square of a real elliptic curve.

Classes of rational lines on E x E span the rank-3 real Neron-Severi
lattice in the basis ([H], [V], [Delta]) of the horizontal, vertical and
diagonal lines.  SL2(Z) acts by automorphisms; every ample class can be
moved into the simplicial cone spanned by the three basis classes with
nonnegative *integer* coordinates.  Summing the real lengths of the
transported lines then bounds the maximal real volume from below by
C * (complex volume)^(1/2) with C = y^(-1/2), which is the certified
concordance-1/2 inequality this module produces.

Everything that feeds a certificate is exact integer/rational
arithmetic; floats only appear in the final lengths.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _intmat, lattice
from .lattice import GramMatrix, LatticeMap

#: intersection form in the basis ([H], [V], [Delta])
TORUS_GRAM = GramMatrix(((0, 1, 1), (1, 0, 1), (1, 1, 0)))

_SL2_IDENTITY = ((1, 0), (0, 1))
_GEN_S = ((0, -1), (1, 0))
_GEN_T = ((1, 1), (0, 1))
_GEN_T_INV = ((1, -1), (0, 1))


class ReductionError(RuntimeError):
    """Triangle reduction exceeded its search budget."""


@dataclass(frozen=True)
class Slope:
    """Primitive slope a/b of a rational line; b > 0, or b = 0 and a = 1."""

    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise ValueError("slope (0, 0) is not allowed")
        if gcd(abs(self.a), abs(self.b)) != 1:
            raise ValueError("slope must be primitive; use Slope.normalized")
        if self.b < 0 or (self.b == 0 and self.a != 1):
            raise ValueError("slope must be normalized; use Slope.normalized")

    @classmethod
    def normalized(cls, a: int, b: int) -> "Slope":
        if (a, b) == (0, 0):
            raise ValueError("slope (0, 0) is not allowed")
        g = gcd(abs(a), abs(b))
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        return cls(a, b)

    @property
    def direction(self) -> tuple[int, int]:
        """Direction vector (b, a) of the line a*z1 = b*z2 in C^2."""
        return (self.b, self.a)


@dataclass(frozen=True)
class TorusClass:
    """Integer class alpha*[H] + beta*[V] + gamma*[Delta]."""

    coords: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))
        if len(self.coords) != 3:
            raise ValueError("torus class needs 3 coordinates")

    def square(self) -> int:
        return TORUS_GRAM.square(self.coords)

    def pairing(self, other) -> int:
        other = other.coords if isinstance(other, TorusClass) else other
        return TORUS_GRAM.pairing(self.coords, other)

    def is_ample(self) -> bool:
        """Positive square and positive pairing with [H]+[V] (selects the
        component of the positive cone containing the ample classes)."""
        return self.square() > 0 and self.pairing((1, 1, 0)) > 0


@dataclass(frozen=True)
class ConcordanceCertificate:
    theta: TorusClass
    g: tuple[tuple[int, int], tuple[int, int]]
    k: tuple[int, int, int]
    mvolR_lower: float
    volC: float
    C: float
    holds: bool


def _as_class(theta) -> TorusClass:
    return theta if isinstance(theta, TorusClass) else TorusClass(tuple(theta))


def line_class(s: Slope) -> TorusClass:
    """Class of the rational line of slope a/b.

    Pinned by its pairings a^2, b^2, (a-b)^2 against [H], [V], [Delta].
    """
    a, b = s.a, s.b
    return TorusClass((b * b - a * b, a * a - a * b, a * b))


def line_volumes_exact(s: Slope, y: Fraction) -> tuple[int, Fraction]:
    """(squared real length, complex volume) of a rational line, exact."""
    y = Fraction(y)
    if y <= 0:
        raise ValueError("y must be positive")
    n = s.a * s.a + s.b * s.b
    return n, y * n


def line_volumes(s: Slope, y) -> tuple[float, float]:
    """Real length sqrt(a^2+b^2) and complex volume y*(a^2+b^2)."""
    vol_r_sq, vol_c = line_volumes_exact(s, Fraction(y))
    return math.sqrt(vol_r_sq), float(vol_c)


def _slope_of_direction(d: tuple[int, int]) -> Slope:
    return Slope.normalized(d[1], d[0])


def sl2_pushforward(m) -> LatticeMap:
    """Action of m in SL2(Z) on the lattice of line classes.

    The columns are the classes of the images of H, V and Delta: the
    direction (b, a) of a line of slope a/b is pushed through m and
    expanded with line_class.  The result is an isometry of TORUS_GRAM.
    """
    m = _intmat.as_int_matrix(m)
    if len(m) != 2:
        raise ValueError("2x2 matrix required")
    if _intmat.det(m) != 1:
        raise ValueError("matrix must have determinant 1")
    cols = []
    for base in (Slope(0, 1), Slope(1, 0), Slope(1, 1)):
        image = _intmat.mat_vec(m, base.direction)
        cols.append(line_class(_slope_of_direction(image)).coords)
    return LatticeMap(tuple(zip(*cols)))


def _direction_form(theta: TorusClass) -> tuple[int, int, int]:
    """Coefficients (A, B, C) of the positive definite binary form
    A b^2 + B ab + C a^2 sending a direction (b, a) to theta . line(a/b)."""
    alpha, beta, gamma = theta.coords
    return beta + gamma, -2 * gamma, alpha + gamma


def _class_from_form(A: int, B: int, C: int) -> tuple[int, int, int]:
    assert B % 2 == 0
    half = B // 2
    return (C + half, A + half, -half)


def _in_triangle_form(A: int, B: int, C: int) -> bool:
    return B <= 0 and -B <= 2 * A and -B <= 2 * C


def _gauss_reduce(theta: TorusClass):
    """Exact reduction of theta's direction form into the triangle cone.

    This is the usual PSL2(Z) reduction word (translations and the
    inversion), executed on the integer form coefficients instead of on
    floating half-plane coordinates, so edge cases cost nothing.
    """
    A, B, C = _direction_form(theta)
    u = _SL2_IDENTITY
    for _ in range(10000):
        if abs(B) > A:
            mshift = round(Fraction(-B, 2 * A))
            # translation d -> d + m * (first basis vector)
            B, C = B + 2 * mshift * A, C + mshift * B + mshift * mshift * A
            u = _intmat.mat_mul(u, ((1, mshift), (0, 1)))
        if A > C:
            A, B, C = C, -B, A
            u = _intmat.mat_mul(u, _GEN_S)
            continue
        break
    else:
        raise ReductionError("form reduction did not terminate")
    if B > 0:
        B, C = B - 2 * A, C - B + A
        u = _intmat.mat_mul(u, ((1, -1), (0, 1)))
    assert _in_triangle_form(A, B, C)
    return u, _class_from_form(A, B, C)


def _bfs_reduce(theta: TorusClass, max_depth: int = 30):
    """Breadth-first fallback over SL2(Z) generator words; exact."""
    start = theta.coords
    queue = deque([(start, _SL2_IDENTITY)])
    seen = {start}
    gens = [
        (g, _intmat.unimodular_inverse(sl2_pushforward(g).entries))
        for g in (_GEN_S, _GEN_T, _GEN_T_INV)
    ]
    depth_of = {start: 0}
    while queue:
        current, word = queue.popleft()
        if min(current) >= 0:
            return word, current
        if depth_of[current] >= max_depth:
            continue
        for g, push_inv in gens:
            nxt = _intmat.mat_vec(push_inv, current)
            if nxt in seen:
                continue
            seen.add(nxt)
            depth_of[nxt] = depth_of[current] + 1
            queue.append((nxt, _intmat.mat_mul(word, g)))
    raise ReductionError("triangle reduction exceeded the word budget")


def reduce_to_triangle(theta):
    """(g, k) with g in SL2(Z), k >= 0 integers, pushforward(g) k = theta.

    Ample classes only.  Classes already inside the cone spanned by
    [H], [V], [Delta] return the identity.
    """
    theta = _as_class(theta)
    if not theta.is_ample():
        raise ValueError(f"class {theta.coords} is not ample")
    if min(theta.coords) >= 0:
        return _SL2_IDENTITY, theta.coords
    g, k = _gauss_reduce(theta)
    if _intmat.mat_vec(sl2_pushforward(g).entries, k) != theta.coords:
        g, k = _bfs_reduce(theta)
    if min(k) < 0 or _intmat.mat_vec(sl2_pushforward(g).entries, k) != theta.coords:
        raise ReductionError("reduction produced an invalid decomposition")
    return g, tuple(k)


def complex_volume_exact(theta, y: Fraction) -> Fraction:
    """vol_C(theta) = y * (theta.H + theta.V) for the Euclidean metric."""
    theta = _as_class(theta)
    y = Fraction(y)
    if y <= 0:
        raise ValueError("y must be positive")
    return y * (theta.pairing((1, 0, 0)) + theta.pairing((0, 1, 0)))


def certify_concordance(theta, y) -> ConcordanceCertificate:
    """Certificate mvol_R(theta) >= C * vol_C(theta)^(1/2), C = y^(-1/2).

    The lower bound on mvol_R is the sum of the real lengths of the
    transported rational lines weighted by the reduction coefficients
    (superadditivity of the maximal real volume); it always dominates
    C * vol_C^(1/2) for ample classes.
    """
    theta = _as_class(theta)
    y = Fraction(y)
    g, k = reduce_to_triangle(theta)
    mvol_lower = 0.0
    for base, kj in zip((Slope(0, 1), Slope(1, 0), Slope(1, 1)), k):
        image_dir = _intmat.mat_vec(g, base.direction)
        slope = _slope_of_direction(image_dir)
        mvol_lower += kj * math.sqrt(slope.a**2 + slope.b**2)
    vol_c = complex_volume_exact(theta, y)
    c_const = 1.0 / math.sqrt(float(y))
    holds = mvol_lower >= c_const * math.sqrt(float(vol_c)) - 1e-12
    return ConcordanceCertificate(
        theta=theta,
        g=g,
        k=k,
        mvolR_lower=mvol_lower,
        volC=float(vol_c),
        C=c_const,
        holds=holds,
    )


def linear_map_entropies(m) -> tuple[float, float]:
    """(real, complex) entropies of the torus automorphism induced by a
    GL2(Z) matrix: the complex entropy doubles the real one."""
    m = _intmat.as_int_matrix(m)
    if _intmat.det(m) not in (1, -1):
        raise ValueError("matrix must be unimodular")
    h_real = lattice.spectral_logradius(m).value
    return h_real, 2.0 * h_real


def ample_classes(max_coord: int):
    """All ample integer classes with |coordinates| <= max_coord."""
    rng = range(-max_coord, max_coord + 1)
    for alpha in rng:
        for beta in rng:
            for gamma in rng:
                cls = TorusClass((alpha, beta, gamma))
                if cls.is_ample():
                    yield cls
