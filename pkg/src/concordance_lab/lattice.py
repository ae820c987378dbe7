"""Integral quadratic lattices, their isometries and spectral entropy.

A lattice is a free Z-module with a nondegenerate integral symmetric
bilinear form.  In rank 2 with hyperbolic signature there is a clean
dichotomy: the form represents 0 exactly when the discriminant is a
perfect square, and otherwise the form admits hyperbolic isometries
built from the fundamental solution of a Pell-Fermat equation.

Entropy of an automorphism acting on such a lattice is the log of the
spectral radius of its matrix; here it is computed from the exact
characteristic polynomial with certified root bracketing, never from a
floating-point eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import _intmat
from ._intmat import IntMatrix

# log of spectral radius is reproducible to this relative accuracy
SPECTRAL_REL_TOL = Fraction(1, 10**14)

# x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1, increasing degree
LEHMER_POLY = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]


class DegenerateLatticeError(ValueError):
    pass


@dataclass(frozen=True)
class GramMatrix:
    """Integral symmetric bilinear form (e.g. an intersection form)."""

    entries: IntMatrix

    def __post_init__(self):
        m = _intmat.as_int_matrix(self.entries)
        object.__setattr__(self, "entries", m)
        if m != _intmat.transpose(m):
            raise ValueError("gram matrix must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def det(self) -> int:
        return _intmat.det(self.entries)

    def pairing(self, u, v) -> int:
        gu = _intmat.mat_vec(self.entries, tuple(int(x) for x in v))
        return sum(int(a) * b for a, b in zip(u, gu))

    def square(self, v) -> int:
        return self.pairing(v, v)


@dataclass(frozen=True)
class LatticeMap:
    """Square integer matrix acting on a lattice basis."""

    entries: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "entries", _intmat.as_int_matrix(self.entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def det(self) -> int:
        return _intmat.det(self.entries)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.dim))

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        return LatticeMap(_intmat.mat_mul(self.entries, other.entries))

    def apply(self, v) -> tuple[int, ...]:
        return _intmat.mat_vec(self.entries, tuple(int(x) for x in v))

    def inverse(self) -> "LatticeMap":
        return LatticeMap(_intmat.unimodular_inverse(self.entries))

    def power(self, k: int) -> "LatticeMap":
        if k >= 0:
            return LatticeMap(_intmat.mat_pow(self.entries, k))
        return LatticeMap(_intmat.mat_pow(self.inverse().entries, -k))


@dataclass(frozen=True)
class EntropyValue:
    """log(spectral radius), in nats, clamped at 0.

    ``value`` is 0 exactly when the spectral radius is <= 1 (decided by an
    exact Sturm count, not by floating-point comparison).  ``radius`` is
    the spectral radius itself.  ``zero_matrix`` flags the conventional
    value for the zero map.
    """

    value: float
    radius: float
    zero_matrix: bool = False


def _gram(g) -> GramMatrix:
    return g if isinstance(g, GramMatrix) else GramMatrix(g)


def _lmap(m) -> LatticeMap:
    return m if isinstance(m, LatticeMap) else LatticeMap(m)


def discriminant(g) -> int:
    """|det| of the gram matrix, exact."""
    g = _gram(g)
    d = g.det()
    if d == 0:
        raise DegenerateLatticeError("degenerate lattice")
    return abs(d)


def is_isometry(g, m) -> bool:
    """True iff m^T . g . m == g in exact integer arithmetic."""
    g, m = _gram(g), _lmap(m)
    if g.dim != m.dim:
        raise ValueError("dimension mismatch")
    mt = _intmat.transpose(m.entries)
    return _intmat.mat_mul(mt, _intmat.mat_mul(g.entries, m.entries)) == g.entries


def _require_rank2_hyperbolic(g: GramMatrix) -> int:
    """Return the (positive) discriminant, checking rank and signature."""
    if g.dim != 2:
        raise ValueError("rank-2 form required")
    d = g.det()
    if d == 0:
        raise DegenerateLatticeError("degenerate lattice")
    if d > 0:
        raise ValueError("form is definite, not hyperbolic")
    return -d


def represents_zero_rank2(g) -> bool:
    """Whether the rank-2 hyperbolic form has a nonzero isotropic vector.

    Happens exactly when the discriminant is a perfect square.
    """
    delta = _require_rank2_hyperbolic(_gram(g))
    return isqrt(delta) ** 2 == delta


def pell_fundamental_solution(d: int) -> tuple[int, int]:
    """Smallest (t, u) with t, u >= 1 and t^2 - d u^2 = 1, d a nonsquare >= 2.

    Walks the convergents of the continued fraction of sqrt(d); the first
    convergent satisfying the equation is the fundamental solution.
    """
    if d < 2 or isqrt(d) ** 2 == d:
        raise ValueError("d must be a nonsquare integer >= 2")
    a0 = isqrt(d)
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - d * q * q != 1:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q


def hyperbolic_isometry_rank2(g):
    """An integer isometry of the rank-2 hyperbolic form with spectral
    radius > 1, or None when the form represents zero.

    The matrix is the automorph of the form built from the fundamental
    Pell solution t^2 - delta u^2 = 1, so it has det 1, trace 2t > 2
    (hence preserves each component of the positive cone) and is the
    power-minimal generator up to inversion.
    """
    g = _gram(g)
    delta = _require_rank2_hyperbolic(g)
    if isqrt(delta) ** 2 == delta:
        return None
    t, u = pell_fundamental_solution(delta)
    a, b = g.entries[0][0], g.entries[0][1]
    c = g.entries[1][1]
    m = LatticeMap(((t - b * u, -c * u), (a * u, t + b * u)))
    assert is_isometry(g, m) and m.det() == 1
    return m


def _largest_real_root_value(poly) -> float:
    lo, hi = _intmat.largest_real_root(poly, SPECTRAL_REL_TOL)
    return float((lo + hi) / 2)


def spectral_logradius(m) -> EntropyValue:
    """log of the spectral radius of an integer matrix, clamped at 0.

    The square of the spectral radius of m is always a real eigenvalue of
    the Kronecker square m (x) m, so it is isolated as the largest real
    root of that exact characteristic polynomial via Sturm bisection.
    The radius<=1 / radius>1 dichotomy is decided exactly.
    """
    m = _lmap(m)
    if _intmat.is_zero(m.entries):
        return EntropyValue(value=0.0, radius=0.0, zero_matrix=True)
    k = _intmat.kron(m.entries, m.entries)
    poly = _intmat.charpoly(k)
    if _intmat.count_roots_above(poly, Fraction(1)) == 0:
        if _intmat.poly_eval(poly, 1) == 0:
            return EntropyValue(value=0.0, radius=1.0)
        return EntropyValue(value=0.0, radius=math.sqrt(max(_largest_real_root_value(poly), 0.0)))
    radius_sq = _largest_real_root_value(poly)
    return EntropyValue(value=0.5 * math.log(radius_sq), radius=math.sqrt(radius_sq))


def lehmer_number() -> float:
    """Largest root of the degree-10 Lehmer polynomial, ~1.17628081.

    Bisection on (1, 2) with exact rational sign tests; accurate to far
    better than 1e-10.
    """
    lo, hi = Fraction(1), Fraction(2)
    for _ in range(64):
        mid = (lo + hi) / 2
        if _intmat.poly_eval(LEHMER_POLY, mid) > 0:
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2)


def unimodular_conjugate(m, p) -> LatticeMap:
    """p^-1 . m . p for unimodular p (basis change)."""
    m, p = _lmap(m), _lmap(p)
    return LatticeMap(
        _intmat.mat_mul(
            _intmat.unimodular_inverse(p.entries),
            _intmat.mat_mul(m.entries, p.entries),
        )
    )
