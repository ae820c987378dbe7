"""Exact integer/rational matrix and polynomial helpers.

Everything here works on plain nested tuples of Python ints (arbitrary
precision, so no overflow concerns) or on lists of Fraction coefficients.
Polynomials are coefficient lists in increasing degree order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

IntMatrix = tuple[tuple[int, ...], ...]


def as_int_matrix(entries) -> IntMatrix:
    """Coerce a nested sequence into a square tuple-of-tuples of ints."""
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ValueError("matrix must be square and nonempty")
    return rows


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_zero(a: IntMatrix) -> bool:
    return all(x == 0 for row in a for x in row)


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: IntMatrix, v) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_pow(a: IntMatrix, k: int) -> IntMatrix:
    if k < 0:
        raise ValueError("negative power; invert first")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def det(a: IntMatrix) -> int:
    """Fraction-free Bareiss determinant (exact)."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def adjugate(a: IntMatrix) -> IntMatrix:
    """Adjugate matrix; a * adj(a) = det(a) * I.  Exact, any size."""
    n = len(a)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(a[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            cof[i][j] = (-1) ** (i + j) * det(minor)
    return transpose(tuple(tuple(row) for row in cof))


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Integer inverse of a matrix with det = +-1."""
    d = det(a)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = adjugate(a)
    if d == 1:
        return adj
    return tuple(tuple(-x for x in row) for row in adj)


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    na, nb = len(a), len(b)
    return tuple(
        tuple(a[i // nb][j // nb] * b[i % nb][j % nb] for j in range(na * nb))
        for i in range(na * nb)
    )


def charpoly(a: IntMatrix) -> list[int]:
    """Characteristic polynomial det(xI - a), exact integer coefficients.

    Computed by evaluating the determinant at n+1 integer nodes and
    interpolating in Newton form with rational arithmetic.
    """
    n = len(a)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        shifted = tuple(
            tuple(x - a[i][j] if i == j else -a[i][j] for j in range(n))
            for i in range(n)
        )
        ys.append(det(shifted))
    # Newton divided differences
    coefs = [Fraction(y) for y in ys]
    for level in range(1, n + 1):
        for i in range(n, level - 1, -1):
            coefs[i] = (coefs[i] - coefs[i - 1]) / (xs[i] - xs[i - level])
    # expand Newton form to monomial coefficients
    poly = [Fraction(0)] * (n + 1)
    acc = [Fraction(1)]  # product (x - x0)...(x - x_{k-1})
    for k in range(n + 1):
        for i, c in enumerate(acc):
            poly[i] += coefs[k] * c
        if k < n:
            acc = [Fraction(0)] + acc
            for i in range(len(acc) - 1):
                acc[i] -= xs[k] * acc[i + 1]
    assert all(c.denominator == 1 for c in poly)
    return [int(c) for c in poly]


# ---------------------------------------------------------------------------
# polynomial utilities (coefficients in increasing degree order)
# ---------------------------------------------------------------------------


def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [0]


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p):
    return poly_trim([i * c for i, c in enumerate(p)][1:] or [0])


def _poly_divmod(p, q):
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in q]
    dq = len(q) - 1
    rem = p[:]
    quot = [Fraction(0)] * max(1, len(p) - dq)
    while len(rem) - 1 >= dq and any(rem):
        k = len(rem) - 1 - dq
        factor = rem[-1] / q[-1]
        quot[k] = factor
        for i in range(len(q)):
            rem[k + i] -= factor * q[i]
        rem = rem[:-1]
        while len(rem) > 1 and rem[-1] == 0:
            rem = rem[:-1]
        if all(c == 0 for c in rem):
            break
    return poly_trim(quot), poly_trim(rem)


def _clear_denominators(p):
    """Scale a rational polynomial by a positive constant to integer coeffs."""
    lcm = 1
    for c in p:
        f = Fraction(c)
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    out = [int(Fraction(c) * lcm) for c in p]
    g = 0
    for c in out:
        g = gcd(g, abs(c))
    return [c // g for c in out] if g > 1 else out


def poly_squarefree(p):
    """p / gcd(p, p'), integer coefficients, same real roots."""
    g = _poly_gcd(p, poly_deriv(p))
    if len(g) == 1:
        return list(p)
    q, r = _poly_divmod(p, g)
    assert all(c == 0 for c in r)
    return _clear_denominators(q)


def _poly_gcd(p, q):
    p = poly_trim([Fraction(c) for c in p])
    q = poly_trim([Fraction(c) for c in q])
    while any(c != 0 for c in q):
        _, r = _poly_divmod(p, q)
        p, q = q, poly_trim(r)
        if all(c == 0 for c in q):
            break
    return p


def sturm_chain(p):
    """Sturm chain of a squarefree integer polynomial, integer scaled."""
    chain = [_clear_denominators(poly_trim(list(p)))]
    d = poly_deriv(chain[0])
    if poly_trim(d) != [0]:
        chain.append(_clear_denominators(d))
    while len(chain[-1]) > 1:
        _, r = _poly_divmod(chain[-2], chain[-1])
        r = poly_trim(r)
        if all(c == 0 for c in r):
            break
        chain.append(_clear_denominators([-c for c in r]))
    return chain


def _sign_at(p, x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, exact."""
    num, den = x.numerator, x.denominator
    acc = 0
    powden = 1
    for c in reversed(p):
        acc = acc * num + c * powden
        powden *= den
    # powden overshoots by one factor; sign unaffected (den > 0)
    return (acc > 0) - (acc < 0)


def _variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(chain, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a squarefree chain."""
    return _variations(chain, a) - _variations(chain, b)


def root_upper_bound(p) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    p = poly_trim(list(p))
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=0)
    return Fraction(m, lead) + 1


def largest_real_root(p, rel_tol: Fraction = Fraction(1, 10**14)):
    """Certified bracket (lo, hi] around the largest real root of p.

    Requires p to have at least one real root; uses exact Sturm counts so
    the bracket is rigorous.  Returns a pair of Fractions.
    """
    sf = poly_squarefree(p)
    chain = sturm_chain(sf)
    hi = root_upper_bound(sf)
    lo = -hi
    if count_real_roots(chain, lo, hi) == 0:
        raise ValueError("polynomial has no real roots")
    while hi - lo > rel_tol * max(abs(hi), Fraction(1)):
        mid = (lo + hi) / 2
        if count_real_roots(chain, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return lo, hi


def count_roots_above(p, threshold: Fraction) -> int:
    """Distinct real roots of p in (threshold, +inf), exact."""
    sf = poly_squarefree(p)
    chain = sturm_chain(sf)
    hi = root_upper_bound(sf)
    if hi <= threshold:
        return 0
    return count_real_roots(chain, threshold, hi)
