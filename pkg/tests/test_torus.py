import math
import random
from fractions import Fraction

import pytest

from concordance_lab import lattice, torus
from concordance_lab._intmat import mat_mul, mat_vec


def brute_force_line_class(a, b, bound=30):
    """Solve the three pairing equations for the class of the slope-(a,b)
    line by exhaustive search."""
    hits = []
    for alpha in range(-bound, bound + 1):
        for beta in range(-bound, bound + 1):
            for gamma in range(-bound, bound + 1):
                if (
                    beta + gamma == a * a
                    and alpha + gamma == b * b
                    and alpha + beta == (a - b) ** 2
                ):
                    hits.append((alpha, beta, gamma))
    return hits


def random_sl2(rng, length=8):
    m = ((1, 0), (0, 1))
    for _ in range(length):
        g = rng.choice([torus._GEN_S, torus._GEN_T, torus._GEN_T_INV])
        m = mat_mul(m, g)
    return m


# ---------------------------------------------------------------------------
# slopes and line classes
# ---------------------------------------------------------------------------


def test_slope_normalization():
    assert torus.Slope.normalized(2, 4) == torus.Slope(1, 2)
    assert torus.Slope.normalized(-1, -2) == torus.Slope(1, 2)
    assert torus.Slope.normalized(3, 0) == torus.Slope(1, 0)
    assert torus.Slope.normalized(-3, 0) == torus.Slope(1, 0)
    with pytest.raises(ValueError):
        torus.Slope.normalized(0, 0)
    with pytest.raises(ValueError):
        torus.Slope(2, 4)


@pytest.mark.parametrize(
    "slope,expected",
    [
        ((0, 1), (1, 0, 0)),
        ((1, 1), (0, 0, 1)),
        ((1, 0), (0, 1, 0)),
        ((1, 2), (2, -1, 2)),
    ],
)
def test_line_class_examples(slope, expected):
    assert torus.line_class(torus.Slope(*slope)).coords == expected


def test_line_class_oracle():
    assert brute_force_line_class(1, 2) == [(2, -1, 2)]


def test_line_class_pairings_sweep():
    h, v, d = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    for a in range(-12, 13):
        for b in range(-12, 13):
            if (a, b) == (0, 0) or math.gcd(abs(a), abs(b)) != 1:
                continue
            cls = torus.line_class(torus.Slope.normalized(a, b))
            assert cls.pairing(h) == a * a
            assert cls.pairing(v) == b * b
            assert cls.pairing(d) == (a - b) ** 2
            assert cls.square() == 0


# ---------------------------------------------------------------------------
# volumes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "slope,y,expected",
    [
        ((0, 1), 1, (1.0, 1.0)),
        ((1, 1), 1, (math.sqrt(2), 2.0)),
        ((3, 4), 2, (5.0, 50.0)),
    ],
)
def test_line_volumes_examples(slope, y, expected):
    vol_r, vol_c = torus.line_volumes(torus.Slope(*slope), y)
    assert vol_r == pytest.approx(expected[0], abs=1e-12)
    assert vol_c == pytest.approx(expected[1], abs=1e-12)


def test_line_volumes_identity_exact():
    for y in (Fraction(1, 2), Fraction(1), Fraction(2)):
        for a in range(-10, 11):
            for b in range(11):
                if (a, b) == (0, 0) or math.gcd(abs(a), b) != 1:
                    continue
                s = torus.Slope.normalized(a, b)
                vol_r_sq, vol_c = torus.line_volumes_exact(s, y)
                assert vol_c == y * vol_r_sq  # vol_R = y^(-1/2) vol_C^(1/2)


def test_line_volumes_rejects_nonpositive_y():
    with pytest.raises(ValueError):
        torus.line_volumes(torus.Slope(0, 1), 0)
    with pytest.raises(ValueError):
        torus.line_volumes(torus.Slope(0, 1), -1)


# ---------------------------------------------------------------------------
# SL2 pushforward
# ---------------------------------------------------------------------------


def test_pushforward_identity():
    assert torus.sl2_pushforward([[1, 0], [0, 1]]).entries == (
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
    )


def test_pushforward_S_and_T():
    ps = torus.sl2_pushforward([[0, -1], [1, 0]])
    cols = list(zip(*ps.entries))
    assert cols[0] == (0, 1, 0)  # H -> V
    assert cols[1] == (1, 0, 0)  # V -> H
    assert cols[2] == (2, 2, -1)  # Delta -> (2, 2, -1)
    pt = torus.sl2_pushforward([[1, 1], [0, 1]])
    cols = list(zip(*pt.entries))
    assert cols[0] == (1, 0, 0)
    assert cols[1] == (0, 0, 1)
    assert cols[2] == (2, -1, 2)


def test_pushforward_requires_det_one():
    with pytest.raises(ValueError):
        torus.sl2_pushforward([[1, 0], [0, -1]])


def test_pushforward_isometry_and_functorial():
    rng = random.Random(11)
    for _ in range(100):
        m1 = random_sl2(rng)
        m2 = random_sl2(rng)
        p1 = torus.sl2_pushforward(m1)
        assert lattice.is_isometry(torus.TORUS_GRAM, p1)
        lhs = torus.sl2_pushforward(mat_mul(m1, m2)).entries
        rhs = mat_mul(p1.entries, torus.sl2_pushforward(m2).entries)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# triangle reduction
# ---------------------------------------------------------------------------


def test_reduce_already_nonnegative():
    assert torus.reduce_to_triangle((1, 1, 0)) == (((1, 0), (0, 1)), (1, 1, 0))
    assert torus.TorusClass((1, 1, 4)).square() == 18
    assert torus.reduce_to_triangle((1, 1, 4)) == (((1, 0), (0, 1)), (1, 1, 4))


def test_reduce_example_against_bfs_oracle():
    theta = (5, -2, 4)
    g, k = torus.reduce_to_triangle(theta)
    assert min(k) >= 0
    assert mat_vec(torus.sl2_pushforward(g).entries, k) == theta
    g2, k2 = torus._bfs_reduce(torus.TorusClass(theta), max_depth=10)
    assert min(k2) >= 0
    assert mat_vec(torus.sl2_pushforward(g2).entries, tuple(k2)) == theta


def test_reduce_rejects_nonample():
    with pytest.raises(ValueError):
        torus.reduce_to_triangle((1, 0, 0))  # square zero
    with pytest.raises(ValueError):
        torus.reduce_to_triangle((-1, -1, 0))  # wrong component


def test_reduce_sweep_exact_reconstruction():
    for cls in torus.ample_classes(6):
        g, k = torus.reduce_to_triangle(cls)
        assert min(k) >= 0
        assert mat_vec(torus.sl2_pushforward(g).entries, k) == cls.coords


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def test_certificate_simple():
    cert = torus.certify_concordance((1, 1, 0), 1)
    assert cert.mvolR_lower == pytest.approx(2.0)
    assert cert.volC == pytest.approx(2.0)
    assert cert.holds  # 2 >= sqrt(2)


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_certificate_scaling(k):
    cert = torus.certify_concordance((k, k, 0), 1)
    assert cert.mvolR_lower == pytest.approx(2.0 * k)
    assert cert.mvolR_lower >= math.sqrt(2.0 * k)


def test_certificate_full_pipeline_oracle():
    theta = (1, 1, 4)
    cert = torus.certify_concordance(theta, 1)
    # independent recomputation of both sides
    g, k = cert.g, cert.k
    total = 0.0
    for base, kj in zip(((1, 0), (0, 1), (1, 1)), k):
        d = mat_vec(g, base)
        gcd_ = math.gcd(abs(d[0]), abs(d[1]))
        total += kj * math.hypot(d[0] / gcd_, d[1] / gcd_)
    assert total == pytest.approx(cert.mvolR_lower)
    vol_c = 1 * (torus.TorusClass(theta).pairing((1, 0, 0)) + torus.TorusClass(theta).pairing((0, 1, 0)))
    assert vol_c == pytest.approx(cert.volC)
    assert cert.holds


def test_certificate_sweep_small():
    for cls in torus.ample_classes(5):
        for y in (Fraction(1, 2), Fraction(1), Fraction(2)):
            assert torus.certify_concordance(cls, y).holds


# ---------------------------------------------------------------------------
# linear map entropies
# ---------------------------------------------------------------------------


def test_cat_map_entropies():
    h_r, h_c = torus.linear_map_entropies([[2, 1], [1, 1]])
    assert h_r == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-12)
    assert h_c == pytest.approx(2 * h_r, abs=1e-15)


def test_parabolic_and_finite_order():
    assert torus.linear_map_entropies([[1, 1], [0, 1]]) == (0.0, 0.0)
    assert torus.linear_map_entropies([[0, -1], [1, 0]]) == (0.0, 0.0)


def test_linear_map_requires_unimodular():
    with pytest.raises(ValueError):
        torus.linear_map_entropies([[2, 0], [0, 1]])
