"""Built-in Neron-Severi models and exact entropy of composed involutions.

Each model records the intersection form on the sublattice spanned by the
fiber classes of its ramified double coverings, together with the action
of the covering involutions on that basis.  The involution matrices are
pinned down (uniquely) by three constraints checked at construction time:
they are involutions, they preserve the intersection form, and they fix
the pulled-back fiber classes of their own covering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _intmat, lattice
from .lattice import EntropyValue, GramMatrix, LatticeMap


def _signature(gram: GramMatrix) -> tuple[int, int]:
    """Signature of a nondegenerate integral symmetric matrix, exact.

    All roots of the characteristic polynomial are real, so Descartes'
    rule of signs is sharp and gives the counts exactly.
    """
    if gram.det() == 0:
        raise lattice.DegenerateLatticeError("degenerate lattice")
    poly = _intmat.charpoly(gram.entries)

    def variations(coeffs):
        signs = [(c > 0) - (c < 0) for c in coeffs if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    pos = variations(poly)
    neg = variations([c if i % 2 == 0 else -c for i, c in enumerate(poly)])
    return pos, neg


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    gram: GramMatrix
    basis_labels: tuple[str, ...]
    involutions: tuple[LatticeMap, ...]

    def __post_init__(self):
        dim = self.gram.dim
        if len(self.basis_labels) != dim:
            raise ValueError("basis labels must match the lattice rank")
        if _signature(self.gram) != (1, dim - 1):
            raise ValueError("intersection form must have hyperbolic signature")
        ident = _intmat.identity(dim)
        for s in self.involutions:
            if s.dim != dim:
                raise ValueError("involution dimension mismatch")
            if _intmat.mat_mul(s.entries, s.entries) != ident:
                raise ValueError("covering involution must square to identity")
            if not lattice.is_isometry(self.gram, s):
                raise ValueError("covering involution must preserve the form")

    @property
    def dim(self) -> int:
        return self.gram.dim

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "gram": [list(row) for row in self.gram.entries],
            "basis_labels": list(self.basis_labels),
            "involutions": [[list(row) for row in s.entries] for s in self.involutions],
        }


@dataclass(frozen=True)
class DivisorClass:
    """Integer coordinate vector in a model's basis."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))


@dataclass(frozen=True)
class RationalVectorFamily:
    """Exact rational coordinates of real numbers y_1, ..., y_k over some
    unspecified Q-linearly-independent set of reals."""

    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        vecs = tuple(tuple(Fraction(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if len({len(v) for v in vecs}) > 1:
            raise ValueError("all vectors must have equal length")


def model_triple_quadric() -> SurfaceModel:
    """Rank-3 model of a smooth tridegree-(2,2,2) surface in (P^1)^3.

    Basis (L1, L2, L3): fiber classes of the three coordinate-forgetting
    double coverings.  Each covering involution s_j fixes the two classes
    pulled back through its own projection and reflects the third.  The
    pairing L_i . L_j = 2 (i != j), L_i^2 = 0 is the standard one for
    this family; it is validated here only through the isometry and
    involution constraints plus the entropy acceptance value.
    """
    gram = GramMatrix(((0, 2, 2), (2, 0, 2), (2, 2, 0)))
    s1 = LatticeMap(((-1, 0, 0), (2, 1, 0), (2, 0, 1)))
    s2 = LatticeMap(((1, 2, 0), (0, -1, 0), (0, 2, 1)))
    s3 = LatticeMap(((1, 0, 2), (0, 1, 2), (0, 0, -1)))
    return SurfaceModel(
        name="triple-quadric",
        gram=gram,
        basis_labels=("L1", "L2", "L3"),
        involutions=(s1, s2, s3),
    )


def model_wehler() -> SurfaceModel:
    """Rank-2 model of a generic Wehler surface (K3 in the flag variety).

    Basis (F1, F2): generic fibers of the two degree-2 projections, with
    F_i^2 = 2 and F1 . F2 = 4.  The covering involutions act as the
    reflections x -> -x + (x . F_i) F_i.
    """
    gram = GramMatrix(((2, 4), (4, 2)))
    s1 = LatticeMap(((1, 4), (0, -1)))
    s2 = LatticeMap(((-1, 0), (4, 1)))
    return SurfaceModel(
        name="wehler",
        gram=gram,
        basis_labels=("F1", "F2"),
        involutions=(s1, s2),
    )


_MODEL_FACTORIES = {
    "triple-quadric": model_triple_quadric,
    "wehler": model_wehler,
}


def model_names() -> list[str]:
    return sorted(_MODEL_FACTORIES)


def model_by_name(name: str) -> SurfaceModel:
    try:
        return _MODEL_FACTORIES[name]()
    except KeyError:
        raise ValueError(
            f"unknown model {name!r}; available: {sorted(_MODEL_FACTORIES)}"
        ) from None


def composed_word_map(model: SurfaceModel, word) -> LatticeMap:
    """Product of involutions for a word of 1-based indices.

    The rightmost index acts first, i.e. word (1, 2, 3) is s1 o s2 o s3.
    """
    word = list(word)
    if not word:
        raise ValueError("word must be nonempty")
    acc = _intmat.identity(model.dim)
    for idx in word:
        if not 1 <= idx <= len(model.involutions):
            raise ValueError(f"invalid involution index {idx}")
        acc = _intmat.mat_mul(acc, model.involutions[idx - 1].entries)
    return LatticeMap(acc)


def composed_entropy(model: SurfaceModel, word) -> EntropyValue:
    """Entropy (log spectral radius) of the composition of covering
    involutions given by `word`."""
    return lattice.spectral_logradius(composed_word_map(model, word))


def picard_number_torus(ys) -> int:
    """Real Picard number of an abelian surface from the rational
    coordinates of the three period entries y1, y2, y3.

    Equals 4 minus the Q-rank of the family, by exact rational Gaussian
    elimination.
    """
    family = ys if isinstance(ys, RationalVectorFamily) else RationalVectorFamily(tuple(ys))
    if len(family.vectors) != 3:
        raise ValueError("exactly three vectors are required")
    if not any(family.vectors[0]):
        raise ValueError("y1 must be positive")
    rows = [list(v) for v in family.vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, 3) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(3):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == 3:
            break
    return 4 - rank


def abelian_concordance(rho: int, represents_zero: bool | None = None) -> Fraction:
    """Concordance of a real abelian surface from its real Picard number.

    rho = 1 gives 1; rho = 3 gives 1/2; for rho = 2 the answer depends on
    whether the intersection form represents zero (real elliptic
    fibration exists): 1 if it does, 1/2 otherwise.
    """
    if rho == 1:
        return Fraction(1)
    if rho == 3:
        return Fraction(1, 2)
    if rho == 2:
        if represents_zero is None:
            raise ValueError("represents_zero is required when rho = 2")
        return Fraction(1) if represents_zero else Fraction(1, 2)
    raise ValueError("rho must be 1, 2 or 3")
