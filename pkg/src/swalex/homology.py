"""First-homology bookkeeping for closed 3-manifold presentations.

Computes H1 from the abelianized relators, houses classes phi in H^1
and Euler classes e in H^2 (identified with H_1 through Poincare
duality), the Betti/signature formulas for a circle bundle, kernel
sublattices of the pairing with e, and the decomposition of a real
degree-2 class into a positive rational combination of integral ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exactalg import IntMatrix, smith_normal_form, solve_integer, inverse_unimodular
from .presentations import Presentation, Word

__all__ = [
    "H1Data",
    "CohClass1",
    "EulerClass",
    "Interval",
    "RealClass2",
    "h1",
    "divisibility",
    "BundleInvariants",
    "circle_bundle_invariants",
    "ker_pairing",
    "find_transverse_class",
    "decompose_positive",
    "dual_basis_matrix",
]


@dataclass(frozen=True)
class CohClass1:
    """A class in H^1: an integer vector pairing with the free part of H_1."""

    values: tuple[int, ...]

    def __init__(self, values: Sequence[int]):
        object.__setattr__(self, "values", tuple(int(v) for v in values))

    @property
    def b(self) -> int:
        return len(self.values)

    def pair(self, h1_free: Sequence[int]) -> int:
        if len(h1_free) != len(self.values):
            raise ValueError("dimension mismatch")
        return sum(a * b for a, b in zip(self.values, h1_free))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def divisibility(phi: CohClass1) -> int:
    """gcd of the entries (0 for the zero class); primitive iff 1."""
    return math.gcd(*phi.values) if phi.values else 0


@dataclass(frozen=True)
class EulerClass:
    """A class in H^2, written through Poincare duality in H_1 coordinates."""

    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def __init__(self, free: Sequence[int], torsion: Sequence[int] = (), moduli: Sequence[int] = ()):
        free = tuple(int(v) for v in free)
        tor = tuple(int(v) for v in torsion)
        if moduli:
            if len(moduli) != len(tor):
                raise ValueError("torsion coordinates do not match the moduli")
            tor = tuple(v % m for v, m in zip(tor, moduli))
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "torsion", tor)

    @property
    def is_torsion(self) -> bool:
        return all(v == 0 for v in self.free)

    @property
    def is_zero(self) -> bool:
        return self.is_torsion and all(v == 0 for v in self.torsion)


class H1Data:
    """H_1 of a presentation: free rank, torsion invariants, and the
    change of basis identifying generator exponent vectors with
    Z^b + torsion coordinates."""

    __slots__ = ("b", "torsion", "projection", "_free_cols", "_tor_cols")

    def __init__(self, b: int, torsion: Sequence[int], projection: IntMatrix,
                 free_cols: Sequence[int], tor_cols: Sequence[int]):
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "torsion", tuple(torsion))
        object.__setattr__(self, "projection", projection)
        object.__setattr__(self, "_free_cols", tuple(free_cols))
        object.__setattr__(self, "_tor_cols", tuple(tor_cols))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("H1Data is immutable")

    @property
    def num_generators(self) -> int:
        return self.projection.rows

    def full_class(self, expvec: Sequence[int]) -> tuple[int, ...]:
        if len(expvec) != self.projection.rows:
            raise ValueError("exponent vector length mismatch")
        return tuple(
            sum(expvec[i] * self.projection.entries[i][j] for i in range(len(expvec)))
            for j in range(self.projection.cols)
        )

    def free_class(self, expvec: Sequence[int]) -> tuple[int, ...]:
        y = self.full_class(expvec)
        return tuple(y[j] for j in self._free_cols)

    def torsion_class(self, expvec: Sequence[int]) -> tuple[int, ...]:
        y = self.full_class(expvec)
        return tuple(y[j] % d for j, d in zip(self._tor_cols, self.torsion))

    def word_free_class(self, w: Word) -> tuple[int, ...]:
        return self.free_class(w.exponent_vector(self.num_generators))

    def phi_of_word(self, phi: CohClass1, w: Word) -> int:
        return phi.pair(self.word_free_class(w))

    def generator_free_matrix(self) -> IntMatrix:
        """Rows = free-part classes of the presentation generators."""
        n = self.num_generators
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append(self.free_class(e))
        return IntMatrix(rows, cols=self.b)

    def __repr__(self) -> str:
        return f"H1Data(b={self.b}, torsion={self.torsion})"


def h1(p: Presentation) -> H1Data:
    """H_1 from the Smith normal form of the abelianized relator matrix."""
    m = p.abelianized_relator_matrix()
    n = p.num_generators
    if m.rows == 0:
        return H1Data(n, (), IntMatrix.identity(n), tuple(range(n)), ())
    d, _, v = smith_normal_form(m)
    diag = list(d.diagonal()) + [0] * (n - min(m.rows, n))
    free_cols = [j for j in range(n) if j >= min(m.rows, n) or diag[j] == 0]
    tor_cols = [j for j in range(min(m.rows, n)) if diag[j] >= 2]
    torsion = [diag[j] for j in tor_cols]
    return H1Data(len(free_cols), torsion, v, free_cols, tor_cols)


# ---------------------------------------------------------------------------
# Circle bundle invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BundleInvariants:
    b1: int
    b2: int
    b2_plus: int
    b2_minus: int
    signature: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.b1, self.b2, self.b2_plus, self.b2_minus, self.signature)


class TorsionEulerClassError(ValueError):
    """The Betti/signature formulas assume the Euler class is not a
    nonzero torsion class."""


def circle_bundle_invariants(h: H1Data, e: EulerClass) -> BundleInvariants:
    """Betti numbers and signature of the total space of the circle
    bundle with Euler class e over a closed orientable base with
    b_1 = h.b.

    Nontorsion e: (b, 2b-2, b-1, b-1, 0).  Zero e (the product case):
    (b+1, 2b, b, b, 0) by the Kunneth formula.
    """
    b = h.b
    if e.is_zero:
        return BundleInvariants(b + 1, 2 * b, b, b, 0)
    if e.is_torsion:
        raise TorsionEulerClassError(
            "invariants are only implemented for nontorsion or zero Euler class"
        )
    if b < 1:
        raise ValueError("a nontorsion class needs b >= 1")
    return BundleInvariants(b, 2 * b - 2, b - 1, b - 1, 0)


def intersection_form_structure(h: H1Data, e: EulerClass) -> dict:
    """The block structure of the intersection form on the total space,
    on a basis of pulled-back classes and lifts of a kernel basis:
    [[0, I], [I, A]] with blocks of rank b_1 - 1.

    The symmetric block A depends on geometric choices the algebra does
    not determine, so it is reported symbolically, never as numbers.
    """
    if e.is_zero or e.is_torsion:
        raise TorsionEulerClassError(
            "the block decomposition needs a nontorsion Euler class"
        )
    r = h.b - 1
    return {
        "block_rank": r,
        "blocks": [["0", "I"], ["I", "A"]],
        "unknown": "A = symmetric matrix of pairwise intersections of the lifts",
    }


def ker_pairing(h: H1Data, e: EulerClass) -> list[CohClass1]:
    """Basis of the saturated sublattice { phi : phi(free part of PD e) = 0 }.

    Rank b-1 for nontorsion e, rank b for torsion e.
    """
    b = h.b
    if b < 1:
        raise ValueError("needs b >= 1")
    v = list(e.free)
    if all(x == 0 for x in v):
        return [CohClass1([1 if i == j else 0 for j in range(b)]) for i in range(b)]
    col = IntMatrix([[x] for x in v], cols=1)
    _, u, _ = smith_normal_form(col)
    # u * v = (d, 0, ..., 0): rows 2..b of u span the kernel and the
    # sublattice is saturated because u is unimodular.
    return [CohClass1(u.entries[i]) for i in range(1, b)]


def find_transverse_class(h: H1Data, e: EulerClass, z_free: Sequence[int]) -> CohClass1 | None:
    """A class phi with phi . e_free = 0 and phi(z) != 0, or None.

    None is returned exactly when ker(. e) is contained in ker(. PD z),
    i.e. when e is a rational multiple of PD(z) (including z = 0).
    """
    z = tuple(int(x) for x in z_free)
    if len(z) != h.b:
        raise ValueError("dimension mismatch")
    basis = ker_pairing(h, e)
    for phi in basis:
        if phi.pair(z) != 0:
            return phi
    return None


def dual_basis_matrix(class_vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Given b vectors forming a basis of Z^b (as H_1 classes), return
    the matrix whose rows are the dual H^1 classes."""
    b = len(class_vectors)
    c = IntMatrix(class_vectors, cols=b)
    if abs(c.det()) != 1:
        raise ValueError("class vectors are not a lattice basis")
    return inverse_unimodular(c.transpose())


# ---------------------------------------------------------------------------
# Positive cone decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """A certified rational interval standing in for a real coordinate."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


Coord = Union[int, Fraction, Interval]


@dataclass(frozen=True)
class RealClass2:
    """A degree-2 real class with exact rational or interval-certified
    coordinates."""

    coords: tuple[Coord, ...]

    def __init__(self, coords: Sequence[Coord]):
        clean = []
        for c in coords:
            if isinstance(c, Interval):
                clean.append(c)
            else:
                clean.append(Fraction(c))
        object.__setattr__(self, "coords", tuple(clean))

    @property
    def n(self) -> int:
        return len(self.coords)

    def pairing_bounds(self, a: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        for c, ai in zip(self.coords, a):
            if isinstance(c, Interval):
                x, y = c.lo * ai, c.hi * ai
                lo += min(x, y)
                hi += max(x, y)
            else:
                lo += c * ai
                hi += c * ai
        return lo, hi


def _default_positive_basis(a: Sequence[Fraction]) -> list[tuple[int, ...]]:
    """A basis e_1..e_n of Z^n with e_i . a > 0 for every i."""
    n = len(a)
    k = next((i for i, x in enumerate(a) if x != 0), None)
    if k is None:
        raise ValueError("the pairing vector is zero")
    s = 1 if a[k] > 0 else -1
    basis = []
    for i in range(n):
        if i == k:
            v = [0] * n
            v[k] = s
        else:
            # e_i + m * s * e_k with m large enough for positivity
            m = 0
            if a[i] <= 0:
                m = int((-a[i]) / abs(a[k])) + 1
            v = [0] * n
            v[i] = 1
            v[k] = m * s
        basis.append(tuple(v))
    return basis


def decompose_positive(
    hvec: RealClass2,
    a: Sequence[int | Fraction],
    basis: Sequence[Sequence[int]] | None = None,
) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Write hvec as a nonnegative rational combination of integral
    classes that all pair strictly positively with a.

    Rational coordinates are reproduced exactly; interval-certified
    coordinates are first rationalized inside their intervals (the
    explicit perturbation replacing a continuity argument), so the
    reconstruction agrees with hvec within the interval widths.  Raises
    if the pairing hvec . a is not certifiably positive.
    """
    av = [Fraction(x) for x in a]
    if len(av) != hvec.n:
        raise ValueError("dimension mismatch")
    lo, _ = hvec.pairing_bounds(av)
    if lo <= 0:
        raise ValueError("hvec . a must be certifiably positive")

    if basis is None:
        basis_vecs = _default_positive_basis(av)
    else:
        basis_vecs = [tuple(int(x) for x in v) for v in basis]
        if len(basis_vecs) != hvec.n:
            raise ValueError("basis has the wrong size")
        bm = IntMatrix(basis_vecs, cols=hvec.n)
        if abs(bm.det()) != 1:
            raise ValueError("basis vectors do not span the lattice")
    for v in basis_vecs:
        if sum(Fraction(x) * y for x, y in zip(v, av)) <= 0:
            raise ValueError("basis vector with nonpositive pairing")

    # coordinate rationalization: replace each interval coordinate by a
    # rational point inside it (any choice keeps the pairing above the
    # certified lower bound)
    point = [
        c.midpoint() if isinstance(c, Interval) else c for c in hvec.coords
    ]

    # expand over the positive basis; nonnegative rational coordinates
    # give a term per basis vector, otherwise scale the point itself
    bmat = IntMatrix(
        [[basis_vecs[i][j] for i in range(len(basis_vecs))] for j in range(hvec.n)],
        cols=len(basis_vecs),
    )
    coords = _solve_rational(bmat, point)
    if coords is not None and all(c >= 0 for c in coords):
        return [
            (c, basis_vecs[i]) for i, c in enumerate(coords) if c != 0
        ]

    denom = 1
    for x in point:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    integral = tuple(int(x * denom) for x in point)
    return [(Fraction(1, denom), integral)]


def _solve_rational(m: IntMatrix, w: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve m x = w over the rationals (m square unimodular-ish)."""
    denom = 1
    for x in w:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    wi = [int(x * denom) for x in w]
    sol = solve_integer(m, wi)
    if sol is None:
        return None
    return [Fraction(x, denom) for x in sol]
