"""Seiberg-Witten polynomial bookkeeping.

A three-manifold's SW invariant is packaged as a finite symmetric
support of basic classes with integer coefficients.  Conversion from
the multivariable Alexander polynomial recenters its exponents to a
symmetric position (the half-Poincare-dual parametrization: a class
recorded at lattice point w corresponds to the basic class at 2w in
H_1 coordinates, recorded by the ``half_pd`` flag rather than by
halving coordinates).  Pushing forward to a circle bundle's total
space sums coefficients over fibers of the pull-back, i.e. over basic
classes differing by a multiple of the Euler class: on stored points
that is 2(w - w') in Z * e_free.  Torsion classes are dropped
throughout, which matches the free-part bookkeeping of all formulas
used here.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .exactalg import IntMatrix, LaurentPoly, smith_normal_form
from .homology import EulerClass, H1Data

__all__ = [
    "SWPolynomial",
    "sw_from_alexander",
    "baldridge_pushforward",
    "coefficient_sum",
    "kzero_sum_test",
    "splice_sw",
]


class SWPolynomial:
    """Basic classes (mod torsion, in half-PD coordinates) with their
    integer SW coefficients.

    Invariant: the support is symmetric under negation (the symmetry of
    the three-dimensional invariant), and no zero coefficients are
    stored.
    """

    __slots__ = ("rank", "support", "half_pd")

    def __init__(self, rank: int, support: Mapping[tuple[int, ...], int],
                 half_pd: bool = True):
        clean: dict[tuple[int, ...], int] = {}
        for w, c in support.items():
            c = int(c)
            if c == 0:
                continue
            w = tuple(int(x) for x in w)
            if len(w) != rank:
                raise ValueError("support point of wrong rank")
            clean[w] = c
        for w in clean:
            neg = tuple(-x for x in w)
            if neg not in clean:
                raise ValueError("support is not symmetric under negation")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "support", clean)
        object.__setattr__(self, "half_pd", bool(half_pd))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("SWPolynomial is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SWPolynomial)
            and self.rank == other.rank
            and self.support == other.support
            and self.half_pd == other.half_pd
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.support.items()), self.half_pd))

    @property
    def num_classes(self) -> int:
        return len(self.support)

    def sorted_support(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.support.items())

    def __repr__(self) -> str:
        return f"SWPolynomial(rank={self.rank}, support={self.sorted_support()})"


def sw_from_alexander(d: LaurentPoly, h: H1Data) -> SWPolynomial:
    """Convert a multivariable Alexander polynomial to SW data.

    The exponent support is recentered to be symmetric about the
    origin and the global sign is fixed to make the coefficient at the
    lexicographically smallest support point positive.  Requires
    b_1 >= 2 (the conversion used here is the b_1 > 1 normalization).
    """
    b = h.b
    if b < 2:
        raise ValueError("sw_from_alexander needs b_1 >= 2")
    if len(d.variables) != b:
        raise ValueError("polynomial rank does not match H_1")
    if d.is_zero:
        return SWPolynomial(b, {})
    lo = d.min_exponents()
    hi = d.max_exponents()
    center2 = [l + h_ for l, h_ in zip(lo, hi)]
    if any(c % 2 for c in center2):
        raise ValueError("exponent support cannot be symmetrically recentered")
    center = [c // 2 for c in center2]
    shifted = {
        tuple(x - c for x, c in zip(e, center)): v for e, v in d.terms.items()
    }
    for w in shifted:
        if tuple(-x for x in w) not in shifted:
            raise ValueError("polynomial support is not symmetric up to units")
    if shifted[min(shifted)] < 0:
        shifted = {w: -c for w, c in shifted.items()}
    return SWPolynomial(b, shifted)


def _pushforward_lattice(e_free: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """The sublattice L = { v : 2v in Z*e_free } as (multiplier, primitive).

    L is generated by c*u0 where u0 is the primitive direction of
    e_free and c is d0/2 for even divisibility d0, else d0.
    """
    d0 = math.gcd(*e_free)
    u0 = tuple(x // d0 for x in e_free)
    c = d0 // 2 if d0 % 2 == 0 else d0
    return c, u0


def baldridge_pushforward(s: SWPolynomial, e: EulerClass) -> SWPolynomial:
    """Sum coefficients over cosets of the Euler-class direction.

    Stored points w carry basic classes 2w, so w and w' are identified
    when 2(w - w') is an integer multiple of e_free.  Zero sums are
    dropped; torsion appearing in the quotient lattice is dropped with
    them (the bookkeeping is mod torsion by convention).
    """
    if e.is_torsion:
        raise ValueError("the pushforward formula needs a nontorsion Euler class")
    if len(e.free) != s.rank:
        raise ValueError("rank mismatch")
    c, u0 = _pushforward_lattice(e.free)
    gen = tuple(c * x for x in u0)
    col = IntMatrix([[x] for x in gen], cols=1)
    _, u, _ = smith_normal_form(col)
    # u * gen = (k, 0, ..., 0); quotient free coordinates are rows 2..rank
    out: dict[tuple[int, ...], int] = {}
    for w, coeff in s.support.items():
        uw = u.mul_vec(w)
        key = tuple(uw[1:])
        out[key] = out.get(key, 0) + coeff
    out = {k: v for k, v in out.items() if v}
    return SWPolynomial(s.rank - 1, out, half_pd=s.half_pd)


def coefficient_sum(s: SWPolynomial) -> int:
    """The sum of all SW coefficients."""
    return sum(s.support.values())


def kzero_sum_test(s: SWPolynomial, h: H1Data) -> bool:
    """Necessary conditions for carrying a symplectic structure with
    trivial canonical class: the coefficient sum is +-1 (so the trivial
    class is an honest basic class) and b_1 <= 3 (the coefficient sum
    of the Alexander polynomial vanishes for b_1 > 3)."""
    return abs(coefficient_sum(s)) == 1 and h.b <= 3


def splice_sw(delta_k: LaurentPoly, e: EulerClass) -> SWPolynomial:
    """SW polynomial of the circle bundle over the splice of a knot with
    the given one-variable Alexander polynomial, bypassing Fox calculus.

    The splice's multivariable polynomial equals the knot polynomial in
    the fiber variable, so it is embedded into three variables and fed
    through the conversion and the pushforward.
    """
    if len(delta_k.variables) != 1:
        raise ValueError("splice_sw expects a one-variable polynomial")
    if not delta_k.is_symmetric_univariate():
        raise ValueError("knot polynomial must be symmetric up to units")
    emb = LaurentPoly(
        ("x", "y", "z"), {(0, 0, e0[0]): c for e0, c in delta_k.terms.items()}
    )
    fake_h = _rank3_h1()
    s = sw_from_alexander(emb, fake_h)
    return baldridge_pushforward(s, e)


def _rank3_h1() -> H1Data:
    from .homology import h1
    from .presentations import t3_presentation

    return h1(t3_presentation())
