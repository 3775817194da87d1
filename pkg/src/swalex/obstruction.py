"""The verdict engine: monicness and degree checks across finite
quotients, cross-quotient degree consistency, and the stricter trivial
canonical class constraints.

A symplectic circle bundle with nontorsion Euler class forces every
twisted Alexander polynomial of the base to be monic of degree
|G| * (zeta . phi) + 2 div(phi_G) for one fixed class zeta; the checks
here test exactly that across a supplied list of finite quotients.  A
PASSES verdict means "no obstruction found among the supplied
quotients" and is upgraded to an actual fiberedness statement only
under the user-asserted graph-manifold flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .alexander import (
    IndeterminateTwisted,
    twisted_alexander,
)
from .covers import (
    FiniteGroup,
    FiniteHom,
    enumerate_epimorphisms,
    reidemeister_schreier,
    restricted_divisibility,
    trivial_hom,
)
from .exactalg import LaurentPoly
from .homology import CohClass1, divisibility, h1
from .presentations import Presentation

__all__ = [
    "is_monic",
    "QuotientRecord",
    "ModeFlags",
    "Verdict",
    "degree_report",
    "verdict",
]


def is_monic(p: LaurentPoly) -> bool:
    """True iff p is nonzero and both extreme coefficients are +-1."""
    if len(p.variables) != 1:
        raise ValueError("monicness is defined for one-variable polynomials")
    if p.is_zero:
        return False
    exps = sorted(e[0] for e in p.terms)
    return abs(p.terms[(exps[0],)]) == 1 and abs(p.terms[(exps[-1],)]) == 1


@dataclass(frozen=True)
class QuotientRecord:
    """One finite quotient's polynomial together with the derived data
    the degree formula constrains."""

    hom: FiniteHom
    poly: LaurentPoly | IndeterminateTwisted
    monic: bool
    degree: int | None
    div_phi_g: int
    implied_zeta_phi: Fraction | None
    cover_b1: int

    @property
    def indeterminate(self) -> bool:
        return isinstance(self.poly, IndeterminateTwisted)

    @property
    def group_name(self) -> str:
        return self.hom.target.name

    def describe(self) -> str:
        if self.indeterminate:
            body = "indeterminate"
        else:
            body = str(self.poly)
        return (
            f"[{self.group_name} images={self.hom.images}] {body} "
            f"(monic={self.monic}, degree={self.degree}, "
            f"div={self.div_phi_g}, zeta.phi={self.implied_zeta_phi})"
        )


@dataclass(frozen=True)
class ModeFlags:
    graph_manifold: bool = False
    k_zero: bool = False


@dataclass(frozen=True)
class Verdict:
    status: str  # PASSES | FAILS | INDETERMINATE
    reason: str
    witness: QuotientRecord | None = None
    flags: ModeFlags = field(default_factory=ModeFlags)

    def __post_init__(self):
        if self.status == "FAILS" and self.witness is None:
            raise ValueError("a failing verdict must carry a witness")


def quotient_record(
    p: Presentation,
    a: FiniteHom,
    phi: CohClass1,
    h=None,
    jobs: int = 1,
) -> QuotientRecord:
    """Compute one record: polynomial, monicness, degree, divisibility
    and the zeta.phi value the degree formula would imply."""
    h = h or h1(p)
    if a.is_trivial():
        div = divisibility(phi)
        cover_b1 = h.b
    else:
        div = restricted_divisibility(p, a, phi, h)
        cover_b1 = h1(reidemeister_schreier(p, a)).b
    poly = twisted_alexander(p, a, phi, h, jobs=jobs)
    if isinstance(poly, IndeterminateTwisted):
        return QuotientRecord(a, poly, False, None, div, None, cover_b1)
    if poly.is_zero:
        return QuotientRecord(a, poly, False, None, div, None, cover_b1)
    deg = poly.laurent_degree()
    implied = Fraction(deg - 2 * div, a.target.order)
    return QuotientRecord(a, poly, is_monic(poly), deg, div, implied, cover_b1)


def degree_report(
    p: Presentation,
    phi: CohClass1,
    groups: Sequence[FiniteGroup],
    jobs: int = 1,
    include_trivial: bool = True,
) -> list[QuotientRecord]:
    """Records for the trivial quotient and every epimorphism onto each
    supplied group whose kernel still sees phi.

    phi must be primitive (the degree formula is stated for primitive
    classes).  Epimorphisms for which phi vanishes on the kernel cannot
    occur for a nonzero phi and a finite quotient, so every enumerated
    epimorphism contributes a record.
    """
    if divisibility(phi) != 1:
        raise ValueError("phi must be primitive")
    h = h1(p)
    records = []
    if include_trivial:
        records.append(quotient_record(p, trivial_hom(p), phi, h, jobs=jobs))
    for g in groups:
        for a in enumerate_epimorphisms(p, g):
            records.append(quotient_record(p, a, phi, h, jobs=jobs))
    return records


def verdict(records: Sequence[QuotientRecord], flags: ModeFlags = ModeFlags()) -> Verdict:
    """Fold records into a verdict.

    FAILS if any polynomial vanishes or is non-monic, if two records
    imply different values of zeta.phi (no single class satisfies the
    degree formula), or, in trivial-canonical-class mode, if any
    implied zeta.phi is nonzero or any processed cover has b_1 > 3.
    Indeterminate polynomials make the verdict INDETERMINATE unless
    something else already fails.  PASSES means only that no
    obstruction was found among the supplied quotients; with the
    graph-manifold flag the nonvanishing of all records is reported as
    consistent with fiberedness.
    """
    if not records:
        raise ValueError("verdict needs at least one record")
    for r in records:
        if r.indeterminate:
            continue
        if r.poly.is_zero:
            return Verdict("FAILS", "vanishing twisted polynomial", r, flags)
        if not r.monic:
            return Verdict("FAILS", "non-monic twisted polynomial", r, flags)
    implied = [(r.implied_zeta_phi, r) for r in records if r.implied_zeta_phi is not None]
    if implied:
        base = implied[0][0]
        for val, r in implied[1:]:
            if val != base:
                return Verdict(
                    "FAILS",
                    f"degree formula inconsistency: zeta.phi = {base} vs {val}",
                    r,
                    flags,
                )
    if flags.k_zero:
        for r in records:
            if r.implied_zeta_phi is not None and r.implied_zeta_phi != 0:
                return Verdict(
                    "FAILS",
                    "trivial canonical class forces zeta.phi = 0",
                    r,
                    flags,
                )
            if r.cover_b1 > 3:
                return Verdict(
                    "FAILS",
                    "a finite cover has b_1 > 3, excluded for trivial canonical class",
                    r,
                    flags,
                )
    for r in records:
        if r.indeterminate:
            return Verdict(
                "INDETERMINATE", "order quotient did not divide exactly", r, flags
            )
    if flags.graph_manifold:
        return Verdict(
            "PASSES",
            "all supplied quotients nonvanishing and monic with consistent "
            "degrees: consistent with fibered (graph-manifold criterion)",
            None,
            flags,
        )
    return Verdict("PASSES", "no obstruction found among the supplied quotients", None, flags)
