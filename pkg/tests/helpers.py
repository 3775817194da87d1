"""Independent oracles and small utilities shared by the test suite.

Everything here recomputes target quantities along routes that do not
share formulas with the library paths they check: determinantal
divisors for Smith forms, Seifert matrices for knot polynomials, the
raw full-matrix minor gcd for one-variable Alexander polynomials, and
an uncollapsed coset-table presentation for cover homology.
"""

from __future__ import annotations

import itertools
import math

from swalex.alexander import fox_matrix
from swalex.covers import FiniteHom, schreier_cover
from swalex.exactalg import IntMatrix, LaurentPoly, PolyMatrix, unit_normalize
from swalex.homology import CohClass1, H1Data, dual_basis_matrix, h1
from swalex.presentations import Presentation, Word


# -- Smith form oracle --------------------------------------------------------


def determinantal_divisors_diagonal(m: IntMatrix) -> list[int]:
    """Invariant factors via determinantal divisors: d_k = D_k / D_{k-1}
    with D_k the gcd of all k x k minors.  Independent of any
    elimination strategy."""
    r = min(m.rows, m.cols)
    out = []
    prev = 1
    for k in range(1, r + 1):
        g = 0
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                sub = IntMatrix([[m.entries[i][j] for j in cols] for i in rows], cols=k)
                g = math.gcd(g, sub.det())
        if g == 0:
            out.extend([0] * (r - len(out)))
            return out
        out.append(g // prev)
        prev = g
    return out


# -- knot polynomial oracle ---------------------------------------------------


def seifert_alexander(v_rows: list[list[int]]) -> LaurentPoly:
    """det(V - t V^T) for a Seifert matrix V, unit-normalized."""
    g = len(v_rows)
    t = LaurentPoly.univariate({1: 1})
    entries = [
        [
            LaurentPoly.univariate({0: v_rows[i][j]}) - t * LaurentPoly.univariate({0: v_rows[j][i]})
            for j in range(g)
        ]
        for i in range(g)
    ]
    from swalex.exactalg import poly_det

    return unit_normalize(poly_det(PolyMatrix(entries, ("t",)), method="cofactor"))


SEIFERT_MATRICES = {
    "unknot": [],
    "trefoil": [[-1, 1], [0, -1]],
    "figure_eight": [[1, 1], [0, -1]],
    "5_2": [[1, 1], [0, 2]],
}


# -- natural basis helpers ----------------------------------------------------


def splice_basis(p: Presentation, knot, h: H1Data | None = None):
    """Class vectors of (a, b, knot meridian) for a splice presentation."""
    h = h or h1(p)
    n = p.num_generators

    def gen_class(i):
        e = [0] * n
        e[i] = 1
        return h.free_class(e)

    mu_e = [0] * n
    for g, e in knot.presentation.peripheral[0].syllables:
        mu_e[g + 2] += e
    return [gen_class(0), gen_class(1), h.free_class(mu_e)]


def z_dual(p: Presentation, knot, h: H1Data | None = None) -> CohClass1:
    """The class dual to the knot-meridian direction of a splice."""
    h = h or h1(p)
    basis = splice_basis(p, knot, h)
    return CohClass1(dual_basis_matrix(basis).entries[2])


def natural_euler(p: Presentation, knot, coeffs, h: H1Data | None = None):
    """Euler class sum(coeffs[i] * basis[i]) in internal coordinates."""
    from swalex.homology import EulerClass

    h = h or h1(p)
    basis = splice_basis(p, knot, h)
    free = [
        sum(coeffs[i] * basis[i][j] for i in range(3)) for j in range(3)
    ]
    return EulerClass(free, [0] * len(h.torsion), moduli=h.torsion)


def embed_univariate(poly: LaurentPoly, direction, variables) -> LaurentPoly:
    """Map t^k to the monomial with exponent k * direction."""
    terms = {}
    for e, c in poly.terms.items():
        key = tuple(e[0] * d for d in direction)
        terms[key] = terms.get(key, 0) + c
    return LaurentPoly(variables, terms)


# -- direct one-variable order oracle ----------------------------------------


def one_variable_delta_direct(p: Presentation, phi: CohClass1,
                              h: H1Data | None = None) -> LaurentPoly:
    """Order of the phi-twisted first homology computed from the raw
    definition: gcd of ALL (n-1) x (n-1) minors of the specialized Fox
    Jacobian, with no column deletion and no correction factors."""
    from swalex.exactalg import minor_gcd

    h = h or h1(p)
    fm = fox_matrix(p)
    n = p.num_generators
    rows = []
    for row in fm:
        prow = []
        for elt in row:
            terms: dict[tuple[int], int] = {}
            for w, c in elt.terms.items():
                k = phi.pair(h.word_free_class(w))
                terms[(k,)] = terms.get((k,), 0) + c
            prow.append(LaurentPoly(("t",), terms))
        rows.append(prow)
    return minor_gcd(PolyMatrix(rows, ("t",)), n - 1)


def multivariable_delta_full(p: Presentation, h: H1Data | None = None) -> LaurentPoly:
    """The literal definition: gcd of (n-1)-minors of the full Fox
    Jacobian over Z[H] (no deleted-column shortcut)."""
    from swalex.alexander import _abelianized_matrix
    from swalex.exactalg import minor_gcd

    h = h or h1(p)
    a = _abelianized_matrix(p, h)
    return minor_gcd(a, p.num_generators - 1)


# -- uncollapsed cover presentation oracle ------------------------------------


def uncollapsed_cover_presentation(p: Presentation, a: FiniteHom) -> Presentation:
    """Presentation of ker(a) from the full coset table, keeping one
    generator per (coset, base generator) pair and adding one relator
    per Schreier-tree edge instead of collapsing the tree."""
    g = a.target
    n = p.num_generators
    order = g.order
    names = [f"c{c}_{p.generators[i]}" for c in range(order) for i in range(n)]

    def gen_of(c, i):
        return c * n + i

    relators = []
    for r in p.relators:
        for c0 in range(order):
            out = []
            c = c0
            for i, s in r.letters():
                if s > 0:
                    out.append((gen_of(c, i), 1))
                    c = g.mul(c, a.images[i])
                else:
                    c2 = g.mul(c, g.inv(a.images[i]))
                    out.append((gen_of(c2, i), -1))
                    c = c2
            relators.append(Word(out))
    # kill the Schreier-tree generators (BFS tree over raw element ids)
    cover = schreier_cover(p, a)
    visited = {cover.coset_order[0]}
    for el in cover.coset_order:
        for i in range(n):
            d = g.mul(el, a.images[i])
            if d not in visited:
                visited.add(d)
                relators.append(Word(((gen_of(el, i), 1),)))
    return Presentation(names, relators)


# -- acceptance worker ---------------------------------------------------------


def cover_identity_case(task) -> dict:
    """Process-pool worker for the cover-identity acceptance criterion:
    compare the twisted polynomial with the one-variable polynomial of
    the Reidemeister-Schreier cover for one epimorphism."""
    from swalex.alexander import alexander_one_variable, twisted_alexander
    from swalex.covers import builtin_group, induced_class, restricted_divisibility
    from swalex.presentations import builtin_knots, splice_t3, t3_presentation

    manifold, gname, images, phi_values = task
    if manifold == "t3":
        p = t3_presentation()
    else:
        p = splice_t3(builtin_knots()["trefoil"])
    h = h1(p)
    phi = CohClass1(phi_values)
    a = FiniteHom(p, builtin_group(gname), images)
    div = restricted_divisibility(p, a, phi, h)
    tw = twisted_alexander(p, a, phi, h)
    cover = schreier_cover(p, a)
    phi_g, _ = induced_class(p, a, phi, h, cover)
    cov = alexander_one_variable(cover.presentation, phi_g)
    match = unit_normalize(tw) == unit_normalize(cov)
    degree = None if tw.is_zero else tw.laurent_degree()
    return {"match": match, "div": div, "degree": degree}


# -- Tietze moves --------------------------------------------------------------


def conjugate_relator(p: Presentation, idx: int, by: Word) -> Presentation:
    rels = list(p.relators)
    rels[idx] = by * rels[idx] * by.inverse()
    return Presentation(p.generators, rels, p.peripheral)


def invert_relator(p: Presentation, idx: int) -> Presentation:
    rels = list(p.relators)
    rels[idx] = rels[idx].inverse()
    return Presentation(p.generators, rels, p.peripheral)


def substitute_generator(p: Presentation, i: int, j: int, sign: int):
    """Replace generator x_i by x_i * x_j^sign (i != j).

    Returns (new presentation, matrix M) where M maps old exponent
    vectors to new ones; H^1 classes transport through M so that
    one-variable invariants can be compared across the move.
    """
    if i == j:
        raise ValueError("need distinct generators")
    n = p.num_generators

    def rewrite(w: Word) -> Word:
        out = []
        for g, s in w.letters():
            if g == i:
                if s > 0:
                    out.extend([(i, 1), (j, sign)])
                else:
                    out.extend([(j, -sign), (i, -1)])
            else:
                out.append((g, s))
        return Word(out)

    rels = [rewrite(r) for r in p.relators]
    peri = None
    if p.peripheral:
        peri = (rewrite(p.peripheral[0]), rewrite(p.peripheral[1]))
    # old x_i = new x_i x_j^sign: exponent vectors transform linearly
    m = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    m[i][j] = sign
    return Presentation(p.generators, rels, peri), IntMatrix(m)
