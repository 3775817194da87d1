"""Finite quotients and the covers they define.

Finite groups are multiplication tables; homomorphisms are generator
images.  Provides exhaustive epimorphism enumeration with relator
pruning, Reidemeister-Schreier presentations of regular covers (with
Schreier-tree collapse), the class induced on a cover by a degree-1
class downstairs, and the quotient that kills torsion in H_1 by pairing
a given quotient with the torsion projection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactalg import solve_integer
from .homology import CohClass1, H1Data, h1
from .presentations import Presentation, Word

__all__ = [
    "FiniteGroup",
    "FiniteHom",
    "builtin_group",
    "load_group_table",
    "enumerate_epimorphisms",
    "SchreierCover",
    "schreier_cover",
    "reidemeister_schreier",
    "induced_class",
    "restricted_divisibility",
    "gamma_quotient",
    "PhiVanishesOnKernel",
]


class FiniteGroup:
    """A finite group as a multiplication table.

    table[g][h] is the product g*h.  Validated on construction:
    closure, identity, inverses and associativity.
    """

    __slots__ = ("name", "order", "table", "identity", "inverses", "generators")

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G",
                 generators: Sequence[int] | None = None):
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        for row in tab:
            if len(row) != n or any(x < 0 or x >= n for x in row):
                raise ValueError("table is not closed")
        ident = None
        for e in range(n):
            if all(tab[e][g] == g and tab[g][e] == g for g in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("no identity element")
        inv = [None] * n
        for g in range(n):
            for hh in range(n):
                if tab[g][hh] == ident and tab[hh][g] == ident:
                    inv[g] = hh
                    break
            if inv[g] is None:
                raise ValueError("missing inverse")
        for g in range(n):
            for hh in range(n):
                for k in range(n):
                    if tab[tab[g][hh]][k] != tab[g][tab[hh][k]]:
                        raise ValueError("table is not associative")
        if generators is None:
            generators = tuple(range(n))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverses", tuple(inv))
        object.__setattr__(self, "generators", tuple(generators))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FiniteGroup is immutable")

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv(g), -e
        acc = self.identity
        for _ in range(e):
            acc = self.mul(acc, g)
        return acc

    def closure(self, elements: Iterable[int]) -> frozenset[int]:
        seen = {self.identity}
        frontier = list(dict.fromkeys(elements))
        seen.update(frontier)
        while frontier:
            nxt = []
            for g in frontier:
                for h in list(seen):
                    for prod in (self.mul(g, h), self.mul(h, g)):
                        if prod not in seen:
                            seen.add(prod)
                            nxt.append(prod)
            frontier = nxt
        return frozenset(seen)

    def is_trivial(self) -> bool:
        return self.order == 1

    def permutation_cycles(self, g: int) -> list[int]:
        """Cycle lengths of right multiplication by g on the group."""
        seen = [False] * self.order
        cycles = []
        for start in range(self.order):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.mul(x, g)
                length += 1
            cycles.append(length)
        return cycles

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _cyclic(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"Z/{n}", generators=(1 % n,))


def _from_permutations(perms: list[tuple[int, ...]], name: str,
                       gens: Sequence[tuple[int, ...]]) -> FiniteGroup:
    perms = sorted(set(perms))
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            # composition: apply p first, then q
            row.append(index[tuple(q[x] for x in p)])
        table.append(row)
    return FiniteGroup(table, name=name, generators=tuple(index[g] for g in gens))


def _symmetric(n: int) -> FiniteGroup:
    perms = [tuple(p) for p in itertools.permutations(range(n))]
    transpose = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return _from_permutations(perms, f"S{n}", (transpose, cycle))


def _dihedral4() -> FiniteGroup:
    r = (1, 2, 3, 0)
    s = (1, 0, 3, 2)  # reflection of the square
    perms = set()
    frontier = [tuple(range(4))]
    while frontier:
        p = frontier.pop()
        if p in perms:
            continue
        perms.add(p)
        for q in (r, s):
            frontier.append(tuple(q[x] for x in p))
    return _from_permutations(sorted(perms), "D4", (r, s))


def _quaternion8() -> FiniteGroup:
    # elements 1, -1, i, -i, j, -j, k, -k as indices 0..7
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    val = {0: (1, ""), 1: (-1, ""), 2: (1, "i"), 3: (-1, "i"),
           4: (1, "j"), 5: (-1, "j"), 6: (1, "k"), 7: (-1, "k")}
    basemul = {
        ("", ""): (1, ""), ("", "i"): (1, "i"), ("", "j"): (1, "j"), ("", "k"): (1, "k"),
        ("i", ""): (1, "i"), ("j", ""): (1, "j"), ("k", ""): (1, "k"),
        ("i", "i"): (-1, ""), ("j", "j"): (-1, ""), ("k", "k"): (-1, ""),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    rev = {v: k for k, v in val.items()}
    table = []
    for g in range(8):
        sg, bg = val[g]
        row = []
        for h in range(8):
            sh, bh = val[h]
            s, b = basemul[(bg, bh)]
            row.append(rev[(sg * sh * s, b)])
        table.append(row)
    return FiniteGroup(table, name="Q8", generators=(2, 4))


_BUILTIN_CACHE: dict[str, FiniteGroup] = {}


def builtin_group(name: str) -> FiniteGroup:
    """Built-in targets: Z/n for n <= 12, S3, S4, D4, Q8, trivial."""
    key = name.strip()
    if key in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[key]
    g: FiniteGroup
    if key in ("1", "trivial"):
        g = FiniteGroup([[0]], name="trivial", generators=())
    elif key.startswith("Z/"):
        n = int(key[2:])
        if not 1 <= n <= 12:
            raise KeyError(f"cyclic groups are built in only for n <= 12: {name!r}")
        g = _cyclic(n)
    elif key == "S3":
        g = _symmetric(3)
    elif key == "S4":
        g = _symmetric(4)
    elif key == "D4":
        g = _dihedral4()
    elif key == "Q8":
        g = _quaternion8()
    else:
        raise KeyError(f"unknown built-in group {name!r}")
    _BUILTIN_CACHE[key] = g
    return g


def load_group_table(text: str, name: str = "G") -> FiniteGroup:
    """Parse the text format: order, the table row-major, then the
    generator indices (whitespace separated)."""
    numbers = [int(tok) for tok in text.split()]
    if not numbers:
        raise ValueError("empty group table")
    n = numbers[0]
    need = 1 + n * n
    if len(numbers) < need:
        raise ValueError("truncated group table")
    table = [numbers[1 + i * n : 1 + (i + 1) * n] for i in range(n)]
    gens = numbers[need:]
    return FiniteGroup(table, name=name, generators=gens or None)


def dump_group_table(g: FiniteGroup) -> str:
    rows = "\n".join(" ".join(str(x) for x in row) for row in g.table)
    gens = " ".join(str(x) for x in g.generators)
    return f"{g.order}\n{rows}\n{gens}\n"


@dataclass(frozen=True)
class FiniteHom:
    """A homomorphism from a presented group onto a finite group."""

    presentation: Presentation
    target: FiniteGroup
    images: tuple[int, ...]

    def __init__(self, presentation: Presentation, target: FiniteGroup,
                 images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if len(images) != presentation.num_generators:
            raise ValueError("one image per generator required")
        object.__setattr__(self, "presentation", presentation)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)
        for r in presentation.relators:
            if self.evaluate(r) != target.identity:
                raise ValueError("relator does not map to the identity")
        if target.closure(images) != frozenset(range(target.order)):
            raise ValueError("images do not generate the target")

    def evaluate(self, w: Word) -> int:
        g = self.target.identity
        for i, e in w.syllables:
            g = self.target.mul(g, self.target.power(self.images[i], e))
        return g

    def is_trivial(self) -> bool:
        return self.target.is_trivial()


def trivial_hom(p: Presentation) -> FiniteHom:
    return FiniteHom(p, builtin_group("trivial"), (0,) * p.num_generators)


def _epi_search(p: Presentation, g: FiniteGroup,
                first_images: Sequence[int]) -> list[tuple[int, ...]]:
    """Depth-first search over generator images with the first image
    restricted to the given set; a relator is checked as soon as every
    generator it mentions has been assigned."""
    n = p.num_generators
    by_depth: list[list[Word]] = [[] for _ in range(n + 1)]
    for r in p.relators:
        by_depth[r.max_generator() + 1].append(r)

    def relator_ok(r: Word, images: list[int]) -> bool:
        acc = g.identity
        for i, e in r.syllables:
            acc = g.mul(acc, g.power(images[i], e))
        return acc == g.identity

    results: list[tuple[int, ...]] = []

    def dfs(depth: int, images: list[int]) -> None:
        if depth == n:
            if g.closure(images) == frozenset(range(g.order)):
                results.append(tuple(images))
            return
        candidates = first_images if depth == 0 else range(g.order)
        for img in candidates:
            images.append(img)
            if all(relator_ok(r, images) for r in by_depth[depth + 1]):
                dfs(depth + 1, images)
            images.pop()

    dfs(0, [])
    return results


def _epi_search_worker(payload) -> list[tuple[int, ...]]:
    p_text, table_text, first_images = payload
    from .presentations import parse_presentation

    p = parse_presentation(p_text)
    g = load_group_table(table_text)
    return _epi_search(p, g, first_images)


def enumerate_epimorphisms(p: Presentation, g: FiniteGroup,
                           jobs: int = 1) -> list[FiniteHom]:
    """All surjective homomorphisms onto g, in lexicographic image order.

    With jobs > 1 the search is partitioned over the first generator's
    image and run in worker processes; results are sorted into the same
    canonical order either way.
    """
    n = p.num_generators
    if n == 0:
        if g.order == 1:
            return [FiniteHom(p, g, ())]
        return []
    if jobs > 1 and g.order >= 2:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [list(range(g.order))[i::jobs] for i in range(jobs)]
        payloads = [
            (p.text(), dump_group_table(g), chunk) for chunk in chunks if chunk
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_epi_search_worker, payloads))
        results = [images for part in parts for images in part]
    else:
        results = _epi_search(p, g, range(g.order))
    results.sort()
    return [FiniteHom(p, g, images) for images in results]


# ---------------------------------------------------------------------------
# Reidemeister-Schreier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchreierCover:
    """A Reidemeister-Schreier presentation of ker(hom) together with
    the data relating it to the base.

    generator_words[i] is the Schreier generator expressed as a word in
    the base group; transversal[c] is the coset representative word of
    the coset with BFS index c.
    """

    base: Presentation
    hom: FiniteHom
    presentation: Presentation
    generator_words: tuple[Word, ...]
    transversal: tuple[Word, ...]
    coset_order: tuple[int, ...]  # BFS order of group elements


def schreier_cover(p: Presentation, a: FiniteHom) -> SchreierCover:
    g = a.target
    n = p.num_generators
    order = g.order

    # BFS from the identity, deterministic generator order
    bfs: list[int] = [g.identity]
    pos = {g.identity: 0}
    trans_words: dict[int, Word] = {g.identity: Word.identity()}
    tree_edges: set[tuple[int, int]] = set()  # (coset element, generator)
    qi = 0
    while qi < len(bfs):
        c = bfs[qi]
        qi += 1
        for i in range(n):
            d = g.mul(c, a.images[i])
            if d not in pos:
                pos[d] = len(bfs)
                bfs.append(d)
                trans_words[d] = trans_words[c] * Word.gen(i)
                tree_edges.add((c, i))

    # Schreier generators: one per non-tree edge (coset, generator)
    gen_index: dict[tuple[int, int], int] = {}
    gen_names: list[str] = []
    gen_words: list[Word] = []
    for c in bfs:
        for i in range(n):
            if (c, i) in tree_edges:
                continue
            d = g.mul(c, a.images[i])
            gen_index[(c, i)] = len(gen_names)
            gen_names.append(f"{p.generators[i]}_{pos[c]}")
            gen_words.append(
                trans_words[c] * Word.gen(i) * trans_words[d].inverse()
            )

    def rewrite(r: Word, start: int) -> Word:
        """Rewrite the relator read from coset `start` in Schreier letters."""
        out: list[tuple[int, int]] = []
        c = start
        for i, s in r.letters():
            if s > 0:
                edge = (c, i)
                c2 = g.mul(c, a.images[i])
                if edge not in tree_edges:
                    out.append((gen_index[edge], 1))
                c = c2
            else:
                c2 = g.mul(c, g.inv(a.images[i]))
                edge = (c2, i)
                if edge not in tree_edges:
                    out.append((gen_index[edge], -1))
                c = c2
        return Word(out)

    relators = tuple(
        rewrite(r, c) for r in p.relators for c in bfs
    )
    cover = Presentation(gen_names, relators)
    return SchreierCover(
        base=p,
        hom=a,
        presentation=cover,
        generator_words=tuple(gen_words),
        transversal=tuple(trans_words[c] for c in bfs),
        coset_order=tuple(bfs),
    )


def reidemeister_schreier(p: Presentation, a: FiniteHom) -> Presentation:
    """Presentation of ker(a): |G|(n-1)+1 generators after collapsing a
    breadth-first Schreier tree, |G|m relators."""
    return schreier_cover(p, a).presentation


class PhiVanishesOnKernel(ValueError):
    """The restriction of phi to the kernel is zero."""


def _schreier_phi_values(cover: SchreierCover, h: H1Data, phi: CohClass1) -> list[int]:
    return [h.phi_of_word(phi, w) for w in cover.generator_words]


def restricted_divisibility(p: Presentation, a: FiniteHom, phi: CohClass1,
                            h: H1Data | None = None) -> int:
    """Divisibility of phi restricted to ker(a); 0 iff the restriction
    vanishes."""
    h = h or h1(p)
    cover = schreier_cover(p, a)
    vals = _schreier_phi_values(cover, h, phi)
    return math.gcd(*vals) if vals else 0


def induced_class(p: Presentation, a: FiniteHom, phi: CohClass1,
                  h: H1Data | None = None,
                  cover: SchreierCover | None = None) -> tuple[CohClass1, int]:
    """The class phi_G induced on the cover, with its divisibility.

    phi_G is phi evaluated on the Schreier generators; it factors
    through the free part of H_1 of the cover, and the cohomology class
    is recovered by solving that factorization exactly.
    """
    h = h or h1(p)
    cover = cover or schreier_cover(p, a)
    vals = _schreier_phi_values(cover, h, phi)
    if not any(vals):
        raise PhiVanishesOnKernel("phi vanishes on the kernel of the quotient")
    hc = h1(cover.presentation)
    mat = hc.generator_free_matrix()  # rows: generator -> free class
    sol = solve_integer(mat, vals)
    assert sol is not None, "phi_G must factor through free H_1 of the cover"
    phi_g = CohClass1(sol)
    div = math.gcd(*vals)
    return phi_g, div


# ---------------------------------------------------------------------------
# The torsion-killing quotient
# ---------------------------------------------------------------------------


_GAMMA_ORDER_CAP = 100_000


def gamma_quotient(p: Presentation, a: FiniteHom) -> FiniteHom:
    """Pair `a` with the projection onto the torsion of H_1.

    Returns the map g -> (a(g), beta(g)) onto its image, where beta is
    the composition of abelianization with a splitting of H_1 onto its
    torsion subgroup read off the Smith normal form.  When H_1 is
    torsion-free this is just `a` (up to renaming the target).
    """
    h = h1(p)
    g = a.target
    if not h.torsion:
        return a
    t_order = math.prod(h.torsion)
    if g.order * t_order > _GAMMA_ORDER_CAP:
        raise ValueError("torsion quotient too large to tabulate")

    moduli = h.torsion
    n = p.num_generators

    def beta(i: int) -> tuple[int, ...]:
        e = [0] * n
        e[i] = 1
        return h.torsion_class(e)

    # elements of G x T reached from the generator images
    def t_mul(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((u + v) % m for u, v, m in zip(x, y, moduli))

    images = [(a.images[i], beta(i)) for i in range(n)]
    ident = (g.identity, tuple(0 for _ in moduli))
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for (gg, tt) in frontier:
            for (gi, ti) in images:
                prod = (g.mul(gg, gi), t_mul(tt, ti))
                if prod not in elements:
                    elements.add(prod)
                    nxt.append(prod)
                inv = (g.inv(gi), tuple((-x) % m for x, m in zip(ti, moduli)))
                prod2 = (g.mul(gg, inv[0]), t_mul(tt, inv[1]))
                if prod2 not in elements:
                    elements.add(prod2)
                    nxt.append(prod2)
        frontier = nxt
    ordered = sorted(elements)
    index = {el: i for i, el in enumerate(ordered)}
    table = [
        [index[(g.mul(x[0], y[0]), t_mul(x[1], y[1]))] for y in ordered]
        for x in ordered
    ]
    gamma = FiniteGroup(
        table,
        name=f"gamma({g.name})",
        generators=tuple(index[img] for img in dict.fromkeys(images)),
    )
    return FiniteHom(p, gamma, tuple(index[img] for img in images))
