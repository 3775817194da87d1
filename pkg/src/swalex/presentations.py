"""Words, group presentations, a small parsing DSL, and the built-in
manifolds: the 3-torus, knot 0-surgeries, and splices of knot exteriors
into the 3-torus along a fiber.

All values are immutable after construction and every operation is a
pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactalg import IntMatrix, LaurentPoly

__all__ = [
    "Word",
    "free_reduce",
    "commutator",
    "Presentation",
    "KnotData",
    "ParseError",
    "parse_presentation",
    "parse_word",
    "t3_presentation",
    "zero_surgery",
    "splice_t3",
    "builtin_knots",
    "builtin_manifold",
]


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


class Word:
    """A reduced word in a free group.

    Stored as syllables (generator index, nonzero exponent) with no two
    adjacent syllables sharing a generator; the empty tuple is the
    identity.
    """

    __slots__ = ("syllables",)

    def __init__(self, syllables: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "syllables", _reduce_syllables(syllables))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Word is immutable")

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> "Word":
        return cls(((index, exp),))

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word.identity()
        base = self if n > 0 else self.inverse()
        return Word(base.syllables * abs(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return hash(self.syllables)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> Iterable[tuple[int, int]]:
        """Yield (generator, +-1) one letter at a time."""
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, s

    def exponent_vector(self, num_generators: int) -> tuple[int, ...]:
        v = [0] * num_generators
        for g, e in self.syllables:
            v[g] += e
        return tuple(v)

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)

    def conjugate(self, w: "Word") -> "Word":
        return w * self * w.inverse()

    def text(self, names: Sequence[str]) -> str:
        if not self.syllables:
            return "1"
        bits = []
        for g, e in self.syllables:
            bits.append(names[g] if e == 1 else f"{names[g]}{e}")
        return " ".join(bits)

    def __repr__(self) -> str:
        return f"Word({self.syllables!r})"


def _reduce_syllables(syllables: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for g, e in syllables:
        g = int(g)
        e = int(e)
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    # merging can expose new cancellations between earlier neighbours
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(out):
            if out[i][0] == out[i + 1][0]:
                out[i][1] += out[i + 1][1]
                del out[i + 1]
                if out[i][1] == 0:
                    del out[i]
                    i = max(i - 1, 0)
                changed = True
            else:
                i += 1
    return tuple((g, e) for g, e in out)


def free_reduce(w: Word | Iterable[tuple[int, int]]) -> Word:
    """Freely reduce a word (idempotent, length-nonincreasing)."""
    if isinstance(w, Word):
        return Word(w.syllables)
    return Word(w)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class Presentation:
    """Generators and relators for a finitely presented group.

    Optionally carries a marked peripheral pair (meridian, longitude),
    used by the surgery and splice constructors.
    """

    __slots__ = ("generators", "relators", "peripheral")

    def __init__(
        self,
        generators: Sequence[str],
        relators: Iterable[Word],
        peripheral: tuple[Word, Word] | None = None,
    ):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        for g in gens:
            if not _NAME_RE.fullmatch(g):
                raise ValueError(f"bad generator name {g!r}")
        rels = tuple(free_reduce(r) for r in relators)
        n = len(gens)
        for r in rels:
            if r.max_generator() >= n:
                raise ValueError("relator uses an undeclared generator")
        if peripheral is not None:
            mu, lam = peripheral
            mu, lam = free_reduce(mu), free_reduce(lam)
            if max(mu.max_generator(), lam.max_generator()) >= n:
                raise ValueError("peripheral word uses an undeclared generator")
            peripheral = (mu, lam)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        object.__setattr__(self, "peripheral", peripheral)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Presentation is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Presentation)
            and self.generators == other.generators
            and self.relators == other.relators
            and self.peripheral == other.peripheral
        )

    def __hash__(self) -> int:
        return hash((self.generators, self.relators, self.peripheral))

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def abelianized_relator_matrix(self) -> IntMatrix:
        n = len(self.generators)
        return IntMatrix(
            [r.exponent_vector(n) for r in self.relators], cols=n
        )

    def text(self) -> str:
        body = ", ".join(r.text(self.generators) for r in self.relators)
        head = ", ".join(self.generators)
        out = f"< {head} | {body} >"
        if self.peripheral is not None:
            mu, lam = self.peripheral
            out += (
                f" @meridian={mu.text(self.generators)}"
                f" @longitude={lam.text(self.generators)}"
            )
        return out

    def __repr__(self) -> str:
        return f"Presentation({self.text()!r})"


# ---------------------------------------------------------------------------
# The DSL
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<int>-?\d+)
  | (?P<punct><|>|\||,|\[|\]|\(|\)|@|=)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, value: str) -> _Token:
        t = self.next()
        if t.value != value:
            raise ParseError(f"expected {value!r}, found {t.value or 'end of input'!r}", t.line, t.col)
        return t

    def fail(self, msg: str) -> None:
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # grammar -------------------------------------------------------------

    def presentation(self) -> Presentation:
        self.expect("<")
        names: list[str] = []
        if self.peek().kind == "name":
            names.append(self.next().value)
            while self.peek().value == ",":
                self.next()
                tok = self.next()
                if tok.kind != "name":
                    raise ParseError("expected a generator name", tok.line, tok.col)
                names.append(tok.value)
        if len(set(names)) != len(names):
            self.fail("duplicate generator name")
        self.expect("|")
        index = {n: i for i, n in enumerate(names)}
        relators: list[Word] = []
        if self.peek().value != ">":
            relators.append(self.word(index))
            while self.peek().value == ",":
                self.next()
                relators.append(self.word(index))
        self.expect(">")
        peripheral = self.annotations(index)
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected trailing input {t.value!r}", t.line, t.col)
        return Presentation(names, relators, peripheral)

    def annotations(self, index) -> tuple[Word, Word] | None:
        mu = lam = None
        while self.peek().value in ("@", ","):
            if self.peek().value == ",":
                self.next()
                continue
            self.next()
            tok = self.next()
            if tok.kind != "name" or tok.value not in ("meridian", "longitude"):
                raise ParseError("expected meridian or longitude", tok.line, tok.col)
            which = tok.value
            self.expect("=")
            w = self.word(index)
            if which == "meridian":
                mu = w
            else:
                lam = w
        if mu is None and lam is None:
            return None
        if mu is None or lam is None:
            self.fail("meridian and longitude must be given together")
        return (mu, lam)

    def word(self, index: dict[str, int]) -> Word:
        factors: list[Word] = []
        while True:
            t = self.peek()
            if t.kind == "name":
                self.next()
                # longest declared generator name that prefixes the token;
                # trailing digits are an exponent (so `x2` is x^2 unless a
                # generator literally named x2 is declared)
                name = max(
                    (g for g in index if t.value == g or
                     (t.value.startswith(g) and t.value[len(g):].isdigit())),
                    key=len,
                    default=None,
                )
                if name is None:
                    raise ParseError(f"undeclared generator {t.value!r}", t.line, t.col)
                base = Word.gen(index[name])
                tail = t.value[len(name):]
                if tail:
                    base = base ** int(tail)
            elif t.kind == "int" and t.value == "1" and not factors:
                # the identity word
                self.next()
                nxt = self.peek()
                if nxt.kind in ("name", "int") or nxt.value in ("[", "("):
                    raise ParseError("the identity word '1' stands alone", nxt.line, nxt.col)
                return Word.identity()
            elif t.value == "[":
                self.next()
                u = self.word(index)
                self.expect(",")
                v = self.word(index)
                self.expect("]")
                base = commutator(u, v)
            elif t.value == "(":
                self.next()
                base = self.word(index)
                self.expect(")")
            else:
                break
            if self.peek().kind == "int":
                e = int(self.next().value)
                base = base ** e
            factors.append(base)
        if not factors:
            self.fail("expected a word")
        w = Word.identity()
        for f in factors:
            w = w * f
        return w


def parse_presentation(text: str) -> Presentation:
    """Parse the presentation DSL.

    Grammar: ``<`` names ``|`` relator-list ``>`` with optional trailing
    ``@meridian=... @longitude=...`` annotations.  Words are juxtaposed
    letters with integer exponents (``x2``, ``x-1``), commutators
    ``[u,v]``, parenthesized subwords, and ``1`` for the identity.
    """
    return _Parser(text).presentation()


def parse_word(text: str, generators: Sequence[str]) -> Word:
    p = _Parser(text)
    index = {n: i for i, n in enumerate(generators)}
    w = p.word(index)
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected trailing input {t.value!r}", t.line, t.col)
    return w


# ---------------------------------------------------------------------------
# Built-in manifolds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KnotData:
    """A knot given by a presentation of its group with peripheral words.

    The stored Alexander polynomial is a reference value used only as a
    validation oracle, never as an input to any computation.
    """

    name: str
    presentation: Presentation
    alexander_polynomial: LaurentPoly

    def validate(self) -> None:
        from .homology import h1

        p = self.presentation
        if p.peripheral is None:
            raise ValueError(f"{self.name}: knot data needs peripheral words")
        h = h1(p)
        if h.b != 1 or h.torsion:
            raise ValueError(f"{self.name}: abelianization is not infinite cyclic")
        mu, lam = p.peripheral
        mu_cls = h.free_class(mu.exponent_vector(p.num_generators))
        lam_cls = h.free_class(lam.exponent_vector(p.num_generators))
        if abs(mu_cls[0]) != 1:
            raise ValueError(f"{self.name}: meridian is not a generator of H1")
        if lam_cls[0] != 0:
            raise ValueError(f"{self.name}: longitude is not null-homologous")


def t3_presentation() -> Presentation:
    """The 3-torus group: three commuting generators."""
    return parse_presentation("< x, y, z | [x,y], [x,z], [y,z] >")


def zero_surgery(k: KnotData) -> Presentation:
    """0-surgery on the knot: kill the longitude."""
    p = k.presentation
    if p.peripheral is None:
        raise ValueError("zero_surgery needs peripheral data")
    _, lam = p.peripheral
    return Presentation(p.generators, p.relators + (lam,))


def splice_t3(k: KnotData) -> Presentation:
    """Glue the knot exterior into T^3 minus a fiber, exchanging the
    meridian/longitude of the knot with the longitude/meridian of the
    fiber.

    Model: pi_1(T^3 minus fiber) = < a, b, z0 | [a,z0], [b,z0] > with
    fiber longitude z0 and fiber meridian [a,b]; the gluing sets
    z0 = (knot meridian) and (knot longitude) = [a,b], and z0 is
    eliminated.  Orientation conventions are fixed by this choice; all
    downstream consumers compare invariants up to units where the
    choice is invisible.
    """
    p = k.presentation
    if p.peripheral is None:
        raise ValueError("splice_t3 needs peripheral data")
    mu, lam = p.peripheral
    shift = 2
    gens = ("a", "b") + tuple(f"{g}" for g in p.generators)
    if len(set(gens)) != len(gens):
        raise ValueError("knot generators may not be named 'a' or 'b'")

    def lift(w: Word) -> Word:
        return Word(tuple((g + shift, e) for g, e in w.syllables))

    a = Word.gen(0)
    b = Word.gen(1)
    mu_l = lift(mu)
    lam_l = lift(lam)
    relators = tuple(lift(r) for r in p.relators) + (
        commutator(a, mu_l),
        commutator(b, mu_l),
        lam_l * commutator(a, b).inverse(),
    )
    return Presentation(gens, relators)


def _knot(name, text, alex_coeffs) -> KnotData:
    p = parse_presentation(text)
    return KnotData(name, p, LaurentPoly.univariate(alex_coeffs))


def builtin_knots() -> dict[str, KnotData]:
    """The stored knots.

    Provenance: trefoil from the standard 2-bridge form of its Wirtinger
    presentation (one redundant meridian generator eliminated); the
    longitude is the central element (uv)^3 corrected to zero framing.
    figure_eight and 5_2 are Wirtinger presentations of the standard
    minimal diagrams with one redundant relator dropped and blackboard
    longitudes corrected to zero writhe.
    """
    knots = {
        "unknot": _knot(
            "unknot",
            "< m | > @meridian=m @longitude=1",
            {0: 1},
        ),
        "trefoil": _knot(
            "trefoil",
            "< u, v | u v u v-1 u-1 v-1 > @meridian=u @longitude=(u v)3 u-6",
            {0: 1, 1: -1, 2: 1},
        ),
        "figure_eight": _knot(
            "figure_eight",
            "< x1, x2, x3, x4 | x4 x1 x4-1 x2-1, x2 x3 x2-1 x4-1, x1-1 x2 x1 x3-1 >"
            " @meridian=x4 @longitude=x3 x4-1 x1 x2-1",
            {0: 1, 1: -3, 2: 1},
        ),
        "5_2": _knot(
            "5_2",
            "< x1, x2, x3, x4, x5 |"
            " x2-1 x5 x2 x1-1, x4-1 x1 x4 x2-1, x5-1 x2 x5 x3-1, x3-1 x4 x3 x5-1 >"
            " @meridian=x5 @longitude=x2 x4 x5 x1 x3 x5-5",
            {0: 2, 1: -3, 2: 2},
        ),
    }
    return knots


def builtin_manifold(name: str) -> Presentation:
    """Look up a built-in manifold presentation by name."""
    if name in ("t3", "T3"):
        return t3_presentation()
    knots = builtin_knots()
    if name.startswith("splice(") and name.endswith(")"):
        return splice_t3(knots[name[7:-1]])
    if name.startswith("surgery(") and name.endswith(")"):
        return zero_surgery(knots[name[8:-1]])
    raise KeyError(f"unknown built-in manifold {name!r}")
