"""Exact integer and Laurent-polynomial linear algebra.

Everything in this module is exact: integers are arbitrary precision,
polynomial coefficients are integers, and no floating point is used
anywhere.  The two workhorses are Smith normal form over the integers
and gcds of k x k minors of Laurent-polynomial matrices (elementary
ideals), with determinants computed by fraction-free Bareiss
elimination or, for univariate matrices, by evaluation at integer
points followed by exact interpolation.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntMatrix",
    "smith_normal_form",
    "solve_integer",
    "LaurentPoly",
    "PolyMatrix",
    "unit_normalize",
    "poly_gcd",
    "minor_gcd",
    "poly_det",
]


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


class IntMatrix:
    """An immutable matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)], cols=c)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.entries]!r})"

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.entries
        out = []
        for row in self.entries:
            out.append(
                [
                    sum(row[k] * ot[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
            )
        return IntMatrix(out, cols=other.cols)

    def mul_vec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(row[k] * v[k] for k in range(self.cols)) for row in self.entries)

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _int_det([list(r) for r in self.entries])

    def rank(self) -> int:
        return _int_rank([list(r) for r in self.entries])


def _int_det(a: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant; mutates its argument."""
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _int_rank(a: list[list[int]]) -> int:
    rows = [r for r in a if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                g = math.gcd(rows[rank][col], rows[i][col])
                m1 = rows[i][col] // g
                m2 = rows[rank][col] // g
                rows[i] = [m2 * x - m1 * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (d, u, v) with u*m*v = d, d diagonal with d1 | d2 | ...

    u and v are unimodular.  The nonzero diagonal entries are positive
    and form a divisibility chain.
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def row_op(i, k, q):  # row_i -= q * row_k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_op(j, k, q):  # col_j -= q * col_k
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    t = 0
    n = min(r, c)
    while t < n:
        # locate a pivot of minimal absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    if q:
                        row_op(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
        # divisibility: the pivot must divide every trailing entry
        p = a[t][t]
        fixed = True
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % p != 0:
                    # fold row i into the pivot row and redo this step
                    a[t] = [x + y for x, y in zip(a[t], a[i])]
                    u[t] = [x + y for x, y in zip(u[t], u[i])]
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1

    for i in range(n):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]

    return IntMatrix(a, cols=c), IntMatrix(u, cols=r), IntMatrix(v, cols=c)


def solve_integer(m: IntMatrix, w: Sequence[int]) -> tuple[int, ...] | None:
    """Solve m * x = w over the integers, or return None.

    Uses the Smith normal form, so the solution is exact; when several
    solutions exist an arbitrary one is returned.
    """
    if len(w) != m.rows:
        raise ValueError("dimension mismatch")
    d, u, v = smith_normal_form(m)
    uw = u.mul_vec(w)
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.entries[i][i] if i < min(m.rows, m.cols) else 0
        if di == 0:
            if uw[i] != 0:
                return None
        else:
            if uw[i] % di != 0:
                return None
            if i < m.cols:
                y[i] = uw[i] // di
    return v.mul_vec(y)


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Inverse of a matrix with determinant +-1, computed exactly."""
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    det = m.det()
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x = solve_integer(m, e)
        assert x is not None
        cols.append(x)
    return IntMatrix([[cols[j][i] for j in range(n)] for i in range(n)], cols=n)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

_EXP = tuple  # exponent vectors are plain int tuples


class LaurentPoly:
    """A multivariable Laurent polynomial with integer coefficients.

    Stored sparsely as a map from exponent vectors (integers, possibly
    negative) to nonzero coefficients.  Instances are immutable.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], int]):
        vs = tuple(variables)
        clean: dict[tuple[int, ...], int] = {}
        for e, c in terms.items():
            c = int(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != len(vs):
                raise ValueError("exponent vector length != number of variables")
            clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "LaurentPoly":
        return cls(variables, {})

    @classmethod
    def const(cls, c: int, variables: Sequence[str]) -> "LaurentPoly":
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: c} if c else {})

    @classmethod
    def monomial(
        cls, variables: Sequence[str], exps: Sequence[int], coeff: int = 1
    ) -> "LaurentPoly":
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def univariate(
        cls, coeffs: Mapping[int, int] | Sequence[int], var: str = "t"
    ) -> "LaurentPoly":
        if isinstance(coeffs, Mapping):
            return cls((var,), {(int(e),): c for e, c in coeffs.items()})
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)})

    # -- basics ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> int:
        if self.is_zero:
            return 0
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = " ".join(
                f"{v}^{k}" if k != 1 else v for v, k in zip(self.variables, e) if k != 0
            )
            if not mono:
                frag = str(abs(c))
            elif abs(c) == 1:
                frag = mono
            else:
                frag = f"{abs(c)} {mono}"
            bits.append(("- " if c < 0 else "+ ") + frag)
        out = " ".join(bits)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self.variables != other.variables:
            raise ValueError(
                f"variable mismatch: {self.variables} vs {other.variables}"
            )

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.variables, t)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) - c
        return LaurentPoly(self.variables, t)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly(
                self.variables, {e: c * other for e, c in self.terms.items()}
            )
        self._check(other)
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("use shift() for negative monomial powers")
        result = LaurentPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        d = tuple(exps)
        return LaurentPoly(
            self.variables,
            {tuple(a + b for a, b in zip(e, d)): c for e, c in self.terms.items()},
        )

    # -- shape -------------------------------------------------------------

    def min_exponents(self) -> tuple[int, ...]:
        if self.is_zero:
            return (0,) * len(self.variables)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.variables)))

    def max_exponents(self) -> tuple[int, ...]:
        if self.is_zero:
            return (0,) * len(self.variables)
        return tuple(max(e[i] for e in self.terms) for i in range(len(self.variables)))

    def laurent_degree(self) -> int:
        """max - min exponent; only meaningful for one variable."""
        if len(self.variables) != 1:
            raise ValueError("laurent_degree needs a univariate polynomial")
        if self.is_zero:
            raise ValueError("laurent_degree of zero")
        exps = [e[0] for e in self.terms]
        return max(exps) - min(exps)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def content(self) -> int:
        return math.gcd(*self.terms.values()) if self.terms else 0

    def reversed_univariate(self) -> "LaurentPoly":
        """t -> t^-1; only for one variable."""
        if len(self.variables) != 1:
            raise ValueError("needs one variable")
        return LaurentPoly(self.variables, {(-e[0],): c for e, c in self.terms.items()})

    def is_symmetric_univariate(self) -> bool:
        return unit_normalize(self) == unit_normalize(self.reversed_univariate())

    # -- maps --------------------------------------------------------------

    def substitute_exponents(
        self, matrix: Sequence[Sequence[int]], new_variables: Sequence[str]
    ) -> "LaurentPoly":
        """Push exponent vectors through an integer-linear map.

        ``matrix`` has one row per old variable, one column per new
        variable; the monomial x^e maps to y^(e . matrix).
        """
        nv = tuple(new_variables)
        ncols = len(nv)
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            key = tuple(
                sum(e[i] * matrix[i][j] for i in range(len(e))) for j in range(ncols)
            )
            out[key] = out.get(key, 0) + c
        return LaurentPoly(nv, out)

    def evaluate(self, values: Sequence[int]) -> Fraction:
        """Evaluate at integer values (negative exponents are allowed)."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, k in zip(values, e):
                term *= Fraction(v) ** k
            total += term
        return total

    # -- division ----------------------------------------------------------

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Return q with q*other == self, or None if no exact quotient."""
        self._check(other)
        if other.is_zero:
            return None
        if self.is_zero:
            return LaurentPoly.zero(self.variables)
        amin = self.min_exponents()
        bmin = other.min_exponents()
        a = {tuple(x - m for x, m in zip(e, amin)): c for e, c in self.terms.items()}
        b = {tuple(x - m for x, m in zip(e, bmin)): c for e, c in other.terms.items()}
        bl = max(b)  # lex-leading exponent
        blc = b[bl]
        q: dict[tuple[int, ...], int] = {}
        guard = len(a) * (len(b) + len(a)) + 16
        while a:
            if guard == 0:
                return None
            guard -= 1
            al = max(a)
            alc = a[al]
            de = tuple(x - y for x, y in zip(al, bl))
            if any(x < 0 for x in de) or alc % blc != 0:
                return None
            dc = alc // blc
            q[de] = dc
            for e, c in b.items():
                key = tuple(x + y for x, y in zip(e, de))
                nc = a.get(key, 0) - dc * c
                if nc:
                    a[key] = nc
                else:
                    a.pop(key, None)
        base = tuple(x - y for x, y in zip(amin, bmin))
        return LaurentPoly(
            self.variables,
            {tuple(x + y for x, y in zip(e, base)): c for e, c in q.items()},
        )

    def divides(self, other: "LaurentPoly") -> bool:
        return other.exact_div(self) is not None


def unit_normalize(p: LaurentPoly) -> LaurentPoly:
    """Canonical representative of p modulo units +-(monomial).

    The minimal exponent in each variable is shifted to zero and the
    sign is fixed so that the coefficient of the lexicographically
    largest exponent vector is positive.  Zero maps to zero.
    """
    if p.is_zero:
        return p
    mins = p.min_exponents()
    terms = {tuple(x - m for x, m in zip(e, mins)): c for e, c in p.terms.items()}
    if terms[max(terms)] < 0:
        terms = {e: -c for e, c in terms.items()}
    return LaurentPoly(p.variables, terms)


# -- gcds -------------------------------------------------------------------


def _dense_from_univ(p: LaurentPoly) -> list[int]:
    """Dense coefficient list of a univariate poly shifted to min exp 0."""
    m = p.min_exponents()[0]
    deg = p.max_exponents()[0] - m
    out = [0] * (deg + 1)
    for e, c in p.terms.items():
        out[e[0] - m] = c
    return out


def _univ_from_dense(coeffs: Sequence[int], variables: Sequence[str]) -> LaurentPoly:
    return LaurentPoly(variables, {(i,): c for i, c in enumerate(coeffs) if c})


def _dense_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _dense_content(a: Sequence[int]) -> int:
    return math.gcd(*a) if a else 0


def _dense_primitive(a: list[int]) -> list[int]:
    c = _dense_content([x for x in a if x])
    return [x // c for x in a] if c > 1 else list(a)


def _dense_pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of dense integer polynomials (b nonzero)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        _dense_trim(a)
        if not a or len(a) - 1 < db:
            break
        la = a[-1]
        sh = len(a) - 1 - db
        a = [x * lb for x in a]
        for i, bc in enumerate(b):
            a[sh + i] -= la * bc
        _dense_trim(a)
        if not a:
            break
    return a


def _univ_gcd_dense(a: list[int], b: list[int]) -> list[int]:
    a = _dense_trim(list(a))
    b = _dense_trim(list(b))
    if not a:
        return b
    if not b:
        return a
    ca, cb = _dense_content(a), _dense_content(b)
    g = math.gcd(ca, cb)
    a = _dense_primitive(a)
    b = _dense_primitive(b)
    while b:
        r = _dense_pseudo_rem(a, b)
        a, b = b, _dense_primitive(r)
    return [x * g for x in a]


_SYMPY_RINGS: dict[tuple[str, ...], object] = {}


def _sympy_ring(variables: tuple[str, ...]):
    ring_obj = _SYMPY_RINGS.get(variables)
    if ring_obj is None:
        from sympy.polys.domains import ZZ
        from sympy.polys.rings import ring as _ring

        ring_obj = _ring(",".join(variables), ZZ)[0]
        _SYMPY_RINGS[variables] = ring_obj
    return ring_obj


def _gcd_pair(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.is_zero:
        return unit_normalize(b)
    if b.is_zero:
        return unit_normalize(a)
    a = unit_normalize(a)
    b = unit_normalize(b)
    if len(a.variables) == 1:
        g = _univ_gcd_dense(_dense_from_univ(a), _dense_from_univ(b))
        return unit_normalize(_univ_from_dense(g, a.variables))
    ring_obj = _sympy_ring(a.variables)
    pa = ring_obj.from_dict(dict(a.terms))
    pb = ring_obj.from_dict(dict(b.terms))
    g = pa.gcd(pb)
    return unit_normalize(LaurentPoly(a.variables, dict(g)))


def poly_gcd(ps: Sequence[LaurentPoly]) -> LaurentPoly:
    """Unit-normalized gcd in the Laurent ring; gcd of all zeros is 0."""
    if not ps:
        raise ValueError("poly_gcd needs at least one input")
    vs = ps[0].variables
    g = LaurentPoly.zero(vs)
    for p in ps:
        if p.variables != vs:
            raise ValueError("variable mismatch")
        g = _gcd_pair(g, p)
        if not g.is_zero and g.is_constant() and abs(g.constant_value()) == 1:
            return unit_normalize(g)
    return g


# ---------------------------------------------------------------------------
# Polynomial matrices and determinants
# ---------------------------------------------------------------------------


class PolyMatrix:
    """A matrix of LaurentPoly entries over a shared variable list."""

    __slots__ = ("rows", "cols", "variables", "entries")

    def __init__(self, entries: Iterable[Iterable[LaurentPoly]], variables=None):
        rows = tuple(tuple(row) for row in entries)
        if rows and rows[0]:
            vs = rows[0][0].variables
        elif variables is not None:
            vs = tuple(variables)
        else:
            raise ValueError("cannot infer variables from an empty matrix")
        for row in rows:
            for p in row:
                if p.variables != vs:
                    raise ValueError("entries must share one variable list")
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("PolyMatrix is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            [[self.entries[i][j] for j in cols] for i in rows], self.variables
        )

    def delete_columns(self, cols: Iterable[int]) -> "PolyMatrix":
        drop = set(cols)
        keep = [j for j in range(self.cols) if j not in drop]
        return self.submatrix(range(self.rows), keep)


def _det_cofactor(rows: list[list[LaurentPoly]], variables) -> LaurentPoly:
    n = len(rows)
    if n == 0:
        return LaurentPoly.const(1, variables)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = LaurentPoly.zero(variables)
    for j, p in enumerate(rows[0]):
        if p.is_zero:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = p * _det_cofactor(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss_poly(rows: list[list[LaurentPoly]], variables) -> LaurentPoly:
    n = len(rows)
    if n == 0:
        return LaurentPoly.const(1, variables)
    a = [list(r) for r in rows]
    sign = 1
    prev = LaurentPoly.const(1, variables)
    for k in range(n - 1):
        # pick the sparsest nonzero pivot in the column for less fill-in
        piv = None
        best = None
        for i in range(k, n):
            p = a[i][k]
            if not p.is_zero and (best is None or len(p.terms) < best):
                best = len(p.terms)
                piv = i
        if piv is None:
            return LaurentPoly.zero(variables)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pivot * a[i][j] - aik * a[k][j]
                q = num.exact_div(prev)
                if q is None:  # pragma: no cover - Bareiss guarantees exactness
                    raise ArithmeticError("non-exact division in Bareiss step")
                a[i][j] = q
            a[i][k] = LaurentPoly.zero(variables)
        prev = pivot
    res = a[n - 1][n - 1]
    return res if sign > 0 else -res


# -- univariate interpolation determinant -----------------------------------

# Fraction-free Bareiss elimination is used for matrices smaller than
# this; univariate matrices at least this large go through evaluation
# at integer points and exact interpolation under per-minor degree
# bounds.  The expanded Jacobians of finite quotients make interpolation
# the only practical route at size.
INTERP_MIN_SIZE = 5


def _interp_coeffs(values: Sequence[int]) -> list[Fraction] | None:
    """Interpolate samples at x = 0, 1, ..., len-1 to monomial coeffs.

    Uses Newton forward differences; the difference table also detects
    the true degree.  Returns None if the data is inconsistent (cannot
    happen for genuine polynomial samples of degree < len).
    """
    diffs = list(values)
    columns: list[int] = [diffs[0]]
    deg = 0
    for k in range(1, len(values)):
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        if any(diffs):
            deg = k
        columns.append(diffs[0])
        if not any(diffs):
            break
    # P(x) = sum_k columns[k] * C(x, k)
    coeffs = [Fraction(0)] * (deg + 1)
    basis = [Fraction(1)]  # C(x, 0)
    for k in range(0, deg + 1):
        ck = columns[k] if k < len(columns) else 0
        if ck:
            for i, b in enumerate(basis):
                coeffs[i] += ck * b
        # C(x, k+1) = C(x, k) * (x - k) / (k + 1)
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b
            nxt[i] -= k * b
        basis = [b / (k + 1) for b in nxt]
    return coeffs


class _UnivDetContext:
    """Shared evaluations for many minors of one univariate matrix.

    Rows are shifted so every entry is an honest polynomial; the shift
    multiplies each minor by a monomial, which is irrelevant up to
    units.  The matrix is evaluated once per sample point and each
    minor determinant becomes an integer determinant per point plus an
    exact interpolation.
    """

    def __init__(self, m: PolyMatrix):
        self.variables = m.variables
        dense_rows = []
        self.row_degrees = []
        for row in m.entries:
            shift = min(
                (p.min_exponents()[0] for p in row if not p.is_zero), default=0
            )
            dense = [
                _shifted_dense(p, shift) for p in row
            ]
            dense_rows.append(dense)
            self.row_degrees.append(max((len(d) - 1 for d in dense if d), default=0))
        self.dense_rows = dense_rows
        self._evals: list[list[list[int]]] = []  # point -> matrix of ints

    def _ensure_points(self, npts: int) -> None:
        while len(self._evals) < npts:
            x = len(self._evals)
            self._evals.append(
                [[_horner(d, x) for d in row] for row in self.dense_rows]
            )

    def det(self, rows: Sequence[int], cols: Sequence[int]) -> LaurentPoly:
        bound = sum(self.row_degrees[i] for i in rows)
        npts = bound + 1
        self._ensure_points(npts)
        values = []
        for x in range(npts):
            ev = self._evals[x]
            sub = [[ev[i][j] for j in cols] for i in rows]
            values.append(_int_det(sub))
        if not any(values):
            return LaurentPoly.zero(self.variables)
        coeffs = _interp_coeffs(values)
        out: dict[tuple[int], int] = {}
        for i, c in enumerate(coeffs):
            if c:
                if c.denominator != 1:  # pragma: no cover - exactness guard
                    raise ArithmeticError("non-integral interpolation result")
                out[(i,)] = c.numerator
        return LaurentPoly(self.variables, out)


def _shifted_dense(p: LaurentPoly, shift: int) -> list[int]:
    if p.is_zero:
        return []
    deg = p.max_exponents()[0] - shift
    out = [0] * (deg + 1)
    for e, c in p.terms.items():
        out[e[0] - shift] = c
    return out


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_det(m: PolyMatrix, method: str = "auto") -> LaurentPoly:
    """Determinant of a square polynomial matrix.

    method: "auto", "bareiss", "cofactor" or "interp" (univariate only).
    For Laurent entries the result may differ from the true determinant
    by a unit; all consumers in this package compare up to units.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in m.entries]
    if method == "auto":
        if len(m.variables) == 1 and m.rows >= INTERP_MIN_SIZE:
            method = "interp"
        elif m.rows <= 3:
            method = "cofactor"
        else:
            method = "bareiss"
    if method == "cofactor":
        return _det_cofactor(rows, m.variables)
    if method == "bareiss":
        return _det_bareiss_poly(rows, m.variables)
    if method == "interp":
        if len(m.variables) != 1:
            raise ValueError("interpolation determinant needs one variable")
        ctx = _UnivDetContext(m)
        return ctx.det(range(m.rows), range(m.cols))
    raise ValueError(f"unknown method {method!r}")


# -- minor gcds ---------------------------------------------------------------


def _minor_gcd_stream(
    m: PolyMatrix,
    k: int,
    row_subsets: Iterable[tuple[int, ...]],
    col_subsets: Sequence[tuple[int, ...]],
    method: str,
) -> LaurentPoly:
    vs = m.variables
    g = LaurentPoly.zero(vs)
    univ_ctx = None
    if len(vs) == 1 and (
        method == "interp" or (method == "auto" and k >= INTERP_MIN_SIZE)
    ):
        univ_ctx = _UnivDetContext(m)
    for rows in row_subsets:
        for cols in col_subsets:
            if univ_ctx is not None:
                d = univ_ctx.det(rows, cols)
            else:
                sub = [[m.entries[i][j] for j in cols] for i in rows]
                if method == "cofactor" or (method == "auto" and k <= 3):
                    d = _det_cofactor(sub, vs)
                else:
                    d = _det_bareiss_poly(sub, vs)
            if d.is_zero:
                continue
            if g.is_zero:
                g = unit_normalize(d)
            elif d.exact_div(g) is not None:
                continue
            else:
                g = _gcd_pair(g, d)
            if g.is_constant() and abs(g.constant_value()) == 1:
                return unit_normalize(g)
    return g


def _minor_gcd_worker(payload) -> dict:
    variables, entry_terms, k, row_chunk, col_subsets, method = payload
    entries = [
        [LaurentPoly(variables, t) for t in row] for row in entry_terms
    ]
    m = PolyMatrix(entries, variables)
    g = _minor_gcd_stream(m, k, row_chunk, [tuple(c) for c in col_subsets], method)
    return dict(g.terms)


def minor_gcd(
    m: PolyMatrix, k: int, jobs: int = 1, method: str = "auto"
) -> LaurentPoly:
    """Unit-normalized gcd of all k x k minors of m (0 if all vanish).

    Minors are enumerated in a deterministic order; with jobs > 1 the
    row subsets are chunked across processes and the partial gcds are
    folded, which cannot change the result.
    """
    if k < 0 or k > min(m.rows, m.cols):
        raise ValueError("minor size out of range")
    if k == 0:
        return LaurentPoly.const(1, m.variables)
    row_subsets = list(itertools.combinations(range(m.rows), k))
    col_subsets = list(itertools.combinations(range(m.cols), k))
    if jobs > 1 and len(row_subsets) >= 2 * jobs:
        chunks = [row_subsets[i::jobs] for i in range(jobs)]
        entry_terms = [[p.terms for p in row] for row in m.entries]
        payloads = [
            (m.variables, entry_terms, k, chunk, col_subsets, method)
            for chunk in chunks
            if chunk
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_minor_gcd_worker, payloads))
        g = LaurentPoly.zero(m.variables)
        for terms in partials:
            g = _gcd_pair(g, LaurentPoly(m.variables, terms))
        return unit_normalize(g)
    g = _minor_gcd_stream(m, k, row_subsets, col_subsets, method)
    return unit_normalize(g)
