"""Exact type-A matrix realization over Q or Q(t).

Field elements are Fractions (for Q) or RatFunc (for Q(t)); both support
the ordinary field operations, so the linear algebra here is generic."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from flint import fmpq_poly

from .errors import FactorizationError, InputError, NotNonnegative, UnsupportedRealization
from .semifield import (
    QPOS, QTPOS, QPos, QTPos, Value, _poly_from_json, _poly_to_json, make_poly, poly_coeffs, poly_ord,
    positive_representation,
)


def _as_poly(x) -> fmpq_poly:
    if isinstance(x, fmpq_poly):
        return x
    if isinstance(x, (list, tuple)):
        return make_poly(x)
    return make_poly([x])


class RatFunc:
    """Element of the field Q(t), kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if den == 0:
            raise ZeroDivisionError("rational function with zero denominator")
        if num == 0:
            self.num, self.den = num, fmpq_poly([1])
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
        lc = den.coeffs()[-1]
        self.num, self.den = num / lc, den / lc

    @staticmethod
    def _lift(x) -> "RatFunc":
        return x if isinstance(x, RatFunc) else RatFunc(x)

    def __add__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if o.num == 0:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den ** -k, self.num ** -k) if self.num != 0 else 1 / self
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, RatFunc)):
            o = self._lift(o)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        if self.den == 1 and self.num.degree() <= 0:
            c = poly_coeffs(self.num)
            return hash(c[0] if c else 0)
        return hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))

    def __bool__(self):
        return self.num != 0

    def __repr__(self):
        return f"RatFunc(({self.num})/({self.den}))"

    def valuation(self) -> int:
        return poly_ord(self.num) - poly_ord(self.den)


# -- semifield <-> field ------------------------------------------------------

def embed(x: Value):
    """The field element underlying a semifield value."""
    if isinstance(x, QPos):
        return x.q
    if isinstance(x, QTPos):
        return RatFunc(x.num, x.den)
    raise UnsupportedRealization(f"{x.semifield.name} has no field embedding")


def restrict(x, sf) -> Value:
    """Back from the field into the semifield sf, or NotNonnegative."""
    if sf is QPOS:
        if isinstance(x, RatFunc):
            if x.den != 1 or x.num.degree() > 0:
                raise InputError("non-constant rational function in Q>0")
            x = poly_coeffs(x.num)[0] if x.num != 0 else Fraction(0)
        x = Fraction(x)
        if x <= 0:
            raise NotNonnegative(f"{x} is not positive")
        return QPos(x)
    if sf is QTPOS:
        x = RatFunc._lift(x)
        return positive_representation(x.num, x.den)
    raise UnsupportedRealization(f"{sf.name} has no field embedding")


def is_positive(x) -> bool:
    """x > 0 on (0, oo) (Q(t)) or as a rational number."""
    if isinstance(x, RatFunc):
        try:
            positive_representation(x.num, x.den)
        except NotNonnegative:
            return False
        return True
    return x > 0


# -- matrices -----------------------------------------------------------------

class FieldMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise InputError("FieldMatrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "FieldMatrix":
        return cls([[Fraction(int(r == c)) for c in range(n)] for r in range(n)])

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def __mul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.n != other.n:
            raise InputError("size mismatch")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            nz = [(k, x) for k, x in enumerate(row) if x != 0]
            out.append([_dot(nz, col) for col in cols])
        return FieldMatrix(out)

    def __eq__(self, other):
        return isinstance(other, FieldMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "FieldMatrix(" + repr([list(r) for r in self.rows]) + ")"

    def submatrix(self, rows, cols) -> list[list]:
        return [[self.rows[r][c] for c in cols] for r in rows]

    def minor(self, rows, cols):
        return det(self.submatrix(rows, cols))

    def det(self):
        return det([list(r) for r in self.rows])

    def inverse(self) -> "FieldMatrix":
        n = self.n
        M = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if M[r][c] != 0), None)
            if p is None:
                raise InputError("singular matrix")
            M[c], M[p] = M[p], M[c]
            piv = M[c][c]
            M[c] = [x / piv for x in M[c]]
            for r in range(n):
                if r != c and M[r][c] != 0:
                    f = M[r][c]
                    M[r] = [x - f * y for x, y in zip(M[r], M[c])]
        return FieldMatrix([row[n:] for row in M])

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(zip(*self.rows))


def _dot(nz, col):
    s = Fraction(0)
    for k, x in nz:
        y = col[k]
        if y != 0:
            s = x * y + s
    return s


def det(M: list[list]):
    """Gaussian elimination over the field of the entries."""
    M = [list(r) for r in M]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        piv = M[c][c]
        d = piv * d
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] / piv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return d


# -- pinning ------------------------------------------------------------------

def _check_index(n: int, i: int):
    if not isinstance(i, int) or not 1 <= i < n:
        raise InputError(f"generator index {i!r} out of range for SL_{n}")


def _elementary(n: int, r: int, c: int, a) -> FieldMatrix:
    rows = [[Fraction(int(x == y)) for y in range(n)] for x in range(n)]
    rows[r][c] = a
    return FieldMatrix(rows)


def gen_x(n: int, i: int, a) -> FieldMatrix:
    """x_i(a) = e + a E_{i,i+1} in SL_n."""
    _check_index(n, i)
    return _elementary(n, i - 1, i, a)


def gen_y(n: int, i: int, a) -> FieldMatrix:
    _check_index(n, i)
    return _elementary(n, i, i - 1, a)


def gen_torus(n: int, i: int, b) -> FieldMatrix:
    _check_index(n, i)
    if b == 0:
        raise InputError("torus parameter must be invertible")
    rows = [[Fraction(int(x == y)) for y in range(n)] for x in range(n)]
    rows[i - 1][i - 1] = b
    rows[i][i] = 1 / b
    return FieldMatrix(rows)


def gen_sdot(n: int, i: int) -> FieldMatrix:
    return gen_x(n, i, Fraction(1)) * gen_y(n, i, Fraction(-1)) * gen_x(n, i, Fraction(1))


def gen_sbar(n: int, i: int) -> FieldMatrix:
    """The inverse lift x_i(-1) y_i(1) x_i(-1) = sdot_i^{-1}, used for the
    J+ factors of Marsh-Rietsch points so that they are totally nonnegative."""
    return gen_x(n, i, Fraction(-1)) * gen_y(n, i, Fraction(1)) * gen_x(n, i, Fraction(-1))


def sdot_word(n: int, word) -> FieldMatrix:
    g = FieldMatrix.identity(n)
    for i in word:
        g = g * gen_sdot(n, i)
    return g


# -- permutations and minors ---------------------------------------------------

def as_permutation(u, n: int) -> tuple[int, ...]:
    """One-line notation (u(1), ..., u(n)) of a type-A Weyl element, with s_i
    the transposition (i, i+1)."""
    perm = list(range(1, n + 1))
    for i in u.reduced_word:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def flag_minor(g: FieldMatrix, u, i: int):
    """Minor of g on rows u({1..i}) (ascending) and columns 1..i."""
    if not 1 <= i < g.n:
        raise InputError(f"column count {i} out of range")
    perm = as_permutation(u, g.n)
    rows = sorted(p - 1 for p in perm[:i])
    return g.minor(rows, range(i))


def chamber_minor(g: FieldMatrix, v, w, i: int):
    """Delta^{v omega_i}_{w omega_i} of the flag gB+: the extremal vectors of
    the i-th fundamental representation are the standard basis vectors
    e_{u({1..i})}, which form its canonical basis."""
    return flag_minor(g, v, i) / flag_minor(g, w, i)


def same_flag(g: FieldMatrix, h: FieldMatrix) -> bool:
    """gB+ == hB+: the Pluecker vectors of the first i columns are
    proportional for every i."""
    from itertools import combinations

    if g.n != h.n:
        return False
    for i in range(1, g.n):
        cols = range(i)
        pg = [g.minor(r, cols) for r in combinations(range(g.n), i)]
        ph = [h.minor(r, cols) for r in combinations(range(g.n), i)]
        k = next(k for k, x in enumerate(pg) if x != 0)
        if ph[k] == 0 or any(x * ph[k] != y * pg[k] for x, y in zip(pg, ph)):
            return False
    return True


def _eliminate(g: FieldMatrix, upper: bool, track: bool = False):
    """Column-by-column pivot search. upper=True uses row operations adding
    lower rows to upper ones (left B+ action) and picks the lowest nonzero
    unpivoted row; upper=False mirrors this for B-. Returns the pivot row of
    each column and, if track, the accumulated row-operation matrix E."""
    n = g.n
    M = [list(r) for r in g.rows]
    E = [[Fraction(int(x == y)) for y in range(n)] for x in range(n)] if track else None
    free = set(range(n))
    pivots = []
    for c in range(n):
        cand = [r for r in free if M[r][c] != 0]
        if not cand:
            raise InputError("matrix is singular")
        p = max(cand) if upper else min(cand)
        for r in cand:
            if r == p:
                continue
            f = M[r][c] / M[p][c]
            M[r] = [x - f * y for x, y in zip(M[r], M[p])]
            if track:
                E[r] = [x - f * y for x, y in zip(E[r], E[p])]
        free.discard(p)
        pivots.append(p)
    return pivots, (FieldMatrix(E) if track else None)


def _perm_to_word(perm) -> tuple[int, ...]:
    """A reduced word (bubble sort) for the permutation in one-line notation."""
    perm = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for k in range(len(perm) - 1):
            if perm[k] > perm[k + 1]:
                perm[k], perm[k + 1] = perm[k + 1], perm[k]
                word.append(k + 1)
                changed = True
    return tuple(reversed(word))


def perm_element(group, pivots):
    perm = tuple(p + 1 for p in pivots)
    w = group.from_word(_perm_to_word(perm))
    assert as_permutation(w, len(perm)) == perm
    return w


def detect_cell(g: FieldMatrix, group):
    """(v, w) with gB+ in B- v B+ and in B+ w B+."""
    wp, _ = _eliminate(g, upper=True)
    vp, _ = _eliminate(g, upper=False)
    return perm_element(group, vp), perm_element(group, wp)


def bruhat_factor(g: FieldMatrix, w) -> FieldMatrix:
    """Upper unipotent b with g B+ = b w B+."""
    pivots, E = _eliminate(g, upper=True, track=True)
    if tuple(p + 1 for p in pivots) != as_permutation(w, g.n):
        raise FactorizationError(f"flag does not lie in the cell of {w!r}")
    return E.inverse()


# -- JSON ---------------------------------------------------------------------

def value_to_json(x) -> Any:
    if isinstance(x, RatFunc):
        return {"num": _poly_to_json(x.num), "den": _poly_to_json(x.den)}
    return str(Fraction(x))


def value_from_json(obj):
    if isinstance(obj, dict):
        try:
            return RatFunc(_poly_from_json(obj["num"]), _poly_from_json(obj["den"]))
        except KeyError as exc:
            raise InputError(f"bad rational function record {obj!r}") from exc
    try:
        return Fraction(str(obj))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad matrix entry {obj!r}") from exc


def matrix_to_json(g: FieldMatrix) -> list:
    return [[value_to_json(x) for x in row] for row in g.rows]


def matrix_from_json(obj) -> FieldMatrix:
    if not isinstance(obj, list):
        raise InputError("matrix must be a list of rows")
    return FieldMatrix([[value_from_json(x) for x in row] for row in obj])


def realization(datum):
    """(matrix size, folding or None) of the SL_n model of datum: type A
    natively, folded types through a type-A ambient datum."""
    from .errors import UnsupportedFolding
    from .rootdata import RootDatum

    if datum.type_a_rank:
        return datum.type_a_rank + 1, None
    try:
        f = datum.folding
    except UnsupportedFolding as exc:
        raise UnsupportedRealization(str(exc)) from None
    rank = RootDatum(f.ambient).type_a_rank
    if f.is_identity() or not rank:
        raise UnsupportedRealization(f"no type-A matrix model for {datum.name}")
    return rank + 1, f
