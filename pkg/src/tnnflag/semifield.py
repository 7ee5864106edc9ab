"""Exact semifields: positive rationals, tropical integers, the one-element
semifield and positive rational functions in t, plus the homomorphisms
between them."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any

import sympy
from flint import fmpq, fmpq_poly

from .errors import InputError, MismatchError, NotNonnegative

__all__ = [
    "Semifield", "QPOS", "TROP", "ONE", "QTPOS", "SEMIFIELDS",
    "QPos", "Trop", "One", "QTPos", "Extended", "ZERO",
    "SemifieldHom", "TO_ONE", "CONST_EMBED", "MONOMIAL_LIFT", "VALUATION",
    "add", "mul", "inv", "one", "eq", "hom_apply", "hom_for",
    "to_json", "from_json", "random_value", "poly_ord", "positive_representation",
]


class Semifield:
    """Runtime tag for one of the four supported semifields."""

    def __init__(self, key: str, name: str, in_field: bool):
        self.key = key
        self.name = name
        self.in_field = in_field

    def __repr__(self):
        return f"<semifield {self.name}>"

    def __reduce__(self):
        return (_semifield_by_key, (self.key,))

    def one(self) -> "Value":
        return _ONES[self.key]()

    def __call__(self, *args) -> "Value":
        return _CTORS[self.key](*args)

    def sum(self, values) -> "Value":
        it = iter(values)
        acc = next(it)
        for v in it:
            acc = acc + v
        return acc


QPOS = Semifield("qpos", "Q>0", True)
TROP = Semifield("trop", "Z^trop", False)
ONE = Semifield("one", "{1}", False)
QTPOS = Semifield("qtpos", "Q>0(t)", True)
SEMIFIELDS = {s.key: s for s in (QPOS, TROP, ONE, QTPOS)}


def _semifield_by_key(key):
    return SEMIFIELDS[key]


class Value:
    """Common operator plumbing; subclasses implement _add/_mul/_inv/_eq."""

    semifield: Semifield
    __slots__ = ()

    def _check(self, other):
        if not isinstance(other, Value) or other.semifield is not self.semifield:
            other_sf = getattr(other, "semifield", type(other).__name__)
            raise MismatchError(f"cannot combine {self.semifield} with {other_sf}")

    def __add__(self, other):
        self._check(other)
        return self._add(other)

    def __mul__(self, other):
        self._check(other)
        return self._mul(other)

    def __truediv__(self, other):
        self._check(other)
        return self._mul(other.inv())

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        acc = self.semifield.one()
        base = self
        while n:
            if n & 1:
                acc = acc._mul(base)
            base = base._mul(base)
            n >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        self._check(other)
        return self._eq(other)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r


class QPos(Value):
    __slots__ = ("q",)
    semifield = QPOS

    def __init__(self, num, den=1):
        q = Fraction(num) / Fraction(den)
        if q <= 0:
            raise InputError(f"{q} is not a positive rational")
        self.q = q

    def _add(self, o):
        return _qpos(self.q + o.q)

    def _mul(self, o):
        return _qpos(self.q * o.q)

    def inv(self):
        return _qpos(1 / self.q)

    def _eq(self, o):
        return self.q == o.q

    def __hash__(self):
        return hash(("qpos", self.q))

    def __repr__(self):
        return f"QPos({self.q})"

    def __str__(self):
        return str(self.q)


def _qpos(q: Fraction) -> QPos:
    v = QPos.__new__(QPos)
    v.q = q
    return v


class Trop(Value):
    """Tropical integer: sum is min, product is integer addition."""

    __slots__ = ("n",)
    semifield = TROP

    def __init__(self, n: int):
        if isinstance(n, bool) or int(n) != n:
            raise InputError(f"{n!r} is not an integer")
        self.n = int(n)

    def _add(self, o):
        return Trop(min(self.n, o.n))

    def _mul(self, o):
        return Trop(self.n + o.n)

    def inv(self):
        return Trop(-self.n)

    def __pow__(self, k: int):
        return Trop(self.n * k)

    def _eq(self, o):
        return self.n == o.n

    def __hash__(self):
        return hash(("trop", self.n))

    def __repr__(self):
        return f"Trop({self.n})"

    def __str__(self):
        return str(self.n)


class One(Value):
    __slots__ = ()
    semifield = ONE

    def _add(self, o):
        return self

    _mul = _add

    def inv(self):
        return self

    def __pow__(self, k):
        return self

    def _eq(self, o):
        return True

    def __hash__(self):
        return hash("one")

    def __repr__(self):
        return "One()"

    def __str__(self):
        return "1"


# -- polynomial helpers (fmpq_poly) -----------------------------------------

def _fr(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def make_poly(coeffs) -> fmpq_poly:
    """fmpq_poly from ascending coefficients given as ints, Fractions or
    'p/q' strings."""
    if isinstance(coeffs, fmpq_poly):
        return coeffs
    out = []
    for c in coeffs:
        q = Fraction(c) if not isinstance(c, fmpq) else Fraction(int(c.p), int(c.q))
        out.append(fmpq(q.numerator, q.denominator))
    return fmpq_poly(out)


def poly_coeffs(p: fmpq_poly) -> list[Fraction]:
    return [_fr(c) for c in p.coeffs()]


def poly_ord(p: fmpq_poly) -> int:
    """Lowest degree carrying a nonzero coefficient."""
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise InputError("order of the zero polynomial")


def _nonneg(p: fmpq_poly) -> bool:
    return all(c >= 0 for c in p.coeffs())


def _shift_down(p: fmpq_poly, k: int) -> fmpq_poly:
    return fmpq_poly(p.coeffs()[k:]) if k else p


def _canonical(num: fmpq_poly, den: fmpq_poly) -> tuple[fmpq_poly, fmpq_poly]:
    g = num.gcd(den)
    if g.degree() > 0:
        num, den = num // g, den // g
    lc = den.coeffs()[-1]
    return num / lc, den / lc


class QTPos(Value):
    """Ratio num/den of polynomials in t with nonnegative rational
    coefficients. Not canonical: equality cross-multiplies."""

    __slots__ = ("num", "den")
    semifield = QTPOS

    def __init__(self, num, den=None):
        num = make_poly(num)
        den = fmpq_poly([1]) if den is None else make_poly(den)
        if num == 0 or den == 0:
            raise InputError("zero numerator or denominator")
        if not (_nonneg(num) and _nonneg(den)):
            raise InputError("negative coefficient in a positive rational function")
        self.num, self.den = _tidy(num, den)

    @classmethod
    def monomial(cls, n: int, coeff=1) -> "QTPos":
        mono = fmpq_poly([0] * abs(n) + [1])
        c = make_poly([coeff])
        return cls(c * mono, fmpq_poly([1])) if n >= 0 else cls(c, mono)

    def _add(self, o):
        return _qt(self.num * o.den + o.num * self.den, self.den * o.den)

    def _mul(self, o):
        return _qt(self.num * o.num, self.den * o.den)

    def inv(self):
        return _qt(self.den, self.num)

    def _eq(self, o):
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        n, d = _canonical(self.num, self.den)
        return hash(("qtpos", tuple(n.coeffs()), tuple(d.coeffs())))

    def valuation(self) -> int:
        return poly_ord(self.num) - poly_ord(self.den)

    def __repr__(self):
        return f"QTPos(({self.num})/({self.den}))"

    def __str__(self):
        return f"({self.num})/({self.den})"


def _tidy(num, den):
    k = min(poly_ord(num), poly_ord(den))
    num, den = _shift_down(num, k), _shift_down(den, k)
    g = num.gcd(den)
    if g.degree() > 0:
        n2, d2 = num // g, den // g
        # keep the reduced pair only while it stays visibly positive
        if _nonneg(n2) and _nonneg(d2):
            num, den = n2, d2
    lc = den.coeffs()[-1]
    return num / lc, den / lc


def _qt(num, den) -> QTPos:
    v = QTPos.__new__(QTPos)
    v.num, v.den = _tidy(num, den)
    return v


def _count_positive_roots(p: fmpq_poly) -> int:
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(poly_coeffs(p))), t, domain="QQ")
    n = poly.count_roots(0, None)
    return n - (1 if poly.eval(0) == 0 else 0)


def positive_representation(num: fmpq_poly, den: fmpq_poly, max_power: int = 4096) -> QTPos:
    """Rewrite a rational function of the field Q(t) with nonnegative
    coefficients, or raise NotNonnegative if it is not strictly positive on
    (0, oo). Multiplies numerator and denominator by (1+t)^N (Polya)."""
    if num == 0:
        raise NotNonnegative("zero is not in Q>0(t)")
    num, den = _canonical(num, den)
    n0 = _shift_down(num, poly_ord(num))
    d0 = _shift_down(den, poly_ord(den))
    sign = (n0.coeffs()[0] > 0) == (d0.coeffs()[0] > 0)
    if not sign:
        raise NotNonnegative("rational function is negative near t = 0+")
    if n0.coeffs()[0] < 0:
        num, den, n0, d0 = -num, -den, -n0, -d0
    if _count_positive_roots(n0) or _count_positive_roots(d0):
        raise NotNonnegative("rational function changes sign on (0, oo)")
    factor = fmpq_poly([1])
    one_plus_t = fmpq_poly([1, 1])
    for _ in range(max_power + 1):
        a, b = num * factor, den * factor
        if _nonneg(a) and _nonneg(b):
            return QTPos(a, b)
        factor *= one_plus_t
    raise NotNonnegative(f"no positive representation with (1+t)^N, N <= {max_power}")


_CTORS = {"qpos": QPos, "trop": Trop, "one": One, "qtpos": QTPos}
_ONES = {
    "qpos": lambda: _qpos(Fraction(1)),
    "trop": lambda: Trop(0),
    "one": One,
    "qtpos": lambda: _qt(fmpq_poly([1]), fmpq_poly([1])),
}


# -- adjoined zero ----------------------------------------------------------

class Extended:
    """Element of K^! = K with an absorbing zero o adjoined."""

    __slots__ = ("value",)

    def __init__(self, value: Value | None = None):
        self.value = value

    @property
    def is_zero(self) -> bool:
        return self.value is None

    def __add__(self, other: "Extended") -> "Extended":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return Extended(self.value + other.value)

    def __mul__(self, other: "Extended") -> "Extended":
        if self.is_zero or other.is_zero:
            return ZERO
        return Extended(self.value * other.value)

    def __eq__(self, other):
        if not isinstance(other, Extended):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "o" if self.is_zero else f"Extended({self.value!r})"


ZERO = Extended(None)


# -- homomorphisms ------------------------------------------------------------

class SemifieldHom:
    def __init__(self, name: str, source: Semifield | None, target: Semifield, fn):
        self.name = name
        self.source = source  # None: any semifield
        self.target = target
        self._fn = fn

    def __call__(self, a: Value) -> Value:
        if not isinstance(a, Value) or (self.source is not None and a.semifield is not self.source):
            raise MismatchError(f"{self.name} expects a value of {self.source}, got {a!r}")
        return self._fn(a)

    def __repr__(self):
        return f"<hom {self.name}>"


TO_ONE = SemifieldHom("to_one", None, ONE, lambda a: One())
CONST_EMBED = SemifieldHom("const_embed", QPOS, QTPOS,
                           lambda a: _qt(make_poly([a.q]), fmpq_poly([1])))
MONOMIAL_LIFT = SemifieldHom("monomial_lift", TROP, QTPOS, lambda a: QTPos.monomial(a.n))
VALUATION = SemifieldHom("valuation", QTPOS, TROP, lambda a: Trop(a.valuation()))
HOMS = {h.name: h for h in (TO_ONE, CONST_EMBED, MONOMIAL_LIFT, VALUATION)}


def hom_for(name: str) -> SemifieldHom:
    try:
        return HOMS[name]
    except KeyError:
        raise InputError(f"unknown homomorphism {name!r}") from None


# functional aliases
def add(a: Value, b: Value) -> Value:
    return a + b


def mul(a: Value, b: Value) -> Value:
    return a * b


def inv(a: Value) -> Value:
    return a.inv()


def one(sf: Semifield) -> Value:
    return sf.one()


def eq(a: Value, b: Value) -> bool:
    return a == b


def hom_apply(r: SemifieldHom, a: Value) -> Value:
    return r(a)


# -- JSON -------------------------------------------------------------------

def _poly_to_json(p: fmpq_poly) -> list:
    return [[str(c), k] for k, c in enumerate(poly_coeffs(p)) if c]


def _poly_from_json(terms) -> fmpq_poly:
    if not isinstance(terms, list) or not terms:
        raise InputError(f"bad polynomial record {terms!r}")
    deg = max(int(d) for _, d in terms)
    coeffs = [Fraction(0)] * (deg + 1)
    for c, d in terms:
        if int(d) < 0:
            raise InputError("negative degree in polynomial record")
        coeffs[int(d)] += Fraction(str(c))
    return make_poly(coeffs)


def to_json(v: Value) -> Any:
    if isinstance(v, QPos):
        return str(v.q)
    if isinstance(v, Trop):
        return v.n
    if isinstance(v, One):
        return "1"
    if isinstance(v, QTPos):
        return {"num": _poly_to_json(v.num), "den": _poly_to_json(v.den)}
    raise InputError(f"not a semifield value: {v!r}")


def from_json(sf: Semifield, obj: Any) -> Value:
    try:
        if sf is QPOS:
            if isinstance(obj, bool) or not isinstance(obj, (str, int)):
                raise InputError(f"expected a 'p/q' string, got {obj!r}")
            return QPos(Fraction(str(obj)))
        if sf is TROP:
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise InputError(f"expected an integer, got {obj!r}")
            return Trop(obj)
        if sf is ONE:
            if obj not in ("1", 1):
                raise InputError(f"expected '1', got {obj!r}")
            return One()
        if sf is QTPOS:
            if not isinstance(obj, dict):
                raise InputError(f"expected a num/den record, got {obj!r}")
            return QTPos(_poly_from_json(obj["num"]), _poly_from_json(obj["den"]))
    except (ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"cannot parse {obj!r} as {sf.name}: {exc}") from None
    raise InputError(f"unknown semifield {sf!r}")


def random_value(sf: Semifield, rng: random.Random, size: int = 5) -> Value:
    if sf is QPOS:
        return QPos(rng.randint(1, size), rng.randint(1, size))
    if sf is TROP:
        return Trop(rng.randint(-size, size))
    if sf is ONE:
        return One()
    if sf is QTPOS:
        def rpoly():
            lo = rng.randint(0, 2)
            cs = [0] * lo + [rng.randint(1, size)] + [rng.randint(0, size) for _ in range(rng.randint(0, 2))]
            return fmpq_poly(cs)
        return QTPos(rpoly(), rpoly())
    raise InputError(f"unknown semifield {sf!r}")
