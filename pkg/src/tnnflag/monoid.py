"""The monoids U(K) and G(K) in canonical cell coordinates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, MismatchError, NoBraidError, NotInImage
from .rootdata import GCM, RootDatum, build_folding
from .semifield import Semifield, SemifieldHom, Value, from_json, random_value, to_json
from .weyl import WeylElement


def _check_params(params, sf: Semifield | None = None) -> Semifield:
    if not params:
        if sf is None:
            raise InputError("empty parameter list without a semifield")
        return sf
    sf = sf or params[0].semifield
    for p in params:
        if not isinstance(p, Value):
            raise InputError(f"not a semifield value: {p!r}")
        if p.semifield is not sf:
            raise MismatchError(f"mixed semifields {sf.name} and {p.semifield.name}")
    return sf


# -- braid moves ----------------------------------------------------------------

@lru_cache(maxsize=64)
def _fold_data(entries: tuple):
    """Ambient braid path for a rank-2 block with m in {4, 6}. Nodes of the
    block are 0 (= i) and 1 (= j)."""
    f = build_folding(GCM((0, 1), entries))
    amb = RootDatum(f.ambient).weyl
    m = _m_of(entries)
    src = f.expand(_alt(0, 1, m))
    dst = f.expand(_alt(1, 0, m))
    return f, tuple(amb.reduced_word_path(src, dst))


def _m_of(entries) -> int | float:
    prod = entries[0][1] * entries[1][0]
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(prod, float("inf"))


def _alt(i, j, m: int) -> tuple:
    return tuple(i if k % 2 == 0 else j for k in range(m))


def _apply_simply_laced(params: list, pos: int, m: int):
    """In-place R for m in {2, 3} on params[pos:pos+m] (0-based pos)."""
    if m == 2:
        params[pos], params[pos + 1] = params[pos + 1], params[pos]
    elif m == 3:
        a, b, c = params[pos:pos + 3]
        s = a + c
        params[pos:pos + 3] = [b * c / s, s, a * b / s]
    else:
        raise InputError(f"simply-laced move expected, got m={m}")


def braid_R(datum: RootDatum, i, j, params) -> tuple:
    """Coordinates on (j, i, j, ...) of the element with coordinates params
    on (i, j, i, ...)."""
    params = list(params)
    _check_params(params)
    gcm = datum.gcm
    entries = ((2, gcm.a(i, j)), (gcm.a(j, i), 2))
    m = _m_of(entries)
    if m == float("inf"):
        raise NoBraidError(f"m({i},{j}) is infinite")
    if len(params) != m:
        raise InputError(f"R({i},{j}) needs {m} parameters, got {len(params)}")
    if m in (2, 3):
        _apply_simply_laced(params, 0, m)
        return tuple(params)
    f, path = _fold_data(entries)
    amb = [p for k in _alt(0, 1, m) for p in [params.pop(0)] * len(f.orbits[k])]
    for mv in path:
        _apply_simply_laced(amb, mv.position - 1, mv.m)
    out, pos = [], 0
    for k in _alt(1, 0, m):
        block = amb[pos:pos + len(f.orbits[k])]
        pos += len(block)
        if any(b != block[0] for b in block):
            raise AssertionError("folded braid move left the sigma-fixed locus")
        out.append(block[0])
    return tuple(out)


def transport(datum: RootDatum, word, params, target) -> tuple:
    """Coordinates on the reduced word target of the element with
    coordinates params on word."""
    params = list(params)
    for mv in datum.weyl.reduced_word_path(word, target):
        p = mv.position - 1
        if mv.m in (2, 3):
            _apply_simply_laced(params, p, mv.m)
        else:
            params[p:p + mv.m] = braid_R(datum, mv.i, mv.j, params[p:p + mv.m])
    return tuple(params)


# -- U(K) -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UElement:
    """Element of U_w(K): the product i_1^{a_1} ... i_n^{a_n} along a reduced
    word of w."""

    datum: RootDatum
    sf: Semifield
    word: tuple
    params: tuple

    def __post_init__(self):
        if len(self.word) != len(self.params):
            raise InputError("word and parameter lengths differ")
        _check_params(self.params, self.sf)
        self.datum.weyl.check_reduced(self.word)

    @classmethod
    def identity(cls, datum, sf) -> "UElement":
        return cls(datum, sf, (), ())

    @property
    def w(self) -> WeylElement:
        return self.datum.weyl.check_reduced(self.word)

    def letters(self):
        return list(zip(self.word, self.params))

    def in_word(self, target) -> "UElement":
        target = tuple(target)
        return UElement(self.datum, self.sf, target, transport(self.datum, self.word, self.params, target))

    def canonical(self) -> "UElement":
        return self.in_word(self.w.reduced_word)

    def __mul__(self, other):
        return u_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, UElement):
            return NotImplemented
        _same(self, other)
        if self.w != other.w:
            return False
        return other.in_word(self.word).params == self.params

    def __hash__(self):
        c = self.canonical()
        return hash((c.word, c.params))

    def __repr__(self):
        body = " ".join(f"{i}^{p}" for i, p in self.letters())
        return f"U[{body or 'e'}]"


def _same(a, b):
    if a.datum != b.datum:
        raise MismatchError("elements over different root data")
    if a.sf is not b.sf:
        raise MismatchError(f"elements over {a.sf.name} and {b.sf.name}")


def _absorb(datum, word: tuple, params: list, i, a) -> tuple[tuple, list]:
    W = datum.weyl
    w = W.from_word(word)
    if not w.has_right_descent(i):
        return word + (i,), params + [a]
    target = w.times_s(i).reduced_word + (i,)
    params = list(transport(datum, word, params, target))
    params[-1] = params[-1] + a
    return target, params


def u_mul(u1: UElement, u2: UElement) -> UElement:
    _same(u1, u2)
    word, params = u1.word, list(u1.params)
    for i, a in u2.letters():
        word, params = _absorb(u1.datum, word, params, i, a)
    return UElement(u1.datum, u1.sf, word, tuple(params))


def u_from_letters(datum, sf, letters) -> UElement:
    """Product of arbitrary letters (i, a), reduced or not."""
    word, params = (), []
    for i, a in letters:
        word, params = _absorb(datum, word, params, i, a)
    return UElement(datum, sf, word, tuple(params))


# -- G(K) -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GElement:
    """x T y with x in U_x(K), T = prod alpha_i^vee(t_i) in node order, and y
    the phi-image of the negative part: (-j_1)^{c_1} ... (-j_k)^{c_k}."""

    datum: RootDatum
    sf: Semifield
    x: UElement
    t: tuple
    y: UElement

    def __post_init__(self):
        if len(self.t) != len(self.datum.nodes):
            raise InputError("torus vector must have one entry per node")
        _check_params(self.t, self.sf)
        _same(self.x, self.y)
        if self.x.sf is not self.sf or self.x.datum != self.datum:
            raise MismatchError("parts over different data")

    @classmethod
    def identity(cls, datum, sf) -> "GElement":
        u = UElement.identity(datum, sf)
        return cls(datum, sf, u, tuple(sf.one() for _ in datum.nodes), u)

    @classmethod
    def build(cls, datum, sf, x=(), a=(), t=None, y=(), c=()) -> "GElement":
        t = tuple(sf.one() for _ in datum.nodes) if t is None else tuple(t)
        return cls(datum, sf, UElement(datum, sf, tuple(x), tuple(a)), t,
                   UElement(datum, sf, tuple(y), tuple(c)))

    @classmethod
    def pos(cls, datum, i, a: Value) -> "GElement":
        return cls.build(datum, a.semifield, x=(i,), a=(a,))

    @classmethod
    def neg(cls, datum, i, c: Value) -> "GElement":
        return cls.build(datum, c.semifield, y=(i,), c=(c,))

    @classmethod
    def torus(cls, datum, i, b: Value) -> "GElement":
        t = [b.semifield.one() for _ in datum.nodes]
        t[datum.gcm.index(i)] = b
        return cls.build(datum, b.semifield, t=t)

    @property
    def cell(self) -> tuple[WeylElement, WeylElement]:
        return self.x.w, self.y.w

    def __mul__(self, other):
        return g_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, GElement):
            return NotImplemented
        _same(self, other)
        return self.x == other.x and self.t == other.t and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.t, self.y))

    def __repr__(self):
        tor = " ".join(f"_{i}^{b}" for i, b in zip(self.datum.nodes, self.t))
        neg = " ".join(f"(-{i})^{c}" for i, c in self.y.letters())
        pos = " ".join(f"{i}^{a}" for i, a in self.x.letters())
        return f"G[{pos} | {tor} | {neg}]"


def _char(datum: RootDatum, torus: list, i):
    """chi_i(T) = prod_j t_j^{a_ij}: T x_i(a) T^-1 = x_i(chi_i(T) a)."""
    gcm = datum.gcm
    k = gcm.index(i)
    out = None
    for j, tj in enumerate(torus):
        e = gcm.entries[k][j]
        if e:
            f = tj ** e
            out = f if out is None else out * f
    return out


def g_mul(g1: GElement, g2: GElement) -> GElement:
    _same(g1, g2)
    datum, sf = g1.datum, g1.sf
    gcm = datum.gcm
    one = sf.one()
    t_acc = list(g1.t)
    neg = list(g1.y.params)
    neg_word = g1.y.word
    exited = []
    for i, a in g2.x.letters():
        # state: N[:k+1] . i^a . pend . N[k+1:], the letter moving left
        pend = [one] * len(t_acc)
        ii = gcm.index(i)
        for k in range(len(neg_word) - 1, -1, -1):
            j, c = neg_word[k], neg[k]
            chi = _char(datum, pend, j)
            if j == i:
                # (-i)^c i^a = i^{a/s} _i^{1/s} (-i)^{c/s}, s = 1 + ac
                s = one + a * c
                a, c = a / s, c / s
                pend[ii] = pend[ii] / s
            neg[k] = c * chi
        exited.append((i, _char(datum, t_acc, i) * a))
        t_acc = [x * y for x, y in zip(t_acc, pend)]
    neg = [c * _char(datum, g2.t, j) for j, c in zip(neg_word, neg)]
    t = tuple(x * y for x, y in zip(t_acc, g2.t))
    x = g1.x
    for i, a in exited:
        word, params = _absorb(datum, x.word, list(x.params), i, a)
        x = UElement(datum, sf, word, tuple(params))
    y = u_mul(UElement(datum, sf, neg_word, tuple(neg)), g2.y)
    return GElement(datum, sf, x, t, y)


# -- symmetries ----------------------------------------------------------------------

def tau(g: GElement) -> GElement:
    """Anti-automorphism i^a <-> (-i)^a fixing the torus (transpose)."""
    x = UElement(g.datum, g.sf, g.y.word[::-1], g.y.params[::-1])
    y = UElement(g.datum, g.sf, g.x.word[::-1], g.x.params[::-1])
    return GElement(g.datum, g.sf, x, g.t, y)


def phi(g: GElement) -> GElement:
    """Automorphism i^a <-> (-i)^a inverting the torus."""
    ident = UElement.identity(g.datum, g.sf)
    ones = tuple(g.sf.one() for _ in g.t)
    left = GElement(g.datum, g.sf, ident, ones, g.x)
    mid = GElement(g.datum, g.sf, ident, tuple(b.inv() for b in g.t), ident)
    right = GElement(g.datum, g.sf, g.y, ones, ident)
    return g_mul(g_mul(left, mid), right)


# -- folding ---------------------------------------------------------------------------

def _ambient(datum: RootDatum) -> RootDatum:
    return datum.ambient


def iota_fold(g: GElement) -> GElement:
    f = g.datum.folding
    amb = _ambient(g.datum)

    def expand(u: UElement) -> UElement:
        word, params = [], []
        for i, a in u.letters():
            for p in f.orbits[i]:
                word.append(p)
                params.append(a)
        return UElement(amb, g.sf, tuple(word), tuple(params))

    t = tuple(g.t[g.datum.gcm.index(f.orbit_of[p])] for p in amb.nodes)
    return GElement(amb, g.sf, expand(g.x), t, expand(g.y))


def _folded_word(datum: RootDatum, w: WeylElement) -> tuple:
    """Folded word whose expansion is a reduced word for w, or NotInImage."""
    f = datum.folding
    out = []
    while not w.is_identity():
        for i in datum.nodes:
            orb = f.orbits[i]
            if all(w.has_right_descent(p) for p in orb):
                for p in orb:
                    w = w.times_s(p)
                out.append(i)
                break
        else:
            raise NotInImage("Weyl element is not sigma-fixed")
    return tuple(reversed(out))


def _unfold_u(datum: RootDatum, u: UElement) -> UElement:
    f = datum.folding
    word = _folded_word(datum, u.w)
    amb_params = u.in_word(f.expand(word)).params
    params, pos = [], 0
    for i in word:
        block = amb_params[pos:pos + len(f.orbits[i])]
        pos += len(block)
        if any(b != block[0] for b in block):
            raise NotInImage("coordinates are not sigma-fixed")
        params.append(block[0])
    return UElement(datum, u.sf, word, tuple(params))


def unfold(datum: RootDatum, g: GElement) -> GElement:
    """Inverse of iota_fold on its image."""
    f = datum.folding
    if g.datum != _ambient(datum):
        raise MismatchError("element is not over the ambient datum")
    t = []
    for i in datum.nodes:
        vals = [g.t[g.datum.gcm.index(p)] for p in f.orbits[i]]
        if any(v != vals[0] for v in vals):
            raise NotInImage("torus part is not sigma-fixed")
        t.append(vals[0])
    return GElement(datum, g.sf, _unfold_u(datum, g.x), tuple(t), _unfold_u(datum, g.y))


# -- base change and matrices ------------------------------------------------------

def base_change_monoid(r: SemifieldHom, g: GElement) -> GElement:
    if r.source is not None and r.source is not g.sf:
        raise MismatchError(f"{r.name} expects {r.source.name}, got {g.sf.name}")

    def bc(u: UElement) -> UElement:
        return UElement(g.datum, r.target, u.word, tuple(r(a) for a in u.params))

    return GElement(g.datum, r.target, bc(g.x), tuple(r(b) for b in g.t), bc(g.y))


def to_matrix(g: GElement):
    from .matrix import FieldMatrix, embed, gen_torus, gen_x, gen_y, realization

    n, f = realization(g.datum)
    if f is not None:
        g = iota_fold(g)
    m = FieldMatrix.identity(n)
    for i, a in g.x.letters():
        m = m * gen_x(n, i, embed(a))
    for i, b in zip(g.datum.nodes, g.t):
        if b != g.sf.one():
            m = m * gen_torus(n, i, embed(b))
    for i, c in g.y.letters():
        m = m * gen_y(n, i, embed(c))
    return m


# -- JSON and random elements ------------------------------------------------------

def g_to_json(g: GElement) -> dict:
    return {
        "x": list(g.x.word), "a": [to_json(v) for v in g.x.params],
        "t": [to_json(v) for v in g.t],
        "y": list(g.y.word), "c": [to_json(v) for v in g.y.params],
    }


def g_from_json(datum: RootDatum, sf: Semifield, obj) -> GElement:
    if not isinstance(obj, dict):
        raise InputError("GElement JSON must be an object")
    try:
        t = obj.get("t")
        return GElement.build(
            datum, sf,
            x=tuple(obj.get("x", ())), a=tuple(from_json(sf, v) for v in obj.get("a", ())),
            t=None if t is None else tuple(from_json(sf, v) for v in t),
            y=tuple(obj.get("y", ())), c=tuple(from_json(sf, v) for v in obj.get("c", ())),
        )
    except TypeError as exc:
        raise InputError(f"bad GElement JSON: {exc}") from None


def random_word(W, rng: random.Random, length: int) -> tuple:
    """A reduced word of the given length (shorter if the group runs out)."""
    w = W.identity
    word = []
    for _ in range(length):
        up = [i for i in W.nodes if not w.has_right_descent(i)]
        if not up:
            break
        i = rng.choice(up)
        w = w.times_s(i)
        word.append(i)
    return tuple(word)


def random_uelement(datum, sf, rng: random.Random, max_len: int = 4, size: int = 5) -> UElement:
    word = random_word(datum.weyl, rng, rng.randint(0, max_len))
    return UElement(datum, sf, word, tuple(random_value(sf, rng, size) for _ in word))


def random_gelement(datum, sf, rng: random.Random, max_len: int = 4, size: int = 5) -> GElement:
    x = random_uelement(datum, sf, rng, max_len, size)
    y = random_uelement(datum, sf, rng, max_len, size)
    t = tuple(random_value(sf, rng, size) for _ in datum.nodes)
    return GElement(datum, sf, x, t, y)
