"""Points and cells of the flag manifold B(K) in Marsh-Rietsch coordinates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import matrix as mx
from .errors import InputError, MismatchError, NotInImage, NotNonnegative, UnsupportedRealization
from .monoid import GElement, _folded_word, base_change_monoid, to_matrix
from .rootdata import RootDatum
from .semifield import (
    MONOMIAL_LIFT, ONE, QPOS, QTPOS, TROP, VALUATION, One, Semifield, SemifieldHom, Value,
    from_json, random_value, to_json,
)
from .weyl import WeylElement, demazure_circ, demazure_star


@dataclass(frozen=True)
class CellIndex:
    v: WeylElement
    w: WeylElement

    def __post_init__(self):
        if not self.v.group.bruhat_leq(self.v, self.w):
            from .errors import OrderViolation
            raise OrderViolation(f"{self.v!r} is not below {self.w!r}")

    def __repr__(self):
        return f"({self.v!r}, {self.w!r})"


@dataclass(frozen=True, eq=False)
class CellPoint:
    """Point of R_{v,w}(K): parameters t_k for k in J0 of the positive
    subexpression of v in the reduced word `word` of w."""

    datum: RootDatum
    sf: Semifield
    v: WeylElement
    word: tuple
    params: tuple

    def __post_init__(self):
        W = self.datum.weyl
        sub = W.positive_subexpression(self.v, self.word)
        if len(self.params) != len(sub.J_zero):
            raise InputError(f"cell needs {len(sub.J_zero)} parameters, got {len(self.params)}")
        for p in self.params:
            if not isinstance(p, Value) or p.semifield is not self.sf:
                raise MismatchError(f"parameter {p!r} is not in {self.sf.name}")

    @property
    def w(self) -> WeylElement:
        return self.datum.weyl.from_word(self.word)

    @property
    def index(self) -> CellIndex:
        return CellIndex(self.v, self.w)

    @property
    def subexpression(self):
        return self.datum.weyl.positive_subexpression(self.v, self.word)

    def __eq__(self, other):
        if not isinstance(other, CellPoint):
            return NotImplemented
        return (self.datum == other.datum and self.sf is other.sf and self.v == other.v
                and self.word == other.word and self.params == other.params)

    def __hash__(self):
        return hash((self.v, self.word, self.params))

    def __repr__(self):
        return f"CellPoint(v={self.v!r}, word={self.word}, params={list(self.params)})"


def base_point(datum: RootDatum, sf: Semifield) -> CellPoint:
    e = datum.weyl.identity
    return CellPoint(datum, sf, e, (), ())


# -- Marsh-Rietsch evaluation and the Chamber Ansatz ----------------------------------

def _field_check(sf: Semifield):
    if not sf.in_field:
        raise UnsupportedRealization(f"{sf.name} has no field embedding; use tropical_transport")


def mr_evaluate(p: CellPoint) -> mx.FieldMatrix:
    _field_check(p.sf)
    size, f = mx.realization(p.datum)
    sub = p.subexpression
    params = iter(p.params)
    zero = set(sub.J_zero)
    g = mx.FieldMatrix.identity(size)
    for k, i in enumerate(p.word, start=1):
        orbit = f.orbits[i] if f else (i,)
        if k in zero:
            t = mx.embed(next(params))
            for q in orbit:
                g = g * mx.gen_y(size, q, t)
        else:
            for q in orbit:
                g = g * mx.gen_sbar(size, q)
    return g


def _native_weyl(datum: RootDatum, f, w_amb: WeylElement) -> WeylElement:
    if f is None:
        return w_amb
    return datum.weyl.from_word(_folded_word(datum, w_amb))


def chamber_minors(g: mx.FieldMatrix, amb: RootDatum, word: tuple):
    """(v, sub, Delta) for the flag gB+ and the reduced word `word` of the
    ambient type-A datum: Delta[k][j] is the chamber minor of the k-th prefix
    flag at the fundamental weight omega_j (j = 1..n-1)."""
    W = amb.weyl
    w = W.check_reduced(word)
    v, w_found = mx.detect_cell(g, W)
    if w_found != w:
        raise MismatchError(f"flag lies in the cell of {w_found!r}, not {w!r}")
    sub = W.positive_subexpression(v, word)
    b = mx.bruhat_factor(g, w)
    n = g.n
    deltas = []
    Bk = b
    for k in range(len(word) + 1):
        if k:
            Bk = Bk * mx.gen_sdot(n, word[k - 1])
        wk = W.from_word(word[:k])
        row = {}
        for j in range(1, n):
            row[j] = mx.chamber_minor(Bk, sub.seq[k], wk, j)
        deltas.append(row)
    return v, sub, deltas


def _ansatz_params(amb: RootDatum, word, sub, deltas) -> dict:
    """t_k for every position k (1-based) of the ambient word."""
    gcm = amb.gcm
    out = {}
    for k, i in enumerate(word, start=1):
        num = Fraction(1)
        for j in amb.nodes:
            e = -gcm.a(j, i)
            if j != i and e:
                num = num * deltas[k][j] ** e
        den = deltas[k][i] * deltas[k - 1][i]
        if den == 0:
            raise NotNonnegative("vanishing chamber minor")
        out[k] = num / den
    return out


def chamber_ansatz(g: mx.FieldMatrix, datum: RootDatum, word, sf: Semifield = QPOS) -> CellPoint:
    """Recover Marsh-Rietsch coordinates on `word` of the flag gB+."""
    _field_check(sf)
    word = tuple(word)
    datum.weyl.check_reduced(word)
    size, f = mx.realization(datum)
    amb = datum.ambient if f else datum
    amb_word = f.expand(word) if f else word
    if g.n != size:
        raise MismatchError(f"expected a {size}x{size} matrix, got {g.n}x{g.n}")
    v_amb, sub, deltas = chamber_minors(g, amb, amb_word)
    if sf is QPOS:
        for row in deltas:
            for x in row.values():
                if not x > 0:
                    raise NotNonnegative(f"chamber minor {x} is not positive")
    ts = _ansatz_params(amb, amb_word, sub, deltas)
    for k in sub.J_plus:
        if ts[k] != 1:
            raise NotNonnegative(f"position {k} of J+ evaluates to {ts[k]}, not 1")
    if sub.J_minus:
        raise NotNonnegative("positive subexpression has a descent")
    params, pos = [], 0
    for i in word:
        block = list(range(pos + 1, pos + 1 + (len(f.orbits[i]) if f else 1)))
        pos += len(block)
        if block[0] in sub.J_zero:
            vals = [ts[k] for k in block]
            if any(k not in sub.J_zero for k in block) or any(x != vals[0] for x in vals):
                raise NotInImage("flag is not sigma-fixed")
            params.append(mx.restrict(vals[0], sf))
    v = _native_weyl(datum, f, v_amb)
    return CellPoint(datum, sf, v, word, tuple(params))


def predicted_chamber_minor(p: CellPoint, k: int, lam) -> object:
    """Right-hand side of the Marsh-Rietsch minor identity: the product over
    l <= k of t_l^(-<alpha_{i_l}^vee, s_{i_{l+1}} ... s_{i_k} lam>), with
    t_l = 1 on J+. Field-valued."""
    _field_check(p.sf)
    sub = p.subexpression
    t = {l: mx.embed(x) for l, x in zip(sub.J_zero, p.params)}
    out = Fraction(1)
    mu = tuple(lam)
    for l in range(k, 0, -1):
        i = p.word[l - 1]
        e = -mu[p.datum.gcm.index(i)]
        if l in t and e:
            out = out * t[l] ** e
        mu = p.datum.reflect_weight(i, mu)
    return out


# -- lifting for tropical inputs ------------------------------------------------------

def base_change_flag(r: SemifieldHom | Callable, p: CellPoint, target: Semifield | None = None) -> CellPoint:
    if isinstance(r, SemifieldHom):
        if r.source is not None and r.source is not p.sf:
            raise MismatchError(f"{r.name} expects {r.source.name}, got {p.sf.name}")
        target = r.target
    return CellPoint(p.datum, target, p.v, p.word, tuple(r(x) for x in p.params))


def _map_g(r, g: GElement, target: Semifield) -> GElement:
    if isinstance(r, SemifieldHom):
        return base_change_monoid(r, g)
    from .monoid import UElement
    u = lambda e: UElement(g.datum, target, e.word, tuple(r(a) for a in e.params))  # noqa: E731
    return GElement(g.datum, target, u(g.x), tuple(r(b) for b in g.t), u(g.y))


def tropical_transport(computation: Callable, *inputs, lift: Callable = MONOMIAL_LIFT):
    """Lift tropical inputs to Q>0(t), run computation, read valuations.
    Inputs and the output may be CellPoints, GElements or values."""

    def up(obj):
        if isinstance(obj, CellPoint):
            return base_change_flag(lift, obj, QTPOS)
        if isinstance(obj, GElement):
            return _map_g(lift, obj, QTPOS)
        if isinstance(obj, Value):
            return lift(obj)
        return obj

    def down(obj):
        if isinstance(obj, CellPoint):
            return base_change_flag(VALUATION, obj)
        if isinstance(obj, GElement):
            return base_change_monoid(VALUATION, obj)
        if isinstance(obj, Value):
            return VALUATION(obj)
        if isinstance(obj, (tuple, list)):
            return type(obj)(down(x) for x in obj)
        return obj

    for obj in inputs:
        sf = getattr(obj, "sf", getattr(obj, "semifield", None))
        if sf is not None and sf is not TROP:
            raise MismatchError(f"tropical input expected, got {sf.name}")
    return down(computation(*(up(x) for x in inputs)))


# -- transition and action --------------------------------------------------------

def transition(p: CellPoint, target_word, lift: Callable = MONOMIAL_LIFT) -> CellPoint:
    target_word = tuple(target_word)
    W = p.datum.weyl
    if W.check_reduced(target_word) != p.w:
        raise MismatchError(f"{target_word} is not a reduced word for {p.w!r}")
    if target_word == p.word:
        return p
    if p.sf is ONE:
        n = len(W.positive_subexpression(p.v, target_word).J_zero)
        return CellPoint(p.datum, ONE, p.v, target_word, tuple(One() for _ in range(n)))
    if p.sf is TROP:
        return tropical_transport(lambda q: transition(q, target_word), p, lift=lift)
    return chamber_ansatz(mr_evaluate(p), p.datum, target_word, p.sf)


def star_index(g_index, c: CellIndex) -> CellIndex:
    x, y = g_index
    return CellIndex(demazure_circ(x, c.v), demazure_star(y, c.w))


def act(g: GElement, p: CellPoint, lift: Callable = MONOMIAL_LIFT) -> CellPoint:
    if g.datum != p.datum or g.sf is not p.sf:
        raise MismatchError("element and point over different data")
    target = star_index(g.cell, p.index)
    word = target.w.reduced_word
    if p.sf is ONE:
        n = len(target.w.reduced_word) - target.v.length
        return CellPoint(p.datum, ONE, target.v, word, tuple(One() for _ in range(n)))
    if p.sf is TROP:
        return tropical_transport(lambda h, q: act(h, q), g, p, lift=lift)
    m = to_matrix(g) * mr_evaluate(p)
    out = chamber_ansatz(m, p.datum, word, p.sf)
    if out.v != target.v:
        raise AssertionError(f"action landed in {out.index}, expected {target}")
    return out


def enumerate_cells(datum: RootDatum, max_length: int | None = None) -> list[CellIndex]:
    W = datum.weyl
    elems = W.elements(max_length)
    return [CellIndex(v, w) for w in elems for v in elems if v.length <= w.length and W.bruhat_leq(v, w)]


# -- JSON and random points -------------------------------------------------------

def point_to_json(p: CellPoint) -> dict:
    return {"v": list(p.v.reduced_word), "w": list(p.w.reduced_word), "word": list(p.word),
            "params": [to_json(x) for x in p.params]}


def point_from_json(datum: RootDatum, sf: Semifield, obj, params=None) -> CellPoint:
    if not isinstance(obj, dict) or "v" not in obj or ("w" not in obj and "word" not in obj):
        raise InputError("CellPoint JSON needs 'v' and 'w' or 'word'")
    W = datum.weyl
    v = W.from_word(obj["v"])
    word = tuple(obj["word"]) if "word" in obj else W.check_reduced(obj["w"]).reduced_word
    if "w" in obj and W.from_word(obj["w"]) != W.from_word(word):
        raise MismatchError("'word' is not a reduced word for 'w'")
    raw = obj.get("params", []) if params is None else params
    return CellPoint(datum, sf, v, word, tuple(from_json(sf, x) for x in raw))


def index_to_json(c: CellIndex) -> dict:
    return {"v": list(c.v.reduced_word), "w": list(c.w.reduced_word)}


def random_point(datum: RootDatum, sf: Semifield, rng: random.Random, cell: CellIndex | None = None,
                 max_len: int = 4, size: int = 5) -> CellPoint:
    if cell is None:
        cells = enumerate_cells(datum, max_len)
        cell = rng.choice(cells)
    word = cell.w.reduced_word
    n = len(word) - cell.v.length
    return CellPoint(datum, sf, cell.v, word, tuple(random_value(sf, rng, size) for _ in range(n)))
