"""Weyl groups of Kac-Moody root data, realized as integer matrices on the
root lattice. Works uniformly for finite, affine and indefinite types."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import InputError, MismatchError, OrderViolation

Mat = tuple[tuple[int, ...], ...]


def memo_limit(default: int = 1 << 18) -> int:
    try:
        return max(0, int(os.environ.get("TNNFLAG_MEMO_LIMIT", default)))
    except ValueError:
        return default


def _is_negative(col) -> bool:
    for x in col:
        if x:
            return x < 0
    return False


def _matmul(A: Mat, B: Mat) -> Mat:
    n = len(A)
    cols = list(zip(*B))
    return tuple(tuple(sum(A[r][k] * c[k] for k in range(n)) for c in cols) for r in range(n))


class WeylElement:
    __slots__ = ("group", "mat", "_word", "_inv", "__weakref__")

    def __init__(self, group: "WeylGroup", mat: Mat, word: tuple | None = None):
        self.group = group
        self.mat = mat
        self._word = word
        self._inv = None

    def _check(self, other):
        if not isinstance(other, WeylElement) or other.group is not self.group:
            raise MismatchError("Weyl elements of different root data")

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        self._check(other)
        return WeylElement(self.group, _matmul(self.mat, other.mat))

    def inverse(self) -> "WeylElement":
        if self._inv is None:
            self._inv = self.group.from_word(reversed(self.reduced_word))
            self._inv._inv = self
        return self._inv

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        self._check(other)
        return self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __repr__(self):
        word = self.reduced_word
        return "".join(f"s{i}" for i in word) or "e"

    def root_image(self, i) -> tuple[int, ...]:
        k = self.group.gcm.index(i)
        return tuple(row[k] for row in self.mat)

    def times_s(self, i) -> "WeylElement":
        """w * s_i (column operation)."""
        A = self.group.gcm.entries
        k = self.group.gcm.index(i)
        n = len(self.mat)
        col_i = [row[k] for row in self.mat]
        new = tuple(
            tuple(row[c] - A[c][k] * col_i[r] for c in range(n))
            for r, row in enumerate(self.mat)
        )
        return WeylElement(self.group, new)

    def s_times(self, i) -> "WeylElement":
        """s_i * w (row operation)."""
        return WeylElement(self.group, _matmul(self.group.gen_mats[i], self.mat))

    def has_right_descent(self, i) -> bool:
        return _is_negative(self.root_image(i))

    def has_left_descent(self, i) -> bool:
        return self.inverse().has_right_descent(i)

    def descent(self, i, side: str = "right") -> bool:
        if side == "right":
            return self.has_right_descent(i)
        if side == "left":
            return self.has_left_descent(i)
        raise InputError(f"side must be 'left' or 'right', not {side!r}")

    @property
    def reduced_word(self) -> tuple:
        if self._word is None:
            self._word = self.group._descent_word(self)
        return self._word

    @property
    def length(self) -> int:
        return len(self.reduced_word)

    def is_identity(self) -> bool:
        return self.mat == self.group.identity.mat

    def on_weight(self, lam) -> tuple[int, ...]:
        for i in reversed(self.reduced_word):
            lam = self.group.datum.reflect_weight(i, lam)
        return tuple(lam)


def length(u: WeylElement) -> int:
    return u.length


def descent(u: WeylElement, i, side: str = "right") -> bool:
    return u.descent(i, side)


@dataclass(frozen=True)
class Subexpression:
    """Subexpression (v_(0), ..., v_(n)) of a reduced word. Index sets use
    positions 1..n; position k carries the letter word[k-1]."""

    word: tuple
    seq: tuple[WeylElement, ...]

    def __post_init__(self):
        if len(self.seq) != len(self.word) + 1 or not self.seq[0].is_identity():
            raise InputError("subexpression must start at e and have n+1 terms")
        for k, i in enumerate(self.word):
            a, b = self.seq[k], self.seq[k + 1]
            if b != a and b != a.times_s(i):
                raise InputError(f"step {k} is neither stay nor s_{i}")

    @property
    def v(self) -> WeylElement:
        return self.seq[-1]

    def _where(self, sign: int) -> tuple[int, ...]:
        out = []
        for k in range(len(self.word)):
            d = self.seq[k + 1].length - self.seq[k].length
            if (d > 0) - (d < 0) == sign:
                out.append(k + 1)
        return tuple(out)

    @cached_property
    def J_plus(self) -> tuple[int, ...]:
        return self._where(1)

    @cached_property
    def J_zero(self) -> tuple[int, ...]:
        return self._where(0)

    @cached_property
    def J_minus(self) -> tuple[int, ...]:
        return self._where(-1)

    def is_positive(self) -> bool:
        return all(not self.seq[k].has_right_descent(i) for k, i in enumerate(self.word))

    def is_distinguished(self) -> bool:
        g = self.seq[0].group
        return all(g.bruhat_leq(self.seq[k + 1], self.seq[k].times_s(i))
                   for k, i in enumerate(self.word))


def is_distinguished(sub: Subexpression) -> bool:
    return sub.is_distinguished()


class SharpElement:
    """Element w# of the 0-Hecke monoid W#; the product is the Demazure
    product."""

    __slots__ = ("w",)

    def __init__(self, w: WeylElement):
        self.w = w

    def __mul__(self, other: "SharpElement") -> "SharpElement":
        return SharpElement(demazure_star(self.w, other.w))

    def __eq__(self, other):
        return isinstance(other, SharpElement) and self.w == other.w

    def __hash__(self):
        return hash(("sharp", self.w))

    def __repr__(self):
        return f"{self.w!r}#"


def demazure_star(u: WeylElement, w: WeylElement) -> WeylElement:
    """u# acting on w, each generator by s_i * w = max(w, s_i w)."""
    u._check(w)
    for i in reversed(u.reduced_word):
        if not w.has_left_descent(i):
            w = w.s_times(i)
    return w


def demazure_circ(u: WeylElement, w: WeylElement) -> WeylElement:
    """u# acting on w, each generator by s_i o w = min(w, s_i w)."""
    u._check(w)
    for i in reversed(u.reduced_word):
        if w.has_left_descent(i):
            w = w.s_times(i)
    return w


@dataclass(frozen=True)
class BraidMove:
    """Replace the alternating run (i, j, ...) of length m starting at the
    1-based position by (j, i, ...)."""

    position: int
    i: object
    j: object
    m: int

    def apply(self, word: tuple) -> tuple:
        p, m = self.position - 1, self.m
        old = _alternating(self.i, self.j, m)
        if tuple(word[p:p + m]) != old:
            raise InputError(f"braid move {self} does not match word {word}")
        return tuple(word[:p]) + _alternating(self.j, self.i, m) + tuple(word[p + m:])


def _alternating(i, j, m: int) -> tuple:
    return tuple(i if k % 2 == 0 else j for k in range(m))


class WeylGroup:
    def __init__(self, datum):
        self.datum = datum
        self.gcm = datum.gcm
        n = self.gcm.rank
        A = self.gcm.entries
        self.gen_mats = {}
        for i in self.gcm.nodes:
            k = self.gcm.index(i)
            # column c is s_i(alpha_c) = alpha_c - a_{c i} alpha_i
            self.gen_mats[i] = tuple(
                tuple(int(r == c) - (A[c][k] if r == k else 0) for c in range(n)) for r in range(n)
            )
        ident = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
        self.identity = WeylElement(self, ident, ())
        limit = memo_limit()
        self.bruhat_leq = lru_cache(maxsize=limit)(self._bruhat_leq)
        self._path_cache = lru_cache(maxsize=limit)(self._path)
        self.max_bfs_nodes = 200_000

    def __repr__(self):
        return f"WeylGroup({self.datum.name})"

    @property
    def nodes(self) -> tuple:
        return self.gcm.nodes

    def s(self, i) -> WeylElement:
        return WeylElement(self, self.gen_mats[i], (i,))

    def from_word(self, word) -> WeylElement:
        mat = self.identity.mat
        for i in word:
            if i not in self.gen_mats:
                raise InputError(f"unknown node {i!r}")
            mat = _matmul(mat, self.gen_mats[i])
        return WeylElement(self, mat)

    def __call__(self, *word) -> WeylElement:
        return self.from_word(word)

    def is_reduced(self, word) -> bool:
        return self.from_word(word).length == len(word)

    def check_reduced(self, word) -> WeylElement:
        w = self.from_word(word)
        if w.length != len(word):
            raise InputError(f"word {tuple(word)} is not reduced")
        return w

    def _descent_word(self, w: WeylElement) -> tuple:
        rev = []
        nodes = self.gcm.nodes
        while True:
            for i in nodes:
                if w.has_right_descent(i):
                    w = w.times_s(i)
                    rev.append(i)
                    break
            else:
                break
        return tuple(reversed(rev))

    # -- Bruhat order ---------------------------------------------------------

    def _bruhat_leq(self, v: WeylElement, w: WeylElement) -> bool:
        if v.length > w.length:
            return False
        if w.length == 0:
            return v.length == 0
        if v.length == w.length:
            return v == w
        s = w.reduced_word[-1]
        # the greedy word of w s is the greedy word of w minus its last letter
        ws = WeylElement(self, w.times_s(s).mat, w.reduced_word[:-1])
        if v.has_right_descent(s):
            return self.bruhat_leq(v.times_s(s), ws)
        return self.bruhat_leq(v, ws)

    # -- enumeration ----------------------------------------------------------

    def elements(self, max_length: int | None = None) -> list[WeylElement]:
        """All elements of length <= max_length, ordered by length then
        discovery. max_length=None needs a finite group."""
        level = [self.identity]
        out = [self.identity]
        seen = {self.identity.mat}
        ell = 0
        while level and (max_length is None or ell < max_length):
            nxt = []
            for w in level:
                for i in self.gcm.nodes:
                    if not w.has_right_descent(i):
                        u = w.times_s(i)
                        if u.mat not in seen:
                            seen.add(u.mat)
                            nxt.append(u)
            ell += 1
            if max_length is None and ell > 10_000:
                raise InputError("group looks infinite; pass max_length")
            out.extend(nxt)
            level = nxt
        return out

    def longest(self) -> WeylElement:
        w = self.identity
        while True:
            for i in self.gcm.nodes:
                if not w.has_right_descent(i):
                    w = w.times_s(i)
                    break
            else:
                return w
            if w.length > 1000:
                raise InputError("no longest element in an infinite Weyl group")

    # -- subexpressions ----------------------------------------------------------

    def positive_subexpression(self, v: WeylElement, word) -> Subexpression:
        word = tuple(word)
        w = self.check_reduced(word)
        if not self.bruhat_leq(v, w):
            raise OrderViolation(f"{v!r} is not below {w!r}")
        seq = [v]
        cur = v
        for i in reversed(word):
            if cur.has_right_descent(i):
                cur = cur.times_s(i)
            seq.append(cur)
        seq.reverse()
        if not seq[0].is_identity():
            raise OrderViolation(f"{v!r} is not below {w!r}")
        return Subexpression(word, tuple(seq))

    def subexpressions(self, word):
        """Every subexpression of word (2^n of them)."""
        word = tuple(word)
        stack = [(self.identity,)]
        for i in word:
            stack = [s + (s[-1],) for s in stack] + [s + (s[-1].times_s(i),) for s in stack]
        return [Subexpression(word, s) for s in stack]

    # -- reduced words ------------------------------------------------------------

    def braid_neighbours(self, word: tuple):
        n = len(word)
        for p in range(n - 1):
            i, j = word[p], word[p + 1]
            if i == j:
                continue
            m = self.gcm.m_value(i, j)
            if m == float("inf") or p + m > n:
                continue
            mv = BraidMove(p + 1, i, j, int(m))
            if tuple(word[p:p + mv.m]) == _alternating(i, j, mv.m):
                yield mv, mv.apply(word)

    def reduced_words(self, w: WeylElement, limit: int | None = None) -> list[tuple]:
        start = w.reduced_word
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for _, nxt in self.braid_neighbours(cur):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
                    if limit is not None and len(seen) > limit:
                        raise InputError("too many reduced words")
        return sorted(seen, key=lambda wd: [self.gcm.index(i) for i in wd])

    def reduced_word_path(self, word, target) -> list[BraidMove]:
        word, target = tuple(word), tuple(target)
        a = self.check_reduced(word)
        b = self.check_reduced(target)
        if a != b:
            raise MismatchError(f"{word} and {target} are words for different elements")
        return list(self._path_cache(word, target))

    def _path(self, word: tuple, target: tuple) -> tuple[BraidMove, ...]:
        if word == target:
            return ()
        parent = {word: None}
        queue = deque([word])
        while queue:
            cur = queue.popleft()
            for mv, nxt in self.braid_neighbours(cur):
                if nxt in parent:
                    continue
                parent[nxt] = (cur, mv)
                if nxt == target:
                    moves = []
                    node = nxt
                    while parent[node] is not None:
                        node, m = parent[node]
                        moves.append(m)
                    return tuple(reversed(moves))
                queue.append(nxt)
            if len(parent) > self.max_bfs_nodes:
                return tuple(constructive_path(self, word, target))
        raise InputError(f"no braid path between {word} and {target}")


def _bring_to_front(group: WeylGroup, word: list, s) -> list[BraidMove]:
    """Moves rewriting `word` (reduced) to start with its left descent s."""
    t = word[0]
    if t == s:
        return []
    m = int(group.gcm.m_value(s, t))
    moves = [BraidMove(mv.position + 1, mv.i, mv.j, mv.m)
             for mv in _bring_alternating(group, word[1:], s, t, m - 1)]
    for mv in moves:
        word[:] = mv.apply(tuple(word))
    final = BraidMove(1, t, s, m)
    word[:] = final.apply(tuple(word))
    return moves + [final]


def _bring_alternating(group, word: list, a, b, k: int) -> list[BraidMove]:
    moves = []
    for pos in range(k):
        letter = a if pos % 2 == 0 else b
        tail = word[pos:]
        sub = _bring_to_front(group, tail, letter)
        word[pos:] = tail
        moves.extend(BraidMove(mv.position + pos, mv.i, mv.j, mv.m) for mv in sub)
    return moves


def constructive_path(group: WeylGroup, word, target) -> list[BraidMove]:
    """Braid path from the constructive proof of Matsumoto's theorem; no
    search, so it scales to words whose braid graph is too large for BFS."""
    word = list(word)
    moves = []
    for pos, s in enumerate(target):
        tail = word[pos:]
        sub = _bring_to_front(group, tail, s)
        word[pos:] = tail
        moves.extend(BraidMove(mv.position + pos, mv.i, mv.j, mv.m) for mv in sub)
    return moves


def bruhat_leq(v: WeylElement, w: WeylElement) -> bool:
    v._check(w)
    return v.group.bruhat_leq(v, w)


def positive_subexpression(v: WeylElement, word) -> Subexpression:
    return v.group.positive_subexpression(v, word)


def reduced_word_path(group: WeylGroup, word, target) -> list[BraidMove]:
    return group.reduced_word_path(word, target)
