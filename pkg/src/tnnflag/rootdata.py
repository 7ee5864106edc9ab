"""Generalized Cartan matrices, simply connected root data, finite/affine
recognition and table-driven folding onto a symmetric ambient datum.

Convention: ``a(i, j) = <alpha_j^vee, alpha_i>``, so the simple reflection
``s_j`` sends ``alpha_i`` to ``alpha_i - a(i, j) alpha_j``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Hashable

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .errors import InputError, UnsupportedFolding

Node = Hashable

INFINITY = math.inf


@dataclass(frozen=True)
class GCM:
    nodes: tuple
    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...] = ()
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.nodes)
        if len(set(self.nodes)) != n:
            raise InputError("repeated node labels")
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise InputError("Cartan matrix must be square and match the node list")
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in self.entries))
        A = self.entries
        for i in range(n):
            if A[i][i] != 2:
                raise InputError(f"diagonal entry at {self.nodes[i]} is not 2")
            for j in range(n):
                if i != j and (A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0)):
                    raise InputError(f"invalid off-diagonal pair at ({self.nodes[i]}, {self.nodes[j]})")
        d = tuple(self.symmetrizer) or _find_symmetrizer(A)
        if len(d) != n or any(x <= 0 for x in d):
            raise InputError("symmetrizer must be a positive integer vector")
        for i, j in product(range(n), repeat=2):
            if d[i] * A[i][j] != d[j] * A[j][i]:
                raise InputError("symmetrizer does not symmetrize the matrix")
        object.__setattr__(self, "symmetrizer", tuple(int(x) for x in d))
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(self.nodes)})

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def index(self, node: Node) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise InputError(f"unknown node {node!r}") from None

    def a(self, i: Node, j: Node) -> int:
        return self.entries[self.index(i)][self.index(j)]

    def is_symmetric(self) -> bool:
        n = self.rank
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def m_value(self, i: Node, j: Node):
        """Order of s_i s_j: 2, 3, 4, 6 or math.inf."""
        if i == j:
            raise InputError("m_value needs two distinct nodes")
        p = self.a(i, j) * self.a(j, i)
        return {0: 2, 1: 3, 2: 4, 3: 6}.get(p, INFINITY)

    def symmetrized(self) -> list[list[int]]:
        d = self.symmetrizer
        return [[d[i] * self.entries[i][j] for j in range(self.rank)] for i in range(self.rank)]

    def submatrix(self, nodes) -> "GCM":
        idx = [self.index(p) for p in nodes]
        return GCM(tuple(nodes), tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def components(self) -> list[tuple]:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((p, q) for p in self.nodes for q in self.nodes if p != q and self.a(p, q))
        comps = [tuple(sorted(c, key=self.index)) for c in nx.connected_components(g)]
        return sorted(comps, key=lambda c: self.index(c[0]))

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for p in self.nodes:
            for q in self.nodes:
                if p != q and self.a(p, q):
                    g.add_edge(p, q, a=self.a(p, q))
        return g


def _find_symmetrizer(A) -> tuple[int, ...]:
    n = len(A)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and A[i][j]:
                    val = d[i] * A[i][j] / A[j][i]
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        raise InputError("Cartan matrix is not symmetrizable")
    lcm = math.lcm(*(x.denominator for x in d))
    ints = [int(x * lcm) for x in d]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def m_value(gcm: GCM, i: Node, j: Node):
    return gcm.m_value(i, j)


# -- named types ---------------------------------------------------------------

def _from_edges(n: int, edges: dict, nodes=None) -> tuple[tuple[int, ...], ...]:
    nodes = nodes or list(range(1, n + 1))
    pos = {p: k for k, p in enumerate(nodes)}
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for (p, q), (apq, aqp) in edges.items():
        A[pos[p]][pos[q]] = apq
        A[pos[q]][pos[p]] = aqp
    return tuple(tuple(r) for r in A)


def _finite_entries(letter: str, n: int):
    chain = {(k, k + 1): (-1, -1) for k in range(1, n)}
    if letter == "A" and n >= 1:
        return _from_edges(n, chain)
    if letter == "B" and n >= 2:
        chain[(n - 1, n)] = (-2, -1)
        return _from_edges(n, chain)
    if letter == "C" and n >= 2:
        chain[(n - 1, n)] = (-1, -2)
        return _from_edges(n, chain)
    if letter == "D" and n >= 4:
        edges = {(k, k + 1): (-1, -1) for k in range(1, n - 1)}
        edges[(n - 2, n)] = (-1, -1)
        return _from_edges(n, edges)
    if letter == "E" and n in (6, 7, 8):
        edges = {(1, 3): (-1, -1), (2, 4): (-1, -1)}
        edges.update({(k, k + 1): (-1, -1) for k in range(3, n)})
        return _from_edges(n, edges)
    if letter == "F" and n == 4:
        return _from_edges(4, {(1, 2): (-1, -1), (2, 3): (-2, -1), (3, 4): (-1, -1)})
    if letter == "G" and n == 2:
        return _from_edges(2, {(1, 2): (-1, -3)})
    raise InputError(f"no finite type {letter}_{n}")


def _positive_roots(gcm: GCM) -> list[tuple[int, ...]]:
    """Positive roots of a finite-type GCM in the simple-root basis."""
    n = gcm.rank
    A = gcm.entries
    simple = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for j in range(n):
                # s_j(r) = r - (sum_i r_i a_ij) alpha_j
                c = sum(r[i] * A[i][j] for i in range(n))
                img = tuple(r[i] - (c if i == j else 0) for i in range(n))
                if all(x >= 0 for x in img) and img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
        if len(seen) > 500:
            raise InputError("not of finite type")
    return sorted(seen, key=sum)


def _affine_entries(letter: str, n: int):
    fin = GCM(tuple(range(1, n + 1)), _finite_entries(letter, n))
    A = fin.entries
    d = fin.symmetrizer
    theta = _positive_roots(fin)[-1]
    d_long = min(d[k] for k in range(n) if theta[k])
    cvee = [Fraction(theta[k] * d_long, d[k]) for k in range(n)]
    row0 = [-sum(theta[k] * A[k][j] for k in range(n)) for j in range(n)]
    col0 = [-sum(cvee[k] * A[j][k] for k in range(n)) for j in range(n)]
    if any(c.denominator != 1 for c in col0):
        raise InputError("non-integral affine extension")
    entries = [[2] + row0]
    for j in range(n):
        entries.append([int(col0[j])] + list(A[j]))
    return tuple(range(0, n + 1)), tuple(tuple(r) for r in entries)


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])_?\{?(\d+)\}?\s*(~|\^\{?\(1\)\}?|\(1\))?\s*$")


def cartan_type(name: str) -> GCM:
    """``"A3"``, ``"C_2"``, ``"A1~"`` or ``"G_2^(1)"``."""
    m = _TYPE_RE.match(name)
    if not m:
        raise InputError(f"cannot parse type name {name!r}")
    letter, n, aff = m.group(1).upper(), int(m.group(2)), m.group(3)
    if aff:
        nodes, entries = _affine_entries(letter, n)
        return GCM(nodes, entries, name=f"{letter}{n}~")
    return GCM(tuple(range(1, n + 1)), _finite_entries(letter, n), name=f"{letter}{n}")


# -- classification ------------------------------------------------------------

def _psd_nullity(M) -> int | None:
    """Nullity of a symmetric rational matrix if it is positive semidefinite,
    else None. Exact symmetric elimination with diagonal pivots."""
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    nullity = 0
    for k in range(n):
        p = M[k][k]
        if p < 0:
            return None
        if p == 0:
            if any(M[k][j] for j in range(k, n)):
                return None
            nullity += 1
            continue
        for i in range(k + 1, n):
            f = M[i][k] / p
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return nullity


def _candidates(rank: int, affine: bool):
    names = []
    if affine:
        n = rank - 1
        for letter in "ACBDEFG":
            try:
                names.append(cartan_type(f"{letter}{n}~"))
            except InputError:
                pass
    else:
        for letter in "ACBDEFG":
            try:
                names.append(cartan_type(f"{letter}{rank}"))
            except InputError:
                pass
    return names


def identify(gcm: GCM) -> tuple[str, dict] | None:
    """Name of a connected finite/untwisted-affine GCM plus a node map
    from the named model onto ``gcm``, or None."""
    nullity = _psd_nullity(gcm.symmetrized())
    if nullity is None or nullity > 1:
        return None
    target = gcm.digraph()
    for cand in _candidates(gcm.rank, nullity == 1):
        gm = DiGraphMatcher(cand.digraph(), target, edge_match=lambda e1, e2: e1["a"] == e2["a"])
        if gm.is_isomorphic():
            return cand.name, dict(gm.mapping)
    return None


@dataclass(frozen=True)
class Classification:
    kind: str  # finite | affine | indefinite
    type_name: str | None

    def __str__(self):
        return f"{self.kind}({self.type_name})" if self.type_name else self.kind


def classify(gcm: GCM) -> Classification:
    nullity = _psd_nullity(gcm.symmetrized())
    if nullity is None or nullity > 1:
        return Classification("indefinite", None)
    kind = "finite" if nullity == 0 else "affine"
    parts = []
    for comp in gcm.components():
        ident = identify(gcm.submatrix(comp))
        parts.append(ident[0] if ident else "?")
    return Classification(kind, "x".join(parts))


# -- folding -------------------------------------------------------------------

@dataclass(frozen=True)
class FoldingData:
    ambient: GCM
    sigma: dict           # permutation of ambient nodes
    orbit_of: dict        # ambient node -> folded node
    folded: GCM

    @cached_property
    def orbits(self) -> dict:
        out = {i: [] for i in self.folded.nodes}
        for p in self.ambient.nodes:
            out[self.orbit_of[p]].append(p)
        return {i: tuple(sorted(v, key=self.ambient.index)) for i, v in out.items()}

    def is_identity(self) -> bool:
        return all(self.sigma[p] == p for p in self.ambient.nodes)

    def expand(self, word) -> tuple:
        """Replace every folded letter by its ambient orbit (fixed order)."""
        return tuple(p for i in word for p in self.orbits[i])


def fold_matrix(ambient: GCM, orbits: list[tuple]) -> list[list[int]]:
    """Folded pairing: a_ij = sum_{q in j} a'_{pq} for any p in i."""
    return [[sum(ambient.a(oi[0], q) for q in oj) for oj in orbits] for oi in orbits]


def check_folding(f: FoldingData) -> None:
    amb = f.ambient
    for p in amb.nodes:
        for q in amb.nodes:
            if amb.a(f.sigma[p], f.sigma[q]) != amb.a(p, q):
                raise UnsupportedFolding("sigma does not preserve the ambient matrix")
    for i, orb in f.orbits.items():
        for p in orb:
            for q in orb:
                if p != q and amb.a(p, q):
                    raise UnsupportedFolding(f"orbit {orb} contains an edge")
    orbit_list = [f.orbits[i] for i in f.folded.nodes]
    for p in orbit_list:
        for j, oj in enumerate(orbit_list):
            sums = {sum(amb.a(x, q) for q in oj) for x in p}
            if len(sums) != 1:
                raise UnsupportedFolding("folded pairing depends on the orbit representative")
    if [list(r) for r in f.folded.entries] != fold_matrix(amb, orbit_list):
        raise UnsupportedFolding("folding does not reproduce the Cartan matrix")


def _cycle_perm(nodes, cycles) -> dict:
    sigma = {p: p for p in nodes}
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            sigma[a] = b
    return sigma


def _fold_table(name: str):
    """Ambient type name and sigma cycles for a tabled non-symmetric type."""
    m = _TYPE_RE.match(name)
    letter, n, aff = m.group(1), int(m.group(2)), bool(m.group(3))
    if not aff:
        if letter == "C":
            return f"A{2 * n - 1}", [(p, 2 * n - p) for p in range(1, n)]
        if letter == "B":
            return f"D{n + 1}", [(n, n + 1)]
        if letter == "F":
            return "E6", [(1, 6), (3, 5)]
        if letter == "G":
            return "D4", [(1, 3, 4)]
    else:
        if letter == "C":
            return f"A{2 * n - 1}~", [(p, 2 * n - p) for p in range(1, n)]
        if letter == "B" and n >= 3:
            return f"D{n + 1}~", [(n, n + 1)]
        if letter == "F":
            return "E6~", [(1, 6), (3, 5)]
        if letter == "G":
            return "D4~", [(1, 3, 4)]
    return None


def build_folding(gcm: GCM) -> FoldingData:
    if gcm.is_symmetric():
        ident = {p: p for p in gcm.nodes}
        return FoldingData(gcm, ident, ident, gcm)
    comps = gcm.components()
    if len(comps) != 1:
        parts = [build_folding(gcm.submatrix(c)) for c in comps]
        return _join_foldings(gcm, parts)
    ident = identify(gcm)
    entry = _fold_table(ident[0]) if ident else None
    if entry is None:
        what = ident[0] if ident else "this (non-finite, non-untwisted-affine) matrix"
        raise UnsupportedFolding(f"no tabled symmetric ambient datum for {what}")
    amb_name, cycles = entry
    ambient = cartan_type(amb_name)
    sigma = _cycle_perm(ambient.nodes, cycles)
    seen, orbits = set(), []
    for p in ambient.nodes:
        if p not in seen:
            orb, q = [], p
            while q not in seen:
                seen.add(q)
                orb.append(q)
                q = sigma[q]
            orbits.append(tuple(orb))
    folded = GCM(tuple(range(len(orbits))), tuple(tuple(r) for r in fold_matrix(ambient, orbits)))
    gm = DiGraphMatcher(folded.digraph(), gcm.digraph(), edge_match=lambda e1, e2: e1["a"] == e2["a"])
    if not gm.is_isomorphic():
        raise UnsupportedFolding(f"tabled folding for {ident[0]} does not reproduce the input")
    to_input = gm.mapping
    orbit_of = {p: to_input[k] for k, orb in enumerate(orbits) for p in orb}
    f = FoldingData(ambient, sigma, orbit_of, gcm)
    check_folding(f)
    return f


def _join_foldings(gcm: GCM, parts: list[FoldingData]) -> FoldingData:
    nodes, sigma, orbit_of = [], {}, {}
    for k, f in enumerate(parts):
        for p in f.ambient.nodes:
            nodes.append((k, p))
            sigma[(k, p)] = (k, f.sigma[p])
            orbit_of[(k, p)] = f.orbit_of[p]
    pos = {p: i for i, p in enumerate(nodes)}
    A = [[0] * len(nodes) for _ in nodes]
    for (k, p) in nodes:
        for q in parts[k].ambient.nodes:
            A[pos[(k, p)]][pos[(k, q)]] = parts[k].ambient.a(p, q)
    ambient = GCM(tuple(nodes), tuple(tuple(r) for r in A))
    f = FoldingData(ambient, sigma, orbit_of, gcm)
    check_folding(f)
    return f


# -- root datum ------------------------------------------------------------------

class RootDatum:
    """Simply connected Kac-Moody root datum determined by a GCM.

    Weights are written in the fundamental-weight basis, so the simple root
    alpha_i has coordinates ``(a(i, j))_j``."""

    def __init__(self, gcm: GCM):
        self.gcm = gcm

    @classmethod
    def of_type(cls, name: str) -> "RootDatum":
        return cls(cartan_type(name))

    @property
    def nodes(self) -> tuple:
        return self.gcm.nodes

    @property
    def name(self) -> str:
        return self.gcm.name or "custom"

    def __repr__(self):
        return f"RootDatum({self.name})"

    def __eq__(self, other):
        return isinstance(other, RootDatum) and self.gcm == other.gcm

    def __hash__(self):
        return hash(self.gcm)

    def pairing(self, j: Node, i: Node) -> int:
        """<alpha_j^vee, alpha_i>."""
        return self.gcm.a(i, j)

    def root_as_weight(self, i: Node) -> tuple[int, ...]:
        return tuple(self.gcm.a(i, j) for j in self.nodes)

    def fundamental_weight(self, i: Node) -> tuple[int, ...]:
        return tuple(int(p == i) for p in self.nodes)

    def reflect_weight(self, i: Node, lam) -> tuple[int, ...]:
        k = self.gcm.index(i)
        c = lam[k]
        alpha = self.root_as_weight(i)
        return tuple(x - c * y for x, y in zip(lam, alpha))

    @cached_property
    def weyl(self):
        from .weyl import WeylGroup
        return WeylGroup(self)

    @cached_property
    def folding(self) -> FoldingData:
        return build_folding(self.gcm)

    @cached_property
    def ambient(self) -> "RootDatum":
        f = self.folding
        return self if f.is_identity() else RootDatum(f.ambient)

    @cached_property
    def type_a_rank(self) -> int | None:
        """n when the datum is A_n with nodes 1..n in chain order."""
        if self.gcm.entries == _finite_entries("A", self.gcm.rank) and self.nodes == tuple(range(1, self.gcm.rank + 1)):
            return self.gcm.rank
        return None

    def classify(self) -> Classification:
        return classify(self.gcm)


def datum_from_config(cfg: dict) -> RootDatum:
    if "type" in cfg:
        return RootDatum.of_type(str(cfg["type"]))
    if "gcm" in cfg:
        entries = cfg["gcm"]
        nodes = tuple(cfg.get("nodes") or range(1, len(entries) + 1))
        return RootDatum(GCM(nodes, tuple(tuple(r) for r in entries), tuple(cfg.get("symmetrizer") or ())))
    raise InputError("datum config needs 'type' or 'gcm'")
