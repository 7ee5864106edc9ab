"""Seeded smoke battery behind `tnnflag selftest`."""

from __future__ import annotations

import random

from .flag import act, chamber_ansatz, enumerate_cells, mr_evaluate, random_point, star_index, transition
from .monoid import braid_R, g_mul, random_gelement, to_matrix
from .rootdata import RootDatum
from .semifield import QPOS, TROP, random_value


def run_selftest(seed: int = 0) -> list[tuple[str, bool]]:
    rng = random.Random(seed)
    A2, C2 = RootDatum.of_type("A2"), RootDatum.of_type("C2")
    out = []

    ok = True
    for _ in range(20):
        p = [random_value(QPOS, rng) for _ in range(3)]
        ok &= braid_R(A2, 2, 1, braid_R(A2, 1, 2, p)) == tuple(p)
        q = [random_value(QPOS, rng) for _ in range(4)]
        ok &= braid_R(C2, 2, 1, braid_R(C2, 1, 2, q)) == tuple(q)
    out.append(("braid_involution", ok))

    out.append(("cell_count_A2", len(enumerate_cells(A2)) == 19))

    ok = True
    for datum in (A2, C2):
        for _ in range(10):
            p = random_point(datum, QPOS, rng)
            ok &= chamber_ansatz(mr_evaluate(p), datum, p.word) == p
    out.append(("mr_roundtrip", ok))

    ok = True
    for _ in range(10):
        g1, g2 = random_gelement(A2, QPOS, rng), random_gelement(A2, QPOS, rng)
        ok &= to_matrix(g_mul(g1, g2)) == to_matrix(g1) * to_matrix(g2)
    out.append(("matrix_faithfulness", ok))

    ok = True
    for _ in range(10):
        g, p = random_gelement(A2, QPOS, rng), random_point(A2, QPOS, rng)
        ok &= act(g, p).index == star_index(g.cell, p.index)
    out.append(("star_action", ok))

    ok = True
    w0 = A2.weyl.longest()
    for _ in range(5):
        p = random_point(A2, TROP, rng, cell=None)
        words = A2.weyl.reduced_words(p.w)
        q = transition(p, words[-1])
        ok &= transition(q, p.word) == p
    out.append(("tropical_transition", ok and w0.length == 3))
    return out
