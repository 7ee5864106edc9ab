import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tnnflag import matrix as mx
from tnnflag.errors import InputError, MismatchError, NoBraidError, NotInImage
from tnnflag.monoid import (
    GElement, UElement, braid_R, base_change_monoid, g_from_json, g_mul, g_to_json, iota_fold, phi,
    random_gelement, random_uelement, tau, to_matrix, transport, u_from_letters, u_mul, unfold,
)
from tnnflag.rootdata import RootDatum
from tnnflag.semifield import CONST_EMBED, ONE, QPOS, QTPOS, TO_ONE, TROP, VALUATION, One, QPos, QTPos, Trop

F = Fraction
pos_q = st.fractions(min_value=F(1, 50), max_value=50).filter(lambda q: q > 0).map(QPos)


def test_braid_R_m3_example(A2):
    q = [QPos(1)] * 3
    assert braid_R(A2, 1, 2, q) == (QPos(1, 2), QPos(2), QPos(1, 2))
    assert braid_R(A2, 1, 2, [Trop(0), Trop(5), Trop(2)]) == (Trop(7), Trop(0), Trop(5))
    with pytest.raises(InputError):
        braid_R(A2, 1, 2, q[:2])


def test_braid_R_m2():
    A1A1 = RootDatum.of_type("A3")
    assert braid_R(A1A1, 1, 3, [QPos(2), QPos(5)]) == (QPos(5), QPos(2))


@given(pos_q, pos_q, pos_q)
def test_braid_R_matrix_oracle(a, b, c):
    A2 = RootDatum.of_type("A2")
    a2, b2, c2 = braid_R(A2, 1, 2, [a, b, c])
    lhs = mx.gen_x(3, 1, a.q) * mx.gen_x(3, 2, b.q) * mx.gen_x(3, 1, c.q)
    rhs = mx.gen_x(3, 2, a2.q) * mx.gen_x(3, 1, b2.q) * mx.gen_x(3, 2, c2.q)
    assert lhs == rhs
    assert braid_R(A2, 2, 1, [a2, b2, c2]) == (a, b, c)


@pytest.mark.parametrize("name,m", [("C2", 4), ("B2", 4), ("G2", 6)])
def test_braid_R_folded_involution(name, m):
    datum = RootDatum.of_type(name)
    i, j = datum.nodes
    rng = random.Random(7)
    for _ in range(20):
        ps = [QPos(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(m)]
        assert braid_R(datum, j, i, braid_R(datum, i, j, ps)) == tuple(ps)
    tr = [Trop(rng.randint(-5, 5)) for _ in range(m)]
    assert braid_R(datum, j, i, braid_R(datum, i, j, tr)) == tuple(tr)


def test_braid_R_m4_matrix_oracle(C2):
    i, j = C2.nodes
    rng = random.Random(8)
    for _ in range(20):
        ps = [QPos(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(4)]
        u = UElement(C2, QPOS, (i, j, i, j), tuple(ps))
        v = UElement(C2, QPOS, (j, i, j, i), braid_R(C2, i, j, ps))
        g = GElement(C2, QPOS, u, (QPos(1), QPos(1)), UElement.identity(C2, QPOS))
        h = GElement(C2, QPOS, v, (QPos(1), QPos(1)), UElement.identity(C2, QPOS))
        assert to_matrix(g) == to_matrix(h)


def test_no_braid_affine():
    A1a = RootDatum.of_type("A1~")
    with pytest.raises(NoBraidError):
        braid_R(A1a, 0, 1, [QPos(1)] * 2)


def test_transport_cycles(A3):
    # going around every cycle of the reduced-word graph of w0 returns the start
    W = A3.weyl
    words = W.reduced_words(W.longest())
    rng = random.Random(2)
    params = tuple(QPos(rng.randint(1, 9)) for _ in range(6))
    start = words[0]
    for word in words:
        there = transport(A3, start, params, word)
        assert transport(A3, word, there, start) == params
    hexagon = [(1, 2, 1, 3, 2, 1), (2, 1, 2, 3, 2, 1), (2, 1, 3, 2, 3, 1), (2, 3, 1, 2, 1, 3)]
    p = params
    for a, b in zip(hexagon, hexagon[1:]):
        p = transport(A3, a, p, b)
    assert transport(A3, hexagon[-1], p, hexagon[0]) == params


def test_coordinates_well_defined(A3):
    W = A3.weyl
    rng = random.Random(3)
    w0 = W.longest()
    words = W.reduced_words(w0)
    u = UElement(A3, QPOS, words[0], tuple(QPos(rng.randint(1, 9)) for _ in range(6)))
    m = to_matrix(GElement(A3, QPOS, u, (QPos(1),) * 3, UElement.identity(A3, QPOS)))
    for word in words:
        v = u.in_word(word)
        assert v == u and hash(v) == hash(u)
        assert to_matrix(GElement(A3, QPOS, v, (QPos(1),) * 3, UElement.identity(A3, QPOS))) == m


def test_u_mul_examples(A2):
    a, b, c = QPos(2), QPos(3), QPos(5)
    one = UElement(A2, QPOS, (1,), (a,))
    assert u_mul(one, UElement(A2, QPOS, (1,), (b,))) == UElement(A2, QPOS, (1,), (a + b,))
    assert u_mul(one, UElement(A2, QPOS, (2,), (b,))).word == (1, 2)
    u = u_from_letters(A2, QPOS, [(1, a), (2, b), (1, c), (2, a)])
    assert u.w == A2.weyl.longest()
    with pytest.raises(InputError):
        UElement(A2, QPOS, (1, 1), (a, b))
    with pytest.raises(MismatchError):
        UElement(A2, QPOS, (1,), (Trop(1),))


def test_sl2_example(A1):
    got = g_mul(GElement.neg(A1, 1, QPos(1)), GElement.pos(A1, 1, QPos(1)))
    want = GElement.build(A1, QPOS, x=(1,), a=(QPos(1, 2),), t=(QPos(1, 2),), y=(1,), c=(QPos(1, 2),))
    assert got == want
    assert to_matrix(got) == mx.FieldMatrix([[1, 1], [1, 2]])
    # tropical: min(0, 0) = 0 so everything stays 0
    tr = g_mul(GElement.neg(A1, 1, Trop(0)), GElement.pos(A1, 1, Trop(0)))
    assert tr.t == (Trop(0),) and tr.x.params == (Trop(0),)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "C2", "C3", "B2"])
def test_g_mul_matrix_oracle(name):
    datum = RootDatum.of_type(name)
    rng = random.Random(11)
    for _ in range(25):
        g1 = random_gelement(datum, QPOS, rng, max_len=3)
        g2 = random_gelement(datum, QPOS, rng, max_len=3)
        assert to_matrix(g_mul(g1, g2)) == to_matrix(g1) * to_matrix(g2)


def test_g_mul_associative(A2):
    rng = random.Random(12)
    for _ in range(20):
        g1, g2, g3 = (random_gelement(A2, QPOS, rng, max_len=3) for _ in range(3))
        assert g_mul(g_mul(g1, g2), g3) == g_mul(g1, g_mul(g2, g3))
        e = GElement.identity(A2, QPOS)
        assert g_mul(e, g1) == g1 == g_mul(g1, e)


def test_equality_matches_matrices(A3):
    rng = random.Random(13)
    W = A3.weyl
    for _ in range(30):
        g = random_gelement(A3, QPOS, rng, max_len=4)
        other_word = rng.choice(W.reduced_words(g.x.w))
        h = GElement(A3, QPOS, g.x.in_word(other_word), g.t, g.y)
        assert (g == h) and to_matrix(g) == to_matrix(h)
        k = GElement(A3, QPOS, g.x, (g.t[0] + QPos(1),) + g.t[1:], g.y)
        assert (g == k) == (to_matrix(g) == to_matrix(k)) is False


def test_tau_phi(A2):
    rng = random.Random(14)
    for _ in range(20):
        g1, g2 = random_gelement(A2, QPOS, rng, 3), random_gelement(A2, QPOS, rng, 3)
        assert to_matrix(tau(g1)) == to_matrix(g1).transpose()
        assert tau(g_mul(g1, g2)) == g_mul(tau(g2), tau(g1))
        assert tau(tau(g1)) == g1
        assert phi(phi(g1)) == g1
        assert phi(g_mul(g1, g2)) == g_mul(phi(g1), phi(g2))
    a = QPos(3)
    assert phi(GElement.pos(A2, 1, a)) == GElement.neg(A2, 1, a)
    assert phi(GElement.torus(A2, 2, a)) == GElement.torus(A2, 2, a.inv())


def test_iota_fold_examples(C2):
    f = C2.folding
    i = next(k for k in C2.nodes if len(f.orbits[k]) == 2)
    a = QPos(5)
    g = iota_fold(GElement.pos(C2, i, a))
    assert g.x.word == f.orbits[i] and g.x.params == (a, a)
    assert unfold(C2, g) == GElement.pos(C2, i, a)
    amb = C2.ambient
    p, q = f.orbits[i]
    with pytest.raises(NotInImage):
        unfold(C2, GElement.pos(amb, p, a))
    bad = GElement.build(amb, QPOS, x=(p, q), a=(QPos(1), QPos(2)))
    with pytest.raises(NotInImage):
        unfold(C2, bad)
    with pytest.raises(MismatchError):
        unfold(C2, GElement.pos(C2, i, a))


@pytest.mark.parametrize("name", ["C2", "B2", "G2", "C3"])
def test_folding_homomorphism(name):
    datum = RootDatum.of_type(name)
    rng = random.Random(15)
    for _ in range(10):
        g1, g2 = random_gelement(datum, QPOS, rng, 4), random_gelement(datum, QPOS, rng, 4)
        assert unfold(datum, iota_fold(g1)) == g1
        assert iota_fold(g_mul(g1, g2)) == g_mul(iota_fold(g1), iota_fold(g2))


def test_base_change(A2):
    rng = random.Random(16)
    for _ in range(10):
        g1, g2 = random_gelement(A2, QPOS, rng, 3), random_gelement(A2, QPOS, rng, 3)
        assert base_change_monoid(TO_ONE, g_mul(g1, g2)) == g_mul(base_change_monoid(TO_ONE, g1),
                                                                base_change_monoid(TO_ONE, g2))
        assert base_change_monoid(CONST_EMBED, g_mul(g1, g2)) == g_mul(base_change_monoid(CONST_EMBED, g1),
                                                                     base_change_monoid(CONST_EMBED, g2))
        h1, h2 = random_gelement(A2, QTPOS, rng, 3), random_gelement(A2, QTPOS, rng, 3)
        assert base_change_monoid(VALUATION, g_mul(h1, h2)) == g_mul(base_change_monoid(VALUATION, h1),
                                                                   base_change_monoid(VALUATION, h2))
    with pytest.raises(MismatchError):
        base_change_monoid(VALUATION, g1)
    e = base_change_monoid(TO_ONE, g1)
    assert e.sf is ONE and all(isinstance(b, One) for b in e.t)


def test_json_roundtrip(A3):
    rng = random.Random(17)
    for sf in (QPOS, TROP, QTPOS, ONE):
        g = random_gelement(A3, sf, rng, 4)
        assert g_from_json(A3, sf, g_to_json(g)) == g
    with pytest.raises(InputError):
        g_from_json(A3, QPOS, [1, 2])


def test_mixed_semifields(A2):
    with pytest.raises(MismatchError):
        g_mul(GElement.pos(A2, 1, QPos(1)), GElement.pos(A2, 1, Trop(1)))
    with pytest.raises(MismatchError):
        g_mul(GElement.pos(A2, 1, QPos(1)), GElement.pos(RootDatum.of_type("A3"), 1, QPos(1)))


def test_qtpos_monoid(A2):
    t = QTPos.monomial(1)
    g = g_mul(GElement.neg(A2, 1, t), GElement.pos(A2, 1, t))
    assert to_matrix(g) == to_matrix(GElement.neg(A2, 1, t)) * to_matrix(GElement.pos(A2, 1, t))
    u = random_uelement(A2, QTPOS, random.Random(0), 3)
    assert u_mul(u, UElement.identity(A2, QTPOS)) == u
