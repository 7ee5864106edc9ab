import pytest

from tnnflag.errors import InputError, UnsupportedFolding
from tnnflag.rootdata import (
    GCM, RootDatum, build_folding, cartan_type, check_folding, classify, datum_from_config, fold_matrix,
)


def gcm(rows):
    return GCM(tuple(range(1, len(rows) + 1)), tuple(tuple(r) for r in rows))


def test_m_values():
    assert cartan_type("A2").m_value(1, 2) == 3
    assert cartan_type("C2").m_value(1, 2) == 4
    assert cartan_type("G2").m_value(1, 2) == 6
    assert gcm([[2, 0], [0, 2]]).m_value(1, 2) == 2
    assert cartan_type("A1~").m_value(0, 1) == float("inf")
    with pytest.raises(InputError):
        cartan_type("A2").m_value(1, 1)


@pytest.mark.parametrize("name", ["A4", "B3", "C3", "D4", "G2", "F4", "E6", "A2~", "C2~", "G2~"])
def test_m_value_symmetry(name):
    g = cartan_type(name)
    for i in g.nodes:
        for j in g.nodes:
            if i != j:
                assert g.m_value(i, j) == g.m_value(j, i)


def test_classify_examples():
    assert str(classify(gcm([[2, -1], [-1, 2]]))) == "finite(A2)"
    assert str(classify(gcm([[2, -2], [-2, 2]]))) == "affine(A1~)"
    assert classify(gcm([[2, -3], [-3, 2]])).kind == "indefinite"


@pytest.mark.parametrize("name", ["A1", "A5", "B4", "C4", "D5", "E6", "E7", "E8", "F4", "G2"])
def test_classify_finite_table(name):
    c = classify(cartan_type(name))
    assert c.kind == "finite"
    assert RootDatum.of_type(c.type_name).gcm.entries == cartan_type(name).entries or name in ("B2",)


@pytest.mark.parametrize("name", ["A1~", "A3~", "B3~", "C3~", "D4~", "E6~", "F4~", "G2~"])
def test_classify_affine_table(name):
    assert classify(cartan_type(name)).kind == "affine"


def test_classify_brute_force_determinants():
    # finite iff every leading principal minor of the symmetrized matrix is positive
    from fractions import Fraction
    from tnnflag.matrix import det
    for name in ["A3", "B3", "C3", "D4", "G2", "F4", "A2~", "G2~", "C2~"]:
        g = cartan_type(name)
        S = g.symmetrized()
        minors = [det([[Fraction(x) for x in r[:k]] for r in S[:k]]) for k in range(1, g.rank + 1)]
        finite = all(m > 0 for m in minors)
        assert (classify(g).kind == "finite") == finite


def test_gcm_validation():
    with pytest.raises(InputError):
        gcm([[2, -1], [0, 2]])
    with pytest.raises(InputError):
        gcm([[1, 0], [0, 2]])
    with pytest.raises(InputError):
        gcm([[2, 1], [1, 2]])


def test_fold_examples():
    f = build_folding(cartan_type("A3"))
    assert f.is_identity()
    f = build_folding(cartan_type("C2"))
    assert RootDatum(f.ambient).name == "A3"
    assert f.orbits == {1: (1, 3), 2: (2,)}
    assert f.sigma[1] == 3 and f.sigma[3] == 1 and f.sigma[2] == 2
    f = build_folding(cartan_type("G2"))
    assert RootDatum(f.ambient).name == "D4"
    outer = [p for p in f.ambient.nodes if f.sigma[p] != p]
    assert len(outer) == 3 and all(f.sigma[f.sigma[f.sigma[p]]] == p for p in outer)


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "B3", "B4", "F4", "G2", "C2~", "C3~", "B3~", "F4~", "G2~"])
def test_folding_reproduces(name):
    g = cartan_type(name)
    f = build_folding(g)
    check_folding(f)
    orbits = [f.orbits[i] for i in g.nodes]
    assert fold_matrix(f.ambient, orbits) == [list(r) for r in g.entries]
    for orb in orbits:
        for p in orb:
            for q in orb:
                assert p == q or f.ambient.a(p, q) == 0


def test_unsupported_folding():
    with pytest.raises(UnsupportedFolding):
        build_folding(gcm([[2, -1], [-5, 2]]))


def test_pairing_and_weights():
    D = RootDatum.of_type("C2")
    for i in D.nodes:
        for j in D.nodes:
            assert D.pairing(j, i) == D.gcm.a(i, j)
    assert D.root_as_weight(1) == (2, -1)
    assert D.reflect_weight(1, D.fundamental_weight(1)) == (-1, 1)


def test_datum_from_config():
    assert datum_from_config({"type": "A3"}).name == "A3"
    d = datum_from_config({"gcm": [[2, -2], [-1, 2]], "symmetrizer": [1, 2]})
    assert d.gcm.symmetrizer == (1, 2)
    with pytest.raises(InputError):
        datum_from_config({"gcm": [[2, -2], [-1, 2]], "symmetrizer": [1, 1]})
    with pytest.raises(InputError):
        datum_from_config({})
