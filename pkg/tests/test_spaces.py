from fractions import Fraction
from itertools import product
import random

import pytest

from toricnet import spaces as sp
from toricnet import surface as sm

import corpus


def random_map(rng, dom, cod):
    rows = [[Fraction(rng.randint(-3, 3), rng.choice([1, 2, 4])) for _ in range(dom.dim)] for _ in range(cod.dim)]
    return sp.from_dense(dom, cod, rows)


def test_named_dimensions():
    assert sp.space(sm.sphere()).dim == 1
    assert sp.space(sm.tube(), {"t": 0, "u": 0}).dim == 8
    d = sm.surface(3, 4)
    for labels in sm.labelings(d):
        assert sp.space(d, labels).dim == 512


def test_compose_with_identity():
    rng = random.Random(1)
    a, b = sp.space(sm.torus()), sp.space(sm.pants(), {"b": 0, "l": 1, "r": 1})
    f = random_map(rng, a, b)
    assert sp.compose(sp.identity(b), f).matrix_equal(f)
    assert sp.compose(f, sp.identity(a)).matrix_equal(f)


def test_compose_rejects_mismatched_spaces():
    a, b = sp.space(sm.torus()), sp.space(sm.cylinder(), {"t": 0, "u": 0})
    with pytest.raises(sp.SpaceMismatch):
        sp.compose(sp.identity(a), sp.identity(b))


def test_tensor_is_kronecker_left_major():
    rng = random.Random(5)
    s2 = sp.space(sm.cylinder(), {"t": 1, "u": 1})
    s4 = sp.space(sm.torus())
    f = random_map(rng, s2, s2)
    g = random_map(rng, s4, s4)
    t = sp.tensor(f, g)
    assert t.shape == (8, 8)
    fd, gd, td = f.dense(), g.dense(), t.dense()
    for i, j, k, l in product(range(2), range(2), range(4), range(4)):
        assert td[i * 4 + k][j * 4 + l] == fd[i][j] * gd[k][l]


def test_tensor_exchange_law():
    rng = random.Random(8)
    a = sp.space(sm.cylinder(), {"t": 0, "u": 0})
    b = sp.space(sm.torus())
    f1, f2 = random_map(rng, a, a), random_map(rng, a, a)
    g1, g2 = random_map(rng, b, b), random_map(rng, b, b)
    lhs = sp.compose(sp.tensor(f2, g2), sp.tensor(f1, g1))
    rhs = sp.tensor(sp.compose(f2, f1), sp.compose(g2, g1))
    assert lhs.matrix_equal(rhs)


def test_apply_zero_and_basis():
    s = sp.space(sm.tube(), {"t": 1, "u": 1})
    v = sp.Vector(s, {0: Fraction(1), 3: Fraction(-1, 2)})
    assert sp.apply(sp.zero(s, s), v).support() == {}
    assert sp.apply(sp.identity(s), v).support() == v.support()
    with pytest.raises(ValueError):
        sp.Vector(s, {s.dim: 1})


def test_serialize_round_trip_and_exact_scalars():
    rng = random.Random(2)
    s = sp.space(sm.tube(), {"t": 0, "u": 0})
    f = random_map(rng, s, s)
    assert sp.parse_map(f.serialize(), s, s).matrix_equal(f)
    assert sp.format_scalar(Fraction(1, 2)) == "1/2"
    assert sp.parse_scalar("-3/4") == Fraction(-3, 4)
    with pytest.raises(ValueError):
        sp.parse_scalar("0.5")


def test_bv_b0_loop_squares_to_empty():
    s = sp.bv_hom(0, 0)
    assert s.dim == 2
    empty = sp.bv_identity(0)
    loop = 1 - empty
    assert s.state(loop).loops
    out, k = sp.bv_compose((s, loop), (s, loop))
    assert k == sp.bv_identity(0)
    out, k = sp.bv_compose((s, empty), (s, loop))
    assert k == loop


def test_bv_b1_arc_is_identity():
    s = sp.bv_hom(1, 1)
    assert s.dim == 2
    arc = sp.bv_identity(1)
    assert not s.state(arc).loops
    for i in range(2):
        assert sp.bv_compose((s, arc), (s, i))[1] == i
        assert sp.bv_compose((s, i), (s, arc))[1] == i


def test_bv_mixed_is_zero():
    assert sp.bv_hom(0, 1).dim == 0
    assert sp.bv_hom(1, 0).dim == 0
    with pytest.raises(sp.SpaceMismatch):
        sp.bv_compose((sp.bv_hom(0, 0), 0), (sp.bv_hom(1, 1), 0))


def test_boundary_arc_iso_bijective_on_corpus():
    for name, d in corpus.named_corpus().items():
        s0 = sp.space(d, {c: 0 for c in d.externals})
        for labels in sm.labelings(d):
            f = sp.boundary_arc_iso(s0, labels)
            assert f.is_permutation(), name


def test_boundary_arc_iso_rejects_inadmissible():
    s0 = sp.space(sm.cylinder(), {"t": 0, "u": 0})
    with pytest.raises(ValueError):
        sp.boundary_arc_iso(s0, {"t": 1, "u": 0})


def two_cylinders():
    return sm.WiringDiagram.build(
        [sm.Circle("t", "in", 0), sm.Circle("m", "internal"), sm.Circle("u", "out", 0)],
        [sm.Piece("A", "cylinder", ("t", "m")), sm.Piece("B", "cylinder", ("m", "u"))],
    )


@pytest.mark.parametrize("build,labels,expected", [
    (two_cylinders, {"t": 0, "u": 0}, 2),
    (sm.tube, {"t": 0, "u": 0}, 8),
    (sm.torus, {}, 4),
    (sm.tube, {"t": 1, "u": 0}, 0),
])
def test_profunctor_compose_examples(build, labels, expected):
    d = build()
    comp = sp.profunctor_compose(d, labels)
    assert comp.quotient.dim == expected == sp.space(d, labels).dim
    assert sp.gluing_iso(comp).is_permutation()


def test_gluing_on_random_composites():
    for d in corpus.random_composites(12, seed=7):
        for labels in sm.labelings(d, admissible_only=False):
            comp = sp.profunctor_compose(d, labels)
            target = sp.space(d, labels)
            assert comp.quotient.dim == target.dim
            assert sp.gluing_iso(comp, target).is_permutation()


def test_state_round_trip():
    s = sp.space(sm.surface(1, 2), {"h0": 1, "y1": 1})
    for i in range(s.dim):
        assert s.locate(s.state(i)) == i
        # adding a loop on both sides of a relation gives the same class
        st = s.state(i).add_loops(["h0", "l1", "r1"])
        assert s.locate(st) == i
