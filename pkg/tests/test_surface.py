import pytest

from toricnet import surface as sm
from toricnet.surface import Circle, Piece, WiringDiagram


def test_sphere_valid_closed_genus_zero():
    d = sm.sphere()
    assert sm.validate(d) == []
    assert d.euler() == 2
    assert d.genus_table() == [(0, 0)]


def test_unwired_leg_reported():
    d = WiringDiagram.build(
        [Circle("b", "in", 0), Circle("l", "out", 0), Circle("r", "internal")],
        [Piece("P", "pants", ("b", "l", "r"))],
    )
    problems = sm.validate(d)
    assert any("port" in p and "r" in p for p in problems)


def test_torus_chain_euler_and_genus():
    d = sm.torus()
    assert sm.validate(d) == []
    assert d.euler() == 0
    assert d.genus_table() == [(1, 0)]


def test_homology_dimensions():
    m = sm.homology_model(sm.sphere())
    assert (m.loop_dim, m.cycle_dim) == (0, 0)
    m = sm.homology_model(sm.torus())
    assert (m.loop_dim, m.cycle_dim) == (1, 1)
    assert len(sm.class_enumerate(m, {})) == 4
    m = sm.homology_model(sm.tube())
    assert (m.loop_dim, m.cycle_dim) == (2, 1)
    assert len(sm.class_enumerate(m, {"t": 0, "u": 0})) == 8


@pytest.mark.parametrize("g", range(4))
@pytest.mark.parametrize("n", range(5))
def test_homology_dimension_matches_euler(g, n):
    m = sm.homology_model(sm.surface(g, n))
    assert m.dim == m.expected_dim() == 2 * g + max(n - 1, 0)


def test_pants_routing_pairs_the_legs():
    d = sm.pants()
    r = sm.base_routing(d, {"b": 0, "l": 1, "r": 1})
    assert r is not None
    cross = dict(zip(d.order, r.crossing))
    assert cross == {"b": 0, "l": 1, "r": 1}
    assert r.arcs == {"P": (1, 2)}


def test_routing_infeasible_on_odd_component():
    assert sm.base_routing(sm.cylinder(), {"t": 0, "u": 1}) is None
    assert sm.base_routing(sm.pants(), {"b": 1, "l": 0, "r": 0}) is None


def test_routing_agrees_across_internal_circles():
    d = sm.surface(2, 3)
    m = sm.homology_model(d)
    for labels in sm.labelings(d):
        r = m.routing(labels)
        for c in d.externals:
            assert r.crossing[d.position[c]] == labels[c]
        # every piece sees an even number of crossing ports
        for p in d.pieces.values():
            assert sum(r.crossing[d.position[c]] for c in p.ports) % 2 == 0


def test_crossing_parity_on_torus_cycle():
    d = sm.torus()
    m = sm.homology_model(d)
    classes = sm.class_enumerate(m, {})
    with_cycle = [x for x in classes if x.cycle_part == (1,)]
    assert with_cycle
    for x in with_cycle:
        assert sm.crossing_parity(m, x, "l1") == 1
        assert sm.crossing_parity(m, x, "r1") == 1
        assert sm.crossing_parity(m, x, "h0") == 0


def test_class_enumerate_examples():
    d = sm.pants()
    m = sm.homology_model(d)
    for labels in sm.labelings(d):
        assert len(sm.class_enumerate(m, labels)) == 4
    assert sm.class_enumerate(sm.homology_model(sm.cylinder()), {"t": 0, "u": 1}) == []
    for g in range(4):
        m = sm.homology_model(sm.surface(g, 0))
        classes = sm.class_enumerate(m, {})
        assert len(classes) == 4 ** g
        assert len({x.key for x in classes}) == len(classes)


def test_class_enumerate_deterministic_and_canonical():
    d = sm.surface(1, 3)
    m = sm.homology_model(d)
    labels = {"h0": 1, "y1": 0, "y2": 1}
    a = sm.class_enumerate(m, labels)
    b = sm.class_enumerate(sm.homology_model(d), labels)
    assert a == b
    for x in a:
        assert tuple(int(v) for v in m.loops.canonical(x.loop_part)) == x.loop_part


def test_parse_and_format_round_trip():
    text = sm.format_diagram(sm.tube(), {"t": 1, "u": 1})
    d, labels = sm.parse_diagram(text)
    assert labels == {"t": 1, "u": 1}
    assert sm.format_diagram(d, labels) == text
    assert sm.find_isomorphism(d, sm.tube()) is not None


def test_parse_errors_carry_position():
    with pytest.raises(sm.DiagramParseError) as exc:
        sm.parse_diagram("circle a in 0\nblob x\n")
    assert (exc.value.line, exc.value.column) == (2, 1)
    with pytest.raises(sm.DiagramParseError) as exc:
        sm.parse_diagram("circle a internal B1\n")
    assert exc.value.line == 1
    with pytest.raises(sm.DiagramParseError) as exc:
        sm.parse_diagram("circle b in 0\n  pants P belt=b feet=l,r\n")
    assert exc.value.line == 2 and exc.value.column > 3


def test_self_glued_cylinder_is_a_torus():
    d = WiringDiagram.build([Circle("c", "internal")], [Piece("C", "cylinder", ("c", "c"))])
    assert sm.validate(d) == []
    m = sm.homology_model(d)
    assert m.dim == 2 == m.expected_dim()


def test_find_isomorphism_respects_ports():
    a = sm.theta_genus2()
    assert sm.find_isomorphism(a, a) is not None
    assert sm.find_isomorphism(sm.torus(), sm.sphere()) is None
