import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings

from zx3.arith import PhasePair
from zx3.diagram import (
    Diagram,
    DiagramBuilder,
    DiagramError,
    Kind,
    Node,
    adjoint,
    bend,
    compose,
    empty,
    from_json,
    h_box,
    hdag_box,
    identity,
    load,
    parse,
    serialize,
    swap,
    tensor,
    to_json,
    unbend,
    validate,
    wire,
    x_spider,
    z_spider,
)

from oracles import dense, proportional
from strategies import circuits, gates


def same(a, b):
    return proportional(dense(a), dense(b)) in ("equal", "both_zero")


def iso(a, b):
    """Brute-force isomorphism with boundaries matched by position."""
    if a.arity != b.arity or len(a.nodes) != len(b.nodes):
        return False
    fixed = dict(zip(a.inputs + a.outputs, b.inputs + b.outputs))
    rest_a = [n for n in a.nodes if n not in fixed]
    rest_b = [n for n in b.nodes if n not in fixed.values()]
    for perm in itertools.permutations(rest_b):
        m = {**fixed, **dict(zip(rest_a, perm))}
        if all(a.nodes[k] == b.nodes[v] for k, v in m.items()) and sorted(
            (m[x], m[y]) for x, y in a.edges
        ) == sorted(b.edges):
            return True
    return False


class TestValidate:
    def test_wire_ok(self):
        assert validate(wire()) == []

    def test_h_arity(self):
        d = Diagram({0: Node(Kind.B), 1: Node(Kind.H), 2: Node(Kind.B), 3: Node(Kind.B)}, ((0, 1), (1, 2), (1, 3)), (0,), (2, 3))
        assert any("H arity" in e for e in validate(d))

    def test_boundary_in_both_lists(self):
        d = Diagram({0: Node(Kind.B), 1: Node(Kind.Z)}, ((0, 1),), (0,), (0,))
        assert any("both input and output" in e for e in validate(d))

    def test_unknown_node_and_bad_boundary(self):
        d = Diagram({0: Node(Kind.B), 1: Node(Kind.Z)}, ((0, 7),), (1,), ())
        errs = validate(d)
        assert any("unknown node 7" in e for e in errs)
        assert any("not a boundary" in e for e in errs)

    def test_orientation(self):
        d = Diagram({0: Node(Kind.B), 1: Node(Kind.Z)}, ((1, 0),), (0,), ())
        assert any("must be the edge source" in e for e in validate(d))

    def test_builder_raises(self):
        b = DiagramBuilder()
        b.chain(b.input(), b.h(), b.output())
        b.edge(1, b.z())
        with pytest.raises(DiagramError):
            b.build()

    def test_phase_on_h_rejected(self):
        with pytest.raises(ValueError):
            Node(Kind.H, PhasePair(1, 1))


class TestCombinators:
    def test_compose_wires(self):
        assert compose(wire(), wire()) == wire()

    def test_compose_phase_gates(self):
        g = z_spider(1, 1, PhasePair(0, 1))
        m = dense(compose(g, g))
        w = np.exp(2j * np.pi / 3)
        assert np.allclose(m, np.diag([1, 1, w ** 2]))

    def test_compose_h_hdag(self):
        m = dense(compose(h_box(), hdag_box()))
        assert np.allclose(m, 3 * np.eye(3))

    def test_compose_arity_mismatch(self):
        with pytest.raises(DiagramError):
            compose(identity(2), wire())

    def test_tensor_unit(self):
        d = z_spider(1, 2, PhasePair(1, 2))
        assert tensor(empty(), d) == d
        assert tensor(d, empty()) == d

    def test_tensor_wires(self):
        assert iso(tensor(wire(), wire()), identity(2))

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=2, max_gates=4), circuits(max_wires=2, max_gates=4))
    def test_tensor_is_kron(self, d1, d2):
        assert np.allclose(dense(tensor(d1, d2)), np.kron(dense(d1), dense(d2)))
        t = tensor(d1, d2)
        assert t.arity == (d1.arity[0] + d2.arity[0], d1.arity[1] + d2.arity[1])

    @settings(max_examples=30, deadline=None)
    @given(gates(1, 4), gates(1, 4))
    def test_compose_is_matmul(self, d1, d2):
        assert np.allclose(dense(compose(d1, d2)), dense(d2) @ dense(d1))

    @settings(max_examples=20, deadline=None)
    @given(gates(1, 3), gates(1, 3), gates(1, 3), gates(1, 3))
    def test_interchange_law(self, d1, d2, d3, d4):
        lhs = compose(tensor(d1, d2), tensor(d3, d4))
        rhs = tensor(compose(d1, d3), compose(d2, d4))
        assert same(lhs, rhs)

    def test_adjoint_examples(self):
        assert iso(adjoint(z_spider(1, 1, PhasePair(0, 1))), z_spider(1, 1, PhasePair(0, 2)))
        assert iso(adjoint(h_box()), hdag_box())
        assert not iso(adjoint(h_box()), h_box())

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=3, max_gates=5))
    def test_adjoint_involution_and_dagger(self, d):
        assert adjoint(adjoint(d)) == d
        assert validate(adjoint(d)) == []
        assert proportional(dense(adjoint(d)), dense(d).conj().T) in ("equal", "both_zero")

    def test_bend_wire_is_cup(self):
        v = dense(bend(wire()))
        assert v.shape == (9, 1)
        assert np.allclose(v[:, 0], np.eye(3).reshape(9))

    def test_bend_h(self):
        # the state has amplitude H[o, i] at index (o, i)
        w = np.exp(2j * np.pi / 3)
        h = np.array([[1, 1, 1], [1, w, w.conjugate()], [1, w.conjugate(), w]])
        assert np.allclose(dense(bend(h_box()))[:, 0], h.reshape(9))

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=3, max_gates=5))
    def test_bend_is_choi_state(self, d):
        b = bend(d)
        assert validate(b) == []
        assert b.arity == (0, d.arity[0] + d.arity[1])
        assert np.allclose(dense(b)[:, 0], dense(d).reshape(-1))

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=3, max_gates=5))
    def test_unbend_inverts_bend(self, d):
        u = unbend(bend(d), d.arity[0])
        assert u.arity == d.arity
        assert np.allclose(dense(u), dense(d))

    def test_unbend_range(self):
        with pytest.raises(DiagramError):
            unbend(z_spider(0, 1), 2)

    def test_swap(self):
        m = dense(swap((1, 0)))
        p = np.zeros((9, 9))
        for i in range(3):
            for j in range(3):
                p[3 * j + i, 3 * i + j] = 1
        assert np.allclose(m, p)
        with pytest.raises(DiagramError):
            swap((0, 0))


class TestSerialization:
    def test_three_node_round_trip(self):
        d = compose(x_spider(1, 1, PhasePair(2, 1)), h_box())
        assert parse(serialize(d)) == d

    @settings(max_examples=50, deadline=None)
    @given(circuits(max_wires=4, max_gates=8))
    def test_round_trips(self, d):
        text = serialize(d)
        assert parse(text) == d
        assert serialize(parse(text)) == text
        assert from_json(json.dumps(to_json(d))) == d
        assert load(json.dumps(to_json(d))) == d
        assert load(text) == d

    def test_multiplicity_and_order_preserved(self):
        text = "node 0 Z 0 0\nnode 1 Z 1 2\nedge 0 1\nedge 0 1\nedge 1 1\nnode 2 B\nnode 3 B\nedge 1 3\nedge 0 2\noutputs 3 2\n"
        d = parse(text)
        assert d.edges.count((0, 1)) == 2
        assert d.outputs == (3, 2)
        assert parse(serialize(d)) == d

    def test_unknown_kind(self):
        with pytest.raises(DiagramError, match="unknown node kind"):
            parse("node 0 Q\n")

    def test_non_stabilizer_phase(self):
        with pytest.raises(DiagramError, match="stabilizer phase required") as e:
            parse("node 0 Z 0 3\n")
        assert "line 1, col 12" in str(e.value)

    def test_json_rejects_phase(self):
        obj = {"nodes": [{"id": 0, "kind": "X", "phase": [0, 7]}], "edges": [], "inputs": [], "outputs": []}
        with pytest.raises(DiagramError, match="stabilizer phase required"):
            from_json(obj)

    def test_error_positions(self):
        with pytest.raises(DiagramError, match="line 2"):
            parse("node 0 B\nedgy 0 1\n")

    def test_invalid_structure_rejected(self):
        with pytest.raises(DiagramError, match="H arity"):
            parse("node 0 H\n")

    def test_swap_sugar(self):
        text = "node 0 B\nnode 1 B\nnode 2 B\nnode 3 B\nswap 0 1 -> 3 2\ninputs 0 1\noutputs 2 3\n"
        assert np.allclose(dense(parse(text)), dense(swap((1, 0))))

    def test_serializer_is_deterministic(self):
        d = Diagram({3: Node(Kind.B), 1: Node(Kind.Z)}, ((1, 3),), (), (3,))
        assert serialize(d).splitlines()[0] == "node 1 Z 0 0"
