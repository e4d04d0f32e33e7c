import cmath
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zx3.arith import ALL_PHASES, Eisenstein, ExactMatrix, PhasePair, Verdict, mat_equal_up_to_scalar, omega_power
from zx3.diagram import (
    Diagram,
    DiagramBuilder,
    Kind,
    Node,
    adjoint,
    compose,
    h_box,
    hdag_box,
    tensor,
    wire,
    x_spider,
    z_spider,
)
from zx3.semantics import SizeCapError, generator_matrix, interpret, semantically_equal, size_cap, state_vector

from oracles import W, dense, proportional, to_complex
from strategies import circuits, gates


def e(angle_units: int) -> complex:
    """e^{i*alpha} for alpha = angle_units * 2pi/3."""
    return cmath.exp(2j * cmath.pi * angle_units / 3)


def shuffled(d: Diagram, seed: int) -> Diagram:
    ids = list(d.nodes)
    new = ids[:]
    random.Random(seed).shuffle(new)
    m = dict(zip(ids, new))
    return Diagram(
        {m[k]: v for k, v in d.nodes.items()},
        tuple((m[a], m[b]) for a, b in d.edges),
        tuple(m[i] for i in d.inputs),
        tuple(m[o] for o in d.outputs),
    )


class TestGenerators:
    @pytest.mark.parametrize("p", ALL_PHASES, ids=str)
    def test_green_phase_gate(self, p):
        # diag(1, e^{ia}, e^{ib})
        m = to_complex(generator_matrix(Node(Kind.Z, p), 1, 1))
        assert np.allclose(m, np.diag([1, e(p.a), e(p.b)]))

    def test_hadamard(self):
        wb = W.conjugate()
        want = np.array([[1, 1, 1], [1, W, wb], [1, wb, W]])
        assert np.allclose(to_complex(generator_matrix(Node(Kind.H), 1, 1)), want)
        assert np.allclose(to_complex(generator_matrix(Node(Kind.HDAG), 1, 1)), want.conj().T)

    @pytest.mark.parametrize("p", ALL_PHASES, ids=str)
    def test_red_phase_gate_closed_form(self, p):
        a, b = e(p.a), e(p.b)
        wb = W.conjugate()
        d0 = 1 + a + b
        d1 = 1 + wb * a + W * b
        d2 = 1 + W * a + wb * b
        want = np.array([[d0, d1, d2], [d2, d0, d1], [d1, d2, d0]])
        assert np.allclose(to_complex(generator_matrix(Node(Kind.X, p), 1, 1)), want)

    def test_red_21_is_shift(self):
        m = generator_matrix(Node(Kind.X, PhasePair(2, 1)), 1, 1)
        shift = ExactMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).scale(3)
        assert m == shift

    def test_green_state_is_all_ones(self):
        assert generator_matrix(Node(Kind.Z), 0, 1) == ExactMatrix.from_rows([[1], [1], [1]])

    @pytest.mark.parametrize("n_in, n_out", [(0, 0), (0, 2), (2, 1), (1, 3), (2, 2)])
    @pytest.mark.parametrize("kind", [Kind.Z, Kind.X])
    def test_spiders_match_ket_bra_sums(self, kind, n_in, n_out):
        p = PhasePair(1, 2)
        assert np.allclose(to_complex(generator_matrix(Node(kind, p), n_in, n_out)), dense(_spider(kind, n_in, n_out, p)))

    def test_h_needs_two_legs(self):
        with pytest.raises(ValueError):
            generator_matrix(Node(Kind.H), 1, 2)


def _spider(kind, n_in, n_out, p):
    return z_spider(n_in, n_out, p) if kind is Kind.Z else x_spider(n_in, n_out, p)


class TestInterpret:
    def test_wire(self):
        assert interpret(wire()) == ExactMatrix.identity(3)

    def test_h_edge_state(self):
        b = DiagramBuilder()
        u, v = b.z(), b.z()
        b.chain(u, b.h(), v)
        b.edge(u, b.output())
        b.edge(v, b.output())
        vec = to_complex(state_vector(b.build()))[:, 0]
        assert np.allclose(vec, [W ** (j * k) for j in range(3) for k in range(3)])

    def test_orthogonal_red_states(self):
        d = compose(x_spider(0, 1, PhasePair(2, 1)), x_spider(1, 0))
        assert interpret(d) == ExactMatrix.zeros(1, 1)

    def test_self_loop_and_parallel_edges(self):
        b = DiagramBuilder()
        s, t = b.z(PhasePair(1, 0)), b.x(PhasePair(0, 2))
        b.edge(s, s)
        b.edge(s, t)
        b.edge(s, t)
        b.edge(t, t)
        b.edge(b.input(), s)
        b.edge(t, b.output())
        d = b.build()
        assert np.allclose(to_complex(interpret(d)), dense(d))

    @settings(max_examples=60, deadline=None)
    @given(circuits(max_wires=3, max_gates=7))
    def test_matches_einsum_oracle_exactly(self, d):
        assert np.allclose(to_complex(interpret(d)), dense(d))

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=3, max_gates=7), st.integers(0, 1000))
    def test_schedule_independent(self, d, seed):
        assert interpret(shuffled(d, seed)) == interpret(d)

    @settings(max_examples=30, deadline=None)
    @given(gates(2, 4), gates(2, 4))
    def test_functorial(self, d1, d2):
        if d1.arity == d2.arity:
            assert interpret(compose(d1, d2)) == interpret(d2) @ interpret(d1)
        assert interpret(tensor(d1, d2)) == interpret(d1).kron(interpret(d2))

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_wires=3, max_gates=5))
    def test_adjoint_is_dagger(self, d):
        got = interpret(adjoint(d))
        assert mat_equal_up_to_scalar(got, interpret(d).dagger()) in (Verdict.EQUAL_UP_TO_SCALAR, Verdict.BOTH_ZERO)

    @pytest.mark.parametrize("n_in, n_out", [(n, m) for n in range(4) for m in range(4) if n + m <= 3])
    @pytest.mark.parametrize("p", ALL_PHASES, ids=str)
    def test_colour_change(self, p, n_in, n_out):
        # green conjugated by H on every leg is red of the same phase
        g = z_spider(n_in, n_out, p)
        pre = _layer(hdag_box, n_in) if n_in else None
        post = _layer(h_box, n_out) if n_out else None
        d = compose(pre, g) if n_in else g
        d = compose(d, post) if n_out else d
        assert semantically_equal(d, x_spider(n_in, n_out, p)) in (Verdict.EQUAL_UP_TO_SCALAR, Verdict.BOTH_ZERO)

    def test_size_cap(self, monkeypatch):
        d = z_spider(0, 6)
        with pytest.raises(SizeCapError):
            interpret(d, cap=5)
        monkeypatch.setenv("ZX3_SIZE_CAP", "4")
        assert size_cap() == 4
        with pytest.raises(SizeCapError):
            interpret(d)
        monkeypatch.setenv("ZX3_SIZE_CAP", "x")
        with pytest.raises(SizeCapError):
            size_cap()

    def test_large_entries_stay_exact(self):
        # a chain of many red 1->1 spiders has entries 3**k; exact at every size
        d = wire()
        for _ in range(45):
            d = compose(d, x_spider(1, 1))
        m = interpret(d)
        assert m[0, 0] == Eisenstein(3 ** 45)
        assert m[1, 0] == Eisenstein()

    def test_state_vector_rejects_maps(self):
        with pytest.raises(ValueError):
            state_vector(wire())


def _layer(box, n):
    d = box()
    for _ in range(n - 1):
        d = tensor(d, box())
    return d


class TestSemanticallyEqual:
    def test_h_fourth_power(self):
        h4 = compose(compose(h_box(), h_box()), compose(h_box(), h_box()))
        assert semantically_equal(h4, wire()) is Verdict.EQUAL_UP_TO_SCALAR

    def test_phase_gates_differ(self):
        s = z_spider(1, 1, PhasePair(0, 1))
        sd = z_spider(1, 1, PhasePair(0, 2))
        assert semantically_equal(s, sd) is Verdict.UNEQUAL

    def test_nonzero_scalar_factor(self):
        d = compose(h_box(), x_spider(1, 1, PhasePair(1, 0)))
        loop = z_spider(0, 0)
        assert semantically_equal(d, tensor(d, loop)) is Verdict.EQUAL_UP_TO_SCALAR

    def test_arity_mismatch(self):
        assert semantically_equal(wire(), z_spider(0, 1)) is Verdict.INCOMPARABLE

    @settings(max_examples=40, deadline=None)
    @given(gates(2, 5), gates(2, 5))
    def test_agrees_with_oracle(self, d1, d2):
        want = {"equal": Verdict.EQUAL_UP_TO_SCALAR, "unequal": Verdict.UNEQUAL, "both_zero": Verdict.BOTH_ZERO, "incomparable": Verdict.INCOMPARABLE}
        got = semantically_equal(d1, d2)
        assert got is want[proportional(dense(d1), dense(d2))]

    def test_scalar_phase_ring(self):
        # every w power is reachable as a scalar ratio
        for k in range(3):
            a = z_spider(1, 1, PhasePair(k, k))
            assert semantically_equal(a, a) is Verdict.EQUAL_UP_TO_SCALAR
            assert omega_power(k) * omega_power(-k) == Eisenstein(1)
