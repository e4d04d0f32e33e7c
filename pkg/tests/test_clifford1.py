import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zx3.arith import ALL_PHASES, M_SET, P_SET, Q_SET, PhasePair
from zx3.clifford1 import (
    CliffordNF,
    Form,
    R_set,
    canonical,
    closure_sgh,
    compose_all,
    compose_nf,
    enumerate_nf,
    identity_nf,
    in_R,
    inverse_nf,
    is_diagonal,
    is_red,
    nf_to_matrix,
    nf_to_nodes,
    r_red,
    table,
    word_matrix,
    x_nf,
    z_nf,
)
from zx3.diagram import DiagramBuilder

from oracles import H_MAT, S_GATE, W, X_GATE, Z_GATE, dense, proportional, to_complex

LETTERS = ["S", "Sdg", "H", "Hdg", "X", "Z"] + [("Zp", p) for p in ALL_PHASES] + [("Xp", p) for p in ALL_PHASES]
letters = st.sampled_from(LETTERS)
words = st.lists(letters, max_size=8)
elements = st.sampled_from(table())


def key(m: np.ndarray) -> tuple:
    """Scalar-invariant rounding key for a float matrix."""
    flat = m.reshape(-1)
    i = int(np.argmax(np.abs(flat) > 1e-9))
    f = flat / flat[i]
    return tuple(np.round(f.real, 6) + 0.0) + tuple(np.round(f.imag, 6) + 0.0)


def float_closure():
    seen = {key(np.eye(3)): np.eye(3)}
    frontier = [np.eye(3, dtype=complex)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in (S_GATE, H_MAT):
                n = g @ m
                k = key(n)
                if k not in seen:
                    seen[k] = n
                    nxt.append(n)
        frontier = nxt
    return seen


def test_group_order_216():
    elems, depth = closure_sgh()
    assert len(elems) == 216 == 3 ** 3 * (3 ** 2 - 1)
    assert depth == 12
    assert len(float_closure()) == 216


def test_normal_forms_biject_onto_closure():
    pairs = enumerate_nf()
    assert len(pairs) == 216
    fams = {f: sum(c.form is f for c, _ in pairs) for f in Form}
    assert fams == {Form.FORM5: 81, Form.FORM6: 108, Form.FORM7: 27}
    ref = float_closure()
    keys = {key(to_complex(m)) for _, m in pairs}
    assert keys == set(ref)


def test_uniqueness_exhaustive():
    ms = [to_complex(nf_to_matrix(c)) for c in table()]
    for i, j in itertools.combinations(range(len(ms)), 2):
        assert proportional(ms[i], ms[j]) == "unequal"


def test_table_layout():
    t = table()
    assert t[0] == identity_nf()
    assert [c.index for c in t] == list(range(216))


class TestNF:
    def test_parameter_classes_enforced(self):
        with pytest.raises(ValueError):
            CliffordNF(Form.FORM6, (PhasePair(), PhasePair(1, 0), PhasePair(1, 1)))
        with pytest.raises(ValueError):
            CliffordNF(Form.FORM7, (PhasePair(), PhasePair(1, 1)))
        with pytest.raises(ValueError):
            CliffordNF(Form.FORM6, (PhasePair(), PhasePair(1, 1), PhasePair(2, 1)))
        assert set(Q_SET) == set(ALL_PHASES) - set(M_SET)

    @pytest.mark.parametrize("c", table()[::7], ids=str)
    def test_text_round_trip(self, c):
        assert CliffordNF.parse(str(c)) == c

    def test_identity_matrix(self):
        assert proportional(to_complex(nf_to_matrix(identity_nf())), np.eye(3)) == "equal"

    def test_s_and_h(self):
        s = canonical(["S"])
        assert s == z_nf(PhasePair(0, 1))
        assert proportional(to_complex(nf_to_matrix(s)), np.diag([1, 1, W])) == "equal"
        h = canonical(["H"])
        assert proportional(to_complex(nf_to_matrix(h)), H_MAT) == "equal"

    @pytest.mark.parametrize("c", table(), ids=str)
    def test_nodes_render_matrix(self, c):
        b = DiagramBuilder()
        prev = b.input()
        for node in nf_to_nodes(c):
            nid = b.add(node.kind, node.phase)
            b.edge(prev, nid)
            prev = nid
        b.edge(prev, b.output())
        assert proportional(dense(b.build()), to_complex(nf_to_matrix(c))) == "equal"

    def test_families_shapes(self):
        z, x = PhasePair(1, 0), PhasePair(2, 2)
        ref = np.diag([1, W, 1]) @ to_complex(nf_to_matrix(x_nf(x)))
        assert proportional(to_complex(nf_to_matrix(CliffordNF(Form.FORM5, (z, x)))), ref) == "equal"
        for p in P_SET:
            assert CliffordNF(Form.FORM6, (PhasePair(), p, PhasePair(1, 0))) in table()


class TestCanonical:
    def test_sss_is_identity(self):
        assert canonical(["S", "S", "S"]) == identity_nf()

    def test_h4_is_identity(self):
        assert canonical(["H"] * 4) == identity_nf()

    def test_h2_is_negation(self):
        neg = np.zeros((3, 3))
        for j in range(3):
            neg[(-j) % 3, j] = 1
        assert proportional(to_complex(nf_to_matrix(canonical(["H", "H"]))), neg) == "equal"

    def test_pauli_letters(self):
        assert proportional(to_complex(word_matrix(["X"])), X_GATE) == "equal"
        assert proportional(to_complex(word_matrix(["Z"])), Z_GATE) == "equal"

    def test_word_order_is_time_order(self):
        m = to_complex(word_matrix(["S", "H"]))
        assert proportional(m, H_MAT @ S_GATE) == "equal"

    @settings(max_examples=60, deadline=None)
    @given(words, st.integers(0, 8), st.sampled_from([["S"] * 3, ["H"] * 4]))
    def test_insert_identity_words(self, w, pos, ident):
        pos = min(pos, len(w))
        assert canonical(w[:pos] + ident + w[pos:]) == canonical(w)

    @settings(max_examples=60, deadline=None)
    @given(words)
    def test_matches_float_word(self, w):
        m = np.eye(3, dtype=complex)
        for letter in w:
            m = to_complex(word_matrix([letter])) @ m
        assert proportional(to_complex(nf_to_matrix(canonical(w))), m) == "equal"

    def test_rejects_non_clifford(self):
        from zx3.arith import ExactMatrix

        with pytest.raises(ValueError):
            canonical(ExactMatrix.diag([1, 1, 2]))


class TestGroupLaws:
    def test_inverses_exhaustive(self):
        for c in table():
            assert compose_nf(c, inverse_nf(c)) == identity_nf()
            assert compose_nf(inverse_nf(c), c) == identity_nf()

    def test_identity_unit(self):
        for c in table():
            assert compose_nf(identity_nf(), c) == c == compose_nf(c, identity_nf())

    def test_associativity_sampled(self):
        rng = random.Random(7)
        t = table()
        for _ in range(10_000):
            a, b, c = rng.choice(t), rng.choice(t), rng.choice(t)
            assert compose_nf(compose_nf(a, b), c) == compose_nf(a, compose_nf(b, c))

    def test_s_squared(self):
        s = canonical(["S"])
        m = to_complex(nf_to_matrix(compose_nf(s, s)))
        assert proportional(m, np.diag([1, 1, W ** 2])) == "equal"

    @settings(max_examples=100, deadline=None)
    @given(elements, elements)
    def test_product_matches_matrices(self, a, b):
        lhs = to_complex(nf_to_matrix(compose_nf(a, b)))
        assert proportional(lhs, to_complex(nf_to_matrix(a)) @ to_complex(nf_to_matrix(b))) == "equal"

    @given(st.lists(elements, max_size=5))
    def test_compose_all(self, cs):
        out = identity_nf()
        for c in cs:
            out = compose_nf(out, c)
        assert compose_all(cs) == out


class TestR:
    def test_size_and_distinct(self):
        r = R_set()
        assert len(r) == 12 == len(set(r))
        assert all(c in table() for c in r)
        ms = [to_complex(nf_to_matrix(c)) for c in r]
        for a, b in itertools.combinations(ms, 2):
            assert proportional(a, b) == "unequal"

    def test_membership_examples(self):
        assert in_R(identity_nf())
        assert all(in_R(z_nf(p)) for p in ALL_PHASES)
        assert not in_R(canonical(["H"]))

    def test_red_elements(self):
        reds = r_red()
        assert [str(c) for c in reds] == ["FORM6[00,11,11]", "FORM6[21,11,20]", "FORM6[12,11,02]"]
        for c in reds:
            img = to_complex(nf_to_matrix(c)) @ np.ones(3)
            assert np.count_nonzero(np.abs(img) > 1e-9) == 1
            assert is_red(c)

    def test_red_count(self):
        assert sum(is_red(c) for c in table()) == 54

    def test_diagonal(self):
        diag = [c for c in table() if is_diagonal(c)]
        assert diag == [z_nf(p) for p in ALL_PHASES]
        for c in diag:
            m = to_complex(nf_to_matrix(c))
            assert np.allclose(m, np.diag(np.diag(m)))
