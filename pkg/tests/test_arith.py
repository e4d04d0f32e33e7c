import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zx3.arith import (
    ALL_PHASES,
    M_SET,
    N_SET,
    P_SET,
    Q_SET,
    Eisenstein,
    ExactMatrix,
    PhaseClass,
    PhasePair,
    Verdict,
    eis_mul,
    mat_equal_up_to_scalar,
    omega_power,
    phase_add,
    phase_class,
)

from oracles import W, to_complex

phases = st.sampled_from(ALL_PHASES)
ints = st.integers(-50, 50)
eis = st.builds(Eisenstein, ints, ints)
nonzero_eis = eis.filter(bool)


def mat3(draw_ints):
    return st.lists(st.tuples(draw_ints, draw_ints), min_size=9, max_size=9).map(
        lambda es: ExactMatrix.from_entries(3, 3, [Eisenstein(u, v) for u, v in es])
    )


matrices = mat3(st.integers(-4, 4))


class TestPhasePair:
    @pytest.mark.parametrize(
        "p, q, want",
        [((1, 2), (2, 2), (0, 1)), ((0, 0), (2, 1), (2, 1)), ((2, 1), (1, 2), (0, 0))],
    )
    def test_add_examples(self, p, q, want):
        assert phase_add(PhasePair(*p), PhasePair(*q)) == PhasePair(*want)

    def test_group_axioms_exhaustive(self):
        zero = PhasePair()
        for p, q in itertools.product(ALL_PHASES, repeat=2):
            assert p + q == q + p
            assert p + zero == p
            assert p + (-p) == zero
            assert (p - q) + q == p
        for p, q, r in itertools.product(ALL_PHASES, repeat=3):
            assert (p + q) + r == p + (q + r)

    @pytest.mark.parametrize("bad", [(3, 0), (0, -1), (5, 5)])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            PhasePair(*bad)

    def test_of_reduces(self):
        assert PhasePair.of(4, -1) == PhasePair(1, 2)

    def test_scale(self):
        assert PhasePair(1, 2).scale(2) == PhasePair(2, 1)


class TestPhaseClass:
    # set listings: P={11,22}, N={10,01,20,02}, M={00,21,12}
    @pytest.mark.parametrize(
        "p, want", [((1, 1), PhaseClass.P), ((0, 2), PhaseClass.N), ((0, 0), PhaseClass.M)]
    )
    def test_examples(self, p, want):
        assert phase_class(PhasePair(*p)) is want

    def test_listings(self):
        assert set(P_SET) == {PhasePair(1, 1), PhasePair(2, 2)}
        assert set(N_SET) == {PhasePair(1, 0), PhasePair(0, 1), PhasePair(2, 0), PhasePair(0, 2)}
        assert set(M_SET) == {PhasePair(0, 0), PhasePair(2, 1), PhasePair(1, 2)}
        assert set(Q_SET) == set(P_SET) | set(N_SET)

    def test_partition(self):
        counts = {c: sum(phase_class(p) is c for p in ALL_PHASES) for c in PhaseClass}
        assert counts == {PhaseClass.P: 2, PhaseClass.N: 4, PhaseClass.M: 3}
        for p in ALL_PHASES:
            assert (p in P_SET) + (p in N_SET) + (p in M_SET) == 1
            assert p.klass is phase_class(p)

    def test_m_is_subgroup(self):
        for p, q in itertools.product(M_SET, repeat=2):
            assert p + q in M_SET
            assert -p in M_SET


class TestEisenstein:
    def test_examples(self):
        one_w = Eisenstein(1, 1)
        assert eis_mul(one_w, one_w) == Eisenstein(0, 1)
        w = Eisenstein(0, 1)
        assert w * w * w == Eisenstein(1)
        s = Eisenstein(1) + w + w * w
        assert s == Eisenstein(0, 0)

    @given(eis)
    def test_annihilated_by_cyclotomic_sum(self, x):
        assert (Eisenstein(1) + omega_power(1) + omega_power(2)) * x == Eisenstein()

    @given(eis, eis, eis)
    def test_ring_axioms(self, x, y, z):
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert (x * y).conj() == x.conj() * y.conj()
        assert x - x == Eisenstein()

    @given(eis, eis)
    def test_matches_complex(self, x, y):
        assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-6 * (1 + abs(x.to_complex() * y.to_complex()))

    @given(eis)
    def test_norm_multiplicative_and_conj(self, x):
        assert (x * x.conj()) == Eisenstein(x.norm())
        assert x.conj().conj() == x

    @given(eis)
    def test_text_round_trip(self, x):
        assert Eisenstein.parse(str(x)) == x

    def test_omega_power(self):
        for k in range(-6, 6):
            assert abs(omega_power(k).to_complex() - W ** k) < 1e-12

    def test_no_wraparound(self):
        big = Eisenstein(2 ** 62, 2 ** 61)
        u, v = 2 ** 62, 2 ** 61
        u2, v2 = u * u - v * v, 2 * u * v - v * v
        assert big * big == Eisenstein(u2, v2)


class TestExactMatrix:
    @given(matrices, matrices, matrices)
    def test_matmul_associative(self, a, b, c):
        assert (a @ b) @ c == a @ (b @ c)

    @given(matrices, matrices)
    def test_matmul_matches_complex(self, a, b):
        assert np.allclose(to_complex(a @ b), to_complex(a) @ to_complex(b))

    @given(matrices, matrices)
    def test_kron_and_dagger(self, a, b):
        assert np.allclose(to_complex(a.kron(b)), np.kron(to_complex(a), to_complex(b)))
        assert np.allclose(to_complex(a.dagger()), to_complex(a).conj().T)
        assert (a @ b).dagger() == b.dagger() @ a.dagger()

    def test_no_overflow_in_products(self):
        m = ExactMatrix.from_rows([[Eisenstein(2 ** 40, 1), 0], [0, 1]])
        p = m @ m @ m @ m
        assert p[0, 0] == Eisenstein(2 ** 40, 1) * Eisenstein(2 ** 40, 1) * Eisenstein(2 ** 40, 1) * Eisenstein(2 ** 40, 1)

    def test_json_round_trip(self):
        m = ExactMatrix.from_rows([[1, Eisenstein(0, 1)], [Eisenstein(-2, 3), 0]])
        assert ExactMatrix.from_json(m.to_json()) == m

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ExactMatrix.identity(3) @ ExactMatrix.identity(2)


class TestUpToScalar:
    def test_examples(self):
        i3 = ExactMatrix.identity(3)
        w = omega_power(1)
        assert mat_equal_up_to_scalar(i3, i3.scale(w)) is Verdict.EQUAL_UP_TO_SCALAR
        a = ExactMatrix.diag([1, 1, w])
        b = ExactMatrix.diag([1, 1, omega_power(2)])
        assert mat_equal_up_to_scalar(a, b) is Verdict.UNEQUAL
        z = ExactMatrix.zeros(3, 3)
        assert mat_equal_up_to_scalar(z, z) is Verdict.BOTH_ZERO

    def test_incomparable_and_one_zero(self):
        assert mat_equal_up_to_scalar(ExactMatrix.identity(3), ExactMatrix.identity(9)) is Verdict.INCOMPARABLE
        assert mat_equal_up_to_scalar(ExactMatrix.identity(3), ExactMatrix.zeros(3, 3)) is Verdict.UNEQUAL

    @given(matrices.filter(lambda m: not m.is_zero()), nonzero_eis, nonzero_eis)
    def test_scalar_invariance(self, a, s, t):
        assert mat_equal_up_to_scalar(a.scale(s), a.scale(t)) is Verdict.EQUAL_UP_TO_SCALAR

    @given(matrices.filter(lambda m: not m.is_zero()), matrices.filter(lambda m: not m.is_zero()), nonzero_eis)
    def test_symmetric_and_scale_stable(self, a, b, s):
        v = mat_equal_up_to_scalar(a, b)
        assert mat_equal_up_to_scalar(b, a) is v
        assert mat_equal_up_to_scalar(a.scale(s), b) is v

    @given(matrices.filter(lambda m: not m.is_zero()), nonzero_eis, nonzero_eis)
    def test_transitive(self, a, s, t):
        b, c = a.scale(s), a.scale(s).scale(t)
        assert mat_equal_up_to_scalar(a, b) is Verdict.EQUAL_UP_TO_SCALAR
        assert mat_equal_up_to_scalar(b, c) is Verdict.EQUAL_UP_TO_SCALAR
        assert mat_equal_up_to_scalar(a, c) is Verdict.EQUAL_UP_TO_SCALAR

    @given(matrices, matrices)
    def test_agrees_with_float_rank_test(self, a, b):
        from oracles import proportional

        want = {"equal": Verdict.EQUAL_UP_TO_SCALAR, "unequal": Verdict.UNEQUAL, "both_zero": Verdict.BOTH_ZERO}
        assert mat_equal_up_to_scalar(a, b) is want[proportional(to_complex(a), to_complex(b))]
