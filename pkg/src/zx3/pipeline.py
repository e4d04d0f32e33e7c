"""Normalisation, the equality decision, and random diagram generation."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from .arith import ALL_PHASES, M_SET, PhasePair, Verdict, mat_equal_up_to_scalar
from .clifford1 import table
from .diagram import (
    Diagram,
    DiagramBuilder,
    DiagramError,
    bend,
    compose,
    identity,
    tensor,
    validate,
)
from .gslc import (
    GslcDiagram,
    RGslc,
    WGraph,
    apply_move,
    equal_rgslc,
    gslc_to_diagram,
    simplify_pair,
    to_rgslc,
)
from .semantics import interpret
from .tableau import ZERO, diagram_to_tableau, extract_gslc, tableau_state

__all__ = [
    "NormalForm",
    "EqVerdict",
    "CheckFailure",
    "normalize",
    "decide_equal",
    "random_stabilizer_diagram",
    "random_gslc",
    "engineered_rule_pair",
    "engineered_move_pair",
]


class CheckFailure(AssertionError):
    """A pipeline stage disagreed with the matrix oracle."""


@dataclass(frozen=True)
class NormalForm:
    """``Zero``, a ``State`` (k == 0) or a ``Map`` stored via its bent state."""

    k: int
    l: int
    rgslc: RGslc | None

    @property
    def is_zero(self) -> bool:
        return self.rgslc is None

    @property
    def kind(self) -> str:
        if self.rgslc is None:
            return "Zero"
        return "State" if self.k == 0 else "Map"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "inputs": self.k, "outputs": self.l}
        if self.rgslc is not None:
            out["rgslc"] = self.rgslc.to_json()
        return out


class EqVerdict(enum.Enum):
    EQUAL = "Equal"
    UNEQUAL = "Unequal"
    ZERO_EQUIV = "Zero==Zero"

    @property
    def equal(self) -> bool:
        return self is not EqVerdict.UNEQUAL


def _agree(a, b, what: str) -> None:
    v = mat_equal_up_to_scalar(a, b)
    if v not in (Verdict.EQUAL_UP_TO_SCALAR, Verdict.BOTH_ZERO):
        raise CheckFailure(f"{what}: {v.value}")


def normalize(d: Diagram, check: bool = False) -> NormalForm:
    """Reduced GS-LC form of ``d`` (bent to a state first when it has inputs).

    With ``check`` every stage is compared with the interpreted matrix.
    """
    errs = validate(d)
    if errs:
        raise DiagramError("; ".join(errs))
    k, l = d.arity
    state = bend(d) if k else d
    ref = interpret(state) if check else None
    t = diagram_to_tableau(state)
    if check:
        _agree(ref, tableau_state(t, k + l), "tableau")
    if t is ZERO:
        return NormalForm(k, l, None)
    g = extract_gslc(t)
    if check:
        _agree(ref, interpret(gslc_to_diagram(g)), "GS-LC extraction")
    r = to_rgslc(g)
    if check:
        _agree(ref, interpret(gslc_to_diagram(r.diagram)), "reduced GS-LC")
    return NormalForm(k, l, r)


def decide_equal(d1: Diagram, d2: Diagram, check: bool = False) -> EqVerdict:
    if d1.arity != d2.arity:
        raise DiagramError(f"arity mismatch: {d1.arity} vs {d2.arity}")
    n1, n2 = normalize(d1, check), normalize(d2, check)
    if n1.is_zero and n2.is_zero:
        verdict = EqVerdict.ZERO_EQUIV
    elif n1.is_zero or n2.is_zero:
        verdict = EqVerdict.UNEQUAL
    else:
        r1, r2 = simplify_pair(n1.rgslc, n2.rgslc)
        if check:
            for before, after in ((n1.rgslc, r1), (n2.rgslc, r2)):
                _agree(
                    interpret(gslc_to_diagram(before.diagram)),
                    interpret(gslc_to_diagram(after.diagram)),
                    "pair simplification",
                )
        verdict = EqVerdict.EQUAL if equal_rgslc(r1, r2) else EqVerdict.UNEQUAL
    if check:
        oracle = mat_equal_up_to_scalar(interpret(d1), interpret(d2))
        expect = {
            Verdict.EQUAL_UP_TO_SCALAR: EqVerdict.EQUAL,
            Verdict.BOTH_ZERO: EqVerdict.ZERO_EQUIV,
        }.get(oracle, EqVerdict.UNEQUAL)
        if expect is not verdict:
            raise CheckFailure(f"decision {verdict.value} but oracle says {oracle.value}")
    return verdict


# ---------------------------------------------------------------------------
# random diagrams

_ONE_QUTRIT = ("S", "Sdg", "H", "Hdg", "X", "Z", "Zp", "Xp")
_TWO_QUTRIT = ("CZ", "CZ2", "SUM")


class _Circuit:
    def __init__(self, n_wires: int, n_inputs: int, rng: random.Random) -> None:
        self.b = DiagramBuilder()
        self.rng = rng
        self.ends: list[int] = []
        for w in range(n_wires):
            self.ends.append(self.b.input() if w < n_inputs else self._prep())

    def _prep(self) -> int:
        if self.rng.random() < 0.5:
            return self.b.z(self.rng.choice(ALL_PHASES))
        return self.b.x(self.rng.choice(ALL_PHASES))

    def _effect(self, w: int) -> None:
        node = self.b.z(self.rng.choice(ALL_PHASES)) if self.rng.random() < 0.5 else self.b.x(self.rng.choice(M_SET))
        self.b.edge(self.ends[w], node)

    def _step(self, w: int, nid: int) -> None:
        self.b.edge(self.ends[w], nid)
        self.ends[w] = nid

    def one(self, gate: str, w: int) -> None:
        b = self.b
        nid = {
            "S": lambda: b.z(PhasePair(0, 1)),
            "Sdg": lambda: b.z(PhasePair(0, 2)),
            "H": b.h,
            "Hdg": b.hdag,
            "X": lambda: b.x(PhasePair(2, 1)),
            "Z": lambda: b.z(PhasePair(1, 2)),
            "Zp": lambda: b.z(self.rng.choice(ALL_PHASES)),
            "Xp": lambda: b.x(self.rng.choice(ALL_PHASES)),
        }[gate]()
        self._step(w, nid)

    def two(self, gate: str, w0: int, w1: int) -> None:
        b = self.b
        if gate in ("CZ", "CZ2"):
            g0, g1 = b.z(), b.z()
            box = b.h() if gate == "CZ" else b.hdag()
            self._step(w0, g0)
            self._step(w1, g1)
            b.chain(g0, box, g1)
        else:
            g, r = b.z(), b.x()
            self._step(w0, g)
            self._step(w1, r)
            b.edge(g, r)

    def reset(self, w: int) -> None:
        self._effect(w)
        self.ends[w] = self._prep()

    def finish(self, n_outputs: int) -> Diagram:
        for w, end in enumerate(self.ends):
            if w < n_outputs:
                self.b.edge(end, self.b.output())
            else:
                self._effect(w)
        return self.b.build()


def random_stabilizer_diagram(
    n_wires: int,
    n_gates: int,
    seed: int,
    n_inputs: int | None = None,
    n_outputs: int | None = None,
    reset_rate: float = 0.05,
) -> Diagram:
    """Seeded random circuit rendered as a diagram.

    Wires below ``n_inputs`` start at an input, the rest at a random green or
    red state; wires below ``n_outputs`` end at an output, the rest in a
    random post-selected effect.  Both default to ``n_wires``.  Occasional
    resets (effect followed by a fresh state) appear mid-circuit.
    """
    if n_wires < 1:
        raise ValueError("need at least one wire")
    rng = random.Random(seed)
    n_inputs = n_wires if n_inputs is None else n_inputs
    n_outputs = n_wires if n_outputs is None else n_outputs
    if not (0 <= n_inputs <= n_wires and 0 <= n_outputs <= n_wires):
        raise ValueError("inputs and outputs must fit on the wires")
    c = _Circuit(n_wires, n_inputs, rng)
    for _ in range(n_gates):
        if rng.random() < reset_rate:
            c.reset(rng.randrange(n_wires))
        elif n_wires > 1 and rng.random() < 0.35:
            w0, w1 = rng.sample(range(n_wires), 2)
            c.two(rng.choice(_TWO_QUTRIT), w0, w1)
        else:
            c.one(rng.choice(_ONE_QUTRIT), rng.randrange(n_wires))
    return c.finish(n_outputs)


def random_gslc(n: int, rng: random.Random, density: float = 0.5) -> GslcDiagram:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                m[i][j] = m[j][i] = rng.choice((1, 2))
    ops = table()
    return GslcDiagram(WGraph.from_matrix(m), tuple(rng.choice(ops) for _ in range(n)))


def engineered_move_pair(n: int, n_moves: int, seed: int) -> tuple[Diagram, Diagram]:
    """Two GS-LC diagrams related by random star / circ2 / Pauli moves."""
    rng = random.Random(seed)
    s = random_gslc(n, rng)
    t = s
    for _ in range(n_moves):
        kind = rng.choice(("star", "circ2", "pauli"))
        t = apply_move(t, (kind, rng.randrange(n), rng.choice((1, 2))))
    d1, d2 = gslc_to_diagram(s), gslc_to_diagram(t)
    if rng.random() < 0.5:
        # share a random continuation on the outputs
        tail = random_stabilizer_diagram(n, rng.randint(1, 6), rng.randrange(1 << 30), n_inputs=n, n_outputs=rng.randint(1, n))
        d1, d2 = compose(d1, tail), compose(d2, tail)
    return d1, d2


def engineered_rule_pair(seed: int, max_wires: int = 4) -> tuple[Diagram, Diagram, str]:
    """A random context around the two sides of a random rule instance."""
    from .rules import builtin_rules, instantiate

    rng = random.Random(seed)
    rules = builtin_rules()
    while True:
        r = rng.choice(rules)
        shape = rng.choice(r.shapes)
        binding = rng.choice(r.bindings())
        lhs, rhs = instantiate(r, binding, shape)
        k, l = lhs.arity
        if max(k, l) <= max_wires:
            break
    spare = rng.randint(0, max_wires - max(k, l))
    width_in = k + spare
    width_out = l + spare
    before = random_stabilizer_diagram(
        max(width_in, 1), rng.randint(0, 5), rng.randrange(1 << 30),
        n_inputs=rng.randint(0, width_in), n_outputs=width_in,
    ) if width_in else None
    after = random_stabilizer_diagram(
        max(width_out, 1), rng.randint(0, 5), rng.randrange(1 << 30),
        n_inputs=width_out, n_outputs=rng.randint(0, width_out),
    ) if width_out else None

    def wrap(core: Diagram) -> Diagram:
        mid = tensor(core, identity(spare)) if spare else core
        if before is not None:
            mid = compose(before, mid)
        if after is not None:
            mid = compose(mid, after)
        return mid

    return wrap(lhs), wrap(rhs), r.name


def random_pair(seed: int, max_wires: int = 4) -> tuple[Diagram, Diagram, str]:
    """A pair of equal-arity diagrams, from one of several generators."""
    rng = random.Random(seed)
    mode = rng.choice(("rule", "move", "independent", "perturbed"))
    if mode == "rule":
        return engineered_rule_pair(rng.randrange(1 << 30), max_wires)
    if mode == "move":
        d1, d2 = engineered_move_pair(rng.randint(1, max_wires), rng.randint(1, 6), rng.randrange(1 << 30))
        return d1, d2, "move"
    n = rng.randint(1, max_wires)
    k = rng.randint(0, n)
    l = rng.randint(0, n)
    if k + l == 0:
        l = 1
    s1 = rng.randrange(1 << 30)
    d1 = random_stabilizer_diagram(n, rng.randint(1, 12), s1, n_inputs=k, n_outputs=l)
    if mode == "independent":
        d2 = random_stabilizer_diagram(n, rng.randint(1, 12), rng.randrange(1 << 30), n_inputs=k, n_outputs=l)
    else:
        # same circuit, one extra single-qutrit gate slipped in at the end
        tail = random_stabilizer_diagram(l, 1, rng.randrange(1 << 30), n_inputs=l, n_outputs=l, reset_rate=0.0) if l else None
        d2 = compose(d1, tail) if tail is not None else d1
    return d1, d2, mode


def sequence_check(pairs: Sequence[tuple[Diagram, Diagram]]) -> list[tuple[EqVerdict, Verdict]]:
    """Decision and oracle verdicts side by side (no assertion)."""
    out = []
    for d1, d2 in pairs:
        out.append((decide_equal(d1, d2), mat_equal_up_to_scalar(interpret(d1), interpret(d2))))
    return out
