"""The rewrite rules of the qutrit calculus and a few derived equalities.

Each rule is a pair of diagram templates.  Phase metavariables range over a
finite domain (all of A, or one of the classes P / M), and variadic rules
also take an arity shape.  ``verify_rule`` instantiates everything and asks
the matrix oracle whether both sides agree up to a nonzero scalar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .arith import ALL_PHASES, M_SET, P_SET, ExactMatrix, PhasePair, Verdict
from .diagram import Diagram, DiagramBuilder, compose, h_box, hdag_box, identity, swap, tensor, z_spider
from .semantics import interpret, semantically_equal

__all__ = [
    "RewriteRule",
    "DerivedEquality",
    "RuleReport",
    "RuleError",
    "builtin_rules",
    "rule",
    "instantiate",
    "verify_rule",
    "derived_equalities",
    "cz_diagram",
    "sum_diagram",
    "lambda_decomposition_matrices",
]

Binding = Mapping[str, PhasePair]
Shape = tuple[int, ...]


class RuleError(ValueError):
    """Bad binding or shape for a rule."""


@dataclass(frozen=True)
class RewriteRule:
    name: str
    metavars: tuple[str, ...]
    domains: Mapping[str, tuple[PhasePair, ...]]
    build: Callable[[Binding, Shape], tuple[Diagram, Diagram]] = field(repr=False)
    shapes: tuple[Shape, ...] = ((),)
    side: Callable[[Binding], bool] = field(default=lambda b: True, repr=False)

    def bindings(self) -> list[dict[str, PhasePair]]:
        pools = [self.domains[m] for m in self.metavars]
        out = []
        for combo in itertools.product(*pools):
            b = dict(zip(self.metavars, combo))
            if self.side(b):
                out.append(b)
        return out


@dataclass(frozen=True)
class DerivedEquality:
    name: str
    lhs: Diagram
    rhs: Diagram


@dataclass
class RuleReport:
    name: str
    instances_checked: int
    counterexamples: list[tuple[dict, Shape, Verdict]]
    both_zero: int = 0

    @property
    def all_sound(self) -> bool:
        return not self.counterexamples


# ---------------------------------------------------------------------------
# small builders


def _chain_1to1(nodes: Sequence[tuple[str, PhasePair | None]]) -> Diagram:
    """A 1->1 diagram meeting the given generators in order."""
    b = DiagramBuilder()
    prev = b.input()
    for kind, ph in nodes:
        nid = {"Z": lambda: b.z(ph), "X": lambda: b.x(ph), "H": b.h, "HDAG": b.hdag}[kind]()
        b.edge(prev, nid)
        prev = nid
    b.edge(prev, b.output())
    return b.build()


def _spider(kind: str, n_in: int, n_out: int, ph: PhasePair, in_box: str | None = None, out_box: str | None = None) -> Diagram:
    """Spider with an optional H / HDAG box on every input and every output."""
    b = DiagramBuilder()
    ins = [b.input() for _ in range(n_in)]
    s = b.z(ph) if kind == "Z" else b.x(ph)
    for i in ins:
        if in_box:
            box = b.h() if in_box == "H" else b.hdag()
            b.chain(i, box, s)
        else:
            b.edge(i, s)
    for _ in range(n_out):
        o = b.output()
        if out_box:
            box = b.h() if out_box == "H" else b.hdag()
            b.chain(s, box, o)
        else:
            b.edge(s, o)
    return b.build()


def cz_diagram(weight: int = 1) -> Diagram:
    """Two green nodes joined through an H (weight 1) or HDAG (weight 2) box."""
    b = DiagramBuilder()
    i0, i1 = b.input(), b.input()
    g0, g1 = b.z(), b.z()
    box = b.h() if weight % 3 == 1 else b.hdag()
    b.edge(i0, g0)
    b.edge(i1, g1)
    b.chain(g0, box, g1)
    b.edge(g0, b.output())
    b.edge(g1, b.output())
    return b.build()


def sum_diagram() -> Diagram:
    """|c, t> -> |c, c + t>: green copy on the control, red addition on the target."""
    b = DiagramBuilder()
    c_in, t_in = b.input(), b.input()
    g, r = b.z(), b.x()
    b.edge(c_in, g)
    b.edge(t_in, r)
    b.edge(g, r)
    b.edge(g, b.output())
    b.edge(r, b.output())
    return b.build()


def _on_second(box: Diagram) -> Diagram:
    return tensor(identity(1), box)


# ---------------------------------------------------------------------------
# rule templates


def _s1(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    k1, l1, k2, l2 = shape
    a, c = bd["a"], bd["b"]
    lhs = DiagramBuilder()
    ins1 = [lhs.input() for _ in range(k1)]
    ins2 = [lhs.input() for _ in range(k2)]
    s1, s2 = lhs.z(a), lhs.z(c)
    for i in ins1:
        lhs.edge(i, s1)
    for i in ins2:
        lhs.edge(i, s2)
    lhs.edge(s1, s2)
    for _ in range(l1):
        lhs.edge(s1, lhs.output())
    for _ in range(l2):
        lhs.edge(s2, lhs.output())
    return lhs.build(), z_spider(k1 + k2, l1 + l2, a + c)


def _s1_shapes() -> tuple[Shape, ...]:
    out = []
    for k1, l1, k2, l2 in itertools.product(range(3), repeat=4):
        if k1 + l1 + 1 <= 3 and k2 + l2 + 1 <= 3:
            out.append((k1, l1, k2, l2))
    return tuple(out)


def _s2(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    return z_spider(1, 1, PhasePair()), identity(1)


def _s3(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    cup = z_spider(0, 2)
    return compose(cup, swap((1, 0))), cup


def _b1(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    red = _spider("X", 0, 1, PhasePair())
    return compose(red, z_spider(1, 2)), tensor(red, red)


def _b2(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    lhs = compose(_spider("X", 2, 1, PhasePair()), z_spider(1, 2))
    copies = tensor(z_spider(1, 2), z_spider(1, 2))
    adds = tensor(_spider("X", 2, 1, PhasePair()), _spider("X", 2, 1, PhasePair()))
    middle = tensor(tensor(identity(1), swap((1, 0))), identity(1))
    return lhs, compose(compose(copies, middle), adds)


def _k1(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    (k,) = shape
    m = bd["m"]
    red = _spider("X", 1, 1, m)
    lhs = compose(red, z_spider(1, k))
    rhs = z_spider(1, k)
    reds = red
    for _ in range(k - 1):
        reds = tensor(reds, red)
    return lhs, compose(rhs, reds)


def _k2_target(ph: PhasePair, m: PhasePair) -> PhasePair:
    a, c = ph.a, ph.b
    if m == PhasePair(2, 1):
        return PhasePair.of(c - a, -a)
    if m == PhasePair(1, 2):
        return PhasePair.of(-c, a - c)
    return ph


def _k2(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    ph, m = bd["a"], bd["m"]
    lhs = _chain_1to1([("X", m), ("Z", ph)])
    rhs = _chain_1to1([("Z", _k2_target(ph, m)), ("X", m)])
    return lhs, rhs


def _h1(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    return compose(h_box(), hdag_box()), identity(1)


def _eu(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    p = PhasePair(2, 2)
    return h_box(), _chain_1to1([("Z", p), ("X", p), ("Z", p)])


def _h2(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    n, m = shape
    ph = bd["a"]
    return _spider("X", n, m, ph), _spider("Z", n, m, ph, in_box="HDAG", out_box="H")


def _h2p(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    n, m = shape
    ph = bd["a"]
    return _spider("Z", n, m, ph, in_box="H", out_box="HDAG"), _spider("X", n, m, PhasePair(ph.b, ph.a))


def _p1(bd: Binding, shape: Shape) -> tuple[Diagram, Diagram]:
    p = bd["p"]
    return _spider("X", 0, 1, p), z_spider(0, 1, -p)


def _h2_shapes() -> tuple[Shape, ...]:
    return tuple((n, m) for n in range(4) for m in range(4) if n + m <= 3)


def builtin_rules() -> tuple[RewriteRule, ...]:
    A = ALL_PHASES
    return (
        RewriteRule("S1", ("a", "b"), {"a": A, "b": A}, _s1, _s1_shapes()),
        RewriteRule("S2", (), {}, _s2),
        RewriteRule("S3", (), {}, _s3),
        RewriteRule("B1", (), {}, _b1),
        RewriteRule("B2", (), {}, _b2),
        RewriteRule("K1", ("m",), {"m": M_SET}, _k1, ((1,), (2,))),
        RewriteRule("K2", ("a", "m"), {"a": A, "m": M_SET}, _k2),
        RewriteRule("H1", (), {}, _h1),
        RewriteRule("EU", (), {}, _eu),
        RewriteRule("H2", ("a",), {"a": A}, _h2, _h2_shapes()),
        RewriteRule("H2'", ("a",), {"a": A}, _h2p, _h2_shapes()),
        RewriteRule("P1", ("p",), {"p": P_SET}, _p1),
    )


def rule(name: str) -> RewriteRule:
    for r in builtin_rules():
        if r.name == name:
            return r
    raise RuleError(f"no rule named {name!r}")


def instantiate(r: RewriteRule, binding: Binding, shape: Shape | None = None) -> tuple[Diagram, Diagram]:
    missing = [m for m in r.metavars if m not in binding]
    if missing:
        raise RuleError(f"{r.name}: binding misses {', '.join(missing)}")
    for m in r.metavars:
        if binding[m] not in r.domains[m]:
            raise RuleError(f"{r.name}: {m}={binding[m]} outside its domain")
    if not r.side(binding):
        raise RuleError(f"{r.name}: side condition fails for {dict(binding)}")
    if shape is None:
        shape = r.shapes[0]
    elif shape not in r.shapes:
        raise RuleError(f"{r.name}: unsupported shape {shape}")
    return r.build(binding, shape)


def verify_rule(r: RewriteRule) -> RuleReport:
    """Check every binding and shape of ``r`` against the oracle.

    Legless instances are scalars; where both sides are the scalar 0 they
    agree exactly, and are tallied in ``both_zero`` rather than rejected.
    """
    checked = zeros = 0
    bad: list[tuple[dict, Shape, Verdict]] = []
    for shape in r.shapes:
        for b in r.bindings():
            lhs, rhs = instantiate(r, b, shape)
            v = semantically_equal(lhs, rhs)
            checked += 1
            if v is Verdict.BOTH_ZERO:
                zeros += 1
            elif v is not Verdict.EQUAL_UP_TO_SCALAR:
                bad.append((b, shape, v))
    return RuleReport(r.name, checked, bad, zeros)


# ---------------------------------------------------------------------------
# derived equalities


def derived_equalities() -> tuple[DerivedEquality, ...]:
    cz = cz_diagram(1)
    conj_sum = compose(compose(_on_second(hdag_box()), sum_diagram()), _on_second(h_box()))
    return (
        DerivedEquality("CZ via H box", cz, conj_sum),
        DerivedEquality("CZ^2 via HDAG box", cz_diagram(2), compose(cz, cz)),
        DerivedEquality(
            "SUM decomposition",
            sum_diagram(),
            compose(compose(_on_second(h_box()), cz), _on_second(hdag_box())),
        ),
    )


def lambda_decomposition_matrices() -> tuple[ExactMatrix, ExactMatrix]:
    """((I (x) H^dag) . CZ . (I (x) H), 3 . SUM) as exact 9x9 matrices."""
    eye = ExactMatrix.identity(3)
    h = interpret(h_box())
    hd = interpret(hdag_box())
    cz = interpret(cz_diagram(1))
    lam = interpret(sum_diagram())
    # the diagram of SUM carries a factor 3 from the red addition node
    lam_exact = ExactMatrix.from_entries(
        9, 9, [int((r // 3) == (c // 3) and (r % 3) == ((c // 3) + (c % 3)) % 3) for r in range(9) for c in range(9)]
    )
    if lam != lam_exact.scale(3):
        raise AssertionError("SUM diagram does not interpret to 3 * SUM")
    return eye.kron(hd) @ cz @ eye.kron(h), lam_exact.scale(3)
