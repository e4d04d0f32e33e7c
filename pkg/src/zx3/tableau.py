"""Qutrit stabilizer tableaus over Z3.

A Pauli is w**delta * (X^v1 Z^w1) (x) ... (x) (X^vn Z^wn) with X|j> = |j+1>
and Z|j> = w**j |j>, so Z X = w X Z.  Gate actions are not hand-written:
every Clifford's conjugation table is computed from its exact matrix the
first time it is needed.
"""

from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import ALL_PHASES, ExactMatrix, PhasePair, omega_power
from .clifford1 import CliffordNF, canonical, compose_nf, identity_nf, inverse_nf, nf_to_matrix, z_nf
from .diagram import Diagram, Kind, Node
from .semantics import generator_matrix

__all__ = [
    "PauliOp",
    "Tableau",
    "ZERO",
    "Zero",
    "pauli_mul",
    "pauli_pow",
    "commute_phase",
    "pauli_matrix",
    "tableau_init_plus",
    "tableau_init_zero",
    "apply_gate",
    "apply_local",
    "postselect",
    "diagram_to_tableau",
    "canonicalize",
    "extract_gslc",
    "tableau_state",
    "enumerate_stabilizer_states",
    "GATES",
]


@dataclass(frozen=True, order=True, slots=True)
class PauliOp:
    delta: int
    v: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.v) != len(self.w):
            raise ValueError("X and Z exponent vectors differ in length")
        object.__setattr__(self, "delta", self.delta % 3)
        object.__setattr__(self, "v", tuple(x % 3 for x in self.v))
        object.__setattr__(self, "w", tuple(x % 3 for x in self.w))

    @property
    def n(self) -> int:
        return len(self.v)

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(0, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, q: int, x: int = 0, z: int = 0, delta: int = 0) -> "PauliOp":
        v = [0] * n
        w = [0] * n
        v[q], w[q] = x, z
        return cls(delta, tuple(v), tuple(w))

    @classmethod
    def parse(cls, text: str) -> "PauliOp":
        """``[w^d] P1 P2 ...`` with each Pi in {I, X, X2, Z, Z2, XZ, X2Z, ...}."""
        toks = text.split()
        delta = 0
        if toks and toks[0].startswith("w^"):
            delta = int(toks[0][2:])
            toks = toks[1:]
        v, w = [], []
        for tok in toks:
            x = z = 0
            rest = tok
            if rest.startswith("I"):
                rest = rest[1:]
            if rest.startswith("X"):
                rest = rest[1:]
                x = 1
                if rest[:1].isdigit():
                    x, rest = int(rest[0]), rest[1:]
            if rest.startswith("Z"):
                rest = rest[1:]
                z = 1
                if rest[:1].isdigit():
                    z, rest = int(rest[0]), rest[1:]
            if rest:
                raise ValueError(f"bad Pauli factor {tok!r}")
            v.append(x)
            w.append(z)
        return cls(delta, tuple(v), tuple(w))

    def is_identity(self) -> bool:
        return not any(self.v) and not any(self.w)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return pauli_mul(self, other)

    def __str__(self) -> str:
        parts = []
        for x, z in zip(self.v, self.w):
            s = ("X" + ("2" if x == 2 else "") if x else "") + ("Z" + ("2" if z == 2 else "") if z else "")
            parts.append(s or "I")
        head = f"w^{self.delta} " if self.delta else ""
        return head + " ".join(parts)

    def to_json(self) -> dict:
        return {"delta": self.delta, "v": list(self.v), "w": list(self.w)}


def pauli_mul(p: PauliOp, q: PauliOp) -> PauliOp:
    """(X^v1 Z^w1)(X^v2 Z^w2) = w^(w1.v2) X^(v1+v2) Z^(w1+w2)."""
    if p.n != q.n:
        raise ValueError(f"Pauli length mismatch: {p.n} vs {q.n}")
    cross = sum(a * b for a, b in zip(p.w, q.v))
    return PauliOp(
        p.delta + q.delta + cross,
        tuple(a + b for a, b in zip(p.v, q.v)),
        tuple(a + b for a, b in zip(p.w, q.w)),
    )


def pauli_pow(p: PauliOp, k: int) -> PauliOp:
    out = PauliOp.identity(p.n)
    for _ in range(k % 3):
        out = pauli_mul(out, p)
    return out


def commute_phase(p: PauliOp, q: PauliOp) -> int:
    """c with p q = w^c q p."""
    if p.n != q.n:
        raise ValueError(f"Pauli length mismatch: {p.n} vs {q.n}")
    return (sum(a * b for a, b in zip(p.w, q.v)) - sum(a * b for a, b in zip(q.w, p.v))) % 3


def _x_matrix() -> ExactMatrix:
    return ExactMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])


def _z_matrix() -> ExactMatrix:
    return ExactMatrix.diag([omega_power(j) for j in range(3)])


def pauli_matrix(p: PauliOp) -> ExactMatrix:
    X, Z = _x_matrix(), _z_matrix()
    out = ExactMatrix.identity(1)
    for x, z in zip(p.v, p.w):
        f = ExactMatrix.identity(3)
        for _ in range(x):
            f = f @ X
        for _ in range(z):
            f = f @ Z
        out = out.kron(f)
    return out.scale(omega_power(p.delta))


# ---------------------------------------------------------------------------
# tableaus


class Zero:
    """The annihilated state: some post-selection had zero amplitude."""

    _inst: "Zero | None" = None

    def __new__(cls) -> "Zero":
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "ZERO"


ZERO = Zero()


@dataclass(frozen=True)
class Tableau:
    n: int
    gens: tuple[PauliOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gens", tuple(self.gens))
        for g in self.gens:
            if g.n != self.n:
                raise ValueError(f"generator {g} does not act on {self.n} qutrits")

    def check(self) -> None:
        """Raise unless the generators form a valid stabilizer group."""
        if len(self.gens) != self.n:
            raise ValueError(f"{len(self.gens)} generators for {self.n} qutrits")
        for a, b in itertools.combinations(self.gens, 2):
            if commute_phase(a, b):
                raise ValueError(f"generators {a} and {b} do not commute")
        if _rank([list(g.v) + list(g.w) for g in self.gens]) != self.n:
            raise ValueError("generators are not independent")

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [g.to_json() for g in self.gens]}

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.gens) if self.gens else "(empty)"


def _rank(rows: list[list[int]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % 3), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c] % 3  # 1 -> 1, 2 -> 2 (self-inverse mod 3)
        rows[rank] = [x * inv % 3 for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % 3:
                f = rows[i][c]
                rows[i] = [(a - f * b) % 3 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def tableau_init_plus(n: int) -> Tableau:
    return Tableau(n, tuple(PauliOp.single(n, q, x=1) for q in range(n)))


def tableau_init_zero(n: int) -> Tableau:
    return Tableau(n, tuple(PauliOp.single(n, q, z=1) for q in range(n)))


# ---------------------------------------------------------------------------
# conjugation tables


def _pauli_images(g: ExactMatrix, k: int) -> tuple[PauliOp, ...]:
    """Images g P g^dagger / c of X_0, Z_0, X_1, Z_1, ... on k qutrits."""
    gd = g.dagger()
    c = (g @ gd)[0, 0]
    if g @ gd != ExactMatrix.identity(3 ** k).scale(c):
        raise ValueError("gate is not unitary up to a scalar")
    candidates = [PauliOp(d, tuple(vw[:k]), tuple(vw[k:])) for d in range(3) for vw in itertools.product(range(3), repeat=2 * k)]
    cand_mats = [(p, pauli_matrix(p).scale(c)) for p in candidates]
    out = []
    for q in range(k):
        for x, z in ((1, 0), (0, 1)):
            m = g @ pauli_matrix(PauliOp.single(k, q, x=x, z=z)) @ gd
            hit = next((p for p, pm in cand_mats if pm == m), None)
            if hit is None:
                raise ValueError("gate does not normalise the Pauli group")
            out.append(hit)
    # the symplectic form must survive
    for i, j in itertools.combinations(range(2 * k), 2):
        pi = PauliOp.single(k, i // 2, x=int(i % 2 == 0), z=int(i % 2 == 1))
        pj = PauliOp.single(k, j // 2, x=int(j % 2 == 0), z=int(j % 2 == 1))
        if commute_phase(out[i], out[j]) != commute_phase(pi, pj):
            raise ValueError("conjugation table is not symplectic")
    return tuple(out)


def _two_qutrit(f) -> ExactMatrix:
    entries = [[0] * 9 for _ in range(9)]
    for j, k in itertools.product(range(3), repeat=2):
        (r, val) = f(j, k)
        entries[r][3 * j + k] = val
    return ExactMatrix.from_rows(entries)


def _gate_matrix(name: str) -> tuple[ExactMatrix, int]:
    one = {
        "S": lambda: generator_matrix(Node(Kind.Z, PhasePair(0, 1)), 1, 1),
        "Sdg": lambda: generator_matrix(Node(Kind.Z, PhasePair(0, 2)), 1, 1),
        "H": lambda: generator_matrix(Node(Kind.H), 1, 1),
        "Hdg": lambda: generator_matrix(Node(Kind.HDAG), 1, 1),
        "X": _x_matrix,
        "Z": _z_matrix,
    }
    if name in one:
        return one[name](), 1
    if name == "CZ":
        return _two_qutrit(lambda j, k: (3 * j + k, omega_power(j * k))), 2
    if name == "CZ2":
        return _two_qutrit(lambda j, k: (3 * j + k, omega_power(2 * j * k))), 2
    if name == "SUM":
        return _two_qutrit(lambda j, k: (3 * j + (j + k) % 3, 1)), 2
    raise ValueError(f"unknown gate {name!r}")


GATES = ("S", "Sdg", "H", "Hdg", "X", "Z", "CZ", "CZ2", "SUM")


@functools.cache
def _gate_table(name: str) -> tuple[int, tuple[PauliOp, ...]]:
    m, k = _gate_matrix(name)
    return k, _pauli_images(m, k)


@functools.cache
def _nf_table(c: CliffordNF) -> tuple[PauliOp, ...]:
    return _pauli_images(nf_to_matrix(c), 1)


def _conjugate(p: PauliOp, targets: Sequence[int], images: Sequence[PauliOp]) -> PauliOp:
    k = len(targets)
    img = PauliOp.identity(k)
    for i, q in enumerate(targets):
        img = pauli_mul(img, pauli_pow(images[2 * i], p.v[q]))
        img = pauli_mul(img, pauli_pow(images[2 * i + 1], p.w[q]))
    v, w = list(p.v), list(p.w)
    for i, q in enumerate(targets):
        v[q], w[q] = img.v[i], img.w[i]
    return PauliOp(p.delta + img.delta, tuple(v), tuple(w))


def _check_targets(t: Tableau, targets: Sequence[int], k: int) -> None:
    if len(targets) != k:
        raise ValueError(f"gate needs {k} target(s), got {len(targets)}")
    if len(set(targets)) != k or any(not 0 <= q < t.n for q in targets):
        raise ValueError(f"bad targets {list(targets)} for {t.n} qutrits")


def apply_gate(t: Tableau, g: str, targets: Sequence[int]) -> Tableau:
    """Conjugate every generator by gate ``g`` (one of ``GATES``)."""
    k, images = _gate_table(g)
    _check_targets(t, targets, k)
    return Tableau(t.n, tuple(_conjugate(p, targets, images) for p in t.gens))


def apply_local(t: Tableau, q: int, c: CliffordNF) -> Tableau:
    """Apply a single-qutrit Clifford, given as a normal form, at qutrit ``q``."""
    _check_targets(t, [q], 1)
    images = _nf_table(c)
    return Tableau(t.n, tuple(_conjugate(p, [q], images) for p in t.gens))


# ---------------------------------------------------------------------------
# post-selection


def _solve(rows: list[PauliOp], target: PauliOp) -> list[int] | None:
    """Coefficients c with sum c_i (v_i, w_i) = (v, w) over Z3, if any."""
    m = len(rows)
    ncols = 2 * target.n
    aug = [list(r.v) + list(r.w) for r in rows]
    # solve A^T c = b by elimination on the transposed system
    mat = [[aug[i][c] for i in range(m)] + [(list(target.v) + list(target.w))[c]] for c in range(ncols)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, ncols) if mat[i][c] % 3), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c] % 3
        mat[r] = [x * inv % 3 for x in mat[r]]
        for i in range(ncols):
            if i != r and mat[i][c] % 3:
                f = mat[i][c]
                mat[i] = [(a - f * b) % 3 for a, b in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    if any(mat[i][m] % 3 for i in range(r, ncols)):
        return None
    coeffs = [0] * m
    for i, c in enumerate(piv_cols):
        coeffs[c] = mat[i][m]
    return coeffs


def postselect(t: Tableau, p: PauliOp) -> "Tableau | Zero":
    """Project onto the +1 eigenspace of ``p``."""
    if p.n != t.n:
        raise ValueError(f"Pauli on {p.n} qutrits, tableau on {t.n}")
    phases = [commute_phase(g, p) for g in t.gens]
    j = next((i for i, c in enumerate(phases) if c), None)
    if j is None:
        coeffs = _solve(list(t.gens), p)
        if coeffs is None:
            raise ValueError("Pauli commutes with the group but is not in it; tableau is not maximal")
        prod = PauliOp.identity(t.n)
        for g, c in zip(t.gens, coeffs):
            prod = pauli_mul(prod, pauli_pow(g, c))
        return t if prod.delta == p.delta else ZERO
    gj = t.gens[j]
    cj = phases[j]
    new = []
    for i, (g, c) in enumerate(zip(t.gens, phases)):
        if i == j:
            new.append(p)
        elif c:
            new.append(pauli_mul(g, pauli_pow(gj, -c * cj)))
        else:
            new.append(g)
    return Tableau(t.n, tuple(new))


# ---------------------------------------------------------------------------
# row reduction


def _reduce(gens: list[PauliOp], cols: Sequence[tuple[int, int]]) -> tuple[list[PauliOp], list[int]]:
    """Row-reduce on the given (block, qutrit) columns; block 0 = X, 1 = Z.

    Returns the new generator list with pivot rows first (in column order) and
    the list of pivot positions in ``cols``.
    """
    rows = list(gens)
    pivots = []
    r = 0
    for ci, (blk, q) in enumerate(cols):
        entry = (lambda g: g.v[q]) if blk == 0 else (lambda g: g.w[q])
        piv = next((i for i in range(r, len(rows)) if entry(rows[i])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if entry(rows[r]) == 2:
            rows[r] = pauli_pow(rows[r], 2)
        for i in range(len(rows)):
            if i != r:
                e = entry(rows[i])
                if e:
                    rows[i] = pauli_mul(rows[i], pauli_pow(rows[r], -e))
        pivots.append(ci)
        r += 1
    return rows, pivots


def canonicalize(t: Tableau) -> Tableau:
    """Reduced row-echelon generators: X block left to right, then Z block."""
    cols = [(0, q) for q in range(t.n)] + [(1, q) for q in range(t.n)]
    rows, _ = _reduce(list(t.gens), cols)
    return Tableau(t.n, tuple(rows))


def _x_rank(t: Tableau) -> int:
    return _rank([list(g.v) for g in t.gens]) if t.gens else 0


# ---------------------------------------------------------------------------
# diagrams to tableaus


def _zstate_gens(d: int, ph: PhasePair) -> list[PauliOp]:
    """Stabilizers of sum_j w^(0, a, b)_j |j...j> on d qutrits."""
    gens = []
    for i in range(d - 1):
        w = [0] * d
        w[i], w[i + 1] = 1, 2
        gens.append(PauliOp(0, (0,) * d, tuple(w)))
    w = [0] * d
    w[0] = ph.b - 2 * ph.a
    gens.append(PauliOp(ph.a, (1,) * d, tuple(w)))
    return gens


def _node_state(node: Node, legs: Sequence[bool]) -> "Tableau | Zero":
    """Tableau of the conjugate of the node tensor, one qutrit per leg.

    Post-selecting cup halves onto this state contracts the node.
    """
    d = len(legs)
    kind = node.kind
    if kind in (Kind.H, Kind.HDAG):
        g = 2 if kind is Kind.H else 1
        return Tableau(2, (PauliOp(0, (1, 0), (0, g)), PauliOp(0, (0, 1), (g, 0))))
    ph = -node.phase
    if d == 0:
        return ZERO if node.phase in (PhasePair(1, 2), PhasePair(2, 1)) else Tableau(0, ())
    t = Tableau(d, tuple(_zstate_gens(d, ph)))
    if kind is Kind.X:
        h = canonical(["H"])
        hdg = canonical(["Hdg"])
        for q, out in enumerate(legs):
            t = apply_local(t, q, hdg if out else h)
    return t


def _add_cup(t: Tableau) -> Tableau:
    n = t.n + 2
    gens = [PauliOp(g.delta, g.v + (0, 0), g.w + (0, 0)) for g in t.gens]
    z = (0,) * t.n
    gens.append(PauliOp(0, z + (1, 1), z + (0, 0)))
    gens.append(PauliOp(0, z + (0, 0), z + (1, 2)))
    return Tableau(n, tuple(gens))


def _embed(p: PauliOp, n: int, qs: Sequence[int]) -> PauliOp:
    v = [0] * n
    w = [0] * n
    for i, q in enumerate(qs):
        v[q], w[q] = p.v[i], p.w[i]
    return PauliOp(p.delta, tuple(v), tuple(w))


def _drop(t: Tableau, qs: Sequence[int]) -> Tableau:
    """Remove qutrits that are in a product state with the rest."""
    cols = [(0, q) for q in qs] + [(1, q) for q in qs]
    rows, piv = _reduce(list(t.gens), cols)
    k = len(piv)
    if k != len(qs):
        raise AssertionError("qutrits to drop are entangled with the rest")
    keep = [q for q in range(t.n) if q not in set(qs)]
    out = []
    for g in rows[k:]:
        out.append(PauliOp(g.delta, tuple(g.v[q] for q in keep), tuple(g.w[q] for q in keep)))
    return Tableau(len(keep), tuple(out))


def diagram_to_tableau(d: Diagram) -> "Tableau | Zero":
    """Stabilizer tableau of a state diagram, or ZERO.

    Each edge becomes a cup on two fresh qutrits (its half-edges); every
    node is then contracted by post-selecting its half-edges onto the
    conjugate of the node tensor and discarding them.  Output boundaries
    keep their half-edge, reordered to the output order.
    """
    if d.inputs:
        raise ValueError("diagram_to_tableau expects a state (bend inputs first)")
    legs: dict[int, list[tuple[tuple[int, int], bool]]] = {n: [] for n in d.nodes}
    for e, (a, b) in enumerate(d.edges):
        legs[a].append(((e, 0), True))
        legs[b].append(((e, 1), False))
    internal = [n for n, node in d.nodes.items() if node.kind is not Kind.B]

    t = Tableau(0, ())
    col: dict[tuple[int, int], int] = {}
    labels: list[tuple[int, int]] = []
    pending = set(internal)
    allocated: set[int] = set()

    def allocate(e: int) -> None:
        nonlocal t
        if e in allocated:
            return
        allocated.add(e)
        t = _add_cup(t)
        col[(e, 0)] = len(labels)
        col[(e, 1)] = len(labels) + 1
        labels.extend([(e, 0), (e, 1)])

    while pending:
        # contract the node that opens the fewest new half-edges
        n = min(pending, key=lambda m: (sum(lab[0] not in allocated for lab, _ in legs[m]), m))
        pending.discard(n)
        node = d.nodes[n]
        ls = legs[n]
        st = _node_state(node, [out for _, out in ls])
        if st is ZERO:
            return ZERO
        for lab, _ in ls:
            allocate(lab[0])
        qs = [col[lab] for lab, _ in ls]
        for g in st.gens:
            res = postselect(t, _embed(g, t.n, qs))
            if res is ZERO:
                return ZERO
            t = res
        if qs:
            t = _drop(t, qs)
            gone = set(qs)
            labels = [lab for i, lab in enumerate(labels) if i not in gone]
            col = {lab: i for i, lab in enumerate(labels)}

    # every remaining half-edge belongs to an output boundary
    for o in d.outputs:
        allocate(next(e for e, (a, b) in enumerate(d.edges) if b == o))
    order = []
    for o in d.outputs:
        e = next(e for e, (a, b) in enumerate(d.edges) if b == o)
        order.append(col[(e, 1)])
    if len(order) != t.n:
        raise AssertionError("unexpected dangling half-edges")
    gens = tuple(PauliOp(g.delta, tuple(g.v[q] for q in order), tuple(g.w[q] for q in order)) for g in t.gens)
    return Tableau(len(order), gens)


# ---------------------------------------------------------------------------
# tableau to GS-LC


@functools.cache
def _diag_fix() -> dict[tuple[int, int], PhasePair]:
    """Map (delta, k) to the Z-phase gate sending X to w^delta X Z^k."""
    out = {}
    for p in ALL_PHASES:
        img = _nf_table(z_nf(p))[0]
        out[(img.delta, img.w[0])] = p
    if len(out) != 9:
        raise AssertionError("diagonal Cliffords do not realise every X image")
    return out


def extract_gslc(t: Tableau):
    """A GS-LC description of the tableau's state.

    H-dagger is applied at the smallest qutrit raising the X-block rank until
    that block is invertible; row reduction then leaves generators
    w^d_i X_i prod_j Z_j^W_ij with W symmetric, and one diagonal Clifford per
    qutrit removes d_i and W_ii.  The vertex operators undo those local gates.
    """
    from .gslc import GslcDiagram, WGraph

    n = t.n
    local = [identity_nf() for _ in range(n)]
    hdg = canonical(["Hdg"])
    rank = _x_rank(t)
    while rank < n:
        for q in range(n):
            cand = apply_local(t, q, hdg)
            r = _x_rank(cand)
            if r > rank:
                t, rank = cand, r
                local[q] = compose_nf(hdg, local[q])
                break
        else:  # pragma: no cover - impossible for a valid tableau
            raise AssertionError("no Hadamard raises the X rank")
    rows, _ = _reduce(list(t.gens), [(0, q) for q in range(n)])
    fix = _diag_fix()
    gamma = [[0] * n for _ in range(n)]
    for i, g in enumerate(rows):
        if g.v != tuple(int(q == i) for q in range(n)):
            raise AssertionError("X block did not reduce to the identity")
        p = fix[(-g.delta % 3, -g.w[i] % 3)]
        local[i] = compose_nf(z_nf(p), local[i])
        for j in range(n):
            if j != i:
                gamma[i][j] = g.w[j]
    for i in range(n):
        for j in range(n):
            if gamma[i][j] != gamma[j][i]:
                raise AssertionError("extracted adjacency is not symmetric")
    ops = tuple(inverse_nf(c) for c in local)
    return GslcDiagram(WGraph.from_matrix(gamma), ops)


# ---------------------------------------------------------------------------
# exact states, for checks


def _omega_rotate(u: np.ndarray, v: np.ndarray, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Multiply row i of u + v w by w**k[i]."""
    for step in (1, 2):
        sel = k >= step
        # w (u + v w) = -v + (u - v) w
        u[sel], v[sel] = -v[sel], u[sel] - v[sel]
    return u, v


def _pauli_apply(p: PauliOp, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """p @ (u + v w) without building the 3^n x 3^n matrix."""
    digits = np.array(list(itertools.product(range(3), repeat=p.n)), dtype=np.int64).reshape(-1, p.n)
    place = 3 ** np.arange(p.n - 1, -1, -1, dtype=np.int64)
    phase = (p.delta + digits @ np.array(p.w, dtype=np.int64)) % 3
    target = ((digits + np.array(p.v, dtype=np.int64)) % 3) @ place
    ru, rv = _omega_rotate(u.copy(), v.copy(), phase)
    out_u, out_v = np.empty_like(u), np.empty_like(v)
    out_u[target], out_v[target] = ru, rv
    return out_u, out_v


def tableau_state(t: "Tableau | Zero", n: int | None = None) -> ExactMatrix:
    """Column vector of the stabilized state (unnormalised).

    The projector prod_g (I + g + g^2) is applied to batches of basis
    vectors until one survives.
    """
    if t is ZERO:
        size = 3 ** (n or 0)
        return ExactMatrix.zeros(size, 1)
    dim = 3 ** t.n
    batch = 81
    for start in range(0, dim, batch):
        cols = np.arange(start, min(start + batch, dim))
        u = np.zeros((dim, len(cols)), dtype=object)
        u[cols, np.arange(len(cols))] = 1
        v = np.zeros_like(u)
        for g in t.gens:
            u1, v1 = _pauli_apply(g, u, v)
            u2, v2 = _pauli_apply(g, u1, v1)
            u, v = u + u1 + u2, v + v1 + v2
        for c in range(len(cols)):
            if np.any(u[:, c]) or np.any(v[:, c]):
                return ExactMatrix(u[:, c : c + 1].copy(), v[:, c : c + 1].copy())
    raise AssertionError("stabilizer projector vanished")  # pragma: no cover


def enumerate_stabilizer_states(n: int) -> set[Tableau]:
    """Canonical tableaus reachable from |0..0> under S, H and SUM."""
    start = canonicalize(tableau_init_zero(n))
    seen = {start}
    queue = deque([start])
    moves: list[tuple[str, tuple[int, ...]]] = []
    for q in range(n):
        moves += [("S", (q,)), ("H", (q,))]
    for a, b in itertools.permutations(range(n), 2):
        moves.append(("SUM", (a, b)))
    while queue:
        t = queue.popleft()
        for g, tg in moves:
            nt = canonicalize(apply_gate(t, g, tg))
            if nt not in seen:
                seen.add(nt)
                queue.append(nt)
    return seen
