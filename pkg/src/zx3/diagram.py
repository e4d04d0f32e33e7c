"""Diagram syntax: open multigraphs of spiders and Hadamard boxes.

Edges are stored as ordered pairs ``(src, dst)``.  The order only matters
at X spiders, whose legs are either kets (edge leaves the spider) or bras
(edge enters it); everything else is symmetric.  Boundary conventions:
an input boundary is always the source of its edge and an output boundary
always the target.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arith import PhasePair

__all__ = [
    "Kind",
    "Node",
    "Diagram",
    "DiagramError",
    "DiagramBuilder",
    "validate",
    "compose",
    "tensor",
    "adjoint",
    "bend",
    "unbend",
    "parse",
    "serialize",
    "to_json",
    "from_json",
    "empty",
    "wire",
    "identity",
    "z_spider",
    "x_spider",
    "h_box",
    "hdag_box",
    "swap",
]


class Kind(enum.Enum):
    Z = "Z"
    X = "X"
    H = "H"
    HDAG = "HDAG"
    B = "B"


@dataclass(frozen=True, slots=True)
class Node:
    kind: Kind
    phase: PhasePair | None = None

    def __post_init__(self) -> None:
        spider = self.kind in (Kind.Z, Kind.X)
        if spider and self.phase is None:
            object.__setattr__(self, "phase", PhasePair())
        if not spider and self.phase is not None:
            raise ValueError(f"{self.kind.value} nodes carry no phase")

    @property
    def is_spider(self) -> bool:
        return self.kind in (Kind.Z, Kind.X)

    def __str__(self) -> str:
        if self.is_spider:
            return f"{self.kind.value} {self.phase.a} {self.phase.b}"
        return self.kind.value


class DiagramError(ValueError):
    """Malformed diagram or diagram text."""


@dataclass(frozen=True)
class Diagram:
    nodes: Mapping[int, Node]
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", dict(sorted(self.nodes.items())))
        object.__setattr__(self, "edges", tuple(sorted((int(a), int(b)) for a, b in self.edges)))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        key = (tuple(self.nodes.items()), self.edges, self.inputs, self.outputs)
        object.__setattr__(self, "_key", key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    def degree(self, n: int) -> int:
        return sum((a == n) + (b == n) for a, b in self.edges)

    def max_id(self) -> int:
        return max(self.nodes, default=-1)

    def relabel(self, offset: int) -> "Diagram":
        return Diagram(
            {k + offset: v for k, v in self.nodes.items()},
            tuple((a + offset, b + offset) for a, b in self.edges),
            tuple(i + offset for i in self.inputs),
            tuple(o + offset for o in self.outputs),
        )

    def compact(self) -> "Diagram":
        """Renumber node ids to 0..N-1 preserving their order."""
        m = {old: new for new, old in enumerate(self.nodes)}
        return Diagram(
            {m[k]: v for k, v in self.nodes.items()},
            tuple((m[a], m[b]) for a, b in self.edges),
            tuple(m[i] for i in self.inputs),
            tuple(m[o] for o in self.outputs),
        )

    def __str__(self) -> str:
        return serialize(self)


# ---------------------------------------------------------------------------
# validation


def validate(d: Diagram) -> list[str]:
    """Return a list of violations; empty means the diagram is well formed."""
    errs: list[str] = []
    deg: Counter[int] = Counter()
    for a, b in d.edges:
        for end in (a, b):
            if end not in d.nodes:
                errs.append(f"edge ({a},{b}): unknown node {end}")
        deg[a] += 1
        deg[b] += 1
    ins, outs = set(d.inputs), set(d.outputs)
    if len(ins) != len(d.inputs):
        errs.append("duplicate id in inputs")
    if len(outs) != len(d.outputs):
        errs.append("duplicate id in outputs")
    for n in sorted(ins & outs):
        errs.append(f"boundary {n} listed as both input and output")
    for n in sorted(ins | outs):
        if n not in d.nodes:
            errs.append(f"boundary list names unknown node {n}")
        elif d.nodes[n].kind is not Kind.B:
            errs.append(f"node {n} in boundary list is not a boundary")
    for n, node in d.nodes.items():
        k = node.kind
        if k in (Kind.H, Kind.HDAG) and deg[n] != 2:
            errs.append(f"node {n}: H arity must be 2, got {deg[n]}")
        elif k is Kind.B:
            if deg[n] != 1:
                errs.append(f"node {n}: boundary degree must be 1, got {deg[n]}")
            if n not in ins and n not in outs:
                errs.append(f"boundary {n} is in neither inputs nor outputs")
    for a, b in d.edges:
        if a in outs:
            errs.append(f"edge ({a},{b}): output boundary {a} must be the edge target")
        if b in ins:
            errs.append(f"edge ({a},{b}): input boundary {b} must be the edge source")
    return errs


def check(d: Diagram) -> Diagram:
    errs = validate(d)
    if errs:
        raise DiagramError("; ".join(errs))
    return d


# ---------------------------------------------------------------------------
# builder


class DiagramBuilder:
    """Mutable helper for assembling diagrams node by node."""

    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.edges: list[tuple[int, int]] = []
        self.inputs: list[int] = []
        self.outputs: list[int] = []

    def add(self, kind: Kind, phase: PhasePair | None = None) -> int:
        nid = len(self.nodes)
        while nid in self.nodes:
            nid += 1
        self.nodes[nid] = Node(kind, phase)
        return nid

    def z(self, phase: PhasePair = PhasePair()) -> int:
        return self.add(Kind.Z, phase)

    def x(self, phase: PhasePair = PhasePair()) -> int:
        return self.add(Kind.X, phase)

    def h(self) -> int:
        return self.add(Kind.H)

    def hdag(self) -> int:
        return self.add(Kind.HDAG)

    def input(self) -> int:
        n = self.add(Kind.B)
        self.inputs.append(n)
        return n

    def output(self) -> int:
        n = self.add(Kind.B)
        self.outputs.append(n)
        return n

    def edge(self, a: int, b: int) -> None:
        self.edges.append((a, b))

    def chain(self, *ids: int) -> None:
        for a, b in zip(ids, ids[1:]):
            self.edge(a, b)

    def build(self) -> Diagram:
        return check(Diagram(self.nodes, tuple(self.edges), tuple(self.inputs), tuple(self.outputs)))


def empty() -> Diagram:
    return Diagram({}, ())


def wire() -> Diagram:
    return identity(1)


def identity(n: int) -> Diagram:
    b = DiagramBuilder()
    pairs = [(b.input(), None) for _ in range(n)]
    for i, _ in pairs:
        b.edge(i, b.output())
    return b.build()


def _spider(kind: Kind, n_in: int, n_out: int, phase: PhasePair) -> Diagram:
    b = DiagramBuilder()
    ins = [b.input() for _ in range(n_in)]
    s = b.add(kind, phase)
    for i in ins:
        b.edge(i, s)
    for _ in range(n_out):
        b.edge(s, b.output())
    return b.build()


def z_spider(n_in: int, n_out: int, phase: PhasePair = PhasePair()) -> Diagram:
    return _spider(Kind.Z, n_in, n_out, phase)


def x_spider(n_in: int, n_out: int, phase: PhasePair = PhasePair()) -> Diagram:
    return _spider(Kind.X, n_in, n_out, phase)


def h_box() -> Diagram:
    b = DiagramBuilder()
    b.chain(b.input(), b.h(), b.output())
    return b.build()


def hdag_box() -> Diagram:
    b = DiagramBuilder()
    b.chain(b.input(), b.hdag(), b.output())
    return b.build()


def swap(perm: Sequence[int] = (1, 0)) -> Diagram:
    """Wire permutation: output ``j`` is connected to input ``perm[j]``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError(f"not a permutation: {list(perm)}")
    b = DiagramBuilder()
    ins = [b.input() for _ in range(n)]
    for j in range(n):
        b.edge(ins[perm[j]], b.output())
    return b.build()


# ---------------------------------------------------------------------------
# combinators


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    d2 = d2.relabel(d1.max_id() + 1 - min(d2.nodes, default=0))
    return Diagram(
        {**d1.nodes, **d2.nodes},
        d1.edges + d2.edges,
        d1.inputs + d2.inputs,
        d1.outputs + d2.outputs,
    ).compact()


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """``d2`` after ``d1``: output i of d1 is plugged into input i of d2."""
    if len(d1.outputs) != len(d2.inputs):
        raise DiagramError(f"arity mismatch: {len(d1.outputs)} outputs vs {len(d2.inputs)} inputs")
    d2 = d2.relabel(d1.max_id() + 1 - min(d2.nodes, default=0))
    nodes = {**d1.nodes, **d2.nodes}
    edges = list(d1.edges + d2.edges)
    for o, i in zip(d1.outputs, d2.inputs):
        into = next(k for k, e in enumerate(edges) if e[1] == o)
        src = edges[into][0]
        edges.pop(into)
        out_of = next(k for k, e in enumerate(edges) if e[0] == i)
        dst = edges[out_of][1]
        edges.pop(out_of)
        edges.append((src, dst))
        del nodes[o], nodes[i]
    return Diagram(nodes, tuple(edges), d1.inputs, d2.outputs).compact()


def adjoint(d: Diagram) -> Diagram:
    flip = {Kind.H: Kind.HDAG, Kind.HDAG: Kind.H}
    nodes = {}
    for k, n in d.nodes.items():
        if n.is_spider:
            nodes[k] = Node(n.kind, -n.phase)
        else:
            nodes[k] = Node(flip.get(n.kind, n.kind))
    return Diagram(nodes, tuple((b, a) for a, b in d.edges), d.outputs, d.inputs)


def bend(d: Diagram) -> Diagram:
    """Map-state duality: every input becomes an extra output.

    New output order is the original outputs followed by the bent inputs,
    so the state's amplitude at (o, i) is the matrix entry [o, i].
    """
    nodes = dict(d.nodes)
    edges = list(d.edges)
    nxt = d.max_id() + 1
    for i in d.inputs:
        k = next(k for k, e in enumerate(edges) if e[0] == i)
        dst = edges[k][1]
        cup = nxt
        nxt += 1
        nodes[cup] = Node(Kind.Z, PhasePair())
        edges[k] = (cup, dst)
        edges.append((cup, i))
    return Diagram(nodes, tuple(edges), (), d.outputs + d.inputs).compact()


def unbend(d: Diagram, k: int) -> Diagram:
    """Turn the last ``k`` outputs back into inputs (cap with a green 2->0)."""
    if not 0 <= k <= len(d.outputs):
        raise DiagramError(f"cannot unbend {k} of {len(d.outputs)} outputs")
    if k == 0:
        return d
    nodes = dict(d.nodes)
    edges = list(d.edges)
    nxt = d.max_id() + 1
    new_inputs = []
    for o in d.outputs[len(d.outputs) - k:]:
        j = next(j for j, e in enumerate(edges) if e[1] == o)
        src = edges[j][0]
        cap = nxt
        nxt += 1
        nodes[cap] = Node(Kind.Z, PhasePair())
        edges[j] = (src, cap)
        edges.append((o, cap))
        new_inputs.append(o)
    return Diagram(nodes, tuple(edges), d.inputs + tuple(new_inputs), d.outputs[: len(d.outputs) - k]).compact()


# ---------------------------------------------------------------------------
# text format

_KINDS = {"Z": Kind.Z, "X": Kind.X, "H": Kind.H, "HDAG": Kind.HDAG, "B": Kind.B}


def serialize(d: Diagram) -> str:
    lines = [f"node {k} {n}" for k, n in d.nodes.items()]
    lines += [f"edge {a} {b}" for a, b in d.edges]
    lines.append("inputs" + "".join(f" {i}" for i in d.inputs))
    lines.append("outputs" + "".join(f" {o}" for o in d.outputs))
    return "\n".join(lines) + "\n"


def _tokens(line: str) -> list[tuple[int, str]]:
    out, col = [], 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((col + 1, tok))
        col += len(tok)
    return out


def parse(text: str) -> Diagram:
    """Parse the line-based text format.

    ``swap <in...> -> <out...>`` is accepted as sugar: it creates fresh
    boundaries wired as a permutation (identity when already in order).
    """
    nodes: dict[int, Node] = {}
    edges: list[tuple[int, int]] = []
    inputs: tuple[int, ...] | None = None
    outputs: tuple[int, ...] | None = None

    def fail(ln: int, col: int, msg: str) -> DiagramError:
        return DiagramError(f"line {ln}, col {col}: {msg}")

    def ident(ln: int, col: int, tok: str) -> int:
        if not tok.isdigit():
            raise fail(ln, col, f"node id must be a non-negative integer, got {tok!r}")
        return int(tok)

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, head = toks[0]
        args = toks[1:]
        if head == "node":
            if len(args) < 2:
                raise fail(ln, col, "expected 'node <id> <kind> ...'")
            nid = ident(ln, args[0][0], args[0][1])
            kcol, ktok = args[1]
            kind = _KINDS.get(ktok)
            if kind is None:
                raise fail(ln, kcol, f"unknown node kind {ktok!r}")
            if nid in nodes:
                raise fail(ln, args[0][0], f"duplicate node id {nid}")
            rest = args[2:]
            if kind in (Kind.Z, Kind.X):
                if len(rest) != 2:
                    raise fail(ln, kcol, f"{ktok} spider needs two phase entries")
                ph = []
                for pcol, ptok in rest:
                    if ptok not in ("0", "1", "2"):
                        raise fail(ln, pcol, f"stabilizer phase required (0, 1 or 2), got {ptok!r}")
                    ph.append(int(ptok))
                nodes[nid] = Node(kind, PhasePair(*ph))
            else:
                if rest:
                    raise fail(ln, rest[0][0], f"{ktok} node takes no arguments")
                nodes[nid] = Node(kind)
        elif head == "edge":
            if len(args) != 2:
                raise fail(ln, col, "expected 'edge <id> <id>'")
            edges.append((ident(ln, *args[0]), ident(ln, *args[1])))
        elif head in ("inputs", "outputs"):
            ids = tuple(ident(ln, c, t) for c, t in args)
            if head == "inputs":
                if inputs is not None:
                    raise fail(ln, col, "inputs declared twice")
                inputs = ids
            else:
                if outputs is not None:
                    raise fail(ln, col, "outputs declared twice")
                outputs = ids
        elif head == "swap":
            toks_s = [t for _, t in args]
            if "->" not in toks_s:
                raise fail(ln, col, "expected 'swap <src...> -> <dst...>'")
            cut = toks_s.index("->")
            src = [ident(ln, c, t) for c, t in args[:cut]]
            dst = [ident(ln, c, t) for c, t in args[cut + 1:]]
            if len(src) != len(dst):
                raise fail(ln, col, "swap needs as many sources as targets")
            edges.extend(zip(src, dst))
        else:
            raise fail(ln, col, f"unknown declaration {head!r}")

    d = Diagram(nodes, tuple(edges), inputs or (), outputs or ())
    errs = validate(d)
    if errs:
        raise DiagramError("invalid diagram: " + "; ".join(errs))
    return d


def to_json(d: Diagram) -> dict:
    return {
        "nodes": [
            {"id": k, "kind": n.kind.value, **({"phase": [n.phase.a, n.phase.b]} if n.is_spider else {})}
            for k, n in d.nodes.items()
        ],
        "edges": [[a, b] for a, b in d.edges],
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
    }


def from_json(obj: dict | str) -> Diagram:
    if isinstance(obj, str):
        obj = json.loads(obj)
    nodes = {}
    for rec in obj["nodes"]:
        kind = _KINDS.get(rec["kind"])
        if kind is None:
            raise DiagramError(f"node {rec['id']}: unknown node kind {rec['kind']!r}")
        phase = None
        if kind in (Kind.Z, Kind.X):
            a, b = rec.get("phase", (0, 0))
            if a not in (0, 1, 2) or b not in (0, 1, 2):
                raise DiagramError(f"node {rec['id']}: stabilizer phase required")
            phase = PhasePair(a, b)
        nodes[int(rec["id"])] = Node(kind, phase)
    d = Diagram(nodes, tuple(tuple(e) for e in obj["edges"]), tuple(obj["inputs"]), tuple(obj["outputs"]))
    errs = validate(d)
    if errs:
        raise DiagramError("invalid diagram: " + "; ".join(errs))
    return d


def load(text: str) -> Diagram:
    """Parse either the text format or its JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(json.loads(stripped))
    return parse(text)
