"""The single-qutrit Clifford group (216 elements up to scalar).

Normal forms, written as matrix products (rightmost factor acts first):

    FORM5   Z(z) . X(x)                 z, x in A         81 elements
    FORM6   Z(z) . X(p) . Z(q)          z in A, p in P, q in Q   108
    FORM7   Z(z) . H . H . X(m)         z in A, m in M     27

Z(a) and X(a) are the 1->1 green and red spiders, H the Hadamard box.
The three families are disjoint and together hit every class exactly once;
``enumerate`` re-derives this against a breadth-first closure of <S, H>.

Group operations go through a scalar-invariant matrix fingerprint.
"""

from __future__ import annotations

import enum
import functools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .arith import ALL_PHASES, M_SET, P_SET, Q_SET, ExactMatrix, PhasePair
from .diagram import Kind, Node
from .semantics import generator_matrix

__all__ = [
    "Form",
    "CliffordNF",
    "Letter",
    "canonical",
    "compose_nf",
    "inverse_nf",
    "nf_to_matrix",
    "nf_to_nodes",
    "enumerate_nf",
    "closure_sgh",
    "table",
    "identity_nf",
    "z_nf",
    "x_nf",
    "in_R",
    "R_set",
    "r_red",
    "is_red",
    "is_diagonal",
    "RED_P0",
]


class Form(enum.IntEnum):
    FORM5 = 5
    FORM6 = 6
    FORM7 = 7


@dataclass(frozen=True, order=True, slots=True)
class CliffordNF:
    form: Form
    params: tuple[PhasePair, ...]

    def __post_init__(self) -> None:
        f, ps = self.form, self.params
        shapes = {
            Form.FORM5: (ALL_PHASES, ALL_PHASES),
            Form.FORM6: (ALL_PHASES, P_SET, Q_SET),
            Form.FORM7: (ALL_PHASES, M_SET),
        }[f]
        if len(ps) != len(shapes) or any(p not in allowed for p, allowed in zip(ps, shapes)):
            raise ValueError(f"bad parameters for {f.name}: {[str(p) for p in ps]}")

    @property
    def index(self) -> int:
        return _tables().index[self]

    def __str__(self) -> str:
        return f"{self.form.name}[" + ",".join(f"{p.a}{p.b}" for p in self.params) + "]"

    @classmethod
    def parse(cls, text: str) -> "CliffordNF":
        """Inverse of ``str``, e.g. ``FORM6[00,11,10]``."""
        head, _, body = text.strip().partition("[")
        body = body.rstrip("]")
        params = tuple(PhasePair(int(t[0]), int(t[1])) for t in body.split(",") if t)
        return cls(Form[head], params)


# letters of a Clifford word, in time order
Letter = Union[str, tuple[str, PhasePair]]

_Z = lambda p: generator_matrix(Node(Kind.Z, p), 1, 1)  # noqa: E731
_X = lambda p: generator_matrix(Node(Kind.X, p), 1, 1)  # noqa: E731
_H = generator_matrix(Node(Kind.H), 1, 1)
_HDAG = generator_matrix(Node(Kind.HDAG), 1, 1)


def letter_matrix(letter: Letter) -> ExactMatrix:
    if isinstance(letter, tuple):
        name, p = letter
        if name == "Zp":
            return _Z(p)
        if name == "Xp":
            return _X(p)
        raise ValueError(f"unknown Clifford letter {letter!r}")
    fixed = {
        "S": lambda: _Z(PhasePair(0, 1)),
        "Sdg": lambda: _Z(PhasePair(0, 2)),
        "H": lambda: _H,
        "Hdg": lambda: _HDAG,
        "X": lambda: _X(PhasePair(2, 1)),
        "Z": lambda: _Z(PhasePair(1, 2)),
    }
    if letter not in fixed:
        raise ValueError(f"unknown Clifford letter {letter!r}")
    return fixed[letter]()


def word_matrix(word: Sequence[Letter]) -> ExactMatrix:
    m = ExactMatrix.identity(3)
    for letter in word:
        m = letter_matrix(letter) @ m
    return m


def nf_to_matrix(c: CliffordNF) -> ExactMatrix:
    ps = c.params
    if c.form is Form.FORM5:
        return _Z(ps[0]) @ _X(ps[1])
    if c.form is Form.FORM6:
        return _Z(ps[0]) @ _X(ps[1]) @ _Z(ps[2])
    return _Z(ps[0]) @ _H @ _H @ _X(ps[1])


def nf_to_nodes(c: CliffordNF) -> list[Node]:
    """Generator nodes of the normal form in the order a wire meets them.

    Phase-free spiders are dropped.
    """
    ps = c.params
    if c.form is Form.FORM5:
        seq = [Node(Kind.X, ps[1]), Node(Kind.Z, ps[0])]
    elif c.form is Form.FORM6:
        seq = [Node(Kind.Z, ps[2]), Node(Kind.X, ps[1]), Node(Kind.Z, ps[0])]
    else:
        seq = [Node(Kind.X, ps[1]), Node(Kind.H), Node(Kind.H), Node(Kind.Z, ps[0])]
    return [n for n in seq if not (n.is_spider and n.phase == PhasePair())]


def _family() -> list[CliffordNF]:
    out = [CliffordNF(Form.FORM5, (z, x)) for z in ALL_PHASES for x in ALL_PHASES]
    out += [CliffordNF(Form.FORM6, (z, p, q)) for z in ALL_PHASES for p in P_SET for q in Q_SET]
    out += [CliffordNF(Form.FORM7, (z, m)) for z in ALL_PHASES for m in M_SET]
    return out


class _Tables:
    def __init__(self) -> None:
        self.elements = _family()
        self.matrices = [nf_to_matrix(c) for c in self.elements]
        self.index = {c: i for i, c in enumerate(self.elements)}
        self.by_fp: dict[tuple, int] = {}
        for i, m in enumerate(self.matrices):
            fp = m.fingerprint()
            if fp in self.by_fp:
                raise RuntimeError(f"normal forms {self.elements[self.by_fp[fp]]} and {self.elements[i]} coincide")
            self.by_fp[fp] = i
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}

    def lookup(self, m: ExactMatrix) -> int:
        try:
            return self.by_fp[m.fingerprint()]
        except KeyError:
            raise ValueError("matrix is not a single-qutrit Clifford up to scalar") from None

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._mul.get(key)
        if r is None:
            r = self.lookup(self.matrices[i] @ self.matrices[j])
            self._mul[key] = r
        return r

    def inv(self, i: int) -> int:
        r = self._inv.get(i)
        if r is None:
            # Clifford matrices here satisfy M M^dagger = c I with c > 0
            r = self.lookup(self.matrices[i].dagger())
            self._inv[i] = r
        return r


@functools.cache
def _tables() -> _Tables:
    return _Tables()


def table() -> list[CliffordNF]:
    """All 216 normal forms in a fixed order (index 0 is the identity)."""
    return list(_tables().elements)


def identity_nf() -> CliffordNF:
    return CliffordNF(Form.FORM5, (PhasePair(), PhasePair()))


def z_nf(p: PhasePair) -> CliffordNF:
    return CliffordNF(Form.FORM5, (p, PhasePair()))


def x_nf(p: PhasePair) -> CliffordNF:
    return CliffordNF(Form.FORM5, (PhasePair(), p))


def canonical(word: Sequence[Letter] | ExactMatrix) -> CliffordNF:
    """Normal form of a word (letters in time order) or of a 3x3 matrix."""
    m = word if isinstance(word, ExactMatrix) else word_matrix(word)
    t = _tables()
    return t.elements[t.lookup(m)]


def compose_nf(c1: CliffordNF, c2: CliffordNF) -> CliffordNF:
    """Normal form of the matrix product c1 . c2 (c2 acts first)."""
    t = _tables()
    return t.elements[t.mul(t.index[c1], t.index[c2])]


def compose_all(cs: Iterable[CliffordNF]) -> CliffordNF:
    out = identity_nf()
    for c in cs:
        out = compose_nf(out, c)
    return out


def inverse_nf(c: CliffordNF) -> CliffordNF:
    t = _tables()
    return t.elements[t.inv(t.index[c])]


def closure_sgh() -> tuple[list[ExactMatrix], int]:
    """BFS closure of <S, H> up to scalar; returns (elements, max word length)."""
    gens = [letter_matrix("S"), letter_matrix("H")]
    start = ExactMatrix.identity(3)
    seen = {start.fingerprint(): 0}
    elems = [start]
    queue = deque([(start, 0)])
    depth = 0
    while queue:
        m, d = queue.popleft()
        for g in gens:
            nm = g @ m
            fp = nm.fingerprint()
            if fp not in seen:
                seen[fp] = d + 1
                depth = max(depth, d + 1)
                elems.append(nm)
                queue.append((nm, d + 1))
    return elems, depth


def enumerate_nf() -> list[tuple[CliffordNF, ExactMatrix]]:
    """All 216 classes, cross-checked against the closure of <S, H>."""
    closure, _ = closure_sgh()
    t = _tables()
    fam = set(t.by_fp)
    clo = {m.fingerprint() for m in closure}
    if len(clo) != 216 or fam != clo:
        raise RuntimeError(
            f"normal-form family ({len(fam)}) and <S,H> closure ({len(clo)}) disagree"
        )
    return list(zip(t.elements, t.matrices))


# ---------------------------------------------------------------------------
# the vertex-operator set R and red classes

RED_P0 = PhasePair(1, 1)


def _plus_image(c: CliffordNF) -> list:
    m = nf_to_matrix(c)
    return [m[i, 0] + m[i, 1] + m[i, 2] for i in range(3)]


@functools.cache
def _red_flags() -> tuple[bool, ...]:
    flags = []
    for c in _tables().elements:
        col = _plus_image(c)
        flags.append(sum(1 for e in col if e) == 1)
    return tuple(flags)


def is_red(c: CliffordNF) -> bool:
    """True when c maps |+> to a Z-basis state (its diagram needs a red node)."""
    return _red_flags()[c.index]


def is_diagonal(c: CliffordNF) -> bool:
    return c.form is Form.FORM5 and c.params[1] == PhasePair()


@functools.cache
def _r_red() -> tuple[CliffordNF, ...]:
    return tuple(canonical(_X(RED_P0 + m) @ _Z(RED_P0)) for m in M_SET)


@functools.cache
def R_set() -> tuple[CliffordNF, ...]:
    """The 12 admissible vertex operators: 9 Z-phases and 3 red ones."""
    return tuple(z_nf(p) for p in ALL_PHASES) + _r_red()


def r_red() -> tuple[CliffordNF, ...]:
    return _r_red()


def in_R(c: CliffordNF) -> bool:
    return c in R_set()
