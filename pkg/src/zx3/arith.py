"""Exact scalar and phase algebra for the qutrit stabilizer fragment.

Phases live in Z3 x Z3 (units of 2*pi/3).  Matrix entries live in the
Eisenstein integers Z[w], w = exp(2*pi*i/3), stored as integer pairs
(u, v) meaning u + v*w.  Nothing in this module rounds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "PhaseClass",
    "PhasePair",
    "ALL_PHASES",
    "P_SET",
    "N_SET",
    "M_SET",
    "Q_SET",
    "phase_add",
    "phase_class",
    "Eisenstein",
    "eis_mul",
    "ExactMatrix",
    "Verdict",
    "mat_equal_up_to_scalar",
    "omega_power",
]


def z3(x: int) -> int:
    """Reduce an integer into {0, 1, 2}."""
    return x % 3


class PhaseClass(enum.Enum):
    P = "P"
    N = "N"
    M = "M"


@dataclass(frozen=True, order=True, slots=True)
class PhasePair:
    """A phase label (alpha, beta) with both entries in Z3."""

    a: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        if self.a not in (0, 1, 2) or self.b not in (0, 1, 2):
            raise ValueError(f"phase entries must lie in {{0,1,2}}, got ({self.a},{self.b})")

    @classmethod
    def of(cls, a: int, b: int) -> "PhasePair":
        return cls(a % 3, b % 3)

    def __add__(self, other: "PhasePair") -> "PhasePair":
        return PhasePair((self.a + other.a) % 3, (self.b + other.b) % 3)

    def __neg__(self) -> "PhasePair":
        return PhasePair(-self.a % 3, -self.b % 3)

    def __sub__(self, other: "PhasePair") -> "PhasePair":
        return self + (-other)

    def scale(self, k: int) -> "PhasePair":
        return PhasePair(self.a * k % 3, self.b * k % 3)

    @property
    def klass(self) -> PhaseClass:
        return phase_class(self)

    def exponents(self) -> tuple[int, int, int]:
        """Powers of w on the three basis components: (0, a, b)."""
        return (0, self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


ALL_PHASES: tuple[PhasePair, ...] = tuple(PhasePair(a, b) for a in range(3) for b in range(3))
P_SET: tuple[PhasePair, ...] = (PhasePair(1, 1), PhasePair(2, 2))
N_SET: tuple[PhasePair, ...] = (PhasePair(1, 0), PhasePair(0, 1), PhasePair(2, 0), PhasePair(0, 2))
M_SET: tuple[PhasePair, ...] = (PhasePair(0, 0), PhasePair(2, 1), PhasePair(1, 2))
Q_SET: tuple[PhasePair, ...] = P_SET + N_SET


def phase_add(p: PhasePair, q: PhasePair) -> PhasePair:
    return p + q


def phase_class(p: PhasePair) -> PhaseClass:
    if p.a == p.b:
        return PhaseClass.M if p.a == 0 else PhaseClass.P
    if p.a == 0 or p.b == 0:
        return PhaseClass.N
    return PhaseClass.M


# ---------------------------------------------------------------------------
# Eisenstein integers


@dataclass(frozen=True, slots=True)
class Eisenstein:
    """u + v*w with w**2 = -1 - w."""

    u: int = 0
    v: int = 0

    def __add__(self, o: "Eisenstein | int") -> "Eisenstein":
        o = _lift(o)
        return Eisenstein(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self) -> "Eisenstein":
        return Eisenstein(-self.u, -self.v)

    def __sub__(self, o: "Eisenstein | int") -> "Eisenstein":
        return self + (-_lift(o))

    def __rsub__(self, o: int) -> "Eisenstein":
        return _lift(o) - self

    def __mul__(self, o: "Eisenstein | int") -> "Eisenstein":
        return eis_mul(self, _lift(o))

    __rmul__ = __mul__

    def conj(self) -> "Eisenstein":
        return Eisenstein(self.u - self.v, -self.v)

    def norm(self) -> int:
        return self.u * self.u - self.u * self.v + self.v * self.v

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_complex(self) -> complex:
        """Float view, for display only."""
        return self.u + self.v * complex(-0.5, 3 ** 0.5 / 2)

    def __str__(self) -> str:
        return f"{self.u}{self.v:+d}w"

    @classmethod
    def parse(cls, text: str) -> "Eisenstein":
        """Inverse of ``str``: accepts ``u+vw`` / ``u-vw``."""
        s = text.strip().replace(" ", "")
        if not s.endswith("w"):
            return cls(int(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            return cls(0, int(body) if body not in ("", "+", "-") else int(body + "1"))
        return cls(int(body[:cut]), int(body[cut:]))


def _lift(x: "Eisenstein | int") -> Eisenstein:
    if isinstance(x, Eisenstein):
        return x
    if isinstance(x, (int, np.integer)):
        return Eisenstein(int(x), 0)
    raise TypeError(f"cannot treat {type(x).__name__} as an Eisenstein integer")


def eis_mul(x: Eisenstein, y: Eisenstein) -> Eisenstein:
    """(u1 + v1 w)(u2 + v2 w) = (u1u2 - v1v2) + (u1v2 + v1u2 - v1v2) w."""
    vv = x.v * y.v
    return Eisenstein(x.u * y.u - vv, x.u * y.v + x.v * y.u - vv)


_OMEGA = (Eisenstein(1, 0), Eisenstein(0, 1), Eisenstein(-1, -1))


def omega_power(k: int) -> Eisenstein:
    return _OMEGA[k % 3]


# ---------------------------------------------------------------------------
# Matrices over Z[w]
#
# Stored as two integer arrays (the 1- and w-coefficients).  Object dtype keeps
# Python's arbitrary precision; nothing here ever wraps.


def _as_obj(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return np.array(a.tolist(), dtype=object).reshape(a.shape)


def pair_matmul(au: np.ndarray, av: np.ndarray, bu: np.ndarray, bv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Product of two Eisenstein matrices given by coefficient arrays."""
    uu = au.dot(bu)
    vv = av.dot(bv)
    return uu - vv, au.dot(bv) + av.dot(bu) - vv


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Dense rows x cols matrix over Z[w]."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u = _as_obj(np.asarray(self.u))
        v = _as_obj(np.asarray(self.v))
        if u.ndim != 2 or u.shape != v.shape:
            raise ValueError(f"coefficient arrays must share a 2-d shape, got {u.shape} and {v.shape}")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    # construction -----------------------------------------------------------
    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Eisenstein | int]) -> "ExactMatrix":
        flat = [_lift(e) for e in entries]
        if len(flat) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(flat)}")
        u = np.array([e.u for e in flat], dtype=object).reshape(rows, cols)
        v = np.array([e.v for e in flat], dtype=object).reshape(rows, cols)
        return cls(u, v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Eisenstein | int]]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls.from_entries(r, c, [e for row in rows for e in row])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(np.eye(n, dtype=int), np.zeros((n, n), dtype=int))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(np.zeros((rows, cols), dtype=int), np.zeros((rows, cols), dtype=int))

    @classmethod
    def diag(cls, entries: Sequence[Eisenstein | int]) -> "ExactMatrix":
        n = len(entries)
        out = [Eisenstein()] * (n * n)
        for i, e in enumerate(entries):
            out[i * n + i] = _lift(e)
        return cls.from_entries(n, n, out)

    # access -----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    @property
    def rows(self) -> int:
        return self.u.shape[0]

    @property
    def cols(self) -> int:
        return self.u.shape[1]

    def __getitem__(self, ij: tuple[int, int]) -> Eisenstein:
        return Eisenstein(int(self.u[ij]), int(self.v[ij]))

    def entries(self) -> Iterator[Eisenstein]:
        for a, b in zip(self.u.flat, self.v.flat):
            yield Eisenstein(int(a), int(b))

    def is_zero(self) -> bool:
        return not (self.u.any() or self.v.any())

    # algebra ----------------------------------------------------------------
    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return ExactMatrix(*pair_matmul(self.u, self.v, other.u, other.v))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.u - other.u, self.v - other.v)

    def scale(self, x: Eisenstein | int) -> "ExactMatrix":
        x = _lift(x)
        vv = self.v * x.v
        return ExactMatrix(self.u * x.u - vv, self.u * x.v + self.v * x.u - vv)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        uu = np.kron(self.u, other.u)
        vv = np.kron(self.v, other.v)
        return ExactMatrix(uu - vv, np.kron(self.u, other.v) + np.kron(self.v, other.u) - vv)

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(self.u - self.v, -self.v)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.u.T, self.v.T)

    def dagger(self) -> "ExactMatrix":
        return self.conj().transpose()

    def reshape(self, rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix(self.u.reshape(rows, cols), self.v.reshape(rows, cols))

    # comparison -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and bool((self.u == other.u).all() and (self.v == other.v).all())

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.u.flat), tuple(self.v.flat)))

    def fingerprint(self) -> tuple:
        """Scalar-invariant key: divide by the first nonzero entry in Q(w).

        Two nonzero matrices share a fingerprint iff they are proportional.
        """
        flat = list(self.entries())
        pivot = next((e for e in flat if e), None)
        if pivot is None:
            return (self.shape, None)
        pc, n = pivot.conj(), pivot.norm()
        key = []
        for e in flat:
            q = e * pc
            key.append((Fraction(q.u, n), Fraction(q.v, n)))
        return (self.shape, tuple(key))

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[e.u, e.v] for e in self.entries()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        return cls.from_entries(obj["rows"], obj["cols"], [Eisenstein(int(u), int(v)) for u, v in obj["entries"]])

    def __repr__(self) -> str:
        rows = []
        for i in range(self.rows):
            rows.append("[" + ", ".join(str(self[i, j]) for j in range(self.cols)) + "]")
        return f"ExactMatrix({self.rows}x{self.cols}: " + "; ".join(rows) + ")"


class Verdict(enum.Enum):
    EQUAL_UP_TO_SCALAR = "EqualUpToScalar"
    UNEQUAL = "Unequal"
    BOTH_ZERO = "BothZero"
    INCOMPARABLE = "Incomparable"


def mat_equal_up_to_scalar(A: ExactMatrix, B: ExactMatrix) -> Verdict:
    """Decide B = lambda*A for some nonzero lambda, by cross-multiplication."""
    if A.shape != B.shape:
        return Verdict.INCOMPARABLE
    a_zero, b_zero = A.is_zero(), B.is_zero()
    if a_zero and b_zero:
        return Verdict.BOTH_ZERO
    if a_zero or b_zero:
        return Verdict.UNEQUAL
    au, av = A.u.ravel(), A.v.ravel()
    bu, bv = B.u.ravel(), B.v.ravel()
    i0 = next(i for i in range(au.size) if au[i] or av[i])
    a0 = Eisenstein(int(au[i0]), int(av[i0]))
    b0 = Eisenstein(int(bu[i0]), int(bv[i0]))
    if not b0:
        return Verdict.UNEQUAL
    # a0 * B == b0 * A, vectorised
    lhs = ExactMatrix(bu.reshape(1, -1), bv.reshape(1, -1)).scale(a0)
    rhs = ExactMatrix(au.reshape(1, -1), av.reshape(1, -1)).scale(b0)
    return Verdict.EQUAL_UP_TO_SCALAR if lhs == rhs else Verdict.UNEQUAL
