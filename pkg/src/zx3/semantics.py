"""Standard interpretation by exact tensor contraction.

Generators are unnormalised (no 1/sqrt(3) factors), so every diagram
evaluates to a matrix over Z[w].  Rows index outputs, columns inputs; the
leftmost boundary is the most significant ternary digit.

Tensors are carried as pairs of integer arrays (1- and w-coefficients).  The
contraction starts in int64 and switches to Python integers as soon as a
bound on the next product could exceed 2**62.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .arith import ExactMatrix, Verdict, mat_equal_up_to_scalar
from .diagram import Diagram, Kind, Node

__all__ = [
    "SizeCapError",
    "size_cap",
    "generator_matrix",
    "generator_tensor",
    "interpret",
    "semantically_equal",
    "Verdict",
]

DEFAULT_SIZE_CAP = 10
_LIMIT = 1 << 62


class SizeCapError(RuntimeError):
    """An intermediate tensor would exceed the configured number of legs."""


def size_cap() -> int:
    raw = os.environ.get("ZX3_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise SizeCapError(f"ZX3_SIZE_CAP must be an integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# generator tensors


def _omega_counts(exps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum over the last axis of w**exps, as (u, v) coefficient arrays."""
    e = exps % 3
    c0 = (e == 0).sum(axis=-1)
    c1 = (e == 1).sum(axis=-1)
    c2 = (e == 2).sum(axis=-1)
    return (c0 - c2).astype(np.int64), (c1 - c2).astype(np.int64)


def generator_tensor(node: Node, legs: list[bool]) -> tuple[np.ndarray, np.ndarray]:
    """Tensor of one node; ``legs[i]`` is True for an output (ket) leg.

    The result has one axis of length 3 per leg, in the given order.
    """
    d = len(legs)
    shape = (3,) * d
    idx = np.indices(shape).reshape(d, -1).T if d else np.zeros((1, 0), dtype=int)
    kind = node.kind
    if kind is Kind.Z:
        ph = node.phase.exponents()
        if d == 0:
            u, v = _omega_counts(np.array([list(ph)]))
            return u.reshape(()), v.reshape(())
        u = np.zeros(3 ** d, dtype=np.int64)
        v = np.zeros(3 ** d, dtype=np.int64)
        for j in range(3):
            flat = sum(j * 3 ** (d - 1 - i) for i in range(d))
            u[flat], v[flat] = ((1, 0), (0, 1), (-1, -1))[ph[j]]
        return u.reshape(shape), v.reshape(shape)
    if kind is Kind.X:
        ph = node.phase.exponents()
        sign = np.array([1 if out else -1 for out in legs], dtype=int)
        s = idx @ sign if d else np.zeros(1, dtype=int)
        exps = np.stack([ph[k] + k * s for k in range(3)], axis=-1)
        u, v = _omega_counts(exps)
        return u.reshape(shape), v.reshape(shape)
    if kind in (Kind.H, Kind.HDAG):
        if d != 2:
            raise ValueError(f"{kind.value} node needs exactly 2 legs, got {d}")
        sgn = 1 if kind is Kind.H else -1
        u, v = _omega_counts((sgn * idx[:, 0] * idx[:, 1])[:, None])
        return u.reshape(shape), v.reshape(shape)
    raise ValueError(f"no tensor for {kind.value} node")


def generator_matrix(node: Node, in_degree: int, out_degree: int) -> ExactMatrix:
    """3**out x 3**in matrix of a single generator."""
    u, v = generator_tensor(node, [False] * in_degree + [True] * out_degree)
    # axes are (inputs..., outputs...); rows must be outputs
    perm = list(range(in_degree, in_degree + out_degree)) + list(range(in_degree))
    u = np.transpose(u, perm).reshape(3 ** out_degree, 3 ** in_degree)
    v = np.transpose(v, perm).reshape(3 ** out_degree, 3 ** in_degree)
    return ExactMatrix(u, v)


# ---------------------------------------------------------------------------
# contraction


@dataclass
class _T:
    u: np.ndarray
    v: np.ndarray
    labels: list

    def bound(self) -> int:
        if self.u.size == 0:
            return 0
        return max(int(np.abs(self.u).max()), int(np.abs(self.v).max()))


def _obj(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return np.array(a.tolist(), dtype=object).reshape(a.shape)


def _trace_repeats(t: _T) -> _T:
    """Contract every label that appears twice on the same tensor (self-loops)."""
    while True:
        seen: dict = {}
        pair = None
        for i, lab in enumerate(t.labels):
            if lab in seen:
                pair = (seen[lab], i)
                break
            seen[lab] = i
        if pair is None:
            return t
        i, j = pair
        u = np.diagonal(t.u, axis1=i, axis2=j).sum(axis=-1)
        v = np.diagonal(t.v, axis1=i, axis2=j).sum(axis=-1)
        labels = [lab for k, lab in enumerate(t.labels) if k not in (i, j)]
        t = _T(np.asarray(u), np.asarray(v), labels)


def _contract_pair(a: _T, b: _T) -> _T:
    shared = [lab for lab in a.labels if lab in b.labels]
    ax_a = [a.labels.index(lab) for lab in shared]
    ax_b = [b.labels.index(lab) for lab in shared]
    k = 3 ** len(shared)
    au, av, bu, bv = a.u, a.v, b.u, b.v
    if au.dtype != object or bu.dtype != object:
        if 3 * k * max(a.bound(), 1) * max(b.bound(), 1) >= _LIMIT:
            au, av, bu, bv = _obj(au), _obj(av), _obj(bu), _obj(bv)
    axes = (ax_a, ax_b)
    uu = np.tensordot(au, bu, axes=axes)
    vv = np.tensordot(av, bv, axes=axes)
    uv = np.tensordot(au, bv, axes=axes)
    vu = np.tensordot(av, bu, axes=axes)
    labels = [lab for lab in a.labels if lab not in shared] + [lab for lab in b.labels if lab not in shared]
    return _T(np.asarray(uu - vv), np.asarray(uv + vu - vv), labels)


def _network(d: Diagram) -> tuple[list[_T], list, list]:
    """Build node tensors; return (tensors, output labels, input labels)."""
    legs: dict[int, list[tuple[tuple, bool]]] = {n: [] for n in d.nodes}
    boundary_label: dict[int, tuple] = {}
    tensors: list[_T] = []
    for e, (a, b) in enumerate(d.edges):
        ka, kb = d.nodes[a].kind, d.nodes[b].kind
        if ka is Kind.B and kb is Kind.B:
            # bare wire between two boundaries
            tensors.append(_T(np.eye(3, dtype=np.int64), np.zeros((3, 3), dtype=np.int64), [(e, 0), (e, 1)]))
            boundary_label[a] = (e, 0)
            boundary_label[b] = (e, 1)
            continue
        lab = (e, 0)
        if ka is Kind.B:
            boundary_label[a] = lab
        else:
            legs[a].append((lab, True))
        if kb is Kind.B:
            boundary_label[b] = lab
        else:
            legs[b].append((lab, False))
    for n, node in d.nodes.items():
        if node.kind is Kind.B:
            continue
        ls = legs[n]
        u, v = generator_tensor(node, [out for _, out in ls])
        tensors.append(_trace_repeats(_T(u, v, [lab for lab, _ in ls])))
    outs = [boundary_label[o] for o in d.outputs]
    ins = [boundary_label[i] for i in d.inputs]
    return tensors, outs, ins


def interpret(d: Diagram, cap: int | None = None) -> ExactMatrix:
    """Exact matrix of ``d`` (3**outputs x 3**inputs)."""
    if cap is None:
        cap = size_cap()
    tensors, outs, ins = _network(d)
    open_labels = set(outs) | set(ins)
    if len(open_labels) > cap:
        raise SizeCapError(f"{len(open_labels)} open wires exceed the size cap {cap}")
    for t in tensors:
        if len(t.labels) > cap:
            raise SizeCapError(f"a generator with {len(t.labels)} legs exceeds the size cap {cap}")

    while len(tensors) > 1:
        best = None
        for i, j in itertools.combinations(range(len(tensors)), 2):
            a, b = tensors[i], tensors[j]
            shared = len(set(a.labels) & set(b.labels))
            rank = len(a.labels) + len(b.labels) - 2 * shared
            # prefer real contractions; outer products only when nothing is shared
            key = (shared == 0, rank, i, j)
            if best is None or key < best[0]:
                best = (key, i, j)
        (_, rank, _, _), i, j = best
        if rank > cap:
            raise SizeCapError(f"intermediate tensor with {rank} legs exceeds the size cap {cap}")
        merged = _trace_repeats(_contract_pair(tensors[i], tensors[j]))
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [merged]

    if tensors:
        final = tensors[0]
    else:
        final = _T(np.array(1, dtype=np.int64), np.array(0, dtype=np.int64), [])
    order = outs + ins
    perm = [final.labels.index(lab) for lab in order]
    u = np.transpose(final.u, perm).reshape(3 ** len(outs), 3 ** len(ins))
    v = np.transpose(final.v, perm).reshape(3 ** len(outs), 3 ** len(ins))
    return ExactMatrix(u, v)


def semantically_equal(d1: Diagram, d2: Diagram) -> Verdict:
    if d1.arity != d2.arity:
        return Verdict.INCOMPARABLE
    return mat_equal_up_to_scalar(interpret(d1), interpret(d2))


def state_vector(d: Diagram) -> ExactMatrix:
    """Column vector of a state diagram (no inputs)."""
    if d.inputs:
        raise ValueError("state_vector expects a diagram without inputs")
    return interpret(d)

