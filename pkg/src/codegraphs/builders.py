"""Constructors for generator, parity-check and product trellis realizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .code import BlockStructure, LinearCode
from .duality import dualize
from .errors import PreconditionError
from .linalg import MatrixGF, PrimeField
from .realization import ConstraintCode, Realization, StateVar, SymbolVar, repetition_code

__all__ = [
    "SpannedGenerator",
    "generator_realization",
    "parity_check_realization",
    "product_trellis",
    "duality_check_generator_pc",
]


def _as_matrix(field_or_p, rows) -> MatrixGF:
    if isinstance(rows, MatrixGF):
        return rows
    field = field_or_p if isinstance(field_or_p, PrimeField) else PrimeField(field_or_p)
    return MatrixGF(field, rows)


def _check_rows(m: MatrixGF, what: str) -> None:
    if m.rows == 0 or m.cols == 0:
        raise PreconditionError(f"{what} matrix must have at least one row and one column")
    for i in range(m.rows):
        if not m.array[i].any():
            raise PreconditionError(f"{what} row {i} is zero")


def _symbols(n: int) -> tuple[SymbolVar, ...]:
    return tuple(SymbolVar(f"A{k}") for k in range(n))


def _replicas(m: MatrixGF) -> list[tuple[int, int]]:
    return [(i, k) for i in range(m.rows) for k in range(m.cols) if m.array[i, k]]


def generator_realization(gens: MatrixGF, p: int | None = None) -> Realization:
    """Realization of the row space of ``gens``.

    Row i becomes an equality constraint ``row{i}`` holding the coefficient of
    generator i on its replicas ``e{i}_{k}`` (one per nonzero entry); column k
    becomes a constraint ``col{k}`` enforcing a_k = sum_i g_ik * e{i}_{k}.
    """
    g = _as_matrix(p, gens)
    _check_rows(g, "generator")
    field = g.field
    reps = _replicas(g)
    states = tuple(StateVar(f"e{i}_{k}") for i, k in reps)
    constraints = []
    for i in range(g.rows):
        ports = tuple(f"e{i}_{k}" for ii, k in reps if ii == i)
        constraints.append(ConstraintCode(f"row{i}", ports, repetition_code(field, ports, 1)))
    for k in range(g.cols):
        rows_k = [i for i, kk in reps if kk == k]
        ports = (f"A{k}",) + tuple(f"e{i}_{k}" for i in rows_k)
        structure = BlockStructure(tuple((v, 1) for v in ports))
        words = np.zeros((len(rows_k), len(ports)), dtype=np.int64)
        for t, i in enumerate(rows_k):
            words[t, 0] = g.array[i, k]
            words[t, 1 + t] = 1
        constraints.append(ConstraintCode(f"col{k}", ports, LinearCode(structure, MatrixGF(field, words, cols=len(ports)))))
    return Realization(field, _symbols(g.cols), states, tuple(constraints))


def parity_check_realization(checks: MatrixGF, p: int | None = None) -> Realization:
    """Realization of the null space of ``checks``.

    Row j becomes a zero-sum constraint ``row{j}`` over replicas ``e{j}_{k}``;
    column k becomes ``col{k}`` replicating a_k into the multiples a_k * h_jk.
    The ids match :func:`generator_realization`, whose dual this is.
    """
    h = _as_matrix(p, checks)
    _check_rows(h, "check")
    field = h.field
    reps = _replicas(h)
    states = tuple(StateVar(f"e{j}_{k}") for j, k in reps)
    constraints = []
    for j in range(h.rows):
        ports = tuple(f"e{j}_{k}" for jj, k in reps if jj == j)
        structure = BlockStructure(tuple((v, 1) for v in ports))
        ones = MatrixGF(field, [[1] * len(ports)], cols=len(ports))
        zero_sum = LinearCode(structure, ones).dual()
        constraints.append(ConstraintCode(f"row{j}", ports, zero_sum))
    for k in range(h.cols):
        rows_k = [j for j, kk in reps if kk == k]
        ports = (f"A{k}",) + tuple(f"e{j}_{k}" for j in rows_k)
        structure = BlockStructure(tuple((v, 1) for v in ports))
        word = [1] + [int(h.array[j, k]) for j in rows_k]
        constraints.append(ConstraintCode(f"col{k}", ports, LinearCode(structure, MatrixGF(field, [word], cols=len(ports)))))
    return Realization(field, _symbols(h.cols), states, tuple(constraints))


def duality_check_generator_pc(gens: MatrixGF, p: int | None = None) -> bool:
    """True when the dual of the generator realization is the parity-check realization."""
    g = _as_matrix(p, gens)
    dual = dualize(generator_realization(g))
    pc = parity_check_realization(g)
    if dual.symbols != pc.symbols or dual.states != pc.states:
        return False
    if dual.constraint_ids != pc.constraint_ids:
        return False
    for a, b in zip(dual.constraints, pc.constraints):
        if set(a.ports) != set(b.ports):
            return False
        if a.code.project(b.port_labels) != b.code:
            return False
    return True


@dataclass(frozen=True)
class SpannedGenerator:
    """A codeword with a circular span ``start..end`` of symbol positions.

    The span runs from ``start`` forward to ``end`` inclusive, wrapping past
    the last position when ``start > end``.  ``whole_axis`` marks a span
    covering the entire cycle, active at every state.
    """

    word: tuple[int, ...]
    start: int
    end: int
    whole_axis: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", tuple(int(x) for x in self.word))

    def positions(self, n: int) -> list[int]:
        if self.whole_axis:
            return list(range(n))
        length = (self.end - self.start) % n + 1
        return [(self.start + t) % n for t in range(length)]

    def active_states(self, n: int) -> list[int]:
        """Indices k of states S_k strictly inside the span (S_k precedes A_k)."""
        if self.whole_axis:
            return list(range(n))
        return self.positions(n)[1:]


def product_trellis(
    n: int, gens: Sequence[SpannedGenerator], p: int = 2, tail_biting: bool = True
) -> Realization:
    """Product trellis of one-dimensional atomic trajectories.

    Constraint ``C{k}`` has ports (S_k, A_k, S_{k+1}); the state S_k has one
    coordinate per generator whose span crosses it, allotted in generator
    order.  Each generator contributes the trajectory a = word with a unit
    state vector in its own slot at every active state, and each constraint
    code is the span of these trajectories read through its ports.  Without
    ``tail_biting`` the graph is a path with trivial end states S_0 and S_n.
    """
    if n < 1:
        raise PreconditionError("trellis length must be at least 1")
    field = PrimeField(p)
    n_states = n if tail_biting else n + 1
    slots: list[dict[int, int]] = [{} for _ in range(n_states)]
    for gi, g in enumerate(gens):
        if len(g.word) != n:
            raise PreconditionError(f"generator {gi} has length {len(g.word)}, expected {n}")
        if not tail_biting and (g.whole_axis or g.start > g.end):
            raise PreconditionError(f"generator {gi}: wrapping spans need a tail-biting trellis")
        inside = set(g.positions(n))
        outside = [k for k, x in enumerate(g.word) if x % p and k not in inside]
        if outside:
            raise PreconditionError(f"generator {gi}: span does not cover positions {outside}")
        for k in g.active_states(n):
            slots[k][gi] = len(slots[k])
    dims = [len(s) for s in slots]

    def nxt(k: int) -> int:
        return (k + 1) % n if tail_biting else k + 1

    constraints = []
    for k in range(n):
        ports = (f"S{k}", f"A{k}", f"S{nxt(k)}")
        labels = (ports[0], ports[1], ports[2] + "'" if ports[2] == ports[0] else ports[2])
        structure = BlockStructure(((labels[0], dims[k]), (labels[1], 1), (labels[2], dims[nxt(k)])))
        rows = []
        for gi, g in enumerate(gens):
            left = np.zeros(dims[k], dtype=np.int64)
            right = np.zeros(dims[nxt(k)], dtype=np.int64)
            if gi in slots[k]:
                left[slots[k][gi]] = 1
            if gi in slots[nxt(k)]:
                right[slots[nxt(k)][gi]] = 1
            rows.append(np.concatenate([left, [g.word[k]], right]))
        code = LinearCode(structure, MatrixGF(field, rows, cols=structure.total_dim))
        constraints.append(ConstraintCode(f"C{k}", ports, code))
    states = tuple(StateVar(f"S{k}", dims[k]) for k in range(n_states))
    return Realization(field, _symbols(n), states, tuple(constraints))
