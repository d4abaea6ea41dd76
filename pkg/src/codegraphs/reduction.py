"""Local reductions: trimming and merging state spaces without changing the code."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .analysis import is_controllable, is_proper, is_trim, state_ports, unobservable_space
from .code import BlockStructure, LinearCode
from .duality import dualize
from .errors import PreconditionError
from .linalg import MatrixGF, complete_basis, inverse, kernel_basis
from .realization import ConstraintCode, Realization, StateVar

__all__ = [
    "ReductionStep",
    "trim_at",
    "merge_at",
    "observability_trim",
    "controllability_merge",
    "reduce_trim_proper",
    "minimize_cycle_free",
    "state_space_oracle",
    "state_profile",
]


@dataclass(frozen=True)
class ReductionStep:
    kind: str
    state_id: str
    constraint_id: str | None
    old_dim: int
    new_dim: int
    # rows form the new basis of the old state space; the kept (or image)
    # coordinates are read off in this basis
    basis_change: MatrixGF

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "state": self.state_id,
            "constraint": self.constraint_id,
            "old_dim": self.old_dim,
            "new_dim": self.new_dim,
            "basis_change": self.basis_change.tolist(),
        }

    def __str__(self) -> str:
        where = f" at {self.constraint_id}" if self.constraint_id else ""
        return f"{self.kind} {self.state_id}{where}: {self.old_dim} -> {self.new_dim}"


def state_profile(r: Realization) -> tuple[int, ...]:
    return tuple(s.dim for s in r.states)


def _check_state(r: Realization, state_id: str) -> StateVar:
    r.require_valid()
    if state_id not in r.state_ids:
        raise KeyError(f"no state {state_id!r}")
    occ = r.occurrences[state_id]
    if len(occ) == 2 and occ[0][0] == occ[1][0]:
        raise PreconditionError(f"state {state_id!r} is a self-loop; local reduction is not supported")
    return next(s for s in r.states if s.id == state_id)


def _rewrite(r: Realization, state_id: str, new_dim: int, transform) -> Realization:
    """Apply ``transform(generators, port_coords) -> (generators, new_port_coords)``
    to each constraint touching ``state_id`` and resize the state."""
    updates = {}
    for ci, _ in r.occurrences[state_id]:
        c = r.constraints[ci]
        g = c.code.generators
        cols = c.code.structure.columns([state_id])
        other = [k for k in range(g.cols) if k not in set(cols)]
        g_other, new_port = transform(g.columns(other), g.columns(cols))
        structure = BlockStructure(
            tuple((lab, new_dim if lab == state_id else d) for lab, d in c.code.structure.blocks)
        )
        out = np.zeros((g_other.rows, structure.total_dim), dtype=np.int64)
        port_cols = structure.columns([state_id])
        rest = [k for k in range(structure.total_dim) if k not in set(port_cols)]
        out[:, rest] = g_other.array
        out[:, port_cols] = new_port.array
        updates[c.id] = ConstraintCode(c.id, c.ports, LinearCode(structure, MatrixGF(r.field, out, cols=structure.total_dim)))
    states = tuple(StateVar(s.id, new_dim) if s.id == state_id else s for s in r.states)
    return replace(r, states=states, constraints=tuple(updates.get(c.id, c) for c in r.constraints))


def _restrict_state(r: Realization, state_id: str, basis: MatrixGF, keep: Sequence[int]) -> Realization:
    """Restrict a state to the span of the ``keep`` rows of ``basis`` (coordinates in that basis)."""
    inv = inverse(basis)
    d = basis.rows
    drop = [k for k in range(d) if k not in set(keep)]

    def transform(g_other: MatrixGF, port: MatrixGF):
        coords = port @ inv
        if drop and coords.rows:
            combos = kernel_basis(coords.columns(drop).T)
            g_other, coords = combos @ g_other, combos @ coords
        return g_other, coords.columns(keep)

    return _rewrite(r, state_id, len(keep), transform)


def _quotient_state(r: Realization, state_id: str, basis: MatrixGF, t: int) -> Realization:
    """Map a state onto its quotient by the span of the first ``t`` rows of ``basis``."""
    inv = inverse(basis)
    d = basis.rows

    def transform(g_other: MatrixGF, port: MatrixGF):
        return g_other, (port @ inv).columns(range(t, d))

    return _rewrite(r, state_id, d - t, transform)


def trim_at(r: Realization, constraint_id: str, state_id: str) -> tuple[Realization, ReductionStep]:
    """Shrink a state to the projection of one adjacent constraint onto it."""
    s = _check_state(r, state_id)
    if is_trim(r, constraint_id, state_id):
        raise PreconditionError(f"{constraint_id} is already trim at {state_id}")
    t = r.constraint(constraint_id).code.project([state_id]).generators
    basis = complete_basis(t, s.dim)
    out = _restrict_state(r, state_id, basis, list(range(t.rows)))
    return out, ReductionStep("trim", state_id, constraint_id, s.dim, t.rows, basis)


def merge_at(r: Realization, constraint_id: str, state_id: str) -> tuple[Realization, ReductionStep]:
    """Merge a state modulo the cross-section of one adjacent constraint on it."""
    s = _check_state(r, state_id)
    if is_proper(r, constraint_id, state_id):
        raise PreconditionError(f"{constraint_id} is already proper at {state_id}")
    t = r.constraint(constraint_id).code.cross_section([state_id]).generators
    basis = complete_basis(t, s.dim)
    out = _quotient_state(r, state_id, basis, t.rows)
    return out, ReductionStep("merge", state_id, constraint_id, s.dim, s.dim - t.rows, basis)


def observability_trim(r: Realization, state_id: str) -> tuple[Realization, ReductionStep]:
    """Drop one dimension of a state lying in the support of an unobservable configuration.

    With s_j the state value of such a configuration, the state space gets a
    basis starting with s_j and is restricted to the vectors whose first
    coordinate in that basis is zero.
    """
    s = _check_state(r, state_id)
    u = unobservable_space(r)
    if u.rows == 0:
        raise PreconditionError("realization is observable")
    st = BlockStructure(tuple((x.id, x.dim) for x in r.states))
    cols = st.columns([state_id])
    hits = [i for i in range(u.rows) if u.array[i, cols].any()]
    if not hits:
        raise PreconditionError(f"state {state_id!r} is zero in every unobservable configuration")
    s_j = MatrixGF(r.field, [u.array[hits[0], cols]], cols=s.dim)
    basis = complete_basis(s_j, s.dim)
    out = _restrict_state(r, state_id, basis, list(range(1, s.dim)))
    return out, ReductionStep("observability_trim", state_id, None, s.dim, s.dim - 1, basis)


def controllability_merge(r: Realization, state_id: str) -> tuple[Realization, ReductionStep]:
    """The dual of an observability trim: dualize, trim, dualize back."""
    _check_state(r, state_id)
    if is_controllable(r)[0]:
        raise PreconditionError("realization is controllable")
    trimmed, step = observability_trim(dualize(r), state_id)
    return dualize(trimmed), replace(step, kind="controllability_merge")


def _reducible_ports(r: Realization):
    for cid, label in state_ports(r):
        if label not in r.state_ids:
            continue  # primed label of a self-loop
        occ = r.occurrences[label]
        if len(occ) == 2 and occ[0][0] == occ[1][0]:
            continue
        yield cid, label


def reduce_trim_proper(r: Realization) -> tuple[Realization, list[ReductionStep]]:
    """Trim and merge until every constraint is trim and proper at every state port.

    Ports are scanned in constraint declaration order, then port order, with
    trimming tried before merging; the scan restarts after every step.
    """
    r.require_valid()
    steps: list[ReductionStep] = []
    while True:
        for cid, sid in _reducible_ports(r):
            if not is_trim(r, cid, sid):
                r, step = trim_at(r, cid, sid)
                break
            if not is_proper(r, cid, sid):
                r, step = merge_at(r, cid, sid)
                break
        else:
            return r, steps
        steps.append(step)


def state_space_oracle(code: LinearCode, r: Realization, state_id: str) -> int:
    """Minimal state dimension at an edge cut of a cycle-free graph.

    Computed as dim C|past - dim C:past and again from the future side; the
    two must agree.
    """
    topo = r.topology
    if not topo.is_cycle_free:
        raise PreconditionError("state space oracle needs a cycle-free graph")
    past, future = topo.cuts[state_id]

    def side(vertices) -> int:
        syms = [v for c in r.constraints if c.id in vertices for v in c.ports if v in set(r.symbol_ids)]
        return code.project(syms).dim - code.cross_section(syms).dim

    a, b = side(past), side(future)
    if a != b:
        raise AssertionError(f"past and future state dimensions differ at {state_id}: {a} vs {b}")
    return a


def minimize_cycle_free(r: Realization) -> tuple[Realization, list[ReductionStep]]:
    """Minimal realization of a cycle-free graph by trimming and merging."""
    if not r.topology.is_cycle_free:
        raise PreconditionError("graph has cycles; use reduce_trim_proper (no minimality guarantee)")
    out, steps = reduce_trim_proper(r)
    code = r.behavior.symbols()
    for s in out.states:
        expected = state_space_oracle(code, out, s.id)
        if s.dim != expected:
            raise AssertionError(f"state {s.id} has dim {s.dim}, oracle says {expected}")
    return out, steps

