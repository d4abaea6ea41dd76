"""Dual realizations and the orthogonal behavior."""

from __future__ import annotations

import numpy as np

from .code import BlockStructure, LinearCode
from .linalg import MatrixGF, row_basis
from .realization import ConstraintCode, Realization, StateVar, _port_labels, _stacked

__all__ = ["dualize", "b_perp", "negate_ports", "inverter_code"]


def negate_ports(code: LinearCode, labels) -> LinearCode:
    """Multiply the coordinates of the given blocks by -1."""
    labels = list(labels)
    if not labels:
        return code
    g = code.generators.array.copy()
    cols = code.structure.columns(labels)
    g[:, cols] = -g[:, cols]
    return LinearCode(code.structure, MatrixGF(code.field, g, cols=code.length))


def _second_endpoint_labels(r: Realization, ci: int) -> list[str]:
    c = r.constraints[ci]
    return [lab for pi, lab in enumerate(c.port_labels) if r.is_second_endpoint(ci, pi)]


def inverter_code(field, a: str, b: str, dim: int) -> LinearCode:
    """The sign inverter {(s, -s)} between ports ``a`` and ``b``."""
    structure = BlockStructure(((a, dim), (b, dim)))
    eye = np.eye(dim, dtype=np.int64)
    return LinearCode(structure, MatrixGF(field, np.hstack([eye, -eye]), cols=2 * dim))


def dualize(r: Realization, explicit_inverters: bool = False) -> Realization:
    """Dual realization: orthogonal constraint codes on the same graph.

    The sign inverter on each state edge is absorbed into the constraint at
    the edge's second endpoint, so the topology is unchanged and dualizing
    twice gives back the original constraint codes.  With
    ``explicit_inverters`` the inverters are instead drawn as separate
    degree-2 constraints ``inv_<state>`` (display form only).
    """
    r.require_valid()
    if explicit_inverters:
        return _dualize_explicit(r)
    constraints = []
    for ci, c in enumerate(r.constraints):
        dual = negate_ports(c.code.dual(), _second_endpoint_labels(r, ci))
        constraints.append(ConstraintCode(c.id, c.ports, dual))
    return Realization(r.field, r.symbols, r.states, tuple(constraints))


def _dualize_explicit(r: Realization) -> Realization:
    taken = set(r.var_dims) | set(r.constraint_ids)

    def fresh(base: str) -> str:
        name, k = base, 1
        while name in taken:
            name, k = f"{base}_{k}", k + 1
        taken.add(name)
        return name

    extra_states: list[StateVar] = []
    inverters: list[ConstraintCode] = []
    rename: dict[tuple[int, int], str] = {}
    for s in r.states:
        occ = r.occurrences[s.id]
        if len(occ) != 2 or s.dim == 0:
            continue
        twin = fresh(f"{s.id}_hat")
        rename[occ[1]] = twin
        extra_states.append(StateVar(twin, s.dim))
        inverters.append(
            ConstraintCode(fresh(f"inv_{s.id}"), (s.id, twin), inverter_code(r.field, s.id, twin, s.dim))
        )
    constraints = []
    for ci, c in enumerate(r.constraints):
        ports = tuple(rename.get((ci, pi), v) for pi, v in enumerate(c.ports))
        dual = c.code.dual()
        structure = BlockStructure(tuple(zip(_port_labels(ports), dual.structure.dims)))
        constraints.append(ConstraintCode(c.id, ports, LinearCode(structure, dual.generators)))
    return Realization(r.field, r.symbols, r.states + tuple(extra_states), tuple(constraints) + tuple(inverters))


def b_perp(r: Realization) -> LinearCode:
    """Image of the sum map over the product of the orthogonal constraint codes.

    Each constraint's orthogonal code is embedded in global coordinates and
    the two endpoint contributions of a state are added, which is exactly the
    row space of the stacked parity checks that define the behavior.
    """
    r.require_valid()
    rows = _stacked(r, lambda c: c.code.dual().generators)
    return LinearCode(r.structure, row_basis(rows))
