"""Normal realizations: variables, constraint codes and the normal graph."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .code import BlockStructure, LinearCode
from .errors import InvalidRealizationError
from .linalg import MatrixGF, PrimeField, kernel_basis

__all__ = [
    "SymbolVar",
    "StateVar",
    "ConstraintCode",
    "Realization",
    "Behavior",
    "Issue",
    "ValidationReport",
    "Topology",
    "build_realization",
    "validate",
    "normalize",
    "full_behavior",
    "realized_code",
    "graph_topology",
    "drop_trivial_states",
    "repetition_code",
]

PRIME = "'"


@dataclass(frozen=True)
class SymbolVar:
    id: str
    dim: int = 1


@dataclass(frozen=True)
class StateVar:
    id: str
    dim: int = 1


def _port_labels(ports: Sequence[str]) -> tuple[str, ...]:
    # a self-loop state appears twice; its second port is labelled "S'"
    seen: set[str] = set()
    labels = []
    for v in ports:
        labels.append(v + PRIME if v in seen else v)
        seen.add(v)
    return tuple(labels)


@dataclass(frozen=True)
class ConstraintCode:
    """A local code on the ports of one vertex; block labels are the port labels."""

    id: str
    ports: tuple[str, ...]
    code: LinearCode

    def __post_init__(self) -> None:
        object.__setattr__(self, "ports", tuple(self.ports))
        if self.code.structure.labels != self.port_labels:
            raise ValueError(
                f"constraint {self.id}: code blocks {self.code.structure.labels} "
                f"do not match ports {self.port_labels}"
            )

    @property
    def port_labels(self) -> tuple[str, ...]:
        return _port_labels(self.ports)

    @property
    def dim(self) -> int:
        return self.code.dim

    def variable_of(self, label: str) -> str:
        return label[:-1] if label not in self.ports and label.endswith(PRIME) else label


@dataclass(frozen=True)
class Issue:
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> set[str]:
        return {i.kind for i in self.issues}

    def structural(self) -> ValidationReport:
        """The report without the connectivity finding."""
        return ValidationReport(tuple(i for i in self.issues if i.kind != "disconnected"))


@dataclass(frozen=True)
class Behavior:
    """Full behavior: a code over all symbol blocks followed by all state blocks."""

    code: LinearCode
    symbol_labels: tuple[str, ...]
    state_labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.code.dim

    def project(self, keep: Iterable[str]) -> LinearCode:
        return self.code.project(keep)

    def cross_section(self, keep: Iterable[str]) -> LinearCode:
        return self.code.cross_section(keep)

    def symbols(self) -> LinearCode:
        return self.code.project(self.symbol_labels)

    def states(self) -> LinearCode:
        return self.code.project(self.state_labels)


@dataclass(frozen=True)
class Topology:
    """Shape of the normal graph: constraints are vertices, states are edges."""

    vertices: tuple[str, ...]
    edges: Mapping[str, tuple[str, str]]
    dangling: Mapping[str, str]
    degrees: Mapping[str, int]
    is_connected: bool
    is_cycle_free: bool
    is_path: bool
    is_single_cycle: bool
    # state id -> (past constraints, future constraints); cycle-free graphs only
    cuts: Mapping[str, tuple[frozenset, frozenset]] = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": {k: list(v) for k, v in self.edges.items()},
            "dangling": dict(self.dangling),
            "degrees": dict(self.degrees),
            "is_connected": self.is_connected,
            "is_cycle_free": self.is_cycle_free,
            "is_path": self.is_path,
            "is_single_cycle": self.is_single_cycle,
            "cuts": {
                k: {"past": sorted(p, key=self.vertices.index), "future": sorted(f, key=self.vertices.index)}
                for k, (p, f) in self.cuts.items()
            },
        }


@dataclass(frozen=True)
class Realization:
    field: PrimeField
    symbols: tuple[SymbolVar, ...]
    states: tuple[StateVar, ...]
    constraints: tuple[ConstraintCode, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    # -- lookups -----------------------------------------------------------

    @cached_property
    def symbol_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.symbols)

    @cached_property
    def state_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states)

    @cached_property
    def constraint_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.constraints)

    @cached_property
    def var_dims(self) -> dict[str, int]:
        dims = {s.id: s.dim for s in self.symbols}
        dims.update({s.id: s.dim for s in self.states})
        return dims

    def is_state(self, var: str) -> bool:
        return var in set(self.state_ids)

    def constraint(self, cid: str) -> ConstraintCode:
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(f"no constraint {cid!r}")

    def constraint_index(self, cid: str) -> int:
        return self.constraint_ids.index(cid)

    def state_dims(self) -> dict[str, int]:
        return {s.id: s.dim for s in self.states}

    @cached_property
    def occurrences(self) -> dict[str, list[tuple[int, int]]]:
        """Variable id -> [(constraint index, port index)] in constraint-list order."""
        occ: dict[str, list[tuple[int, int]]] = {v: [] for v in self.var_dims}
        for ci, c in enumerate(self.constraints):
            for pi, v in enumerate(c.ports):
                occ.setdefault(v, []).append((ci, pi))
        return occ

    def endpoints(self, state_id: str) -> list[tuple[int, int]]:
        """First and (if present) second endpoint of a state edge."""
        return self.occurrences[state_id]

    def is_second_endpoint(self, ci: int, pi: int) -> bool:
        v = self.constraints[ci].ports[pi]
        occ = self.occurrences[v]
        return v in set(self.state_ids) and len(occ) > 1 and occ[1] == (ci, pi)

    def other_endpoint(self, cid: str, state_id: str) -> str | None:
        occ = self.occurrences[state_id]
        ci = self.constraint_index(cid)
        others = [self.constraints[c].id for c, _ in occ if c != ci]
        return others[0] if others else None

    @cached_property
    def structure(self) -> BlockStructure:
        return BlockStructure(
            tuple((s.id, s.dim) for s in self.symbols) + tuple((s.id, s.dim) for s in self.states)
        )

    def port_columns(self, ci: int) -> list[int]:
        """Global coordinate columns read by the ports of constraint ``ci``."""
        return self.structure.columns(self.constraints[ci].ports)

    def with_constraints(self, updates: Mapping[str, ConstraintCode]) -> Realization:
        return replace(
            self, constraints=tuple(updates.get(c.id, c) for c in self.constraints)
        )

    # -- cached analyses ---------------------------------------------------

    @cached_property
    def validation(self) -> ValidationReport:
        return _validate(self)

    @cached_property
    def behavior(self) -> Behavior:
        return _full_behavior(self)

    @cached_property
    def topology(self) -> Topology:
        return _topology(self)

    def require_valid(self) -> None:
        report = self.validation.structural()
        if not report.ok:
            raise InvalidRealizationError(report)

    def __repr__(self) -> str:
        return (
            f"Realization({self.field}, symbols={list(self.symbol_ids)}, "
            f"states={[(s.id, s.dim) for s in self.states]}, "
            f"constraints={list(self.constraint_ids)})"
        )


def build_realization(
    p: int,
    symbols: Mapping[str, int] | Iterable[str],
    states: Mapping[str, int],
    constraints: Iterable[tuple[str, Sequence[str], Sequence]],
) -> Realization:
    """Convenience constructor.

    ``constraints`` holds ``(id, ports, rows)`` triples; each row is either a
    flat list of residues over the concatenated ports or a string such as
    ``"01|1|0"`` with one ``|``-separated group per port.
    """
    field = PrimeField(p)
    if not isinstance(symbols, Mapping):
        symbols = {s: 1 for s in symbols}
    dims = dict(symbols)
    dims.update(states)
    cons = []
    for cid, ports, rows in constraints:
        labels = _port_labels(ports)
        structure = BlockStructure(tuple((lab, dims[v]) for lab, v in zip(labels, ports)))
        parsed = [parse_row(r, [dims[v] for v in ports]) for r in rows]
        cons.append(ConstraintCode(cid, tuple(ports), LinearCode.from_rows(field, structure, parsed)))
    return Realization(
        field,
        tuple(SymbolVar(k, v) for k, v in symbols.items()),
        tuple(StateVar(k, v) for k, v in states.items()),
        tuple(cons),
    )


def parse_row(row, widths: Sequence[int]) -> list[int]:
    if not isinstance(row, str):
        return [int(x) for x in row]
    if "|" in row:
        groups = row.split("|")
        if len(groups) != len(widths):
            raise ValueError(f"row {row!r} has {len(groups)} groups, expected {len(widths)}")
        out = []
        for g, w in zip(groups, widths):
            digits = [int(ch) for ch in g if not ch.isspace()]
            if len(digits) != w:
                raise ValueError(f"group {g!r} of row {row!r} should have {w} digits")
            out.extend(digits)
        return out
    return [int(ch) for ch in row if not ch.isspace()]


def repetition_code(field: PrimeField, labels: Sequence[str], dim: int) -> LinearCode:
    """Equality constraint: every port carries the same ``dim``-vector."""
    structure = BlockStructure(tuple((lab, dim) for lab in labels))
    rows = np.zeros((dim, dim * len(labels)), dtype=np.int64)
    for t in range(dim):
        for b in range(len(labels)):
            rows[t, b * dim + t] = 1
    return LinearCode(structure, MatrixGF(field, rows, cols=structure.total_dim))


# -- validation ---------------------------------------------------------------


def _validate(r: Realization) -> ValidationReport:
    issues: list[Issue] = []
    counts = Counter(r.symbol_ids + r.state_ids)
    for v, n in counts.items():
        if n > 1:
            issues.append(Issue("duplicate_id", v, "variable id declared more than once"))
    for cid, n in Counter(r.constraint_ids).items():
        if n > 1:
            issues.append(Issue("duplicate_id", cid, "constraint id declared more than once"))
    for s in r.symbols:
        if s.dim < 1:
            issues.append(Issue("bad_dim", s.id, f"symbol dimension must be >= 1, got {s.dim}"))
    for s in r.states:
        if s.dim < 0:
            issues.append(Issue("bad_dim", s.id, f"state dimension must be >= 0, got {s.dim}"))

    dims = r.var_dims
    for c in r.constraints:
        if c.code.field != r.field:
            issues.append(Issue("field_mismatch", c.id, f"code over {c.code.field}, realization over {r.field}"))
        for lab, v, (_, width) in zip(c.port_labels, c.ports, c.code.structure.blocks):
            if v not in dims:
                issues.append(Issue("unknown_variable", c.id, f"port {v!r} is not a declared variable"))
            elif dims[v] != width:
                issues.append(
                    Issue("dim_mismatch", f"{c.id}.{lab}", f"port width {width} but variable has dim {dims[v]}")
                )

    occ = r.occurrences
    for s in r.symbols:
        n = len(occ.get(s.id, []))
        if n != 1:
            issues.append(Issue("symbol_degree", s.id, f"symbol variable has degree {n}, must be 1"))
    for s in r.states:
        n = len(occ.get(s.id, []))
        if n == 2 or (n == 1 and s.dim == 0):
            continue
        if n == 1:
            msg = "degree-1 state variable must have dimension 0"
        else:
            msg = f"state variable has degree {n}, must be 2"
        issues.append(Issue("state_degree", s.id, msg))

    if r.constraints and not issues:
        g = _graph(r)
        if not nx.is_connected(g):
            comps = sorted(sorted(cc, key=r.constraint_ids.index) for cc in nx.connected_components(g))
            issues.append(Issue("disconnected", "graph", f"components {comps}"))
    return ValidationReport(tuple(issues))


def validate(r: Realization) -> ValidationReport:
    return r.validation


# -- behavior -----------------------------------------------------------------


def _stacked(r: Realization, per_constraint) -> MatrixGF:
    """Place per-constraint row blocks into global coordinates (summing repeated ports)."""
    total = r.structure.total_dim
    p = r.field.p
    blocks = []
    for ci, c in enumerate(r.constraints):
        local = per_constraint(c)
        if local.rows == 0:
            continue
        out = np.zeros((local.rows, total), dtype=np.int64)
        cols = r.port_columns(ci)
        for k, col in enumerate(cols):
            out[:, col] += local.array[:, k]
        blocks.append(out % p)
    if not blocks:
        return MatrixGF.zeros(r.field, 0, total)
    return MatrixGF(r.field, np.vstack(blocks), cols=total)


def _full_behavior(r: Realization) -> Behavior:
    r.require_valid()
    checks = _stacked(r, lambda c: c.code.parity_checks())
    total = r.structure.total_dim
    if checks.rows == 0:
        basis = MatrixGF.identity(r.field, total)
    else:
        basis = kernel_basis(checks)
    return Behavior(LinearCode(r.structure, basis), r.symbol_ids, r.state_ids)


def full_behavior(r: Realization) -> Behavior:
    return r.behavior


def realized_code(r: Realization) -> LinearCode:
    return r.behavior.symbols()


# -- normalization ------------------------------------------------------------


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    k = 1
    while name in taken:
        name = f"{base}_{k}"
        k += 1
    taken.add(name)
    return name


def normalize(r: Realization) -> Realization:
    """Rewrite an arbitrary-degree realization into normal form.

    A symbol of degree d > 1 is replaced inside each constraint by a replica
    state, and an equality constraint ties the d replicas to the symbol itself
    (degree d + 1).  A state of degree d > 2 is split into d replicas joined by
    an equality constraint of degree d.  A nontrivial degree-1 state is merged
    down to the trivial space (its constraint is projected off that port), and
    unused states are dropped.
    """
    taken = set(r.var_dims) | set(r.constraint_ids)
    occ = r.occurrences
    field = r.field

    # port rename per (constraint index, port index)
    rename: dict[tuple[int, int], str] = {}
    new_states: list[StateVar] = []
    equalities: list[ConstraintCode] = []
    collapsed: set[str] = set()

    for s in r.symbols:
        places = occ.get(s.id, [])
        if len(places) <= 1:
            continue
        replicas = []
        for n, place in enumerate(places, start=1):
            name = _fresh(f"{s.id}_{n}", taken)
            rename[place] = name
            replicas.append(name)
            new_states.append(StateVar(name, s.dim))
        ports = (s.id, *replicas)
        eq_id = _fresh(f"eq_{s.id}", taken)
        equalities.append(ConstraintCode(eq_id, ports, repetition_code(field, ports, s.dim)))

    kept_states: list[StateVar] = []
    for s in r.states:
        places = occ.get(s.id, [])
        if len(places) == 0:
            continue
        if len(places) == 1 and s.dim > 0:
            collapsed.add(s.id)
            kept_states.append(StateVar(s.id, 0))
            continue
        if len(places) <= 2:
            kept_states.append(s)
            continue
        replicas = []
        for n, place in enumerate(places, start=1):
            name = _fresh(f"{s.id}_{n}", taken)
            rename[place] = name
            replicas.append(name)
            new_states.append(StateVar(name, s.dim))
        eq_id = _fresh(f"eq_{s.id}", taken)
        equalities.append(ConstraintCode(eq_id, tuple(replicas), repetition_code(field, replicas, s.dim)))

    constraints = []
    for ci, c in enumerate(r.constraints):
        code = c.code
        for lab, v in zip(c.port_labels, c.ports):
            if v in collapsed:
                others = [x for x in code.structure.labels if x != lab]
                proj = code.project(others)
                structure = BlockStructure(
                    tuple((x, 0 if x == lab else code.structure.dim_of(x)) for x in code.structure.labels)
                )
                cols = structure.columns(others)
                g = np.zeros((proj.dim, structure.total_dim), dtype=np.int64)
                g[:, cols] = proj.generators.array
                code = LinearCode(structure, MatrixGF(field, g, cols=structure.total_dim))
        ports = tuple(rename.get((ci, pi), v) for pi, v in enumerate(c.ports))
        labels = _port_labels(ports)
        structure = BlockStructure(tuple((lab, d) for lab, d in zip(labels, code.structure.dims)))
        constraints.append(ConstraintCode(c.id, ports, LinearCode(structure, code.generators)))

    return Realization(field, r.symbols, tuple(kept_states) + tuple(new_states), tuple(constraints) + tuple(equalities))


def drop_trivial_states(r: Realization) -> Realization:
    """Delete every zero-dimensional state variable and its ports."""
    trivial = {s.id for s in r.states if s.dim == 0}
    if not trivial:
        return r
    constraints = []
    for c in r.constraints:
        keep = [(lab, v) for lab, v in zip(c.port_labels, c.ports) if v not in trivial]
        proj = c.code.project([lab for lab, _ in keep])
        ports = tuple(v for _, v in keep)
        constraints.append(ConstraintCode(c.id, ports, proj))
    return Realization(r.field, r.symbols, tuple(s for s in r.states if s.id not in trivial), tuple(constraints))


# -- topology -----------------------------------------------------------------


def _graph(r: Realization) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(r.constraint_ids)
    for s in r.states:
        occ = r.occurrences.get(s.id, [])
        if len(occ) == 2:
            u, v = (r.constraints[ci].id for ci, _ in occ)
            g.add_edge(u, v, key=s.id)
    return g


def _topology(r: Realization) -> Topology:
    r.require_valid()
    g = _graph(r)
    vertices = r.constraint_ids
    edges = {}
    dangling = {}
    for s in r.states:
        occ = r.occurrences[s.id]
        ends = [r.constraints[ci].id for ci, _ in occ]
        if len(ends) == 2:
            edges[s.id] = (ends[0], ends[1])
        else:
            dangling[s.id] = ends[0]
    degrees = {v: int(g.degree(v)) for v in vertices}
    connected = bool(vertices) and nx.is_connected(g)
    n_edges = g.number_of_edges()
    has_loop = any(u == v for u, v in edges.values())
    cycle_free = connected and n_edges == len(vertices) - 1 and not has_loop
    is_path = cycle_free and all(d <= 2 for d in degrees.values())
    single_cycle = connected and n_edges == len(vertices) and all(d == 2 for d in degrees.values())

    cuts: dict[str, tuple[frozenset, frozenset]] = {}
    if cycle_free:
        everything = frozenset(vertices)
        for sid, (u, v) in edges.items():
            h = g.copy()
            h.remove_edge(u, v, key=sid)
            past = frozenset(nx.node_connected_component(h, u))
            cuts[sid] = (past, everything - past)
        for sid in dangling:
            cuts[sid] = (everything, frozenset())
    return Topology(
        vertices=vertices,
        edges=edges,
        dangling=dangling,
        degrees=degrees,
        is_connected=connected,
        is_cycle_free=cycle_free,
        is_path=is_path,
        is_single_cycle=single_cycle,
        cuts=cuts,
    )


def graph_topology(r: Realization) -> Topology:
    return r.topology
