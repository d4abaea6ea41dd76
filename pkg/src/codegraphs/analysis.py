"""Structural tests on realizations: trim/proper, observability, controllability,
tail-biting coset partitions and supports of unobservable configurations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .code import ENUMERATION_LIMIT, BlockStructure, LinearCode
from .duality import dualize
from .errors import PreconditionError
from .linalg import MatrixGF, kernel_basis
from .realization import ConstraintCode, Realization, StateVar, _port_labels, repetition_code

__all__ = [
    "AnalysisReport",
    "SupportSubgraph",
    "TailBitingPartition",
    "Coset",
    "unobservable_space",
    "is_observable",
    "is_controllable",
    "controllability_defect_via_dual",
    "is_trim",
    "is_proper",
    "all_trim",
    "all_proper",
    "state_ports",
    "is_state_trim",
    "is_branch_trim",
    "unobservable_support",
    "cycle_order",
    "tail_biting_partition",
    "repetition_support_realization",
    "support_pattern",
    "starts_and_stops",
    "dimension_count_check",
    "analyze",
]


# -- observability and controllability --------------------------------------


def unobservable_space(r: Realization) -> MatrixGF:
    """Basis of {s : (0, s) in B} over the concatenated state blocks."""
    return r.behavior.cross_section(r.state_ids).generators


def is_observable(r: Realization) -> bool:
    return unobservable_space(r).rows == 0


def _counts(r: Realization) -> tuple[int, int, int]:
    dim_b = r.behavior.dim
    sum_c = sum(c.dim for c in r.constraints)
    sum_s = sum(s.dim for s in r.states)
    return dim_b, sum_c, sum_s


def is_controllable(r: Realization) -> tuple[bool, int]:
    """Controllability by the dimension count; returns (controllable, defect)."""
    dim_b, sum_c, sum_s = _counts(r)
    defect = dim_b - (sum_c - sum_s)
    return defect == 0, defect


def controllability_defect_via_dual(r: Realization) -> int:
    """Same defect, computed as the dimension of the dual's unobservable space."""
    return unobservable_space(dualize(r)).rows


# -- local properties ---------------------------------------------------------


def _state_port(r: Realization, constraint_id: str, port: str) -> tuple[ConstraintCode, str, str]:
    c = r.constraint(constraint_id)
    if port in c.port_labels:
        label = port
    else:
        raise KeyError(f"constraint {constraint_id!r} has no port {port!r}")
    var = c.variable_of(label)
    if not r.is_state(var):
        raise PreconditionError(f"port {port!r} of {constraint_id!r} is a symbol, not a state")
    return c, label, var


def is_trim(r: Realization, constraint_id: str, port: str) -> bool:
    c, label, _ = _state_port(r, constraint_id, port)
    return c.code.project([label]).dim == c.code.structure.dim_of(label)


def is_proper(r: Realization, constraint_id: str, port: str) -> bool:
    c, label, _ = _state_port(r, constraint_id, port)
    return c.code.cross_section([label]).dim == 0


def state_ports(r: Realization) -> list[tuple[str, str]]:
    """Every (constraint id, state port label) pair, in declaration order."""
    states = set(r.state_ids)
    out = []
    for c in r.constraints:
        for label in c.port_labels:
            if c.variable_of(label) in states:
                out.append((c.id, label))
    return out


def all_trim(r: Realization) -> bool:
    return all(is_trim(r, cid, lab) for cid, lab in state_ports(r))


def all_proper(r: Realization) -> bool:
    return all(is_proper(r, cid, lab) for cid, lab in state_ports(r))


def is_state_trim(r: Realization) -> dict[str, bool]:
    b = r.behavior
    return {s.id: b.project([s.id]).dim == s.dim for s in r.states}


def _branch_projection(r: Realization, ci: int) -> LinearCode:
    # read the behavior through the constraint's ports (self-loops read one column block twice)
    c = r.constraints[ci]
    g = r.behavior.code.generators.columns(r.port_columns(ci))
    return LinearCode(c.code.structure, g)


def is_branch_trim(r: Realization) -> dict[str, bool]:
    return {c.id: _branch_projection(r, ci) == c.code for ci, c in enumerate(r.constraints)}


# -- supports -----------------------------------------------------------------


@dataclass(frozen=True)
class SupportSubgraph:
    edges: tuple[str, ...]
    vertices: tuple[str, ...]
    degrees: dict
    generalized_cycle: bool
    eulerian: bool
    single_cycle: bool
    # whether the generalized-cycle guarantee applies (the realization is proper)
    applicable: bool = True

    @property
    def empty(self) -> bool:
        return not self.edges

    @property
    def classification(self) -> str:
        if self.empty:
            return "trivial"
        if not self.applicable:
            return "not applicable (improper)"
        if self.single_cycle:
            return "single cycle"
        if self.eulerian:
            return "eulerian"
        if self.generalized_cycle:
            return "generalized cycle"
        return "not a generalized cycle"

    def to_dict(self) -> dict:
        return {
            "edges": list(self.edges),
            "vertices": list(self.vertices),
            "degrees": dict(self.degrees),
            "generalized_cycle": self.generalized_cycle,
            "eulerian": self.eulerian,
            "single_cycle": self.single_cycle,
            "classification": self.classification,
        }


def _as_state_config(r: Realization, config) -> np.ndarray:
    width = sum(s.dim for s in r.states)
    arr = np.array(list(config), dtype=np.int64).reshape(-1) % r.field.p
    if arr.size != width:
        raise ValueError(f"state configuration has {arr.size} entries, expected {width}")
    return arr


def _support_of(r: Realization, values: dict[str, tuple[int, ...]], edges_only: Iterable[str]) -> SupportSubgraph:
    edges = tuple(s for s in edges_only if any(values[s]))
    degrees: dict[str, int] = {}
    for sid in edges:
        for ci, _ in r.occurrences[sid]:
            cid = r.constraints[ci].id
            degrees[cid] = degrees.get(cid, 0) + 1
    vertices = tuple(c for c in r.constraint_ids if c in degrees)
    degrees = {v: degrees[v] for v in vertices}
    gen_cycle = all(d >= 2 for d in degrees.values())
    eulerian = all(d % 2 == 0 for d in degrees.values())
    single = False
    if edges and all(d == 2 for d in degrees.values()) and len(edges) == len(vertices):
        g = nx.MultiGraph()
        g.add_nodes_from(vertices)
        for sid in edges:
            u, v = (r.constraints[ci].id for ci, _ in r.occurrences[sid])
            g.add_edge(u, v, key=sid)
        single = nx.is_connected(g)
    return SupportSubgraph(edges, vertices, degrees, gen_cycle, eulerian, single)


def unobservable_support(r: Realization, config) -> SupportSubgraph:
    """Support subgraph of an unobservable state configuration (0, s) in B."""
    s = _as_state_config(r, config)
    full = np.concatenate([np.zeros(sum(x.dim for x in r.symbols), dtype=np.int64), s])
    if not r.behavior.code.contains(full):
        raise PreconditionError("configuration (0, s) is not in the behavior")
    values = BlockStructure(tuple((x.id, x.dim) for x in r.states)).split(s)
    sub = _support_of(r, values, [x.id for x in r.states])
    if not all_proper(r):
        sub = SupportSubgraph(
            sub.edges, sub.vertices, sub.degrees, sub.generalized_cycle, sub.eulerian, sub.single_cycle, False
        )
    return sub


# -- tail-biting trellises ----------------------------------------------------


def cycle_order(r: Realization) -> list[tuple[str, int]]:
    """Walk a single-cycle graph from its first state edge.

    Returns ``(state id, direction)`` pairs; direction is +1 when the walk
    crosses the edge from its first endpoint to its second.
    """
    topo = r.topology
    if not topo.is_single_cycle:
        raise PreconditionError("realization graph is not a single cycle")
    edges = dict(topo.edges)
    start = next(s.id for s in r.states if s.id in edges)
    order = []
    current, here = start, edges[start][0]
    while True:
        u, v = edges[current]
        if here == u:
            order.append((current, 1))
            here = v
        else:
            order.append((current, -1))
            here = u
        nxt = [e for e, (a, b) in edges.items() if e != current and here in (a, b)]
        if not nxt or nxt[0] == start or len(order) == len(edges):
            break
        current = nxt[0]
    return order


@dataclass(frozen=True)
class Coset:
    alpha: int
    representative: tuple[int, ...]
    members: tuple[tuple[int, ...], ...] | None


@dataclass(frozen=True)
class TailBitingPartition:
    controllable: bool
    message: str
    dual_config: tuple[int, ...] | None = None
    reference_edge: str | None = None
    signs: dict = dc_field(default_factory=dict)
    zero_subbehavior: LinearCode | None = None
    cosets: tuple[Coset, ...] = ()

    def to_dict(self) -> dict:
        out = {"controllable": self.controllable, "message": self.message}
        if self.zero_subbehavior is not None:
            z = self.zero_subbehavior
            out.update(
                {
                    "dual_config": list(self.dual_config),
                    "reference_edge": self.reference_edge,
                    "signs": dict(self.signs),
                    "zero_subbehavior": {
                        "dim": z.dim,
                        "generators": z.generators.tolist(),
                        "members": [list(w) for w in z.enumerate()] if z.dim <= 12 else None,
                    },
                    "cosets": [
                        {
                            "alpha": c.alpha,
                            "representative": list(c.representative),
                            "members": [list(w) for w in c.members] if c.members is not None else None,
                        }
                        for c in self.cosets
                    ],
                }
            )
        return out


def _full_support_config(r_dual: Realization, basis: MatrixGF, edges: Sequence[str]) -> np.ndarray | None:
    structure = BlockStructure(tuple((s.id, s.dim) for s in r_dual.states))

    def full(v) -> bool:
        blocks = structure.split(v)
        return all(any(blocks[e]) for e in edges)

    for i in range(basis.rows):
        if full(basis.row(i)):
            return np.array(basis.row(i))
    if basis.rows > ENUMERATION_LIMIT:
        return None
    p = r_dual.field.p
    for coeffs in itertools.product(range(p), repeat=basis.rows):
        v = (np.array(coeffs, dtype=np.int64) @ basis.array) % p
        if full(v):
            return v
    return None


def tail_biting_partition(r: Realization, member_limit: int = 12) -> TailBitingPartition:
    """Split the behavior of an uncontrollable trim tail-biting trellis into cosets.

    A dual unobservable configuration with full support gives, at every edge,
    a functional s_j -> <s_hat_j, s_j>.  Up to the orientation sign of the
    edge along the cycle these functionals agree on every trajectory, so their
    common value alpha labels the coset of the zero subbehavior B_0.
    """
    if not r.topology.is_single_cycle:
        raise PreconditionError("tail-biting partition needs a single-cycle realization")
    if not all_trim(r):
        raise PreconditionError("tail-biting partition needs a trim realization")
    controllable, defect = is_controllable(r)
    if controllable:
        return TailBitingPartition(True, "controllable: no partition")

    order = cycle_order(r)
    edges = [e for e, _ in order]
    signs = dict(order)
    d = dualize(r)
    s_hat = _full_support_config(d, unobservable_space(d), edges)
    if s_hat is None:
        raise PreconditionError("no dual unobservable configuration has full support")

    b = r.behavior.code
    p = r.field.p
    st = r.structure
    hat_blocks = BlockStructure(tuple((s.id, s.dim) for s in d.states)).split(s_hat)

    def functional(word) -> list[int]:
        blocks = st.split(word)
        return [
            (signs[e] * int(np.dot(hat_blocks[e], blocks[e]))) % p
            for e in edges
        ]

    values = []
    for i in range(b.dim):
        f = functional(b.generators.row(i))
        if len(set(f)) != 1:
            raise AssertionError(f"edge functionals disagree on a trajectory: {f}")
        values.append(f[0])

    ref = edges[0]
    fvec = MatrixGF(r.field, [values], cols=b.dim)
    coeffs = kernel_basis(fvec)
    zero = LinearCode(st, coeffs @ b.generators) if coeffs.rows else LinearCode.zero(r.field, st)
    pivot = next(i for i, v in enumerate(values) if v)
    base = b.generators.row(pivot)
    cosets = []
    for alpha in range(1, p):
        scale = (alpha * pow(values[pivot], -1, p)) % p
        rep = tuple(int(x) for x in (scale * base) % p)
        members = None
        if zero.dim <= member_limit:
            members = tuple(
                tuple(int(x) for x in (np.array(w) + np.array(rep)) % p) for w in zero.iter_codewords()
            )
        cosets.append(Coset(alpha, rep, members))
    return TailBitingPartition(
        controllable=False,
        message=f"uncontrollable (defect {defect}): {p} disconnected subbehaviors",
        dual_config=tuple(int(x) for x in s_hat),
        reference_edge=ref,
        signs=signs,
        zero_subbehavior=zero,
        cosets=tuple(cosets),
    )


def starts_and_stops(r: Realization, trajectories=None) -> tuple[int, int]:
    """Count state-support starts and stops around a tail-biting cycle.

    A start is a step from a zero state to a nonzero one along the cycle
    order, a stop the reverse.  ``trajectories`` defaults to the behavior
    generators; each row covers all symbol and state blocks.
    """
    order = [e for e, _ in cycle_order(r)]
    rows = r.behavior.code.generators.tolist() if trajectories is None else [list(t) for t in trajectories]
    starts = stops = 0
    for row in rows:
        blocks = r.structure.split(row)
        active = [any(blocks[e]) for e in order]
        for k in range(len(active)):
            prev, cur = active[k - 1], active[k]
            starts += (not prev) and cur
            stops += prev and not cur
    return starts, stops


def dimension_count_check(r: Realization) -> bool:
    """Controllable implies k = dim B, where k = sum dim C_i - sum dim S_j."""
    dim_b, sum_c, sum_s = _counts(r)
    controllable, _ = is_controllable(r)
    return (not controllable) or dim_b == sum_c - sum_s


# -- repetition realizations on supports ---------------------------------------


def repetition_support_realization(r: Realization, config) -> tuple[Realization, Realization]:
    """Repetition realization on the support of an unobservable configuration, and its dual.

    One binary-width (dim 1) state per support edge, an equality constraint at
    each support vertex, endpoint order inherited from ``r``.  The dual's
    behavior holds the admissible patterns x_j = <s_hat_j, s_j> for dual
    configurations s_hat.
    """
    sub = unobservable_support(r, config)
    if sub.empty or not sub.generalized_cycle:
        raise PreconditionError(f"support is not a generalized cycle ({sub.classification})")
    edges = set(sub.edges)
    states = tuple(StateVar(e, 1) for e in r.state_ids if e in edges)
    constraints = []
    for c in r.constraints:
        if c.id not in sub.degrees:
            continue
        ports = tuple(v for v in c.ports if v in edges)
        constraints.append(ConstraintCode(c.id, ports, repetition_code(r.field, _port_labels(ports), 1)))
    rep = Realization(r.field, (), states, tuple(constraints))
    return rep, dualize(rep)


def support_pattern(r: Realization, config, dual_config) -> tuple[int, ...]:
    """x_j = <s_hat_j, s_j> on the support edges of ``config``, in state order."""
    s = _as_state_config(r, config)
    sh = _as_state_config(r, dual_config)
    st = BlockStructure(tuple((x.id, x.dim) for x in r.states))
    a, b = st.split(s), st.split(sh)
    return tuple(int(np.dot(a[e], b[e])) % r.field.p for e in r.state_ids if any(a[e]))


# -- report ------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisReport:
    trim: dict
    proper: dict
    state_trim: dict
    branch_trim: dict
    observable: bool
    controllable: bool
    dim_behavior: int
    dim_code: int
    sum_dim_constraints: int
    sum_dim_states: int
    unobservable_basis: MatrixGF
    controllability_defect: int
    topology: dict

    def to_dict(self) -> dict:
        return {
            "observable": self.observable,
            "controllable": self.controllable,
            "controllability_defect": self.controllability_defect,
            "dim_behavior": self.dim_behavior,
            "dim_code": self.dim_code,
            "sum_dim_constraints": self.sum_dim_constraints,
            "sum_dim_states": self.sum_dim_states,
            "unobservable_basis": self.unobservable_basis.tolist(),
            "trim": {f"{c}.{p}": v for (c, p), v in self.trim.items()},
            "proper": {f"{c}.{p}": v for (c, p), v in self.proper.items()},
            "state_trim": dict(self.state_trim),
            "branch_trim": dict(self.branch_trim),
            "topology": self.topology,
        }


def analyze(r: Realization) -> AnalysisReport:
    ports = state_ports(r)
    dim_b, sum_c, sum_s = _counts(r)
    controllable, defect = is_controllable(r)
    topo = r.topology
    return AnalysisReport(
        trim={(c, p): is_trim(r, c, p) for c, p in ports},
        proper={(c, p): is_proper(r, c, p) for c, p in ports},
        state_trim=is_state_trim(r),
        branch_trim=is_branch_trim(r),
        observable=is_observable(r),
        controllable=controllable,
        dim_behavior=dim_b,
        dim_code=r.behavior.symbols().dim,
        sum_dim_constraints=sum_c,
        sum_dim_states=sum_s,
        unobservable_basis=unobservable_space(r),
        controllability_defect=defect,
        topology={
            "is_connected": topo.is_connected,
            "is_cycle_free": topo.is_cycle_free,
            "is_path": topo.is_path,
            "is_single_cycle": topo.is_single_cycle,
            "degrees": dict(topo.degrees),
        },
    )
