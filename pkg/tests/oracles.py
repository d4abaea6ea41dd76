"""Brute-force oracles and random instance generators, independent of the library's linear algebra."""

from __future__ import annotations

import itertools
import random

import numpy as np

from codegraphs import BlockStructure, ConstraintCode, LinearCode, MatrixGF, PrimeField, Realization, StateVar, SymbolVar
from codegraphs.realization import _port_labels, parse_row


def span(rows, p: int, n: int) -> set[tuple[int, ...]]:
    """All F-linear combinations of ``rows`` by direct enumeration."""
    rows = [list(r) for r in rows]
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        w = [0] * n
        for c, r in zip(coeffs, rows):
            if c:
                w = [(x + c * y) % p for x, y in zip(w, r)]
        out.add(tuple(w))
    return out


def words(code: LinearCode) -> set[tuple[int, ...]]:
    return span(code.generators.tolist(), code.field.p, code.length)


def brute_dual(ws: set, p: int, n: int) -> set[tuple[int, ...]]:
    return {
        y for y in itertools.product(range(p), repeat=n)
        if all(sum(a * b for a, b in zip(x, y)) % p == 0 for x in ws)
    }


def brute_behavior(r: Realization) -> set[tuple[int, ...]]:
    """Every global configuration satisfying every constraint, by enumeration."""
    p = r.field.p
    total = r.structure.total_dim
    locals_ = []
    for ci, c in enumerate(r.constraints):
        locals_.append((r.port_columns(ci), words(c.code)))
    out = set()
    for x in itertools.product(range(p), repeat=total):
        if all(tuple(x[k] for k in cols) in ws for cols, ws in locals_):
            out.add(x)
    return out


def rank_by_enumeration(rows, p: int) -> int:
    n = len(rows[0]) if rows else 0
    size = len(span(rows, p, n))
    k = 0
    while p ** k < size:
        k += 1
    return k


def random_matrix(rng: random.Random, p: int, rows: int, cols: int) -> list[list[int]]:
    return [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]


def random_realization(
    rng: random.Random,
    p: int,
    max_constraints: int = 6,
    max_edges: int = 8,
    max_state_dim: int = 3,
    cycle_free: bool = False,
    max_total: int | None = None,
) -> Realization:
    """A random connected normal realization without self-loops.

    The graph is a random spanning tree plus (unless ``cycle_free``) extra
    parallel or chord edges; every constraint gets 0-2 symbols and a random
    generator matrix.
    """
    field = PrimeField(p)
    n = rng.randint(1, max_constraints)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    if not cycle_free and n > 1:
        for _ in range(rng.randint(0, max_edges - len(edges))):
            u, v = rng.sample(range(n), 2)
            edges.append((min(u, v), max(u, v)))
    edges = edges[:max_edges]
    states = [StateVar(f"s{j}", rng.randint(0, max_state_dim)) for j in range(len(edges))]
    ports = [[] for _ in range(n)]
    for j, (u, v) in enumerate(edges):
        ports[u].append(f"s{j}")
        ports[v].append(f"s{j}")
    symbols = []
    for i in range(n):
        for t in range(rng.randint(0 if ports[i] else 1, 2)):
            sid = f"a{i}_{t}"
            symbols.append(SymbolVar(sid, rng.choice([1, 1, 2])))
            ports[i].insert(rng.randint(0, len(ports[i])), sid)
    dims = {s.id: s.dim for s in symbols + states}
    constraints = []
    for i in range(n):
        width = sum(dims[v] for v in ports[i])
        k = rng.randint(0, width)
        structure = BlockStructure(tuple(zip(_port_labels(ports[i]), [dims[v] for v in ports[i]])))
        g = MatrixGF(field, np.array(random_matrix(rng, p, k, width), dtype=np.int64).reshape(k, width), cols=width)
        constraints.append(ConstraintCode(f"c{i}", tuple(ports[i]), LinearCode(structure, g)))
    return Realization(field, tuple(symbols), tuple(states), tuple(constraints))


def random_instances(p: int, count: int, seed: int, **kw):
    rng = random.Random(seed * 1000 + p)
    return [random_realization(rng, p, **kw) for _ in range(count)]


def find_state_isomorphism(rows_mine, rows_theirs, state_slices, p: int):
    """Per-state matrices M with mine[:, slice] @ M == theirs[:, slice] for row-aligned tables.

    Returns a dict slice -> M (as nested lists), or None when some state block
    cannot be matched by an invertible map.  Solved by enumeration of each
    column of M, so only meant for tiny state spaces.
    """
    a = np.array(rows_mine, dtype=np.int64)
    b = np.array(rows_theirs, dtype=np.int64)
    out = {}
    for key, (lo, hi) in state_slices.items():
        d = hi - lo
        pa, pb = a[:, lo:hi], b[:, lo:hi]
        cols = []
        for c in range(d):
            hits = [
                v for v in itertools.product(range(p), repeat=d)
                if np.array_equal((pa @ np.array(v, dtype=np.int64)) % p, pb[:, c] % p)
            ]
            if not hits:
                return None
            cols.append(hits)
        found = None
        for choice in itertools.product(*cols):
            m = np.array(choice, dtype=np.int64).T.reshape(d, d)
            if d == 0 or _det_nonzero(m, p):
                found = m
                break
        if found is None:
            return None
        out[key] = found.tolist()
    return out


def _det_nonzero(m: np.ndarray, p: int) -> bool:
    d = m.shape[0]
    # invertible iff the span of the rows has p**d elements
    return len(span(m.tolist(), p, d)) == p ** d


def reorder_table(r, table, order):
    """Table rows given in block order ``order`` -> rows in the realization's layout."""
    dims = [r.var_dims[v] for v in order]
    out = []
    for row in table:
        vals = parse_row(row, dims)
        blocks, off = {}, 0
        for v, d in zip(order, dims):
            blocks[v] = vals[off:off + d]
            off += d
        out.append([x for v in r.symbol_ids + r.state_ids for x in blocks[v]])
    return out


def _solve_affine(rows, rhs, p: int, n_unknowns: int):
    """All solutions of rows @ x = rhs over GF(p), by enumeration (n_unknowns small)."""
    b = np.array(rhs, dtype=np.int64)
    if n_unknowns == 0:
        if not (b % p).any():
            yield np.zeros(0, dtype=np.int64)
        return
    a = np.array(rows, dtype=np.int64).reshape(-1, n_unknowns)
    for x in itertools.product(range(p), repeat=n_unknowns):
        if not a.size or np.array_equal((a @ np.array(x, dtype=np.int64)) % p, b % p):
            yield np.array(x, dtype=np.int64)


def isomorphic_at_state(ra: Realization, rb: Realization, state_id: str) -> bool:
    """True when ``rb`` equals ``ra`` after an invertible change of basis on one state.

    Every other constraint must match exactly.  For the two constraints on
    the state, searches M with {(x, s M) : (x, s) in C_a} = C_b.
    """
    if ra.constraint_ids != rb.constraint_ids or ra.var_dims != rb.var_dims:
        return False
    p = ra.field.p
    d = ra.var_dims[state_id]
    touched = {ra.constraints[ci].id for ci, _ in ra.occurrences[state_id]}
    for ca, cb in zip(ra.constraints, rb.constraints):
        if ca.id not in touched and ca != cb:
            return False
    # linear conditions g_rest.h_rest + g_S M h_S^T = 0 on the entries of M
    eqs, rhs = [], []
    for cid in touched:
        ca, cb = ra.constraint(cid), rb.constraint(cid)
        if ca.code.dim != cb.code.dim or ca.ports != cb.ports:
            return False
        st = ca.code.structure
        scols = st.columns([state_id])
        rest = [k for k in range(st.total_dim) if k not in set(scols)]
        h = cb.code.parity_checks().array
        for g in ca.code.generators.array:
            for hv in h:
                coeff = np.outer(g[scols], hv[scols]).reshape(-1)
                eqs.append(coeff)
                rhs.append(-int(np.dot(g[rest], hv[rest])))
    for x in _solve_affine(eqs, rhs, p, d * d):
        m = x.reshape(d, d)
        if d == 0 or len(span(m.tolist(), p, d)) == p ** d:
            return True
    return False
