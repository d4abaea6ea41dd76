"""JSON realization documents and DOT export.

A document looks like::

    {
      "field": 2,
      "symbols": [{"id": "A0", "dim": 1}],
      "states": [{"id": "S1", "dim": 1}],
      "constraints": [
        {"id": "C0", "ports": ["A0", "S1"], "generators": [[1, 1]]}
      ]
    }

``dim`` defaults to 1.  Generator rows are integer lists over the
concatenated ports, or strings such as ``"01|1|0"`` with one group per port.
Entries are reduced mod p.
"""

from __future__ import annotations

import json
import re
from typing import Any

import numpy as np

from .code import BlockStructure, LinearCode
from .errors import DocumentError
from .linalg import MatrixGF, PrimeField
from .realization import (
    ConstraintCode,
    Realization,
    StateVar,
    SymbolVar,
    _port_labels,
    parse_row,
)

__all__ = ["parse", "serialize", "to_document", "from_document", "export_dot", "dumps_canonical"]


def _line_of(text: str | None, needle: str) -> int | None:
    if not text:
        return None
    pos = text.find(needle)
    return None if pos < 0 else text.count("\n", 0, pos) + 1


class _Locator:
    """Maps a document path to an approximate source line."""

    def __init__(self, text: str | None):
        self.text = text

    def error(self, path: str, message: str, anchor: str | None = None) -> DocumentError:
        line = _line_of(self.text, f'"{anchor}"') if anchor else None
        where = f"{path} (line {line})" if line else path
        return DocumentError(f"{where}: {message}")


def _require(cond: bool, loc: _Locator, path: str, message: str, anchor: str | None = None) -> None:
    if not cond:
        raise loc.error(path, message, anchor)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def from_document(doc: Any, text: str | None = None, field_override: int | None = None, strict: bool = True) -> Realization:
    """Build a realization from a decoded document (see the module docstring)."""
    loc = _Locator(text)
    _require(isinstance(doc, dict), loc, "$", "document must be an object")
    unknown = set(doc) - {"field", "symbols", "states", "constraints"}
    _require(not unknown, loc, "$", f"unknown keys {sorted(unknown)}")
    p = field_override if field_override is not None else doc.get("field")
    _require(_is_int(p), loc, "field", "field must be an integer prime", "field")
    try:
        field = PrimeField(p)
    except ValueError as exc:
        raise loc.error("field", str(exc), "field") from None

    def variables(key: str, cls, min_dim: int):
        out = []
        items = doc.get(key, [])
        _require(isinstance(items, list), loc, key, "must be a list", key)
        for n, item in enumerate(items):
            path = f"{key}[{n}]"
            _require(isinstance(item, dict), loc, path, "must be an object", key)
            _require(isinstance(item.get("id"), str) and item.get("id"), loc, path, "needs a string id", key)
            vid = item["id"]
            extra = set(item) - {"id", "dim"}
            _require(not extra, loc, path, f"unknown keys {sorted(extra)}", vid)
            dim = item.get("dim", 1)
            _require(_is_int(dim) and dim >= min_dim, loc, f"{path}.dim", f"dim must be an integer >= {min_dim}", vid)
            out.append(cls(vid, dim))
        return tuple(out)

    symbols = variables("symbols", SymbolVar, 1)
    states = variables("states", StateVar, 0)
    dims = {v.id: v.dim for v in symbols + states}

    constraints = []
    items = doc.get("constraints", [])
    _require(isinstance(items, list), loc, "constraints", "must be a list", "constraints")
    for n, item in enumerate(items):
        path = f"constraints[{n}]"
        _require(isinstance(item, dict), loc, path, "must be an object", "constraints")
        cid = item.get("id")
        _require(isinstance(cid, str) and cid, loc, path, "needs a string id", "constraints")
        extra = set(item) - {"id", "ports", "generators"}
        _require(not extra, loc, path, f"unknown keys {sorted(extra)}", cid)
        ports = item.get("ports")
        _require(
            isinstance(ports, list) and all(isinstance(v, str) for v in ports),
            loc, f"{path}.ports", "ports must be a list of variable ids", cid,
        )
        for v in ports:
            _require(v in dims, loc, f"{path}.ports", f"unknown variable {v!r}", cid)
        widths = [dims[v] for v in ports]
        rows = item.get("generators", [])
        _require(isinstance(rows, list), loc, f"{path}.generators", "must be a list", cid)
        parsed = []
        for t, row in enumerate(rows):
            rpath = f"{path}.generators[{t}]"
            if isinstance(row, str):
                try:
                    vals = parse_row(row, widths)
                except ValueError as exc:
                    raise loc.error(rpath, str(exc), cid) from None
            else:
                _require(isinstance(row, list) and all(_is_int(x) for x in row), loc, rpath, "row must be a list of integers", cid)
                vals = row
            _require(len(vals) == sum(widths), loc, rpath, f"row has {len(vals)} entries, ports need {sum(widths)}", cid)
            parsed.append(vals)
        structure = BlockStructure(tuple(zip(_port_labels(ports), widths)))
        g = MatrixGF(field, np.array(parsed, dtype=np.int64).reshape(len(parsed), sum(widths)), cols=sum(widths))
        constraints.append(ConstraintCode(cid, tuple(ports), LinearCode(structure, g)))

    r = Realization(field, symbols, states, tuple(constraints))
    if strict:
        report = r.validation
        if not report.ok:
            lines = []
            for issue in report.issues:
                line = _line_of(text, f'"{issue.where.split(".")[0]}"')
                suffix = f" (line {line})" if line else ""
                lines.append(f"{issue.kind} at {issue.where}{suffix}: {issue.message}")
            raise DocumentError("invalid realization: " + "; ".join(lines))
    return r


def parse(text: str, field_override: int | None = None, strict: bool = True) -> Realization:
    """Parse a JSON realization document.

    ``strict`` rejects anything that fails validation, including a
    disconnected graph.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc, text, field_override, strict)


def to_document(r: Realization) -> dict:
    return {
        "field": r.field.p,
        "symbols": [{"id": s.id, "dim": s.dim} for s in r.symbols],
        "states": [{"id": s.id, "dim": s.dim} for s in r.states],
        "constraints": [
            {"id": c.id, "ports": list(c.ports), "generators": c.code.generators.tolist()}
            for c in r.constraints
        ],
    }


_FLAT_LIST = re.compile(r"\[([^\[\]{}]*)\]")


def dumps_canonical(doc: Any) -> str:
    """Indented JSON with sorted keys; lists of scalars stay on one line."""
    text = json.dumps(doc, indent=2, sort_keys=True)

    def flatten(m: re.Match) -> str:
        return json.dumps(json.loads(m.group(0)), separators=(", ", ": "))

    return _FLAT_LIST.sub(flatten, text) + "\n"


def serialize(r: Realization) -> str:
    """Canonical document text: RREF generator rows, sorted keys."""
    return dumps_canonical(to_document(r))


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def export_dot(r: Realization) -> str:
    """Normal graph in DOT: boxes for constraints, edges for states, stubs for symbols."""
    lines = ["graph realization {", "  node [shape=box];"]
    for c in r.constraints:
        label = _q(c.id + "\\ndim " + str(c.dim))
        lines.append(f"  {_q(c.id)} [label={label}];")
    dims = r.var_dims
    for s in r.symbols:
        occ = r.occurrences.get(s.id, [])
        stub = f"{s.id}__stub"
        lines.append(f"  {_q(stub)} [shape=point];")
        for ci, _ in occ:
            lines.append(f"  {_q(r.constraints[ci].id)} -- {_q(stub)} [label={_q(f'{s.id}:{dims[s.id]}')}];")
    for s in r.states:
        occ = r.occurrences.get(s.id, [])
        label = _q(f"{s.id}:{s.dim}")
        if len(occ) == 2:
            u, v = (r.constraints[ci].id for ci, _ in occ)
            lines.append(f"  {_q(u)} -- {_q(v)} [label={label}];")
        elif len(occ) == 1:
            stub = f"{s.id}__stub"
            lines.append(f"  {_q(stub)} [shape=point];")
            lines.append(f"  {_q(r.constraints[occ[0][0]].id)} -- {_q(stub)} [label={label}, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
