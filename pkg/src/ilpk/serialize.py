"""Instance documents: a canonical JSON schema for instances plus optional
structural certificates, and the small text formats the CLI consumes.

Document layout (all certificate blocks optional)::

    {
      "format_version": 1,
      "variables":   [{"name": "x1", "lo": 0, "hi": 1}, ...],
      "constraints": [{"coeffs": {"x1": 1}, "rel": "<=", "rhs": 1}, ...],
      "certificates": {
        "tree_decomposition":       {"bags": [["x1", ...], ...],
                                     "edges": [[0, 1], ...], "root": 0},
        "nice_decomposition":       {"nodes": [{"kind": "leaf", "bag": [...],
                                     "children": [], "var": null, "row": null},
                                     ...], "root": 0},
        "protrusion_decomposition": {"y0": [...], "parts": [[...], ...],
                                     "r": 2, "alpha": 3},
        "boundary":                 ["x1", "x2"],
        "tu_modified_entries":      [[3, 7], ...]
      }
    }

Serialization is canonical (sorted keys, two-space indent, trailing newline),
so equal objects produce byte-identical documents.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .core import Constraint, DomainInterval, Ilp, Rel, Variable
from .errors import ParseError
from .gaifman import NiceGaifmanDecomposition, NiceNode, TreeDecomposition, td_from_json
from .protrusion import ProtrusionDecomposition

__all__ = ["parse_instance", "serialize_instance", "canonicalize",
           "parse_graph_file", "resolve_names"]

FORMAT_VERSION = 1
_CERT_KEYS = {"tree_decomposition", "nice_decomposition", "protrusion_decomposition",
              "boundary", "tu_modified_entries"}


def _need(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_name(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}: expected a nonempty string, got {value!r}")
    return value


def resolve_names(ilp: Ilp, names, where: str = "names") -> tuple[int, ...]:
    index = {v.name: i for i, v in enumerate(ilp.vars)}
    out = []
    for k, name in enumerate(names):
        name = _as_name(name, f"{where}[{k}]")
        if name not in index:
            raise ParseError(f"{where}[{k}]: undeclared variable {name!r}")
        out.append(index[name])
    return tuple(out)


def parse_instance(data: bytes | str) -> tuple[Ilp, dict[str, Any]]:
    """Parse a document into an Ilp plus decoded certificates.

    Raises ParseError with a field path on any schema violation, including
    duplicate or dangling names and empty domains.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    unknown = set(doc) - {"format_version", "variables", "constraints", "certificates"}
    if unknown:
        raise ParseError(f"top level: unknown fields {sorted(unknown)}")
    if _as_int(_need(doc, "format_version", "top level"), "format_version") != FORMAT_VERSION:
        raise ParseError(f"format_version: expected {FORMAT_VERSION}")

    raw_vars = _need(doc, "variables", "top level")
    if not isinstance(raw_vars, list):
        raise ParseError("variables: expected a list")
    variables: list[Variable] = []
    seen: set[str] = set()
    for i, rv in enumerate(raw_vars):
        where = f"variables[{i}]"
        if not isinstance(rv, dict) or set(rv) != {"name", "lo", "hi"}:
            raise ParseError(f"{where}: expected an object with name/lo/hi")
        name = _as_name(rv["name"], f"{where}.name")
        if name in seen:
            raise ParseError(f"{where}.name: duplicate variable {name!r}")
        seen.add(name)
        lo = _as_int(rv["lo"], f"{where}.lo")
        hi = _as_int(rv["hi"], f"{where}.hi")
        if lo > hi:
            raise ParseError(f"{where}: empty domain [{lo}, {hi}]")
        variables.append(Variable(name, DomainInterval(lo, hi)))
    index = {v.name: i for i, v in enumerate(variables)}

    raw_cons = _need(doc, "constraints", "top level")
    if not isinstance(raw_cons, list):
        raise ParseError("constraints: expected a list")
    constraints: list[Constraint] = []
    for i, rc in enumerate(raw_cons):
        where = f"constraints[{i}]"
        if not isinstance(rc, dict) or set(rc) != {"coeffs", "rel", "rhs"}:
            raise ParseError(f"{where}: expected an object with coeffs/rel/rhs")
        raw_coeffs = rc["coeffs"]
        if not isinstance(raw_coeffs, dict):
            raise ParseError(f"{where}.coeffs: expected an object")
        coeffs: dict[int, int] = {}
        for name, coef in raw_coeffs.items():
            if name not in index:
                raise ParseError(f"{where}.coeffs: undeclared variable {name!r}")
            value = _as_int(coef, f"{where}.coeffs[{name!r}]")
            if value == 0:
                raise ParseError(f"{where}.coeffs[{name!r}]: zero coefficient")
            coeffs[index[name]] = value
        rel_text = rc["rel"]
        try:
            rel = Rel(rel_text)
        except ValueError:
            raise ParseError(f"{where}.rel: expected one of <=, >=, =") from None
        constraints.append(Constraint(coeffs, rel, _as_int(rc["rhs"], f"{where}.rhs")))

    ilp = Ilp(tuple(variables), tuple(constraints))
    certificates: dict[str, Any] = {}
    raw_certs = doc.get("certificates", {})
    if not isinstance(raw_certs, dict):
        raise ParseError("certificates: expected an object")
    unknown = set(raw_certs) - _CERT_KEYS
    if unknown:
        raise ParseError(f"certificates: unknown kinds {sorted(unknown)}")

    if "tree_decomposition" in raw_certs:
        certificates["tree_decomposition"] = _parse_td(ilp, raw_certs["tree_decomposition"])
    if "nice_decomposition" in raw_certs:
        certificates["nice_decomposition"] = _parse_ngd(ilp, raw_certs["nice_decomposition"])
    if "protrusion_decomposition" in raw_certs:
        certificates["protrusion_decomposition"] = _parse_pd(
            ilp, raw_certs["protrusion_decomposition"])
    if "boundary" in raw_certs:
        names = raw_certs["boundary"]
        if not isinstance(names, list):
            raise ParseError("certificates.boundary: expected a list of names")
        boundary = resolve_names(ilp, names, "certificates.boundary")
        if len(set(boundary)) != len(boundary):
            raise ParseError("certificates.boundary: repeated variable")
        certificates["boundary"] = boundary
    if "tu_modified_entries" in raw_certs:
        raw = raw_certs["tu_modified_entries"]
        where = "certificates.tu_modified_entries"
        if not isinstance(raw, list):
            raise ParseError(f"{where}: expected a list of [row, col] pairs")
        entries = []
        for i, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}[{i}]: expected [row, col]")
            row = _as_int(pair[0], f"{where}[{i}][0]")
            col = _as_int(pair[1], f"{where}[{i}][1]")
            if not (0 <= row < ilp.m and 0 <= col < ilp.n):
                raise ParseError(f"{where}[{i}]: position ({row}, {col}) out of range")
            entries.append((row, col))
        certificates["tu_modified_entries"] = entries
    return ilp, certificates


def _parse_td(ilp: Ilp, raw: Any) -> TreeDecomposition:
    where = "certificates.tree_decomposition"
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object")
    bags_raw = _need(raw, "bags", where)
    if not isinstance(bags_raw, list):
        raise ParseError(f"{where}.bags: expected a list")
    bags = [sorted(resolve_names(ilp, bag, f"{where}.bags[{i}]"))
            for i, bag in enumerate(bags_raw)]
    obj = {"bags": bags, "edges": raw.get("edges", []), "root": raw.get("root", 0)}
    return td_from_json(obj)


def _parse_ngd(ilp: Ilp, raw: Any) -> NiceGaifmanDecomposition:
    where = "certificates.nice_decomposition"
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object")
    nodes_raw = _need(raw, "nodes", where)
    if not isinstance(nodes_raw, list):
        raise ParseError(f"{where}.nodes: expected a list")
    nodes = []
    for i, rn in enumerate(nodes_raw):
        w = f"{where}.nodes[{i}]"
        if not isinstance(rn, dict):
            raise ParseError(f"{w}: expected an object")
        kind = _as_name(_need(rn, "kind", w), f"{w}.kind")
        bag = frozenset(resolve_names(ilp, _need(rn, "bag", w), f"{w}.bag"))
        children = tuple(_as_int(c, f"{w}.children") for c in _need(rn, "children", w))
        var = rn.get("var")
        var_idx = resolve_names(ilp, [var], f"{w}.var")[0] if var is not None else None
        row = rn.get("row")
        row_idx = _as_int(row, f"{w}.row") if row is not None else None
        nodes.append(NiceNode(kind, bag, children, var_idx, row_idx))
    root = _as_int(raw.get("root", len(nodes) - 1), f"{where}.root")
    if not (0 <= root < len(nodes)):
        raise ParseError(f"{where}.root: out of range")
    return NiceGaifmanDecomposition(tuple(nodes), root)


def _parse_pd(ilp: Ilp, raw: Any) -> ProtrusionDecomposition:
    where = "certificates.protrusion_decomposition"
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object")
    y0 = frozenset(resolve_names(ilp, _need(raw, "y0", where), f"{where}.y0"))
    parts_raw = _need(raw, "parts", where)
    if not isinstance(parts_raw, list):
        raise ParseError(f"{where}.parts: expected a list")
    parts = tuple(frozenset(resolve_names(ilp, part, f"{where}.parts[{i}]"))
                  for i, part in enumerate(parts_raw))
    return ProtrusionDecomposition(y0, parts, _as_int(_need(raw, "r", where), f"{where}.r"),
                                   _as_int(_need(raw, "alpha", where), f"{where}.alpha"))


def _encode_certs(ilp: Ilp, certificates: dict[str, Any]) -> dict[str, Any]:
    name = lambda v: ilp.vars[v].name  # noqa: E731
    out: dict[str, Any] = {}
    for key, cert in certificates.items():
        if key == "tree_decomposition":
            out[key] = {
                "bags": [sorted(name(v) for v in bag) for bag in cert.bags],
                "edges": [[p, i] for i, p in enumerate(cert.parent) if p != -1],
                "root": cert.root,
            }
        elif key == "nice_decomposition":
            out[key] = {
                "nodes": [{
                    "kind": nd.kind,
                    "bag": sorted(name(v) for v in nd.bag),
                    "children": list(nd.children),
                    "var": name(nd.var) if nd.var is not None else None,
                    "row": nd.row,
                } for nd in cert.nodes],
                "root": cert.root,
            }
        elif key == "protrusion_decomposition":
            out[key] = {
                "y0": sorted(name(v) for v in cert.y0),
                "parts": [sorted(name(v) for v in part) for part in cert.parts],
                "r": cert.r,
                "alpha": cert.alpha,
            }
        elif key == "boundary":
            out[key] = [name(v) for v in cert]
        elif key == "tu_modified_entries":
            out[key] = [[row, col] for row, col in cert]
        else:
            raise ParseError(f"unknown certificate kind {key!r}")
    return out


def serialize_instance(ilp: Ilp, certificates: Optional[dict[str, Any]] = None) -> bytes:
    """Canonical JSON bytes for an instance plus certificates."""
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "variables": [{"name": v.name, "lo": v.domain.lo, "hi": v.domain.hi}
                      for v in ilp.vars],
        "constraints": [{
            "coeffs": {ilp.vars[v].name: c for v, c in con.sorted_terms()},
            "rel": con.rel.value,
            "rhs": con.rhs,
        } for con in ilp.constraints],
    }
    if certificates:
        doc["certificates"] = _encode_certs(ilp, certificates)
    return canonicalize_obj(doc)


def canonicalize_obj(doc: Any) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()


def canonicalize(data: bytes | str) -> bytes:
    """Re-emit a JSON document in canonical byte form."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return canonicalize_obj(json.loads(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None


def parse_graph_file(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Edge-list graph: first data line is the vertex count, then one
    0-based ``u v`` pair per line; '#' starts a comment."""
    n: Optional[int] = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParseError(f"line {lineno}: expected the vertex count")
            n = int(parts[0])
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ParseError("graph file has no vertex count")
    return n, edges
