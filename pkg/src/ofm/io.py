"""JSON file formats and plain-text graph export."""

from __future__ import annotations

import json
from pathlib import Path

from ofm.algebra import PhiAlgebra
from ofm.filters import FilterSpace, describe_filter
from ofm.order import FinitePoset, PosetError, bits, validate_poset
from ofm.topology import (
    ContinuousMap,
    FiniteSpace,
    from_base,
    validate_topology,
)


class InputError(ValueError):
    """Malformed or invalid input file."""


def read_json(source) -> dict:
    """Load a JSON object from a path, or pass an already-decoded dict through."""
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        with path.open(encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _ids(value, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise InputError(f"{what} must be a list of strings")
    return value


def _families(value, what: str) -> list[list[str]]:
    if not isinstance(value, list):
        raise InputError(f"{what} must be a list of lists of strings")
    return [_ids(x, f"each entry of {what}") for x in value]


def poset_from_dict(data: dict) -> FinitePoset:
    elements = _ids(data.get("elements"), "'elements'")
    pairs = data.get("leq", [])
    if not isinstance(pairs, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in pairs
    ):
        raise InputError("'leq' must be a list of [a, b] string pairs")
    try:
        return validate_poset(elements, [tuple(p) for p in pairs])
    except PosetError as e:
        raise InputError(f"{type(e).__name__}: {e}") from None


def space_from_dict(data: dict) -> FiniteSpace:
    points = _ids(data.get("points"), "'points'")
    if "opens" in data:
        return validate_topology(points, _families(data["opens"], "'opens'"))
    if "base" in data:
        return from_base(points, _families(data["base"], "'base'"))
    raise InputError("a space needs either 'opens' or 'base'")


def load_poset(source) -> FinitePoset:
    return poset_from_dict(read_json(source))


def load_space(source) -> FiniteSpace:
    return space_from_dict(read_json(source))


def load_structure(source) -> FinitePoset | FiniteSpace:
    data = read_json(source)
    if "elements" in data:
        return poset_from_dict(data)
    if "points" in data:
        return space_from_dict(data)
    raise InputError("expected a poset ('elements') or a space ('points')")


def poset_to_dict(P: FinitePoset) -> dict:
    return {"elements": list(P.elements), "leq": [list(c) for c in P.covers()]}


def space_to_dict(X: FiniteSpace) -> dict:
    return {"points": list(X.points), "opens": [X.sorted_members(o) for o in X.opens]}


def _embedded_space(value, base_dir: Path | None) -> FiniteSpace:
    if isinstance(value, dict):
        return space_from_dict(value)
    if isinstance(value, str):
        path = Path(value)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_space(path)
    raise InputError("'space' must be a space object or a path")


def _open_mask(X: FiniteSpace, members: list[str]) -> int:
    try:
        m = X.mask(members)
    except KeyError as e:
        raise InputError(str(e.args[0])) from None
    if not X.is_open(m):
        raise InputError(f"{members} is not an open of the space")
    return m


def load_algebra_entries(source, X: FiniteSpace | None = None) -> tuple[FiniteSpace, list[tuple[frozenset, str]]]:
    """Read an algebra map file; returns the space and (filter, point) pairs.

    When ``X`` is given and the file also embeds a space, the two must agree.
    """
    base_dir = None if isinstance(source, dict) else Path(source).parent
    data = read_json(source)
    embedded = _embedded_space(data["space"], base_dir) if "space" in data else None
    if X is None and embedded is None:
        raise InputError("map file has no 'space' and none was given")
    if X is not None and embedded is not None and embedded != X:
        raise InputError("the map file's space differs from the given space")
    X = X if X is not None else embedded
    entries = data.get("r")
    if not isinstance(entries, list):
        raise InputError("'r' must be a list of {filter, point} entries")
    out = []
    for e in entries:
        if not isinstance(e, dict) or "filter" not in e or "point" not in e:
            raise InputError("each 'r' entry needs 'filter' and 'point'")
        if not isinstance(e["point"], str) or e["point"] not in X.points:
            raise InputError(f"unknown point {e['point']!r}")
        v = frozenset(_open_mask(X, m) for m in _families(e["filter"], "'filter'"))
        out.append((v, e["point"]))
    return X, out


def algebra_to_dict(alg: PhiAlgebra) -> dict:
    return {"space": space_to_dict(alg.space), "r": alg.entries()}


def load_map(source, default_domain: FiniteSpace) -> ContinuousMap:
    """Map file: ``{"domain": space?, "codomain": space, "map": {"x": "y", ...}}``."""
    base_dir = None if isinstance(source, dict) else Path(source).parent
    data = read_json(source)
    X = _embedded_space(data["domain"], base_dir) if "domain" in data else default_domain
    if "codomain" not in data:
        raise InputError("map file needs a 'codomain'")
    Y = _embedded_space(data["codomain"], base_dir)
    mapping = data.get("map")
    if not isinstance(mapping, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in mapping.items()
    ):
        raise InputError("'map' must be an object from point ids to point ids")
    try:
        return ContinuousMap.from_dict(X, Y, mapping)
    except (KeyError, ValueError) as e:
        raise InputError(str(e.args[0])) from None


def filter_report(X: FiniteSpace, fs: FilterSpace, *, topology: bool = False,
                  admit_empty: bool = False) -> dict:
    filters = [{"index": k, "members": describe_filter(X, v)} for k, v in enumerate(fs.filters)]
    out = {"space": space_to_dict(X), "filters": filters, "count": len(filters)}
    if admit_empty:
        out["empty_filter_admitted"] = True
        out["count"] += 1
    if topology:
        out["topology"] = {
            "points": list(range(len(fs))),
            "opens": [bits(W) for W in fs.topology.opens],
            "base": [
                {"open": X.sorted_members(A), "phi": bits(fs.phi_masks[A])} for A in X.opens
            ],
        }
    return out


def _dot_id(x) -> str:
    return json.dumps(str(x), ensure_ascii=False)


def to_dot(name: str, nodes: list[tuple[str, str]], edges: list[tuple[str, str]]) -> str:
    """``nodes`` are (id, label) pairs; edges go from smaller to larger."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for node, label in nodes:
        lines.append(f"  {_dot_id(node)} [label={_dot_id(label)}];")
    for a, b in edges:
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cover_edges(n: int, leq) -> list[tuple[int, int]]:
    edges = []
    for a in range(n):
        for b in range(n):
            if a != b and leq(a, b) and not any(
                c not in (a, b) and leq(a, c) and leq(c, b) for c in range(n)
            ):
                edges.append((a, b))
    return edges


def _set_label(members) -> str:
    return "{" + ",".join(map(str, members)) + "}"


def hasse_dot(P: FinitePoset) -> str:
    nodes = [(str(e), str(e)) for e in P.elements]
    edges = [(str(P.elements[a]), str(P.elements[b])) for a, b in _cover_edges(P.n, P.leq_i)]
    return to_dot("hasse", nodes, edges)


def filters_dot(X: FiniteSpace, fs: FilterSpace) -> str:
    nodes = [
        (f"f{k}", " ".join(_set_label(m) for m in describe_filter(X, v)))
        for k, v in enumerate(fs.filters)
    ]
    edges = [(f"f{a}", f"f{b}") for a, b in
             _cover_edges(len(fs), lambda a, b: fs.filters[a] <= fs.filters[b])]
    return to_dot("filters", nodes, edges)


def topology_dot(X: FiniteSpace) -> str:
    opens = X.opens
    nodes = [(f"o{k}", _set_label(X.sorted_members(o))) for k, o in enumerate(opens)]
    edges = [(f"o{a}", f"o{b}") for a, b in
             _cover_edges(len(opens), lambda a, b: opens[a] & ~opens[b] == 0)]
    return to_dot("topology", nodes, edges)

