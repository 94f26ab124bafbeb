"""JSON wire formats and DOT rendering."""

from __future__ import annotations

import json
from typing import Any, Iterable

from .quiver import Quiver, QuiverError, QuiverSetting


class FormatError(ValueError):
    """Malformed input document."""


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def quiver_to_json(q: Quiver) -> dict:
    return {"vertices": q.n, "arrows": [list(e) for e in q.edges()]}


def quiver_from_json(doc: Any) -> Quiver:
    if not isinstance(doc, dict) or "vertices" not in doc or "arrows" not in doc:
        raise FormatError('quiver must be an object with "vertices" and "arrows"')
    n = doc["vertices"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise FormatError('"vertices" must be an integer')
    edges = doc["arrows"]
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        for e in edges
    ):
        raise FormatError('"arrows" must be a list of [i, j, count] integer triples')
    return Quiver.from_edges(n, edges)


def int_list(doc: Any, name: str) -> list[int]:
    if not isinstance(doc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in doc):
        raise FormatError(f"{name} must be a list of integers")
    return list(doc)


def setting_to_json(s: QuiverSetting) -> dict:
    return {"quiver": quiver_to_json(s.quiver), "dim": [int(v) for v in s.dim]}


def setting_from_json(doc: Any) -> QuiverSetting:
    """Accepts ``{"quiver": ..., "dim": [...]}`` (``"alpha"`` is an alias for ``"dim"``)."""
    if not isinstance(doc, dict) or "quiver" not in doc:
        raise FormatError('setting must be an object with "quiver" and "dim"')
    key = "dim" if "dim" in doc else "alpha"
    if key not in doc:
        raise FormatError('setting is missing "dim"')
    return QuiverSetting(quiver_from_json(doc["quiver"]), int_list(doc[key], key))


def reptype_from_json(doc: Any) -> list[tuple[int, list[int]]]:
    if not isinstance(doc, dict) or not isinstance(doc.get("factors"), list):
        raise FormatError('rep type must be an object with a "factors" list')
    out = []
    for f in doc["factors"]:
        if not (isinstance(f, list) and len(f) == 2 and isinstance(f[0], int)):
            raise FormatError("each factor must be [multiplicity, [dimension vector]]")
        out.append((f[0], int_list(f[1], "factor dimension vector")))
    return out


def load_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def _dot_edges(q: Quiver, prefix: str = "v") -> list[str]:
    lines = []
    for i, j, m in q.edges():
        attr = f' [label="{m}"]' if m != 1 else ""
        lines.append(f"  {prefix}{i} -> {prefix}{j}{attr};")
    return lines


def setting_to_dot(s: QuiverSetting | Quiver, name: str = "Q") -> str:
    """One node per vertex labelled ``v{i} [dim]``; multiplicity m as edge label."""
    q = s.quiver if isinstance(s, QuiverSetting) else s
    lines = [f"digraph {_dot_id(name)} {{"]
    for i in range(q.n):
        label = f"v{i} [{int(s.dim[i])}]" if isinstance(s, QuiverSetting) else f"v{i}"
        lines.append(f'  v{i} [label="{label}"];')
    lines.extend(_dot_edges(q))
    lines.append("}")
    return "\n".join(lines) + "\n"


def types_to_dot(
    nodes: Iterable[tuple[str, int]], edges: Iterable[tuple[str, str]], name: str = "types"
) -> str:
    """Type diagram with one rank per quotient dimension (highest on top)."""
    nodes = list(nodes)
    by_dim: dict[int, list[str]] = {}
    for label, dim in nodes:
        by_dim.setdefault(dim, []).append(label)
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=TB;"]
    for dim in sorted(by_dim, reverse=True):
        members = " ".join(f'"{m}";' for m in sorted(by_dim[dim]))
        lines.append(f"  subgraph rank_{dim} {{ rank=same; {members} }}")
    for src, tgt in sorted(edges):
        lines.append(f'  "{src}" -> "{tgt}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    safe = "".join(c if c.isalnum() or c == "_" else "_" for c in name)
    return safe or "G"


def check_same_length(name: str, values, n: int) -> None:
    if len(values) != n:
        raise QuiverError(f"{name} has length {len(values)}, expected {n}")
