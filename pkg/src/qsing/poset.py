"""Enumeration of types by quotient dimension and the partial order on them."""

from __future__ import annotations

import logging
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import BudgetExceeded
from .formats import setting_from_json, setting_to_json, types_to_dot
from .local import direct_successors
from .names import name_for
from .quiver import (
    Quiver,
    QuiverError,
    QuiverSetting,
    canonicalize,
    quotient_dim,
    serialize,
)
from .reduction import (
    POINT,
    TypeRecord,
    applicable_steps,
    is_simple_setting,
    is_smooth_type,
    type_of_setting,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000_000


def default_budget() -> int:
    env = os.environ.get("QSING_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def dimension_vectors(total_max: int, n: int):
    """Non-increasing positive n-tuples with sum <= total_max."""

    def rec(prefix, rem, k, cap):
        if k == 0:
            yield tuple(prefix)
            return
        for v in range(min(cap, rem - (k - 1)), 0, -1):
            yield from rec(prefix + [v], rem - v, k - 1, v)

    yield from rec([], total_max, n, total_max)


def search_cells(D: int) -> list[tuple[int, ...]]:
    """Dimension vectors that can carry an irreducible type of dimension D >= 1.

    Both vertex numbers are <= -1 at every vertex of a type other than the
    point, so chi(a, a) <= -sum(a) and therefore sum(a) <= D - 1.
    """
    return [dims for n in range(1, D) for dims in dimension_vectors(D - 1, n)]


def _cell_types(dims, D, budget):
    a = np.array(dims, dtype=np.int64)
    target = D - 1 + int(a @ a)
    mats, nodes = _kernels.enumerate_arrow_matrices(a, target, budget)
    found = {}
    for m in mats:
        s = QuiverSetting(Quiver(m), a)
        # the kernel filter is a fast pre-check; the reference predicates decide
        if not is_simple_setting(s) or applicable_steps(s):
            continue
        if quotient_dim(s) != D:
            raise AssertionError(f"enumerated setting has dimension {quotient_dim(s)}, expected {D}")
        c = canonicalize(s)
        found.setdefault(c.key, c)
    return found, nodes


def enumerate_types(
    D: int, *, budget: int | None = None, threads: int = 1, singular_only: bool = False
) -> list[TypeRecord]:
    """All irreducible simple settings with quotient dimension D, up to isomorphism.

    Sorted by (vertex count, canonical serialisation). ``singular_only`` drops
    the two smooth types.
    """
    if D < 0:
        raise QuiverError(f"quotient dimension must be non-negative, got {D}")
    budget = default_budget() if budget is None else budget
    found: dict[bytes, object] = {}
    if D == 0:
        c = canonicalize(POINT)
        found[c.key] = c
    cells = search_cells(D)
    total_nodes = 0
    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda dims: _cell_types(dims, D, budget), cells))
    else:
        results = [_cell_types(dims, D, budget) for dims in cells]
    for part, nodes in results:
        total_nodes += nodes
        for key, c in part.items():
            found.setdefault(key, c)
    if total_nodes > budget:
        raise BudgetExceeded(f"enumeration of D={D} used {total_nodes} nodes, budget {budget}")
    log.debug("D=%d: %d cells, %d search nodes, %d types", D, len(cells), total_nodes, len(found))
    out = []
    for key in sorted(found, key=lambda k: (found[k].setting.n, k)):
        c = found[key]
        out.append(TypeRecord(c, D, name_for(c.hash)))
    if singular_only:
        out = [t for t in out if not is_smooth_type(t)]
    return out


def cyclic_compositions(total: int, parts: int, minimum: int = 2):
    """Compositions of ``total`` into ``parts`` parts >= minimum, one per rotation class."""

    def rec(prefix, rem, k):
        if k == 0:
            if rem == 0:
                yield tuple(prefix)
            return
        for v in range(minimum, rem - minimum * (k - 1) + 1):
            yield from rec(prefix + [v], rem - v, k - 1)

    seen = set()
    for comp in rec([], total, parts):
        rep = min(comp[r:] + comp[:r] for r in range(parts))
        if rep not in seen:
            seen.add(rep)
            yield rep


def cycle_setting(ks) -> QuiverSetting:
    """Oriented cycle on len(ks) dim-1 vertices with ks[i] arrows i -> i+1."""
    l = len(ks)
    m = np.zeros((l, l), dtype=np.int64)
    for i, k in enumerate(ks):
        m[i, (i + 1) % l] += k
    return QuiverSetting(Quiver(m), [1] * l)


def isolated_types(D: int) -> list[TypeRecord]:
    """The cyclic isolated-singularity family of quotient dimension D.

    For l >= 2 vertices with k_i >= 2 arrows the quotient dimension is
    sum(k) - l + 1, so sum(k) = D + l - 1 and l ranges up to D - 1.
    """
    out = {}
    for l in range(2, max(D, 2)):
        for ks in cyclic_compositions(D + l - 1, l):
            s = cycle_setting(ks)
            if quotient_dim(s) != D:
                raise AssertionError(f"cycle {ks} has dimension {quotient_dim(s)}, expected {D}")
            t = type_of_setting(s)
            out.setdefault(t.canonical.key, t)
    return [out[k] for k in sorted(out, key=lambda k: (out[k].setting.n, k))]


@dataclass
class TypePoset:
    """Types as nodes, direct-successor arrows as edges (by canonical hash)."""

    nodes: dict[str, TypeRecord] = field(default_factory=dict)
    edges: set[tuple[str, str]] = field(default_factory=set)
    complete_dims: set[int] = field(default_factory=set)
    _names: dict[str, str] = field(default_factory=dict, repr=False)

    @property
    def by_dim(self) -> dict[int, list[TypeRecord]]:
        out: dict[int, list[TypeRecord]] = {}
        for t in self.nodes.values():
            out.setdefault(t.dim, []).append(t)
        for v in out.values():
            v.sort(key=lambda t: (t.setting.n, t.canonical.key))
        return dict(sorted(out.items()))

    @property
    def minimal(self) -> TypeRecord:
        return type_of_setting(POINT)

    def is_trivial(self, edge: tuple[str, str]) -> bool:
        """Edges into the point; stored, but hidden in drawings."""
        return edge[1] == self.minimal.hash

    def successors(self, t: TypeRecord) -> list[TypeRecord]:
        return sorted(
            (self.nodes[b] for a, b in self.edges if a == t.hash),
            key=lambda x: (x.dim, x.setting.n, x.canonical.key),
        )

    def insert(self, t: TypeRecord) -> TypeRecord:
        """Add ``t`` and, recursively, everything below it."""
        if t.hash in self.nodes:
            return self.nodes[t.hash]
        todo = deque([t])
        while todo:
            cur = todo.popleft()
            if cur.hash in self.nodes:
                continue
            self.nodes[cur.hash] = cur
            for succ in direct_successors(cur):
                self.edges.add((cur.hash, succ.hash))
                if succ.hash not in self.nodes:
                    todo.append(succ)
        self._names.clear()
        return self.nodes[t.hash]

    def name(self, t: TypeRecord | str) -> str:
        digest = t if isinstance(t, str) else t.hash
        if not self._names:
            self._names = auto_names(self)
        return self._names[digest]

    def to_json(self) -> dict:
        nodes = []
        for dim, ts in self.by_dim.items():
            for t in ts:
                nodes.append(
                    {
                        "id": self.name(t),
                        "hash": t.hash,
                        "dim": t.dim,
                        "vertices": t.setting.n,
                        "smooth": is_smooth_type(t),
                        "setting": setting_to_json(t.setting),
                    }
                )
        edges = [
            {"source": self.name(a), "target": self.name(b), "trivial": self.is_trivial((a, b))}
            for a, b in self.edges
        ]
        edges.sort(key=lambda e: (e["source"], e["target"]))
        return {
            "complete_dims": sorted(self.complete_dims),
            "nodes": nodes,
            "edges": edges,
            "names": {t.hash: self.name(t) for t in self.nodes.values()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TypePoset":
        p = cls()
        ids = {}
        for node in doc["nodes"]:
            t = type_of_setting(setting_from_json(node["setting"]))
            if t.hash != node["hash"] or t.dim != node["dim"]:
                raise QuiverError(f"poset node {node['id']} does not match its stored hash/dimension")
            p.nodes[t.hash] = t
            ids[node["id"]] = t.hash
        for e in doc["edges"]:
            p.edges.add((ids[e["source"]], ids[e["target"]]))
        p.complete_dims = set(doc.get("complete_dims", []))
        return p

    def to_dot(self, include_trivial: bool = False, only: set[str] | None = None) -> str:
        keep = set(self.nodes) if only is None else only
        nodes = [(self.name(h), self.nodes[h].dim) for h in keep]
        edges = [
            (self.name(a), self.name(b))
            for a, b in self.edges
            if a in keep and b in keep and (include_trivial or not self.is_trivial((a, b)))
        ]
        return types_to_dot(nodes, edges)


def auto_names(p: TypePoset) -> dict[str, str]:
    """Published labels where known, else ``D_n#k`` (k by canonical order).

    Dimensions that were not exhaustively enumerated use a hash suffix,
    since their canonical rank is not known.
    """
    names = {}
    groups: dict[tuple[int, int], list[TypeRecord]] = {}
    for t in p.nodes.values():
        label = name_for(t.hash)
        if label is not None:
            names[t.hash] = label
        else:
            groups.setdefault((t.dim, t.setting.n), []).append(t)
    for (dim, n), ts in groups.items():
        ts.sort(key=lambda t: t.canonical.key)
        for k, t in enumerate(ts, start=1):
            if dim in p.complete_dims:
                names[t.hash] = f"{dim}_{n}#{k}"
            else:
                names[t.hash] = f"{dim}_{n}@{t.hash[:8]}"
    return names


def build_poset(max_dim: int, *, budget: int | None = None, threads: int = 1) -> TypePoset:
    """All types of quotient dimension <= max_dim with their successor edges."""
    if max_dim < 0:
        raise QuiverError("max_dim must be non-negative")
    p = TypePoset()
    for D in range(0, max_dim + 1):
        for t in enumerate_types(D, budget=budget, threads=threads):
            p.nodes[t.hash] = t
        p.complete_dims.add(D)
    for t in list(p.nodes.values()):
        for succ in direct_successors(t):
            if succ.hash not in p.nodes:
                raise AssertionError(f"successor {succ.setting} of {t.setting} missing from enumeration")
            p.edges.add((t.hash, succ.hash))
    return p


def downward_closure(p: TypePoset, t: TypeRecord) -> set[TypeRecord]:
    """``t`` and every type reachable from it."""
    if t.hash not in p.nodes:
        raise QuiverError(f"type {t.setting} is not in the poset")
    adj: dict[str, list[str]] = {}
    for a, b in p.edges:
        adj.setdefault(a, []).append(b)
    seen = {t.hash}
    todo = [t.hash]
    while todo:
        for b in adj.get(todo.pop(), []):
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return {p.nodes[h] for h in seen}


def serialize_type(t: TypeRecord) -> bytes:
    return serialize(t.setting)
