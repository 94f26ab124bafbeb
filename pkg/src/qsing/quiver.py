"""Quivers, dimension vectors, settings and their exact integer arithmetic."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

# magnitude guard for every stored integer; keeps all products inside int64
_INT_LIMIT = 1 << 31


class QuiverError(ValueError):
    """Domain error: arguments that violate a precondition."""


def _as_int_array(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if arr.ndim != ndim:
        raise QuiverError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    for v in arr.flat:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise QuiverError(f"{name} entries must be integers, got {v!r}")
        if abs(int(v)) >= _INT_LIMIT:
            raise OverflowError(f"{name} entry {v} exceeds the supported range")
    out = arr.astype(np.int64)
    out.setflags(write=False)
    return out


def _checked(value) -> int:
    value = int(value)
    if abs(value) >= 1 << 62:
        raise OverflowError(f"intermediate value {value} leaves the 64-bit range")
    return value


@dataclass(frozen=True, eq=False)
class Quiver:
    """A quiver given by its arrow-multiplicity matrix (loops on the diagonal)."""

    arrows: np.ndarray

    def __init__(self, arrows):
        arr = _as_int_array(arrows, 2, "arrows")
        if arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise QuiverError(f"arrow matrix must be square and non-empty, got {arr.shape}")
        if (arr < 0).any():
            raise QuiverError("arrow multiplicities must be non-negative")
        object.__setattr__(self, "arrows", arr)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Quiver":
        """Build from ``(i, j, count)`` triples, 0-based; repeated pairs add up."""
        if n < 1:
            raise QuiverError("a quiver needs at least one vertex")
        m = np.zeros((n, n), dtype=np.int64)
        for edge in edges:
            i, j, c = (int(x) for x in edge)
            if not (0 <= i < n and 0 <= j < n):
                raise QuiverError(f"arrow ({i}, {j}) out of range for {n} vertices")
            if c < 0:
                raise QuiverError("arrow counts must be non-negative")
            m[i, j] += c
        return cls(m)

    @property
    def n(self) -> int:
        return int(self.arrows.shape[0])

    def loops(self, i: int) -> int:
        return int(self.arrows[i, i])

    def edges(self) -> list[tuple[int, int, int]]:
        n = self.n
        return [(i, j, int(self.arrows[i, j])) for i in range(n) for j in range(n) if self.arrows[i, j]]

    def opposite(self) -> "Quiver":
        return Quiver(self.arrows.T)

    def __eq__(self, other):
        return isinstance(other, Quiver) and np.array_equal(self.arrows, other.arrows)

    def __hash__(self):
        return hash((self.n, self.arrows.tobytes()))

    def __repr__(self):
        return f"Quiver({self.arrows.tolist()})"


def dimvec(values, n: int | None = None, name: str = "dimension vector") -> np.ndarray:
    """Validated read-only non-negative integer vector."""
    arr = _as_int_array(values, 1, name)
    if n is not None and arr.shape[0] != n:
        raise QuiverError(f"{name} has length {arr.shape[0]}, quiver has {n} vertices")
    if (arr < 0).any():
        raise QuiverError(f"{name} entries must be non-negative")
    return arr


def stability(values, n: int | None = None) -> np.ndarray:
    arr = _as_int_array(values, 1, "stability")
    if n is not None and arr.shape[0] != n:
        raise QuiverError(f"stability has length {arr.shape[0]}, quiver has {n} vertices")
    return arr


def unit(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return e


def support(alpha) -> list[int]:
    return [i for i, v in enumerate(alpha) if v > 0]


def pairing(theta, alpha) -> int:
    """theta . alpha, exact."""
    return _checked(sum(int(t) * int(a) for t, a in zip(theta, alpha)))


def ringel(q: Quiver, a, b) -> int:
    """Ringel form: sum_i a_i b_i - sum_ij arrows[i][j] a_i b_j."""
    n = q.n
    if len(a) != n or len(b) != n:
        raise QuiverError(f"vectors of length {len(a)}, {len(b)} do not match {n} vertices")
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    total = sum(x * y for x, y in zip(a, b))
    A = q.arrows
    for i in range(n):
        if a[i] == 0:
            continue
        for j in range(n):
            if A[i, j] and b[j]:
                total -= int(A[i, j]) * a[i] * b[j]
    return _checked(total)


def is_strongly_connected(q: Quiver) -> bool:
    reach = _kernels.reachability(q.arrows)
    np.fill_diagonal(reach, True)
    return bool(reach.all())


def minimal_cycles(q: Quiver) -> list[frozenset[int]]:
    """Vertex sets of loops and minimal oriented cycles.

    A set I (|I| >= 2) qualifies when some oriented cycle visits each member of
    I exactly once and no proper subset of I carries a loop or oriented cycle.
    Results are sorted by (size, sorted members).
    """
    n = q.n
    A = q.arrows
    found: list[frozenset[int]] = [frozenset([i]) for i in range(n) if A[i, i] > 0]
    looped = {i for i in range(n) if A[i, i] > 0}
    # cycle vertex sets by DFS from the smallest member; keep support sets only
    supports: set[frozenset[int]] = set()
    succ = [[j for j in range(n) if j != i and A[i, j] > 0] for i in range(n)]
    for start in range(n):
        if start in looped:
            continue
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for w in succ[v]:
                if w == start and len(path) >= 2:
                    supports.add(frozenset(path))
                elif w > start and w not in path and w not in looped:
                    stack.append((w, path + [w]))
    for cyc in sorted(supports, key=lambda s: (len(s), sorted(s))):
        if not any(other < cyc for other in supports):
            found.append(cyc)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True, eq=False)
class QuiverSetting:
    """A quiver with a strictly positive dimension vector."""

    quiver: Quiver
    dim: np.ndarray

    def __init__(self, quiver: Quiver, dim):
        if not isinstance(quiver, Quiver):
            quiver = Quiver(quiver)
        d = dimvec(dim, quiver.n)
        if (d == 0).any():
            raise QuiverError("settings must be support-restricted (all dimensions positive)")
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "dim", d)

    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def arrows(self) -> np.ndarray:
        return self.quiver.arrows

    def total(self) -> int:
        return int(self.dim.sum())

    def chi(self) -> int:
        return ringel(self.quiver, self.dim, self.dim)

    def permuted(self, perm: Sequence[int]) -> "QuiverSetting":
        """Setting whose vertex k is the old vertex perm[k]."""
        p = np.asarray(perm, dtype=np.int64)
        return QuiverSetting(Quiver(self.arrows[np.ix_(p, p)]), self.dim[p])

    def __eq__(self, other):
        return (
            isinstance(other, QuiverSetting)
            and self.quiver == other.quiver
            and np.array_equal(self.dim, other.dim)
        )

    def __hash__(self):
        return hash((self.quiver, self.dim.tobytes()))

    def __repr__(self):
        return f"QuiverSetting(dim={self.dim.tolist()}, arrows={self.arrows.tolist()})"


def restrict_support(q: Quiver, alpha) -> QuiverSetting:
    """Drop zero-dimensional vertices and their arrows, keeping relative order."""
    a = dimvec(alpha, q.n)
    keep = support(a)
    if not keep:
        raise QuiverError("dimension vector has empty support")
    idx = np.array(keep, dtype=np.int64)
    return QuiverSetting(Quiver(q.arrows[np.ix_(idx, idx)]), a[idx])


def quotient_dim(s: QuiverSetting) -> int:
    return 1 - s.chi()


@dataclass(frozen=True)
class CanonicalSetting:
    setting: QuiverSetting
    hash: str = field(compare=False)

    @property
    def key(self) -> bytes:
        return serialize(self.setting)

    def __eq__(self, other):
        return isinstance(other, CanonicalSetting) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def serialize(s: QuiverSetting) -> bytes:
    """Byte serialisation of a setting in its current vertex order."""
    dims = ",".join(str(int(v)) for v in s.dim)
    rows = ";".join(",".join(str(int(v)) for v in row) for row in s.arrows)
    return f"{s.n}|{dims}|{rows}".encode()


def _refine(s: QuiverSetting) -> list[int]:
    # colour refinement seeded by (dim, loops); ranks are label-independent
    n = s.n
    A = s.arrows
    colour = [(int(s.dim[i]), int(A[i, i])) for i in range(n)]
    rank = _rank(colour)
    while True:
        sig = []
        for i in range(n):
            out = sorted((rank[j], int(A[i, j])) for j in range(n) if j != i and A[i, j])
            inc = sorted((rank[j], int(A[j, i])) for j in range(n) if j != i and A[j, i])
            sig.append((rank[i], tuple(out), tuple(inc)))
        new = _rank(sig)
        if len(set(new)) == len(set(rank)):
            return new
        rank = new


def _rank(keys) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def canonical_order(s: QuiverSetting) -> np.ndarray:
    """Vertex permutation putting ``s`` into canonical form."""
    rank = _refine(s)
    order = sorted(range(s.n), key=lambda i: (rank[i], i))
    starts = [0]
    for k in range(1, s.n):
        if rank[order[k]] != rank[order[k - 1]]:
            starts.append(k)
    starts.append(s.n)
    # cells already sorted ascending by vertex index within equal rank
    return _kernels.canonical_permutation(s.arrows, np.array(order), np.array(starts))


def canonicalize(s: QuiverSetting) -> CanonicalSetting:
    """Canonical representative under vertex relabelling, plus its sha256 digest."""
    c = s.permuted(canonical_order(s))
    return CanonicalSetting(c, hashlib.sha256(serialize(c)).hexdigest())


def isomorphic(s: QuiverSetting, t: QuiverSetting) -> bool:
    return canonicalize(s) == canonicalize(t)


def all_permutations_equal(s: QuiverSetting, t: QuiverSetting) -> bool:
    """Brute-force isomorphism test over every relabelling (reference only)."""
    if s.n != t.n:
        return False
    return any(s.permuted(p) == t for p in itertools.permutations(range(s.n)))
