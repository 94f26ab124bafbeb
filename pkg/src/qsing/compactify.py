"""Vertex splitting: turning (Q, theta) into an acyclic quiver with the same Q_theta."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .moduli import GeneratorSet, ModuliProblem, controlling_quiver, stable_decompositions
from .quiver import (
    Quiver,
    QuiverError,
    dimvec,
    isomorphic,
    restrict_support,
    stability,
)
from .reduction import is_simple_setting

MINUS_TO_PLUS = "minus_to_plus"
PLUS_TO_MINUS = "plus_to_minus"

Slot = int | tuple[int, int]


def on_cycle(q: Quiver) -> list[int]:
    """Vertices carrying a loop or lying on an oriented cycle."""
    reach = _kernels.reachability(q.arrows)
    return [i for i in range(q.n) if reach[i, i]]


def is_acyclic(q: Quiver) -> bool:
    return not on_cycle(q)


def split_vertex(
    q: Quiver, theta, i: int, n: int, loop_orientation: str = MINUS_TO_PLUS
) -> tuple[Quiver, np.ndarray]:
    """Replace vertex i by i- (at position i) and i+ (at position i + 1).

    i+ receives every arrow that ended at i, i- emits every arrow that left i,
    one new arrow runs i- -> i+, and each loop at i becomes one more arrow
    between the two (direction set by ``loop_orientation``). Stabilities are
    -n at i- and theta_i + n at i+.
    """
    th = stability(theta, q.n)
    if not 0 <= i < q.n:
        raise QuiverError(f"vertex {i} out of range for {q.n} vertices")
    if i not in on_cycle(q):
        raise QuiverError(f"vertex {i} lies on no loop or oriented cycle; nothing to split")
    if n < 1:
        raise QuiverError(f"splitting weight must be positive, got {n}")
    if loop_orientation not in (MINUS_TO_PLUS, PLUS_TO_MINUS):
        raise QuiverError(f"unknown loop orientation {loop_orientation!r}")
    A = q.arrows
    old = [k for k in range(q.n) if k != i]
    pos = {k: (k if k < i else k + 1) for k in old}
    minus, plus = i, i + 1
    B = np.zeros((q.n + 1, q.n + 1), dtype=np.int64)
    for k in old:
        for l in old:
            B[pos[k], pos[l]] = A[k, l]
        B[pos[k], plus] = A[k, i]
        B[minus, pos[k]] = A[i, k]
    B[minus, plus] = 1
    loops = int(A[i, i])
    if loop_orientation == MINUS_TO_PLUS:
        B[minus, plus] += loops
    else:
        B[plus, minus] += loops
    th2 = np.empty(q.n + 1, dtype=np.int64)
    for k in old:
        th2[pos[k]] = th[k]
    th2[minus] = -n
    th2[plus] = th[i] + n
    return Quiver(B), th2


@dataclass
class SplitPlan:
    source: Quiver
    theta: np.ndarray
    steps: list[tuple[int, int]] = field(default_factory=list)  # (original vertex, weight)
    result: Quiver | None = None
    result_theta: np.ndarray | None = None
    vertex_map: dict[int, Slot] = field(default_factory=dict)

    @property
    def acyclic(self) -> bool:
        return is_acyclic(self.result)

    def lift(self, alpha) -> np.ndarray:
        """alpha' with alpha'(i-) = alpha'(i+) = alpha_i for split vertices."""
        a = dimvec(alpha, self.source.n)
        out = np.zeros(self.result.n, dtype=np.int64)
        for v, slot in self.vertex_map.items():
            for k in _slots(slot):
                out[k] = a[v]
        return out

    def induced_generators(self) -> list[np.ndarray]:
        """e_i for kept vertices, e_{i-} + e_{i+} for split ones, in source order."""
        out = []
        for v in range(self.source.n):
            g = np.zeros(self.result.n, dtype=np.int64)
            for k in _slots(self.vertex_map[v]):
                g[k] = 1
            out.append(g)
        return out

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(self.induced_generators(), self.result_theta)

    def controlling_quiver(self) -> Quiver:
        return controlling_quiver(self.generator_set(), self.result)

    def to_json(self) -> dict:
        from .formats import quiver_to_json

        return {
            "source": quiver_to_json(self.source),
            "theta": [int(x) for x in self.theta],
            "splits": [{"vertex": v, "weight": w} for v, w in self.steps],
            "quiver": quiver_to_json(self.result),
            "theta_split": [int(x) for x in self.result_theta],
            "vertex_map": {str(v): (list(s) if isinstance(s, tuple) else s) for v, s in self.vertex_map.items()},
            "acyclic": self.acyclic,
        }


def _slots(slot: Slot) -> tuple[int, ...]:
    return slot if isinstance(slot, tuple) else (slot,)


def default_weight(theta: np.ndarray, dim_bound: int) -> int:
    """Large enough that i- / i+ never split a representation of total dim <= dim_bound."""
    return 1 + int(np.abs(theta).max(initial=0)) * dim_bound


def acyclify(
    q: Quiver,
    theta,
    *,
    vertices: Sequence[int] | None = None,
    weights: Sequence[int] | Callable[[int, np.ndarray], int] | None = None,
    dim_bound: int = 4,
    loop_orientation: str = MINUS_TO_PLUS,
) -> SplitPlan:
    """Split vertices until no oriented cycle is left.

    ``vertices`` (source labels) fixes the order; otherwise each step
    greedily splits the vertex that leaves the fewest vertices on cycles.
    ``weights`` is a list consumed one per split, or a callable
    (step, current theta) -> n.
    """
    th = stability(theta, q.n)
    plan = SplitPlan(q, th)
    cur, cur_th = q, th
    vmap: dict[int, Slot] = {v: v for v in range(q.n)}
    todo = list(vertices) if vertices is not None else None
    step = 0
    while True:
        cyc = set(on_cycle(cur))
        if todo is not None:
            if not todo:
                break
            v = int(todo.pop(0))
            if v not in vmap or isinstance(vmap[v], tuple):
                raise QuiverError(f"vertex {v} is unknown or already split")
        else:
            cands = [v for v, s in vmap.items() if not isinstance(s, tuple) and s in cyc]
            if not cands:
                break
            # fewest vertices left on cycles after the split; ties go to the lowest label
            v = min(cands, key=lambda u: (len(on_cycle(split_vertex(cur, cur_th, vmap[u], 1)[0])), u))
        idx = vmap[v]
        if weights is None:
            w = default_weight(cur_th, dim_bound)
        elif callable(weights):
            w = int(weights(step, cur_th))
        else:
            if step >= len(weights):
                raise QuiverError(f"only {len(weights)} weights given, split {step + 1} needs one more")
            w = int(weights[step])
        cur, cur_th = split_vertex(cur, cur_th, idx, w, loop_orientation)
        for u, s in vmap.items():
            vmap[u] = tuple(k + 1 if k > idx else k for k in s) if isinstance(s, tuple) else (s + 1 if s > idx else s)
        vmap[v] = (idx, idx + 1)
        plan.steps.append((v, w))
        step += 1
    plan.result, plan.result_theta, plan.vertex_map = cur, cur_th, vmap
    return plan


def control_check(plan: SplitPlan, max_total: int = 4) -> list[tuple[int, ...]]:
    """Simple dimension vectors of the source (total <= max_total) that fail to transfer.

    For each, the lifted problem on the split quiver must have exactly one
    stable decomposition, with a local setting isomorphic to the original.
    Returns the failing vectors (empty on success).
    """
    src = plan.source
    gens = plan.generator_set()
    failures = []
    for a in product(range(max_total + 1), repeat=src.n):
        if not 0 < sum(a) <= max_total:
            continue
        s = restrict_support(src, a)
        if not is_simple_setting(s):
            continue
        p = ModuliProblem(plan.result, plan.result_theta, plan.lift(a), gens)
        cs = stable_decompositions(p)
        ok = len(cs) == 1 and isomorphic(restrict_support(p.q_theta, cs[0]), s)
        if not ok:
            failures.append(tuple(a))
    return failures
