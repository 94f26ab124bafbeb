"""Simple-setting test and Bocklandt's reduction steps down to the type."""

from __future__ import annotations

import contextlib
import enum
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .names import name_for
from .quiver import (
    CanonicalSetting,
    Quiver,
    QuiverError,
    QuiverSetting,
    canonicalize,
    is_strongly_connected,
    quotient_dim,
)


class StepKind(str, enum.Enum):
    REMOVE_LOOPS_DIM1 = "RemoveLoopsDim1"
    CABLE_VERTEX = "CableVertex"
    SPLIT_UNIQUE_LOOP = "SplitUniqueLoop"


@dataclass(frozen=True)
class ReductionStep:
    kind: StepKind
    vertex: int
    before: QuiverSetting
    after: QuiverSetting

    @property
    def chi_gain(self) -> int:
        """chi(after) - chi(before); the affine factor dimension this step splits off."""
        return self.after.chi() - self.before.chi()


@dataclass(frozen=True)
class TypeRecord:
    canonical: CanonicalSetting
    dim: int
    name: str | None = None

    @property
    def setting(self) -> QuiverSetting:
        return self.canonical.setting

    @property
    def hash(self) -> str:
        return self.canonical.hash

    def __eq__(self, other):
        return isinstance(other, TypeRecord) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)


def vertex_numbers(s: QuiverSetting, i: int) -> tuple[int, int]:
    """(chi(alpha, e_i), chi(e_i, alpha)): vertex dimension minus incoming, resp. outgoing, dimension."""
    if not 0 <= i < s.n:
        raise QuiverError(f"vertex {i} out of range for {s.n} vertices")
    A = s.arrows
    a = s.dim
    incoming = int(a @ A[:, i])
    outgoing = int(A[i, :] @ a)
    return int(a[i]) - incoming, int(a[i]) - outgoing


def _is_oriented_cycle(q: Quiver) -> bool:
    A = q.arrows
    return bool((A.sum(axis=0) == 1).all() and (A.sum(axis=1) == 1).all()) and is_strongly_connected(q)


def is_simple_setting(s: QuiverSetting) -> bool:
    """Whether (Q, alpha) admits a simple representation."""
    if s.n == 1 and s.arrows[0, 0] == 0:
        return int(s.dim[0]) == 1
    if not is_strongly_connected(s.quiver):
        return False
    for i in range(s.n):
        if max(vertex_numbers(s, i)) > 0:
            return False
    if _is_oriented_cycle(s.quiver) and (s.dim != 1).any():
        return False
    return True


def applicable_steps(s: QuiverSetting) -> list[tuple[StepKind, int]]:
    """Every (rule, vertex) pair that applies, in the deterministic search order."""
    A = s.arrows
    a = s.dim
    rule1, rule2, rule3 = [], [], []
    for i in range(s.n):
        loops = int(A[i, i])
        nin, nout = vertex_numbers(s, i)
        if a[i] == 1 and loops >= 1:
            rule1.append((StepKind.REMOVE_LOOPS_DIM1, i))
        if loops == 0 and (nin == 0 or nout == 0) and s.n > 1:
            rule2.append((StepKind.CABLE_VERTEX, i))
        if loops == 1 and a[i] > 1 and (nin == -1 or nout == -1):
            rule3.append((StepKind.SPLIT_UNIQUE_LOOP, i))
    return rule1 + rule2 + rule3


def _remove_loops(s: QuiverSetting, i: int) -> QuiverSetting:
    A = s.arrows.copy()
    A[i, i] = 0
    return QuiverSetting(Quiver(A), s.dim)


def _cable(s: QuiverSetting, i: int) -> QuiverSetting:
    A = s.arrows.astype(object)
    if A[i, i]:
        raise QuiverError(f"refusing to cable vertex {i}: it carries loops")
    keep = [k for k in range(s.n) if k != i]
    B = np.zeros((len(keep), len(keep)), dtype=object)
    for x, k in enumerate(keep):
        for y, l in enumerate(keep):
            B[x, y] = A[k, l] + A[k, i] * A[i, l]
    return QuiverSetting(Quiver(B.astype(np.int64)), s.dim[keep])


def _split_loop(s: QuiverSetting, i: int) -> QuiverSetting:
    A = s.arrows.copy()
    a = s.dim
    k = int(a[i])
    nin, nout = vertex_numbers(s, i)
    if nin == -1:
        sources = [j for j in range(s.n) if j != i and A[j, i]]
        if len(sources) != 1 or A[sources[0], i] != 1 or a[sources[0]] != 1:
            raise QuiverError(f"vertex {i}: in-number -1 without a single arrow from a dim-1 vertex")
        A[sources[0], i] = k
    elif nout == -1:
        targets = [j for j in range(s.n) if j != i and A[i, j]]
        if len(targets) != 1 or A[i, targets[0]] != 1 or a[targets[0]] != 1:
            raise QuiverError(f"vertex {i}: out-number -1 without a single arrow to a dim-1 vertex")
        A[i, targets[0]] = k
    else:
        raise QuiverError(f"rule 3 does not apply at vertex {i}")
    A[i, i] = 0
    return QuiverSetting(Quiver(A), a)


_APPLY = {
    StepKind.REMOVE_LOOPS_DIM1: _remove_loops,
    StepKind.CABLE_VERTEX: _cable,
    StepKind.SPLIT_UNIQUE_LOOP: _split_loop,
}


def perform(s: QuiverSetting, kind: StepKind, vertex: int) -> ReductionStep:
    after = _APPLY[kind](s, vertex)
    return ReductionStep(kind, vertex, s, after)


def apply_step(
    s: QuiverSetting,
    choose: Callable[[Sequence[tuple[StepKind, int]]], tuple[StepKind, int]] | None = None,
    *,
    check_simple: bool = True,
) -> tuple[ReductionStep, QuiverSetting] | None:
    """Apply one reduction step, or return None when ``s`` is irreducible.

    By default the first applicable step is taken (rule 1, then 2, then 3,
    lowest vertex first); ``choose`` overrides the pick.

    A loop split leaves the split vertex with a zero number on the side that
    received the k arrows, while the opposite number can turn positive. That
    intermediate is not simple, and the forced cabling of the vertex repairs
    it, so traces pass ``check_simple=False`` after the first step.
    """
    if check_simple and not is_simple_setting(s):
        raise QuiverError("reduction steps are defined on simple settings only")
    options = applicable_steps(s)
    if not options:
        return None
    kind, vertex = options[0] if choose is None else choose(options)
    step = perform(s, kind, vertex)
    return step, step.after


_recorders: list[list] = []


@contextlib.contextmanager
def record_reductions():
    """Collect (input setting, trace) for every reduction run inside the block."""
    log: list[tuple[QuiverSetting, list[ReductionStep]]] = []
    _recorders.append(log)
    try:
        yield log
    finally:
        _recorders.remove(log)


def reduction_trace(s: QuiverSetting, rng: random.Random | None = None) -> list[ReductionStep]:
    """All steps taken from ``s`` to its type; random choices when ``rng`` is given."""
    if not is_simple_setting(s):
        raise QuiverError("reduction steps are defined on simple settings only")
    choose = None if rng is None else rng.choice
    trace = []
    current = s
    while True:
        res = apply_step(current, choose, check_simple=False)
        if res is None:
            if not is_simple_setting(current):
                raise AssertionError(f"reduction ended in a non-simple setting {current}")
            for log in _recorders:
                log.append((s, trace))
            return trace
        step, current = res
        before = (step.before.n, int(np.trace(step.before.arrows)))
        after = (current.n, int(np.trace(current.arrows)))
        if not after < before:
            raise AssertionError(f"reduction step {step.kind} did not decrease (vertices, loops)")
        trace.append(step)


def irreducible_setting(s: QuiverSetting, rng: random.Random | None = None) -> QuiverSetting:
    trace = reduction_trace(s, rng)
    return trace[-1].after if trace else s


def reduce_to_type(s: QuiverSetting, rng: random.Random | None = None) -> TypeRecord:
    """The unique irreducible type of a simple setting, canonicalised."""
    t = irreducible_setting(s, rng)
    canon = canonicalize(t)
    return TypeRecord(canon, quotient_dim(t), name_for(canon.hash))


def type_of_setting(t: QuiverSetting) -> TypeRecord:
    """Wrap an already irreducible setting as a TypeRecord."""
    canon = canonicalize(t)
    return TypeRecord(canon, quotient_dim(t), name_for(canon.hash))


POINT = QuiverSetting(Quiver([[0]]), [1])
DOUBLE_LOOP = QuiverSetting(Quiver([[2]]), [2])


def is_smooth_type(t: TypeRecord) -> bool:
    """Smooth exactly for the point and the two-loop dimension-2 vertex."""
    s = t.setting
    return s == POINT or s == DOUBLE_LOOP
