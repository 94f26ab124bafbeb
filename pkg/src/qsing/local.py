"""Local quiver settings of representation types and direct successors of types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .quiver import (
    Quiver,
    QuiverError,
    QuiverSetting,
    dimvec,
    minimal_cycles,
    ringel,
    restrict_support,
    unit,
)
from .reduction import TypeRecord, reduce_to_type


class InvalidRepType(QuiverError):
    pass


@dataclass(frozen=True)
class RepType:
    """Multiplicities and dimension vectors of the simple factors of a semisimple rep.

    Factors are identified by position: two entries with equal vectors are
    still distinct simples (e.g. a loop-carrying simple next to a vertex simple).
    """

    ambient: Quiver
    factors: tuple[tuple[int, np.ndarray], ...]

    def __init__(self, ambient: Quiver, factors: Iterable[tuple[int, Sequence[int]]], alpha=None):
        fs = []
        for e, beta in factors:
            if int(e) < 1:
                raise InvalidRepType(f"factor multiplicity must be positive, got {e}")
            b = dimvec(beta, ambient.n)
            if not b.any():
                raise InvalidRepType("factor dimension vectors must be non-zero")
            fs.append((int(e), b))
        if not fs:
            raise InvalidRepType("a representation type needs at least one factor")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "factors", tuple(fs))
        if alpha is not None and not np.array_equal(self.total(), dimvec(alpha, ambient.n)):
            raise InvalidRepType(f"factors sum to {self.total().tolist()}, expected {list(alpha)}")

    def total(self) -> np.ndarray:
        return sum(e * b for e, b in self.factors)

    @property
    def multiplicities(self) -> list[int]:
        return [e for e, _ in self.factors]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [b for _, b in self.factors]


def local_arrow_matrix(q: Quiver, betas: Sequence[Sequence[int]]) -> np.ndarray:
    """arrows[i][j] = delta_ij - chi_Q(beta_i, beta_j), without the sign check."""
    u = len(betas)
    m = np.zeros((u, u), dtype=np.int64)
    for i in range(u):
        for j in range(u):
            m[i, j] = (1 if i == j else 0) - ringel(q, betas[i], betas[j])
    return m


def local_quiver(sigma: RepType) -> QuiverSetting:
    """The local quiver setting (Q_M, alpha_M) of a representation type."""
    m = local_arrow_matrix(sigma.ambient, sigma.vectors)
    if (m < 0).any():
        i, j = np.argwhere(m < 0)[0]
        raise InvalidRepType(
            f"negative arrow count {m[i, j]} between factors {i} and {j}: not a coexisting simple type"
        )
    return QuiverSetting(Quiver(m), sigma.multiplicities)


def cycle_rep_type(s: QuiverSetting, cycle: Iterable[int]) -> RepType:
    """sigma_I: the cycle simple S_I plus the leftover vertex simples."""
    members = frozenset(int(i) for i in cycle)
    if members not in minimal_cycles(s.quiver):
        raise QuiverError(f"{sorted(members)} is not a loop or minimal oriented cycle")
    n = s.n
    beta = np.zeros(n, dtype=np.int64)
    beta[sorted(members)] = 1
    factors = [(1, beta)]
    for i in range(n):
        e = int(s.dim[i]) - (1 if i in members else 0)
        if e > 0:
            factors.append((e, unit(n, i)))
    return RepType(s.quiver, factors, alpha=s.dim)


def cycle_local_setting(s: QuiverSetting, cycle: Iterable[int]) -> QuiverSetting:
    lq = local_quiver(cycle_rep_type(s, cycle))
    return restrict_support(lq.quiver, lq.dim)


def successor_map(t: TypeRecord) -> dict[frozenset[int], TypeRecord]:
    """Type reached through each loop / minimal cycle of ``t``."""
    s = t.setting
    out = {}
    for cycle in minimal_cycles(s.quiver):
        target = reduce_to_type(cycle_local_setting(s, cycle))
        if target.dim >= t.dim:
            raise AssertionError(
                f"successor of a dimension-{t.dim} type has dimension {target.dim} via cycle {sorted(cycle)}"
            )
        out[cycle] = target
    return out


def direct_successors(t: TypeRecord) -> set[TypeRecord]:
    return set(successor_map(t).values())
