"""Controlling quiver Q_theta and singularity analysis of quiver moduli spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .formats import setting_to_json
from .quiver import (
    Quiver,
    QuiverError,
    QuiverSetting,
    dimvec,
    pairing,
    restrict_support,
    ringel,
    stability,
)
from .reduction import TypeRecord, is_simple_setting, is_smooth_type, reduce_to_type
from .poset import TypePoset, downward_closure


class GeneratorError(QuiverError):
    pass


def _combinations(target: np.ndarray, vectors: Sequence[np.ndarray]):
    """All non-negative integer c with sum c_i v_i == target, lexicographic in c."""
    k = len(vectors)
    out = []
    c = [0] * k

    def rec(i, rem):
        if i == k:
            if not rem.any():
                out.append(tuple(c))
            return
        v = vectors[i]
        nz = v > 0
        cap = int((rem[nz] // v[nz]).min()) if nz.any() else 0
        # later vectors must cover whatever remains on coordinates they support
        for m in range(cap + 1):
            r = rem - m * v
            if i + 1 < k and not _coverable(r, vectors[i + 1 :]):
                continue
            c[i] = m
            rec(i + 1, r)
        c[i] = 0

    rec(0, np.asarray(target, dtype=np.int64))
    return out


def _coverable(rem, vectors) -> bool:
    if not vectors:
        return not rem.any()
    covered = np.any(np.array(vectors) > 0, axis=0)
    return not (rem[~covered] > 0).any()


@dataclass(frozen=True)
class GeneratorSet:
    """User-supplied minimal generators of the semistable monoid for theta."""

    gens: tuple[np.ndarray, ...]
    theta: np.ndarray

    def __init__(self, gens, theta, *, check_minimal: bool = True):
        th = stability(theta)
        gs = tuple(dimvec(g, len(th), "generator") for g in gens)
        if not gs:
            raise GeneratorError("generator set is empty")
        for i, g in enumerate(gs):
            if not g.any():
                raise GeneratorError(f"generator {i} is zero")
            if pairing(th, g) != 0:
                raise GeneratorError(f"generator {i} = {g.tolist()} has theta-pairing {pairing(th, g)} != 0")
        object.__setattr__(self, "gens", gs)
        object.__setattr__(self, "theta", th)
        if check_minimal:
            for i, g in enumerate(gs):
                others = [h for j, h in enumerate(gs) if j != i]
                if others and _combinations(g, others):
                    raise GeneratorError(f"generator {i} = {g.tolist()} is a combination of the others")

    def __len__(self):
        return len(self.gens)


def controlling_quiver(g: GeneratorSet, q: Quiver) -> Quiver:
    """Q_theta: one vertex per generator, delta_ij - chi_Q(g_i, g_j) arrows i -> j."""
    l = len(g)
    m = np.zeros((l, l), dtype=np.int64)
    for i in range(l):
        for j in range(l):
            m[i, j] = (1 if i == j else 0) - ringel(q, g.gens[i], g.gens[j])
    if (m < 0).any():
        i, j = np.argwhere(m < 0)[0]
        raise GeneratorError(
            f"generators {i}, {j} give {m[i, j]} arrows: inconsistent with theta-semistability"
        )
    return Quiver(m)


@dataclass(frozen=True)
class ModuliProblem:
    quiver: Quiver
    theta: np.ndarray
    alpha: np.ndarray
    generators: GeneratorSet

    def __init__(self, quiver: Quiver, theta, alpha, generators: GeneratorSet):
        th = stability(theta, quiver.n)
        a = dimvec(alpha, quiver.n)
        if pairing(th, a) != 0:
            raise QuiverError(f"theta . alpha = {pairing(th, a)} != 0")
        if not np.array_equal(generators.theta, th):
            raise QuiverError("generator set was built for a different stability")
        if len(generators.gens[0]) != quiver.n:
            raise QuiverError("generator length does not match the quiver")
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "generators", generators)

    def with_alpha(self, alpha) -> "ModuliProblem":
        return ModuliProblem(self.quiver, self.theta, alpha, self.generators)

    @property
    def q_theta(self) -> Quiver:
        return controlling_quiver(self.generators, self.quiver)

    def combine(self, c) -> np.ndarray:
        return sum(int(ci) * g for ci, g in zip(c, self.generators.gens))


def decompositions(p: ModuliProblem) -> list[tuple[int, ...]]:
    """Every c >= 0 with sum c_i gamma_i = alpha (no simplicity filter)."""
    return _combinations(p.alpha, list(p.generators.gens))


def stable_decompositions(p: ModuliProblem) -> list[tuple[int, ...]]:
    """c-vectors whose support-restricted setting on Q_theta is simple."""
    qt = p.q_theta
    out = []
    for c in decompositions(p):
        if any(c) and is_simple_setting(restrict_support(qt, c)):
            out.append(c)
    return out


def check_chi_transfer(p: ModuliProblem, c, c2) -> tuple[int, int]:
    """(chi_Q(beta, beta'), chi_{Q_theta}(gamma, gamma')) for beta = sum c_i gamma_i."""
    beta, beta2 = p.combine(c), p.combine(c2)
    return ringel(p.quiver, beta, beta2), ringel(p.q_theta, c, c2)


@dataclass
class Decomposition:
    c: tuple[int, ...]
    setting: QuiverSetting
    type: TypeRecord


@dataclass
class ModuliReport:
    stable_exists: bool
    dimension: int | None
    decompositions: list[Decomposition] = field(default_factory=list)
    closure: set[TypeRecord] = field(default_factory=set)
    smooth: bool | None = None
    poset: TypePoset | None = None

    def closure_names(self) -> list[str]:
        return sorted((self.poset.name(t) for t in self.closure), key=lambda n: (-self._dim(n), n))

    def _dim(self, name: str) -> int:
        return next(t.dim for t in self.closure if self.poset.name(t) == name)

    def diagram_edges(self) -> set[tuple[str, str]]:
        """Successor edges among the closure (edges into the point omitted)."""
        keep = {t.hash for t in self.closure}
        return {
            (self.poset.name(a), self.poset.name(b))
            for a, b in self.poset.edges
            if a in keep and b in keep
        }

    def to_json(self) -> dict:
        doc = {"stable_exists": self.stable_exists, "dimension": self.dimension, "smooth": self.smooth}
        if not self.stable_exists:
            doc.update(decompositions=[], closure=[], edges=[])
            return doc
        doc["decompositions"] = [
            {
                "c": list(d.c),
                "setting": setting_to_json(d.setting),
                "type": self.poset.name(d.type),
                "type_dim": d.type.dim,
            }
            for d in self.decompositions
        ]
        doc["closure"] = self.closure_names()
        doc["edges"] = sorted(list(e) for e in self.diagram_edges())
        return doc

    def to_dot(self) -> str:
        keep = {t.hash for t in self.closure}
        return self.poset.to_dot(only=keep)


def analyze(p: ModuliProblem, poset: TypePoset | None = None) -> ModuliReport:
    """Singularity types of mod^ss_alpha(Q, theta) up to smooth equivalence.

    Types not yet in ``poset`` are inserted with their successors. The
    returned closure omits the point type, which is present everywhere.
    """
    poset = TypePoset() if poset is None else poset
    cs = stable_decompositions(p)
    if not cs:
        return ModuliReport(stable_exists=False, dimension=None, poset=poset)
    qt = p.q_theta
    chi = ringel(p.quiver, p.alpha, p.alpha)
    decs = []
    closure: set[TypeRecord] = set()
    for c in cs:
        s = restrict_support(qt, c)
        if ringel(qt, c, c) != chi:
            raise AssertionError(f"chi mismatch between Q and Q_theta for c={c}")
        t = poset.insert(reduce_to_type(s))
        decs.append(Decomposition(c, s, t))
        closure |= downward_closure(poset, t)
    closure.discard(poset.minimal)
    smooth = all(is_smooth_type(d.type) for d in decs)
    return ModuliReport(True, 1 - chi, decs, closure, smooth, poset)


# the modular-group example: vertices (a, b; x, y, z), arrows a, b -> x, y, z
MODULAR_QUIVER = Quiver(
    [
        [0, 0, 1, 1, 1],
        [0, 0, 1, 1, 1],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ]
)
MODULAR_THETA = (-1, -1, 1, 1, 1)
MODULAR_GENERATORS = (
    (1, 0, 1, 0, 0),
    (0, 1, 0, 1, 0),
    (1, 0, 0, 0, 1),
    (0, 1, 1, 0, 0),
    (1, 0, 0, 1, 0),
    (0, 1, 0, 0, 1),
)


def modular_problem(alpha) -> ModuliProblem:
    return ModuliProblem(
        MODULAR_QUIVER, MODULAR_THETA, alpha, GeneratorSet(MODULAR_GENERATORS, MODULAR_THETA)
    )
