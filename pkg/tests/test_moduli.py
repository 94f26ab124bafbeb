from itertools import product

import numpy as np
import pytest

from qsing.moduli import (
    MODULAR_GENERATORS,
    MODULAR_QUIVER,
    MODULAR_THETA,
    GeneratorError,
    GeneratorSet,
    ModuliProblem,
    analyze,
    check_chi_transfer,
    controlling_quiver,
    decompositions,
    modular_problem,
    stable_decompositions,
)
from qsing.poset import TypePoset
from qsing.quiver import Quiver, QuiverError, minimal_cycles


def modular_alphas(max_total):
    for a, b in product(range(max_total // 2 + 1), repeat=2):
        for x, y, z in product(range(a + b + 1), repeat=3):
            if a + b == x + y + z and 0 < 2 * (a + b) <= max_total:
                yield (a, b, x, y, z)


def test_hexagon():
    qt = controlling_quiver(GeneratorSet(MODULAR_GENERATORS, MODULAR_THETA), MODULAR_QUIVER)
    m = qt.arrows
    for i in range(6):
        for j in range(6):
            adjacent = (i - j) % 6 in (1, 5)
            assert m[i, j] == (1 if adjacent else 0)


def test_generator_validation():
    with pytest.raises(GeneratorError):
        GeneratorSet([(1, 0, 1, 0, 0), (1, 0, 0, 0, 0)], MODULAR_THETA)
    with pytest.raises(GeneratorError):
        GeneratorSet([(1, 0, 1, 0, 0), (2, 0, 2, 0, 0)], MODULAR_THETA)
    with pytest.raises(GeneratorError):
        GeneratorSet([(0, 0, 0, 0, 0)], MODULAR_THETA)
    with pytest.raises(GeneratorError):
        GeneratorSet([], MODULAR_THETA)


def test_inconsistent_generators_rejected():
    # no arrows at all: chi(e_0, (1,1)) = 1 would need -1 arrows
    g = GeneratorSet([(1, 0), (1, 1)], (0, 0), check_minimal=False)
    with pytest.raises(GeneratorError):
        controlling_quiver(g, Quiver([[0, 0], [0, 0]]))


def test_problem_validation():
    with pytest.raises(QuiverError):
        modular_problem((1, 0, 0, 0, 0))
    g = GeneratorSet([(1, 1)], (-1, 1))
    with pytest.raises(QuiverError):
        ModuliProblem(MODULAR_QUIVER, MODULAR_THETA, (1, 1, 1, 1, 0), g)


def test_decompositions_lexicographic():
    p = modular_problem((2, 2, 2, 1, 1))
    cs = decompositions(p)
    assert cs == sorted(cs)
    for c in cs:
        assert np.array_equal(p.combine(c), p.alpha)


def test_stable_decompositions_are_simple_on_support():
    p = modular_problem((3, 3, 2, 2, 2))
    cs = stable_decompositions(p)
    assert (1, 1, 1, 1, 1, 1) in cs
    assert all(any(c) for c in cs)


def test_chi_transfer_witness():
    p = modular_problem((3, 3, 2, 2, 2))
    c1 = (1, 1, 1, 0, 0, 0)
    c2 = (0, 0, 0, 1, 1, 1)
    assert p.combine(c1).tolist() == [2, 1, 1, 1, 1]
    assert p.combine(c2).tolist() == [1, 2, 1, 1, 1]
    assert check_chi_transfer(p, c1, c2) == (-2, -2)


def test_analyze_many():
    r = analyze(modular_problem((3, 3, 2, 2, 2)))
    assert r.stable_exists and r.dimension == 7 and r.smooth is False
    assert set(r.closure_names()) == {"7_6a", "7_4a", "6_5k", "6_A", "5_4a", "4_3a", "3_c"}
    doc = r.to_json()
    assert doc["closure"][0] in ("7_4a", "7_6a")
    assert all(e[0] != "1_1" and e[1] != "1_1" for e in doc["edges"])


def test_analyze_422_is_smooth():
    r = analyze(modular_problem((4, 2, 2, 2, 2)))
    assert r.smooth is True and r.dimension == 5
    assert {r.poset.name(d.type) for d in r.decompositions} <= {"1_1", "5_1"}


def test_no_stable_decomposition():
    # (2,0;1,1,0) splits into two copies of one generator; the 1-vertex setting of dim 2 is not simple
    r = analyze(modular_problem((2, 0, 2, 0, 0)))
    assert not r.stable_exists and r.dimension is None
    assert r.to_json()["decompositions"] == []


def test_shared_poset_accumulates():
    p = TypePoset()
    analyze(modular_problem((2, 2, 2, 1, 1)), p)
    n = len(p.nodes)
    analyze(modular_problem((3, 3, 2, 2, 2)), p)
    assert len(p.nodes) > n


@pytest.mark.parametrize("alpha", list(modular_alphas(10)))
def test_chi_transfer_all_pairs(alpha):
    p = modular_problem(alpha)
    cs = stable_decompositions(p)
    for c1 in cs:
        for c2 in cs:
            lhs, rhs = check_chi_transfer(p, c1, c2)
            assert lhs == rhs


def test_hexagon_cycles_are_adjacent_pairs():
    qt = modular_problem((1, 1, 1, 1, 0)).q_theta
    assert all(len(c) == 2 for c in minimal_cycles(qt))
