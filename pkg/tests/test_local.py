import numpy as np
import pytest

from qsing.local import (
    InvalidRepType,
    RepType,
    cycle_local_setting,
    cycle_rep_type,
    direct_successors,
    local_quiver,
    successor_map,
)
from qsing.moduli import MODULAR_QUIVER
from qsing.names import setting_for
from qsing.quiver import Quiver, QuiverError, QuiverSetting, ringel
from qsing.reduction import type_of_setting


def names(ts):
    return sorted(t.name for t in ts)


def test_two_loop_local_quiver():
    s = setting_for("5_1")
    sigma = cycle_rep_type(s, [0])
    assert [(e, b.tolist()) for e, b in sigma.factors] == [(1, [1]), (1, [1])]
    lq = local_quiver(sigma)
    assert lq.arrows.tolist() == [[2, 1], [1, 2]]
    assert lq.dim.tolist() == [1, 1]
    assert names(direct_successors(type_of_setting(s))) == ["1_1"]


def test_conifold_witness():
    sigma = RepType(MODULAR_QUIVER, [(1, [2, 1, 1, 1, 1]), (1, [1, 2, 1, 1, 1])], alpha=[3, 3, 2, 2, 2])
    lq = local_quiver(sigma)
    assert lq.arrows.tolist() == [[2, 2], [2, 2]]
    assert lq.dim.tolist() == [1, 1]
    assert ringel(MODULAR_QUIVER, [2, 1, 1, 1, 1], [1, 2, 1, 1, 1]) == -2


def test_vertex_simples_give_original_quiver():
    q = Quiver([[1, 2, 0], [0, 0, 3], [1, 0, 0]])
    sigma = RepType(q, [(2, [1, 0, 0]), (1, [0, 1, 0]), (4, [0, 0, 1])])
    lq = local_quiver(sigma)
    assert np.array_equal(lq.arrows, q.arrows) and lq.dim.tolist() == [2, 1, 4]


def test_rep_type_validation():
    q = Quiver([[0, 1], [1, 0]])
    with pytest.raises(InvalidRepType):
        RepType(q, [(0, [1, 0])])
    with pytest.raises(InvalidRepType):
        RepType(q, [(1, [0, 0])])
    with pytest.raises(InvalidRepType):
        RepType(q, [(1, [1, 0])], alpha=[1, 1])
    with pytest.raises(InvalidRepType):
        RepType(q, [])


def test_negative_arrow_count_rejected():
    # two copies of the same non-simple vector on an acyclic quiver
    q = Quiver([[0, 0], [0, 0]])
    with pytest.raises(InvalidRepType):
        local_quiver(RepType(q, [(1, [2, 0]), (1, [1, 0])]))


def test_cycle_must_be_minimal():
    s = setting_for("4_3a")
    with pytest.raises(QuiverError):
        cycle_rep_type(s, [0, 1, 2])


@pytest.mark.parametrize(
    "name, expected",
    [
        ("3_c", ["1_1"]),
        ("4_2", ["1_1"]),
        ("4_3b", ["1_1"]),
        ("5_1", ["1_1"]),
        ("4_3a", ["3_c"]),
        ("5_4a", ["4_3a"]),
        ("6_5k", ["5_4a"]),
        ("6_A", ["5_4a"]),
        ("7_6a", ["6_5k"]),
        ("7_4a", ["6_5k", "6_A"]),
    ],
)
def test_successors_of_named_types(name, expected):
    assert names(direct_successors(type_of_setting(setting_for(name)))) == expected


def test_successor_dimension_drops():
    for name in ("6_A", "7_4a", "7_6a"):
        t = type_of_setting(setting_for(name))
        for cycle, succ in successor_map(t).items():
            assert succ.dim < t.dim
            assert cycle_local_setting(t.setting, cycle).n >= 1


def test_local_setting_has_loop_at_cycle_vertex():
    s = QuiverSetting(Quiver([[0, 2], [2, 0]]), [1, 1])
    lq = local_quiver(cycle_rep_type(s, [0, 1]))
    assert lq.n == 1 and lq.arrows[0, 0] == 3
