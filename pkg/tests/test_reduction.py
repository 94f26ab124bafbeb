import random

import numpy as np
import pytest
from hypothesis import given, settings as hsettings

from conftest import random_simple_setting, simple_settings
from qsing.names import setting_for
from qsing.quiver import Quiver, QuiverError, QuiverSetting, quotient_dim
from qsing.reduction import (
    StepKind,
    applicable_steps,
    apply_step,
    is_simple_setting,
    is_smooth_type,
    record_reductions,
    reduce_to_type,
    reduction_trace,
    vertex_numbers,
)


def S(m, dims):
    return QuiverSetting(Quiver(m), dims)


@pytest.mark.parametrize(
    "s, expected",
    [
        (S([[0]], [1]), True),
        (S([[0]], [2]), False),
        (S([[1]], [1]), True),
        (S([[1]], [2]), False),
        (S([[2]], [2]), True),
        (S([[0, 2], [2, 0]], [1, 1]), True),
        (S([[0, 1], [0, 0]], [1, 1]), False),
        (S([[0, 1, 0], [0, 0, 1], [1, 0, 0]], [1, 1, 1]), True),
        (S([[0, 1, 0], [0, 0, 1], [1, 0, 0]], [1, 2, 1]), False),
        (S([[0, 1], [1, 0]], [1, 2]), False),
    ],
)
def test_is_simple(s, expected):
    assert is_simple_setting(s) is expected


def test_vertex_numbers_conifold():
    s = setting_for("3_c")
    assert vertex_numbers(s, 0) == (-1, -1) and vertex_numbers(s, 1) == (-1, -1)
    with pytest.raises(QuiverError):
        vertex_numbers(s, 2)


def test_irreducible_types_have_no_steps():
    for name in ("3_c", "4_2", "4_3a", "4_3b", "5_1", "6_A", "7_4a", "7_6a"):
        s = setting_for(name)
        assert is_simple_setting(s) and applicable_steps(s) == []
        assert reduction_trace(s) == []


def test_rule1_removes_loops():
    step, after = apply_step(S([[0, 2], [2, 3]], [1, 1]))
    assert step.kind is StepKind.REMOVE_LOOPS_DIM1 and step.vertex == 1
    assert after.arrows.tolist() == [[0, 2], [2, 0]]
    assert step.chi_gain == 3


def test_rule2_cables_through():
    # 0 -> 1 (x2), 1 -> 2 (x3), 2 -> 0: vertex 1 has in-number 1 - 2 < 0 and out-number 1 - 3 < 0 ...
    s = S([[0, 1, 0], [0, 0, 2], [1, 0, 0]], [1, 1, 1])
    # ... but vertex 0 has in-number 0
    step, after = apply_step(s)
    assert step.kind is StepKind.CABLE_VERTEX and step.vertex == 0
    assert after.arrows.tolist() == [[0, 2], [1, 0]]
    assert step.chi_gain == 0


def test_rule3_gives_k_arrows():
    # dim-1 vertex -> dim-3 vertex carrying one loop; the big vertex talks back with 3 arrows
    s = S([[0, 1], [3, 1]], [1, 3])
    assert is_simple_setting(s)
    assert vertex_numbers(s, 1) == (-1, -3)
    step, after = apply_step(s)
    assert step.kind is StepKind.SPLIT_UNIQUE_LOOP
    assert after.arrows.tolist() == [[0, 3], [3, 0]]
    assert step.chi_gain == 3


def test_rule3_can_leave_transient_nonsimple_setting():
    s = S([[0, 1], [1, 1]], [1, 2])
    trace = reduction_trace(s)
    assert [st.kind for st in trace][:2] == [StepKind.SPLIT_UNIQUE_LOOP, StepKind.CABLE_VERTEX]
    assert not is_simple_setting(trace[0].after)
    assert reduce_to_type(s).name == "1_1"


def test_smooth_family_reduces_to_point():
    # x (one loop) <-> 1 <-> (b - x) (one loop), middle vertex loop-free
    for x, bx in [(2, 2), (3, 1), (2, 3)]:
        s = S([[1, 1, 0], [1, 0, 1], [0, 1, 1]], [x, 1, bx])
        t = reduce_to_type(s)
        assert t.name == "1_1" and is_smooth_type(t)


def test_nonsimple_input_rejected():
    with pytest.raises(QuiverError):
        reduction_trace(S([[0, 1], [0, 0]], [1, 1]))
    with pytest.raises(QuiverError):
        apply_step(S([[0]], [2]))


def _measure(s):
    return (s.n, int(np.trace(s.arrows)))


@given(simple_settings())
@hsettings(max_examples=200, deadline=None)
def test_steps_decrease_measure_and_keep_bookkeeping(s):
    trace = reduction_trace(s)
    for step in trace:
        assert _measure(step.after) < _measure(step.before)
        assert step.chi_gain >= 0
    t = reduce_to_type(s)
    d = sum(step.chi_gain for step in trace)
    assert quotient_dim(s) == t.dim + d


@given(simple_settings())
@hsettings(max_examples=200, deadline=None)
def test_nonsimple_intermediates_only_after_loop_split(s):
    trace = reduction_trace(s)
    for prev, step in zip(trace, trace[1:]):
        if not is_simple_setting(step.before):
            assert prev.kind is StepKind.SPLIT_UNIQUE_LOOP
            assert step.kind is StepKind.CABLE_VERTEX and step.vertex == prev.vertex


def test_confluence_random_orders(rng):
    for _ in range(150):
        s = random_simple_setting(rng)
        reference = reduce_to_type(s)
        for k in range(3):
            assert reduce_to_type(s, random.Random(k)) == reference


def test_recorder_collects_runs():
    with record_reductions() as log:
        reduce_to_type(S([[0, 2], [2, 3]], [1, 1]))
        reduce_to_type(setting_for("3_c"))
    assert len(log) == 2 and len(log[0][1]) == 1 and log[1][1] == []
    reduce_to_type(setting_for("3_c"))
    assert len(log) == 2
