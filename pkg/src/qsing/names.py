"""Human labels for the types drawn explicitly in the literature.

Labels follow the ``D_{n x}`` convention (quotient dimension, vertex count,
letter). Types without a published label get ``D_n#k`` names from
:func:`qsing.poset.auto_name`.
"""

from __future__ import annotations

import functools

from .quiver import Quiver, QuiverSetting, canonicalize


def _cycle_both_ways(n: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][(i + 1) % n] += 1
        m[(i + 1) % n][i] += 1
    return m


def _chain_both_ways(n: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 1
    return m


NAMED_SETTINGS: dict[str, QuiverSetting] = {
    "1_1": QuiverSetting(Quiver([[0]]), [1]),
    "5_1": QuiverSetting(Quiver([[2]]), [2]),
    "3_c": QuiverSetting(Quiver([[0, 2], [2, 0]]), [1, 1]),
    "4_2": QuiverSetting(Quiver([[0, 2], [3, 0]]), [1, 1]),
    "4_3a": QuiverSetting(Quiver([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), [1, 1, 1]),
    "4_3b": QuiverSetting(Quiver([[0, 2, 0], [0, 0, 2], [2, 0, 0]]), [1, 1, 1]),
    "5_4a": QuiverSetting(Quiver(_cycle_both_ways(4)), [1] * 4),
    "6_5k": QuiverSetting(Quiver(_cycle_both_ways(5)), [1] * 5),
    # star: dimension-2 centre joined both ways to three dimension-1 leaves
    "6_A": QuiverSetting(
        Quiver([[0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]]), [2, 1, 1, 1]
    ),
    "7_6a": QuiverSetting(Quiver(_cycle_both_ways(6)), [1] * 6),
    "7_4a": QuiverSetting(Quiver(_chain_both_ways(4)), [1, 2, 2, 1]),
}


@functools.cache
def name_table() -> dict[str, str]:
    """canonical hash -> label."""
    return {canonicalize(s).hash: name for name, s in NAMED_SETTINGS.items()}


def name_for(digest: str) -> str | None:
    return name_table().get(digest)


def setting_for(name: str) -> QuiverSetting:
    return NAMED_SETTINGS[name]
