"""The degenerate branch: every avoidance level empty.

In a space where every orbit accumulates on z0, no point avoids any
neighborhood of z0 and the whole sweep reports empty levels with the -inf
pressure sentinel.
"""

import math

import numpy as np

import sftpress as sp


def funnel_space():
    # symbols {0, 1} with 0 -> 0 and 1 -> 0: the points are 000... and 1000...
    return sp.Sft(np.array([[1, 0], [1, 0]], dtype=np.uint8), "funnel")


def test_every_level_empty():
    sft = funnel_space()
    z0 = sp.eventually_periodic("", "0")
    assert not sp.is_transitive_point(sft, z0)
    phi = sp.Potential.zero(sft)
    sweep = sp.avoidance_pressure_sweep(sft, phi, z0, 4)
    assert sweep.all_empty
    for lv in sweep.levels:
        assert lv.empty
        assert lv.result.value == -math.inf
        assert lv.gap_to_full == math.inf

    csv = sweep.to_csv()
    assert csv.splitlines()[1].endswith(",1")  # empty_flag set


def test_empty_levels_have_empty_bowen_root():
    sft = funnel_space()
    z0 = sp.eventually_periodic("", "0")
    level = sp.avoidance_subshift(sft, z0, 1)
    assert sp.subshift_is_empty(level)
    res = sp.bowen_root(level, sp.Potential.constant(sft, 1.0))
    assert res.empty and res.s_star == 0.0


def test_nonempty_sweep_not_flagged():
    f2 = sp.full_shift(2)
    sweep = sp.avoidance_pressure_sweep(f2, sp.Potential.zero(f2),
                                        sp.eventually_periodic("", "0"), 3)
    assert not sweep.all_empty
