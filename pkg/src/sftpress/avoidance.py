"""Non-dense orbit sets as nested families of word-avoidance subshifts.

A point x has z0 outside its orbit closure iff the orbit avoids some
cylinder neighborhood of z0, i.e. iff the length-n prefix of z0 never
occurs in x for some n.  The set of such points is therefore the increasing
union over n of compact shift-invariant avoidance subshifts, and its
pressure is the supremum of the level pressures.  The sweep below computes
those levels and the gap to the pressure of the full system; for a
non-transitive z0 the gaps vanish in the limit, and no rate is claimed.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .sft import (EventuallyPeriodicPoint, Sft, Word, count_words,
                  forbid_word, point_is_admissible, subshift_is_empty)
from .potentials import Potential
from .pressure import PressureResult, pressure


def cylinder_word(z0: EventuallyPeriodicPoint, n: int) -> Word:
    """First n symbols of z0: the word whose cylinder is the avoided ball."""
    if n < 1:
        raise ValueError("cylinder length must be >= 1")
    return z0.prefix(n)


def avoidance_subshift(sft: Sft, z0: EventuallyPeriodicPoint, n: int) -> Sft:
    """Subshift of points whose orbit never enters the n-cylinder of z0.

    With the package metric the 2**(-(n-1))-ball at z0 is exactly that
    cylinder, so this is forbid_word on the n-prefix.  Levels are nested
    upward in n.  Emptiness is a value, not an error.
    """
    w = cylinder_word(z0, n)
    return forbid_word(sft, w)


def is_transitive_point(sft: Sft, z0: EventuallyPeriodicPoint) -> bool:
    """Whether the orbit closure of z0 is the whole space.

    The orbit of an eventually periodic point is finite and closed, so it
    equals X iff the admissible words of length L = preperiod + period are
    exactly the L-windows seen along the orbit.
    """
    if not point_is_admissible(sft, z0):
        raise ValueError(f"point {z0} is not admissible")
    L = len(z0.preperiod) + len(z0.period)
    windows = {z0.shifted(j).prefix(L) for j in range(L)}
    return count_words(sft, L) == len(windows)


@dataclass(frozen=True)
class AvoidanceLevel:
    n: int
    result: PressureResult
    gap_to_full: float
    empty: bool


@dataclass(frozen=True)
class AvoidanceSweep:
    z0: EventuallyPeriodicPoint
    base_label: str
    phi_label: str
    levels: tuple
    full_pressure: float

    @property
    def all_empty(self) -> bool:
        return all(level.empty for level in self.levels)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("n,pressure,error_bound,gap_to_full,empty_flag\n")
        for lv in self.levels:
            out.write(f"{lv.n},{lv.result.value!r},{lv.result.error_bound!r},"
                      f"{lv.gap_to_full!r},{int(lv.empty)}\n")
        return out.getvalue()


def avoidance_pressure_sweep(sft: Sft, phi: Potential,
                             z0: EventuallyPeriodicPoint, n_max: int,
                             jobs: int = 1) -> AvoidanceSweep:
    """Pressure of the avoidance levels n = 1..n_max against the full system.

    Requires a non-transitive z0 (for a transitive point the construction
    the full-pressure statement rests on has nowhere to go).  Levels are
    independent and may be computed in parallel; the output ordering is
    deterministic either way.
    """
    if is_transitive_point(sft, z0):
        raise ValueError(
            f"point {z0} is transitive (its orbit closure is the whole space); "
            "the sweep requires a non-transitive reference point"
        )
    full = pressure(sft, phi)

    def level(n: int) -> AvoidanceLevel:
        sub = avoidance_subshift(sft, z0, n)
        empty = subshift_is_empty(sub)
        res = pressure(sub, phi)
        gap = full.value - res.value
        return AvoidanceLevel(n, res, gap, empty)

    ns = range(1, n_max + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            levels = list(pool.map(level, ns))
    else:
        levels = [level(n) for n in ns]
    levels.sort(key=lambda lv: lv.n)
    for prev, cur in zip(levels, levels[1:]):
        if cur.result.value < prev.result.value - 1e-12:
            raise ArithmeticError(
                f"level pressures not monotone at n={cur.n}: "
                f"{cur.result.value} < {prev.result.value}"
            )
    return AvoidanceSweep(z0, sft.label, phi.label, tuple(levels), full.value)
