"""Dimension through the root of the pressure equation.

For a strictly positive potential phi, s |-> P(-s phi) is strictly
decreasing (slope at most -min phi), so P(-s phi) = 0 has a unique root.
With phi = 1 the root is the entropy; with phi = log of the expansion rate
of a conformal piecewise-linear model it is the Hausdorff dimension of the
coded invariant set.  Bisection is used deliberately: it keeps a certified
bracket at every step, which matters more here than iteration count.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .sft import EventuallyPeriodicPoint, Sft, subshift_is_empty
from .potentials import Potential
from .pressure import pressure
from .avoidance import avoidance_subshift, is_transitive_point

BRACKET_WIDTH = 1e-10


@dataclass(frozen=True)
class DimensionResult:
    s_star: float
    lo: float
    hi: float
    residual: float
    iterations: int
    empty: bool = False


def pressure_scaled(sft: Sft, phi: Potential, s: float) -> float:
    """P(-s phi); requires min phi > 0 so the map is strictly decreasing."""
    if phi.min_value() <= 0:
        raise ValueError(f"potential {phi.label!r} is not strictly positive")
    return pressure(sft, phi.scaled(-s)).value


def bowen_root(sft: Sft, phi: Potential) -> DimensionResult:
    """Unique root of P(-s phi) = 0 for strictly positive phi.

    The bracket starts at [0, entropy / min phi] and bisects to width 1e-10,
    maintaining P(-lo phi) >= 0 >= P(-hi phi).  An empty subshift reports
    root 0 with the empty flag.
    """
    if phi.min_value() <= 0:
        raise ValueError(f"potential {phi.label!r} is not strictly positive")
    if subshift_is_empty(sft):
        return DimensionResult(0.0, 0.0, 0.0, 0.0, 0, empty=True)
    entropy = pressure(sft, Potential.zero(sft if not sft.is_coded else sft.base)).value
    lo = 0.0
    hi = max(entropy, 0.0) / phi.min_value()
    iterations = 0
    if hi == 0.0:
        return DimensionResult(0.0, 0.0, 0.0, abs(pressure_scaled(sft, phi, 0.0)), 0)
    while hi - lo > BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        if pressure_scaled(sft, phi, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    s_star = 0.5 * (lo + hi)
    return DimensionResult(s_star, lo, hi, abs(pressure_scaled(sft, phi, s_star)),
                           iterations)


@dataclass(frozen=True)
class DimensionSweep:
    z0: EventuallyPeriodicPoint
    levels: tuple                    # of (n, DimensionResult)

    @property
    def supremum(self) -> float:
        """Best computed lower bound for the dimension of the avoidance set.

        The supremum over all levels equals the full dimension for a
        non-transitive reference point, but no finite level reaches it.
        """
        return max(res.s_star for _, res in self.levels)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("n,s_star,lo,hi,residual\n")
        for n, res in self.levels:
            out.write(f"{n},{res.s_star!r},{res.lo!r},{res.hi!r},{res.residual!r}\n")
        return out.getvalue()


def dimension_sweep(sft: Sft, phi: Potential, z0: EventuallyPeriodicPoint,
                    n_max: int, jobs: int = 1) -> DimensionSweep:
    """Bowen roots of the avoidance levels n = 1..n_max (nondecreasing in n)."""
    if phi.min_value() <= 0:
        raise ValueError(f"potential {phi.label!r} is not strictly positive")
    if is_transitive_point(sft, z0):
        raise ValueError(
            f"point {z0} is transitive (its orbit closure is the whole space); "
            "the sweep requires a non-transitive reference point"
        )

    def level(n: int):
        return n, bowen_root(avoidance_subshift(sft, z0, n), phi)

    ns = range(1, n_max + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            levels = list(pool.map(level, ns))
    else:
        levels = [level(n) for n in ns]
    levels.sort(key=lambda item: item[0])
    for (_, prev), (n, cur) in zip(levels, levels[1:]):
        if cur.s_star < prev.s_star - 1e-9:
            raise ArithmeticError(f"dimension levels not monotone at n={n}")
    return DimensionSweep(z0, tuple(levels))
