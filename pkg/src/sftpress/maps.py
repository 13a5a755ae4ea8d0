"""Piecewise linear expanding Markov maps and their symbolic codings.

A map is given by finitely many branches, each a linear map with |slope| > 1
on a closed rational interval; branch domains have pairwise disjoint
interiors inside [0, 1].  The Markov condition asks that every branch image
either contains a branch domain or misses its interior, which covers both
full interval maps (domains tiling [0, 1], like the times-k family) and
repeller models whose domains leave gaps (cookie cutters).

All geometry is done in exact rational arithmetic: the Markov check is a
proof, not a float heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .sft import Sft, Word
from .potentials import Potential


@dataclass(frozen=True)
class Branch:
    lo: Fraction
    hi: Fraction
    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        if self.lo >= self.hi:
            raise ValueError("branch interval is degenerate")
        if abs(self.slope) <= 1:
            raise ValueError(f"branch slope {self.slope} is not expanding")

    def apply(self, x: Fraction) -> Fraction:
        return self.slope * x + self.offset

    @property
    def image(self):
        a, b = self.apply(self.lo), self.apply(self.hi)
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class PiecewiseLinearMarkovMap:
    branches: tuple
    label: str = "pl-map"

    def __post_init__(self):
        bs = tuple(self.branches)
        object.__setattr__(self, "branches", bs)
        for br in bs:
            if br.lo < 0 or br.hi > 1:
                raise ValueError("branch domains must lie inside [0, 1]")
        for left, right in zip(bs, bs[1:]):
            if left.hi > right.lo:
                raise ValueError("branch domains must be ordered with disjoint interiors")
        self._validate_markov()

    def _validate_markov(self):
        for i, br in enumerate(self.branches):
            img_lo, img_hi = br.image
            if img_lo < 0 or img_hi > 1:
                raise ValueError(f"branch {i} maps outside [0, 1]")
            for j, other in enumerate(self.branches):
                covers = img_lo <= other.lo and other.hi <= img_hi
                disjoint = img_hi <= other.lo or other.hi <= img_lo
                if not (covers or disjoint):
                    raise ValueError(
                        f"partition not Markov: image of branch {i} cuts the "
                        f"domain of branch {j}"
                    )

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    def transition_matrix(self) -> np.ndarray:
        k = self.branch_count
        matrix = np.zeros((k, k), dtype=np.uint8)
        for i, br in enumerate(self.branches):
            img_lo, img_hi = br.image
            for j, other in enumerate(self.branches):
                if img_lo <= other.lo and other.hi <= img_hi:
                    matrix[i, j] = 1
        return matrix

    def branch_of(self, x: Fraction):
        """Index of the branch whose domain contains x; None if escaped.

        Raises on interior domain boundaries, where the itinerary would be
        ambiguous.
        """
        for i, br in enumerate(self.branches):
            if br.lo < x < br.hi:
                return i
            if x == br.lo:
                if i > 0 and self.branches[i - 1].hi == x:
                    raise ValueError(f"orbit hits the branch boundary {x}")
                return i
            if x == br.hi:
                if i + 1 < self.branch_count and self.branches[i + 1].lo == x:
                    raise ValueError(f"orbit hits the branch boundary {x}")
                return i
        return None


def times_k(k: int) -> PiecewiseLinearMarkovMap:
    """x -> k x mod 1: k full branches of slope k."""
    if k < 2:
        raise ValueError("need k >= 2")
    branches = tuple(
        Branch(Fraction(i, k), Fraction(i + 1, k), Fraction(k), Fraction(-i))
        for i in range(k)
    )
    return PiecewiseLinearMarkovMap(branches, label=f"times-{k}")


def code_map(pl_map: PiecewiseLinearMarkovMap):
    """Symbolic model: (transition SFT, depth-1 potential log |slope|).

    The potential is strictly positive because every branch is expanding, so
    the Bowen root of the pair is the Hausdorff dimension of the invariant
    set of the map.
    """
    sft = Sft(pl_map.transition_matrix(), label=pl_map.label)
    table = {
        (i,): math.log(abs(float(br.slope)))
        for i, br in enumerate(pl_map.branches)
    }
    phi = Potential(1, table, label=f"log-slope({pl_map.label})")
    return sft, phi


def point_to_symbols(pl_map: PiecewiseLinearMarkovMap, x, n: int) -> Word:
    """Length-n itinerary of x, computed in exact rational arithmetic.

    Raises if the orbit hits an interior branch boundary within n steps
    (supply the point symbolically in that case) or escapes the branch
    domains (possible for repeller models).
    """
    x = Fraction(x)
    word = []
    for step in range(n):
        i = pl_map.branch_of(x)
        if i is None:
            raise ValueError(f"orbit escapes the branch domains at step {step} (x={x})")
        word.append(i)
        x = pl_map.branches[i].apply(x)
    return tuple(word)


def cylinder_intervals(pl_map: PiecewiseLinearMarkovMap, depth: int):
    """Exact interval of each admissible branch word, by inverse branches.

    [w] is the set of points following branch w[0], then w[1], ...; this
    enumerates the depth-n refinement of the invariant set and is the
    geometric oracle used to cross-check symbolic dimension values.
    """
    out = {}

    def invert(branch: Branch, lo: Fraction, hi: Fraction):
        a = (lo - branch.offset) / branch.slope
        b = (hi - branch.offset) / branch.slope
        if a > b:
            a, b = b, a
        a, b = max(a, branch.lo), min(b, branch.hi)
        return (a, b) if a < b else None

    # built from the right: the first symbol chosen is the last of the word
    def recurse(word, lo, hi):
        if len(word) == depth:
            out[word] = (lo, hi)
            return
        for i, br in enumerate(pl_map.branches):
            seg = invert(br, lo, hi)
            if seg is not None:
                recurse((i,) + word, *seg)

    recurse((), Fraction(0), Fraction(1))
    return out


def moran_root_from_intervals(intervals: Sequence, tol: float = 1e-12) -> float:
    """Root s of sum |I|^s = 1 over the given intervals: box-dimension oracle.

    Independent of all transfer-matrix machinery; converges to the Bowen
    root as the cylinder depth grows.
    """
    lengths = [float(hi - lo) for lo, hi in intervals]
    if not lengths:
        return 0.0

    def total(s: float) -> float:
        return math.fsum(length ** s for length in lengths)

    lo, hi = 0.0, 1.0
    while total(hi) > 1.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)
