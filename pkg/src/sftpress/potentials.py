"""Locally constant potentials: Birkhoff sums, oscillation, sup norm.

A depth-r potential assigns a real value to every admissible r-word and is
constant on the corresponding cylinders.  Restricting to locally constant
potentials keeps every pressure formula in this package exactly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .sft import Sft, Word, format_word, is_admissible, iter_words, parse_word


@dataclass(frozen=True)
class Potential:
    """Depth-r table of values on r-words."""

    depth: int
    values: Mapping[Word, float]
    label: str = "phi"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        for w, val in self.values.items():
            if len(w) != self.depth:
                raise ValueError(f"table key {w} has length != depth {self.depth}")
            if not math.isfinite(val):
                raise ValueError(f"non-finite potential value at {format_word(w)}")
        object.__setattr__(self, "values", dict(self.values))

    def __call__(self, window: Word) -> float:
        try:
            return self.values[tuple(window[: self.depth])]
        except KeyError:
            raise KeyError(
                f"potential {self.label!r} has no value on window "
                f"{format_word(tuple(window[:self.depth]))}"
            ) from None

    def min_value(self) -> float:
        return min(self.values.values())

    def scaled(self, c: float) -> "Potential":
        return Potential(self.depth, {w: c * v for w, v in self.values.items()},
                         label=f"{c}*{self.label}")

    def plus_constant(self, c: float) -> "Potential":
        return Potential(self.depth, {w: v + c for w, v in self.values.items()},
                         label=f"{self.label}+{c}")

    @classmethod
    def zero(cls, sft: Sft, depth: int = 1) -> "Potential":
        return cls.from_table(sft, depth, {}, default=0.0, label="0")

    @classmethod
    def constant(cls, sft: Sft, c: float, depth: int = 1, label=None) -> "Potential":
        return cls.from_table(sft, depth, {}, default=c,
                              label=label or f"const({c})")

    @classmethod
    def from_table(cls, sft: Sft, depth: int, table: Mapping, default=None,
                   label: str = "phi") -> "Potential":
        """Build a potential from a {word: value} table.

        Keys may be tuples or word literals.  Every admissible depth-word of
        `sft` must get a value, either from the table or from `default`.
        """
        parsed = {}
        for key, val in table.items():
            w = parse_word(key) if isinstance(key, str) else tuple(key)
            parsed[w] = float(val)
        values = {}
        for w in iter_words(sft, depth):
            if w in parsed:
                values[w] = parsed[w]
            elif default is not None:
                values[w] = float(default)
            else:
                raise ValueError(
                    f"no value for admissible {depth}-word {format_word(w)}"
                )
        extra = set(parsed) - set(values)
        if extra:
            raise ValueError(
                f"table assigns values to inadmissible words: "
                f"{sorted(format_word(w) for w in extra)}"
            )
        return cls(depth, values, label=label)


def birkhoff_sum(sft: Sft, phi: Potential, w: Word) -> float:
    """Sum of phi over the n = len(w) - depth + 1 sliding windows of w.

    This is the exact ergodic sum S_n phi on the cylinder [w]: being locally
    constant, phi is constant on every window cylinder.
    """
    r = phi.depth
    if len(w) < r:
        raise ValueError(f"word of length {len(w)} shorter than depth {r}")
    if not is_admissible(sft, w):
        raise ValueError(f"word {format_word(w)} is not admissible")
    return math.fsum(phi(w[i:i + r]) for i in range(len(w) - r + 1))


def variation(sft: Sft, phi: Potential, e: int) -> float:
    """Largest |phi(x) - phi(y)| over points agreeing on coordinates 0..e.

    With the metric d(x,y) = 2**(-first difference) this is the oscillation
    of phi at scale 2**(-e).  Zero as soon as e >= depth - 1.
    """
    if e < 0:
        raise ValueError("e must be >= 0")
    r = phi.depth
    if e >= r - 1:
        return 0.0
    groups = {}
    for w, val in phi.values.items():
        groups.setdefault(w[: e + 1], []).append(val)
    spread = 0.0
    for vals in groups.values():
        spread = max(spread, max(vals) - min(vals))
    return spread


def sup_norm(phi: Potential) -> float:
    return max(abs(v) for v in phi.values.values())
