"""Subshifts of finite type: words, transition graphs, recodings, word avoidance.

A one-sided subshift of finite type (SFT) is the set of infinite symbol
sequences whose adjacent pairs are allowed by a 0/1 transition matrix,
together with the left shift.  Words are plain tuples of symbol indices.

Metric conventions, fixed once for the whole package: two sequences are at
distance 2**(-i) where i is the first index at which they differ, so

    d(x, y) < 2**(-e)          iff  x and y agree on coordinates 0..e,
    B_n(q, 2**(-e))            is the cylinder on coordinates 0..n-1+e.

All radii used anywhere in the package are exact powers of two, which makes
every metric ball a cylinder and removes boundary ambiguity.

Word-avoidance subshifts (`forbid_word`) are returned as block presentations
that keep a pointer to the original alphabet: for those, `is_admissible`,
`count_words` and `iter_words` speak the *original* alphabet (a word is
admissible iff it was admissible before and avoids the forbidden word).
Plain SFTs use the usual matrix formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Word = tuple  # tuple of int symbols


def parse_word(text: str) -> Word:
    """Parse a word literal: "0110" for single-digit symbols, "10,2,3" with commas."""
    if text == "":
        return ()
    if "," in text:
        return tuple(int(part) for part in text.split(","))
    return tuple(int(ch) for ch in text)


def format_word(w: Word) -> str:
    if any(s > 9 for s in w):
        return ",".join(str(s) for s in w)
    return "".join(str(s) for s in w)


@dataclass(frozen=True, eq=False)
class Sft:
    """Alphabet {0..k-1} plus a k-by-k 0/1 transition matrix.

    `coding`, `base` and `forbidden` are set only on word-avoidance
    presentations produced by `forbid_word`; see the module docstring.
    """

    transitions: np.ndarray
    label: str = "sft"
    coding: Optional[tuple] = None        # block symbol -> word over base alphabet
    base: Optional["Sft"] = None
    forbidden: Optional[Word] = None

    def __post_init__(self):
        matrix = np.asarray(self.transitions, dtype=np.uint8)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("transition matrix must be square")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        object.__setattr__(self, "transitions", matrix)

    @property
    def alphabet_size(self) -> int:
        return self.transitions.shape[0]

    @property
    def is_coded(self) -> bool:
        return self.coding is not None

    @property
    def block_length(self) -> int:
        """Length of the forbidden word on a word-avoidance presentation, else 1."""
        return len(self.forbidden) if self.forbidden is not None else 1

    def __repr__(self):
        return f"Sft({self.label!r}, k={self.alphabet_size})"


def full_shift(k: int, label: str | None = None) -> Sft:
    """The full shift on k symbols (all transitions allowed)."""
    if k < 1:
        raise ValueError("alphabet size must be positive")
    return Sft(np.ones((k, k), dtype=np.uint8), label or f"full-{k}-shift")


def golden_mean_shift() -> Sft:
    """Binary shift forbidding the word 11."""
    return Sft(np.array([[1, 1], [1, 0]], dtype=np.uint8), "golden-mean")


def _check_symbols(sft: Sft, w: Word, alphabet: int) -> None:
    for s in w:
        if not (0 <= s < alphabet):
            raise ValueError(f"symbol {s} outside alphabet of size {alphabet}")


def _contains(haystack: Word, needle: Word) -> bool:
    n = len(needle)
    return any(haystack[i:i + n] == needle for i in range(len(haystack) - n + 1))


def is_admissible(sft: Sft, w: Word) -> bool:
    """True iff every adjacent pair of w is an allowed transition.

    On a word-avoidance presentation, w is a word over the base alphabet and
    the check is: admissible in the base and the forbidden word does not occur.
    """
    if sft.is_coded:
        _check_symbols(sft, w, sft.base.alphabet_size)
        return is_admissible(sft.base, w) and not _contains(w, sft.forbidden)
    _check_symbols(sft, w, sft.alphabet_size)
    A = sft.transitions
    return all(A[w[i], w[i + 1]] for i in range(len(w) - 1))


def count_words(sft: Sft, n: int) -> int:
    """Number of admissible words of length n (exact integer arithmetic).

    For a plain SFT this is the entry sum of transitions**(n-1); avoidance
    presentations count words of the original alphabet avoiding the pattern.
    """
    if n < 1:
        raise ValueError("word length must be >= 1")
    if sft.is_coded:
        ell = sft.block_length
        if n < ell:
            return count_words(sft.base, n)
        return _path_count(sft.transitions, n - ell + 1)
    return _path_count(sft.transitions, n)


def _path_count(matrix: np.ndarray, n_vertices: int) -> int:
    # vector DP with Python ints: no overflow for long words on wide alphabets
    rows = [[int(x) for x in row] for row in matrix]
    counts = [1] * len(rows)
    for _ in range(n_vertices - 1):
        counts = [sum(r * c for r, c in zip(row, counts)) for row in rows]
    return sum(counts)


def iter_words(sft: Sft, n: int) -> Iterator[Word]:
    """Yield all admissible n-words in lexicographic order."""
    if n < 1:
        raise ValueError("word length must be >= 1")
    if sft.is_coded:
        base, forb = sft.base, sft.forbidden
        yield from _iter_avoiding(base.transitions, forb, n)
        return
    A = sft.transitions
    k = sft.alphabet_size

    def extend(prefix):
        if len(prefix) == n:
            yield prefix
            return
        if prefix:
            allowed = (s for s in range(k) if A[prefix[-1], s])
        else:
            allowed = range(k)
        for s in allowed:
            yield from extend(prefix + (s,))

    yield from extend(())


def _iter_avoiding(A: np.ndarray, forbidden: Word, n: int) -> Iterator[Word]:
    k = A.shape[0]
    ell = len(forbidden)

    def extend(prefix):
        if len(prefix) >= ell and prefix[-ell:] == forbidden:
            return
        if len(prefix) == n:
            yield prefix
            return
        if prefix:
            allowed = (s for s in range(k) if A[prefix[-1], s])
        else:
            allowed = range(k)
        for s in allowed:
            yield from extend(prefix + (s,))

    yield from extend(())


def primitivity_gap(sft: Sft) -> int:
    """Least N with transitions**N entrywise positive.

    This is the uniform gap realizing the gluing (specification) property on
    a mixing SFT.  Raises on a non-mixing matrix, naming a zero entry.
    """
    A = (sft.transitions > 0)
    k = A.shape[0]
    if k == 0:
        raise ValueError("not mixing: empty alphabet")
    bound = (k - 1) * (k - 1) + 1  # Wielandt bound for primitive matrices
    power = A.copy()
    n = 1
    while n <= bound:
        if power.all():
            return n
        power = (power.astype(np.uint8) @ A.astype(np.uint8)) > 0
        n += 1
    i, j = np.argwhere(~power)[0]
    raise ValueError(
        f"not mixing: entry ({i},{j}) of transitions^{bound + 1} is zero "
        f"(no power up to the Wielandt bound {bound} is entrywise positive)"
    )


def connecting_word(sft: Sft, u: Word, v: Word, gap: int) -> Word:
    """Lexicographically smallest w of length `gap` with u+w+v admissible.

    Only the last symbol of u and the first of v matter.  Raises when no
    connecting word of the requested length exists.
    """
    if sft.is_coded:
        raise ValueError("connecting_word operates on plain SFTs")
    if gap < 0:
        raise ValueError("gap must be >= 0")
    A = sft.transitions
    k = sft.alphabet_size
    if not u or not v:
        raise ValueError("connecting_word needs nonempty endpoint words")
    start, target = u[-1], v[0]
    if gap == 0:
        if A[start, target]:
            return ()
        raise ValueError(
            f"no connecting word of length 0: transition {start}->{target} forbidden"
        )
    # reach[t] = symbols from which `target` is reachable in exactly t steps
    reach = [None] * (gap + 1)
    reach[1] = {s for s in range(k) if A[s, target]}
    for t in range(2, gap + 1):
        reach[t] = {s for s in range(k) if any(A[s, b] for b in reach[t - 1])}
    word = []
    prev = start
    for i in range(1, gap + 1):
        needed = reach[gap - i + 1]
        choice = next((s for s in range(k) if A[prev, s] and s in needed), None)
        if choice is None:
            raise ValueError(
                f"no connecting word of length {gap} from symbol {start} to {target}"
            )
        word.append(choice)
        prev = choice
    return tuple(word)


def extend_word_lex(sft: Sft, u: Word, count: int) -> Word:
    """Extend u by `count` symbols, lexicographically smallest, staying extendable.

    Each added symbol is the smallest successor from which a cycle remains
    reachable, so the extension can always be continued to an infinite point.
    """
    if sft.is_coded:
        raise ValueError("extend_word_lex operates on plain SFTs")
    A = sft.transitions
    k = sft.alphabet_size
    essential = _essential_symbols(A)
    tail = list(u)
    added = []
    for _ in range(count):
        if tail:
            options = [s for s in range(k) if A[tail[-1], s] and s in essential]
        else:
            options = [s for s in range(k) if s in essential]
        if not options:
            raise ValueError("word cannot be extended: no essential successor")
        tail.append(options[0])
        added.append(options[0])
    return tuple(added)


def _essential_symbols(A: np.ndarray) -> set:
    """Symbols from which some cycle is reachable (supports of infinite rays)."""
    k = A.shape[0]
    if k == 0:
        return set()
    n_comp, labels = connected_components(csr_matrix(A), connection="strong")
    cyclic = set()
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if len(idx) > 1 or A[idx[0], idx[0]]:
            cyclic.update(int(i) for i in idx)
    # walk predecessors of cyclic symbols
    changed = True
    reach = set(cyclic)
    while changed:
        changed = False
        for s in range(k):
            if s not in reach and any(A[s, t] for t in reach):
                reach.add(s)
                changed = True
    return reach


def higher_block(sft: Sft, n: int):
    """Recoding whose symbols are the admissible n-words.

    Returns (recoded_sft, words) where words[i] is the n-word behind the new
    symbol i.  Transitions follow the overlap rule, so word counts shift:
    count_words(recoded, m) == count_words(original, m + n - 1).
    """
    if sft.is_coded:
        raise ValueError("higher_block operates on plain SFTs")
    if n < 1:
        raise ValueError("block length must be >= 1")
    if n == 1:
        return sft, tuple((a,) for a in range(sft.alphabet_size))
    words = tuple(iter_words(sft, n))
    index = {w: i for i, w in enumerate(words)}
    size = len(words)
    matrix = np.zeros((size, size), dtype=np.uint8)
    for i, w in enumerate(words):
        suffix = w[1:]
        for s in range(sft.alphabet_size):
            j = index.get(suffix + (s,))
            if j is not None:
                matrix[i, j] = 1
    return Sft(matrix, f"{sft.label}[{n}-block]"), words


def forbid_word(sft: Sft, w: Word) -> Sft:
    """Subshift of sequences of `sft` containing no occurrence of w.

    Realized on the block presentation of length len(w): states are the
    admissible len(w)-words other than w, overlapping transitions.  The
    result may be empty; emptiness is a value (see `is_empty_or_reducible`),
    never an error.
    """
    if sft.is_coded:
        raise ValueError("forbid_word on an avoidance presentation is not supported; "
                         "forbid on the base SFT")
    if len(w) < 1:
        raise ValueError("forbidden word must be nonempty")
    if not is_admissible(sft, w):
        raise ValueError(f"forbidden word {format_word(w)} is not admissible")
    ell = len(w)
    states = tuple(word for word in iter_words(sft, ell) if word != w)
    index = {word: i for i, word in enumerate(states)}
    size = len(states)
    matrix = np.zeros((size, size), dtype=np.uint8)
    A = sft.transitions
    for i, word in enumerate(states):
        if ell == 1:
            for other, j in index.items():
                if A[word[0], other[0]]:
                    matrix[i, j] = 1
        else:
            suffix = word[1:]
            for s in range(sft.alphabet_size):
                j = index.get(suffix + (s,))
                if j is not None:
                    matrix[i, j] = 1
    return Sft(
        matrix,
        label=f"{sft.label} avoiding {format_word(w)}",
        coding=states,
        base=sft,
        forbidden=w,
    )


@dataclass(frozen=True)
class Classification:
    kind: str                      # "empty" | "reducible" | "mixing"
    gap: Optional[int] = None      # least positive power for mixing SFTs
    largest_scc: int = 0
    n_components: int = 0

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"


def is_empty_or_reducible(sft: Sft) -> Classification:
    """Strongly-connected-component analysis of the transition graph.

    "empty" means no cycle exists, hence no infinite sequence; "mixing" means
    some power of the matrix is entrywise positive; everything else is
    reported as "reducible" with the largest component size.
    """
    A = sft.transitions
    k = sft.alphabet_size
    if k == 0 or not A.any():
        return Classification("empty", n_components=k)
    n_comp, labels = connected_components(csr_matrix(A), connection="strong")
    cyclic_sizes = []
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if len(idx) > 1 or A[idx[0], idx[0]]:
            cyclic_sizes.append(len(idx))
    if not cyclic_sizes:
        return Classification("empty", n_components=n_comp)
    try:
        gap = primitivity_gap(sft)
        return Classification("mixing", gap=gap, largest_scc=k, n_components=1)
    except ValueError:
        return Classification(
            "reducible", largest_scc=max(cyclic_sizes), n_components=n_comp
        )


def subshift_is_empty(sft: Sft) -> bool:
    """Cheap emptiness test: no cycle in the transition graph."""
    A = sft.transitions
    if sft.alphabet_size == 0 or not A.any():
        return True
    n_comp, labels = connected_components(csr_matrix(A), connection="strong")
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if len(idx) > 1 or A[idx[0], idx[0]]:
            return False
    return True


# ---------------------------------------------------------------------------
# eventually periodic points and the metric


def _primitive_root(w: Word) -> Word:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w == w[:d] * (n // d):
            return w[:d]
    return w


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """The sequence preperiod + period + period + ...

    Stored in canonical form: primitive period, shortest preperiod.  Two
    instances are equal iff they are the same infinite sequence.
    """

    preperiod: Word
    period: Word

    def symbol(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> Word:
        return tuple(self.symbol(i) for i in range(n))

    def shifted(self, j: int) -> "EventuallyPeriodicPoint":
        pre, per = self.preperiod, self.period
        if j <= len(pre):
            return eventually_periodic(pre[j:], per)
        r = (j - len(pre)) % len(per)
        return eventually_periodic((), per[r:] + per[:r])

    def orbit(self) -> list:
        """All distinct points of the forward orbit (a finite, closed set)."""
        seen = []
        for j in range(len(self.preperiod) + len(self.period)):
            p = self.shifted(j)
            if p not in seen:
                seen.append(p)
        return seen

    def __str__(self):
        return f"{format_word(self.preperiod)}({format_word(self.period)})^inf"


def eventually_periodic(preperiod, period) -> EventuallyPeriodicPoint:
    """Build an eventually periodic point in canonical form.

    Accepts tuples or word literals ("01", "0,1").
    """
    pre = parse_word(preperiod) if isinstance(preperiod, str) else tuple(preperiod)
    per = parse_word(period) if isinstance(period, str) else tuple(period)
    if not per:
        raise ValueError("period must be nonempty")
    per = _primitive_root(per)
    pre = list(pre)
    while pre and pre[-1] == per[-1]:
        per = (per[-1],) + per[:-1]
        pre.pop()
    return EventuallyPeriodicPoint(tuple(pre), per)


def point_is_admissible(sft: Sft, point: EventuallyPeriodicPoint) -> bool:
    """Admissibility of the whole infinite sequence."""
    ell = sft.block_length if sft.is_coded else 1
    horizon = len(point.preperiod) + 2 * len(point.period) + ell
    return is_admissible(sft, point.prefix(horizon))


def first_difference(x: EventuallyPeriodicPoint, y: EventuallyPeriodicPoint):
    """Index of the first disagreeing coordinate, or None for equal points."""
    bound = (max(len(x.preperiod), len(y.preperiod))
             + math.lcm(len(x.period), len(y.period)))
    for i in range(bound):
        if x.symbol(i) != y.symbol(i):
            return i
    return None


def point_distance(x: EventuallyPeriodicPoint, y: EventuallyPeriodicPoint) -> float:
    """d(x, y) = 2**(-first disagreement index)."""
    i = first_difference(x, y)
    return 0.0 if i is None else 2.0 ** (-i)


def word_distance(u: Word, v: Word) -> float:
    """Distance of the cylinders [u], [v]: 2**(-first disagreement index)."""
    for i, (a, b) in enumerate(zip(u, v)):
        if a != b:
            return 2.0 ** (-i)
    return 2.0 ** (-min(len(u), len(v))) if len(u) != len(v) else 0.0
