"""Glued-orbit fractal construction with machine-checked estimates.

This module executes, at desk scale, the level-by-level construction that
pins a lower bound on the pressure of a non-dense orbit set: pick separated
families S_k of n_k-words whose weighted mass is at least exp(n_k (C - eta));
interleave each word with visits to a point y far from the orbit closure of
z0; glue N_k copies per level with short connecting words; and carry atomic
measures whose ball masses obey an explicit inequality.  Every step that the
argument asserts is checked here on the finitely many levels built:

  * parameter inequalities (oscillation, junction overhead, separation of y),
  * the mass lower bound of each family,
  * the point-count product formula,
  * pairwise separation of the constructed words,
  * absence of the avoided prefix of z0 in every constructed word,
  * the normalizer product identity for the atomic measures,
  * prefix consistency between consecutive levels,
  * the ball-mass inequality, both in its raw form and in the derived
    exp(-n(C - 2 eta)) form,

and a passing run emits the certified lower bound C - 4 eta.  The limit
step (existence of a limit measure charging the intersection set) is a
standard weak-* compactness fact and is assumed, not computed.

Conventions fixed here: gluing is exact word concatenation (the symbolic
gluing property), so the epsilon slack of the metric statements holds a
fortiori; connecting words take the lexicographically smallest choice,
making the whole construction deterministic; a junction between the
M-chunks of a block spends exactly 2m+1 symbols (m-connector, a visit of
y_visit_len symbols of y, m-connector), and the shadowing bookkeeping
(n_rel, b_n) counts positions inside M-chunks, partial chunks included.

Large levels are handled without enumeration: the support of the level
measures is a product of the per-level families, so ball masses and the
inequalities factorize exactly over classes of agreeing prefixes.  Built
(enumerated) levels cross-check the factorized path on small configurations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .sft import (EventuallyPeriodicPoint, Sft, Word, connecting_word,
                  count_words, extend_word_lex, first_difference,
                  is_admissible, iter_words, point_is_admissible,
                  primitivity_gap)
from .potentials import Potential, birkhoff_sum, sup_norm, variation
from .pressure import WORD_SUM_GUARD, pressure

POINT_GUARD = 10**5
COMBO_GUARD = 10**6

LABEL_SHADOW, LABEL_JCONN, LABEL_Y, LABEL_CONN = 0, 1, 2, 3


@dataclass(frozen=True)
class MoranParams:
    """All constants of the construction.

    e: cylinder exponent of the working radius (radius 2**-e);
    e0: exponent witnessing that y stays 2*2**-e0 away from the orbit of z0;
    eta: slack in every estimate; C: pressure target, C < P_top;
    M: chunk length; m: gluing gap; n_seq, N_seq: block lengths and
    repetition counts per level; y_visit_len: symbols of y written at each
    junction (must fit the 2m+1 junction budget).
    """

    e: int
    e0: int
    eta: float
    C: float
    M: int
    m: int
    n_seq: tuple
    N_seq: tuple
    z0: EventuallyPeriodicPoint
    y: EventuallyPeriodicPoint
    y_visit_len: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_seq", tuple(self.n_seq))
        object.__setattr__(self, "N_seq", tuple(self.N_seq))
        if len(self.n_seq) != len(self.N_seq) or not self.n_seq:
            raise ValueError("n_seq and N_seq must be nonempty and equally long")

    @property
    def epsilon(self) -> float:
        return 2.0 ** (-self.e)

    @property
    def levels(self) -> int:
        return len(self.n_seq)


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ParamReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.passed]


def validate_params(params: MoranParams, sft: Sft, phi: Potential) -> ParamReport:
    """Check every constraint the construction relies on; never raises.

    Each failed item names the violated quantity so a config can be fixed.
    """
    checks = []

    def add(name, passed, detail):
        checks.append(CheckItem(name, bool(passed), detail))

    eps = params.epsilon
    add("epsilon-below-separation-threshold", eps < 1.0 / 9.0,
        f"2^-{params.e} = {eps:g} must be < 1/9 so distinct words are separated")
    add("epsilon-inside-y-radius", params.e > params.e0,
        f"need e > e0 ({params.e} > {params.e0})")
    add("positive-constants",
        params.eta > 0 and params.M >= 1 and params.m >= 1,
        f"eta={params.eta}, M={params.M}, m={params.m}")
    add("y-visit-within-junction-budget",
        1 <= params.y_visit_len <= 2 * params.m + 1,
        f"y_visit_len={params.y_visit_len}, budget 2m+1={2 * params.m + 1}")

    ok_z0 = point_is_admissible(sft, params.z0)
    ok_y = point_is_admissible(sft, params.y)
    add("z0-admissible", ok_z0, str(params.z0))
    add("y-admissible", ok_y, str(params.y))

    if ok_z0 and ok_y:
        # d(y, orbit closure of z0) >= 2 * 2^-e0 means y disagrees with every
        # orbit point somewhere in coordinates 0..e0-1 (integer test, exact)
        worst = -1
        for pt in params.z0.orbit():
            diff = first_difference(params.y, pt)
            worst = max(worst, math.inf if diff is None else diff)
        add("y-outside-z0-closure", worst <= params.e0 - 1,
            f"largest agreement index with the orbit is {worst}, "
            f"needs <= e0-1 = {params.e0 - 1}")

    var2 = variation(sft, phi, params.e - 1)  # oscillation at radius 2*2^-e
    add("oscillation-below-eta", var2 < params.eta,
        f"Var(phi, 2*2^-{params.e}) = {var2:g} must be < eta = {params.eta}")

    norm = sup_norm(phi)
    overhead = 2 * params.m * (params.C + norm) / (params.M + 2 * params.m)
    add("junction-overhead-below-eta", overhead < params.eta,
        f"2m(C+||phi||)/(M+2m) = {overhead:g} must be < eta = {params.eta}")

    full = pressure(sft, phi).value
    add("target-below-full-pressure", params.C < full,
        f"C = {params.C} must be < P_top = {full:.12g}")

    add("first-block-longer-than-M", params.n_seq[0] > params.M,
        f"n_1 = {params.n_seq[0]} must exceed M = {params.M}")
    add("repetitions-nondecreasing",
        all(a <= b for a, b in zip(params.N_seq, params.N_seq[1:]))
        and all(N >= 1 for N in params.N_seq),
        f"N_seq = {params.N_seq}")
    add("block-lengths-cover-depth", all(n >= phi.depth for n in params.n_seq),
        f"n_seq = {params.n_seq}, depth = {phi.depth}")

    try:
        gap = primitivity_gap(sft)
        feasible = params.m + 1 >= gap
        add("connector-feasibility", feasible,
            f"every gap-m junction needs transitions^(m+1) > 0; "
            f"primitivity gap is {gap}, m = {params.m}")
    except ValueError as err:
        add("connector-feasibility", False, str(err))

    # mass lower bound of each family: checked per chosen n_k, since the
    # pressure definition only guarantees it along a subsequence
    try:
        for k, n in enumerate(params.n_seq, start=1):
            fam = build_family(sft, phi, n)
            bound = math.exp(n * (params.C - params.eta))
            add(f"family-mass-level-{k}",
                fam.mass >= bound,
                f"mass {fam.mass:.6g} >= exp(n_{k}(C-eta)) = {bound:.6g}")
    except ValueError as err:
        add("family-mass", False, str(err))

    return ParamReport(tuple(checks))


@dataclass(frozen=True)
class SeparatedFamily:
    """All admissible n-words with their weights exp(S_n phi)."""

    n: int
    words: tuple
    weights: np.ndarray
    mass: float           # sum of weights

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def log_mass(self) -> float:
        return math.log(self.mass)


def build_family(sft: Sft, phi: Potential, n: int) -> SeparatedFamily:
    """Maximal separated family at length n: every admissible n-word.

    Distinct words are (n, 9 eps)-separated for eps < 1/9 because they
    disagree at some coordinate below n.  Weights are exact Birkhoff sums;
    a depth-r potential reads r-1 symbols past the word, filled with the
    lexicographically smallest admissible extension.
    """
    if n < phi.depth:
        raise ValueError(f"family length {n} below potential depth {phi.depth}")
    total = count_words(sft, n)
    if total > WORD_SUM_GUARD:
        raise ValueError(
            f"family at n={n} would hold {total} words, over the "
            f"{WORD_SUM_GUARD} guard")
    words = tuple(iter_words(sft, n))
    ext = phi.depth - 1
    weights = np.array([
        math.exp(birkhoff_sum(sft, phi, w + extend_word_lex(sft, w, ext)))
        for w in words
    ])
    return SeparatedFamily(n, words, weights, math.fsum(weights))


def interleave_with_y(sft: Sft, params: MoranParams, x: Word) -> Word:
    """Insert y-visits between the M-chunks of x.

    x is split into chunks of length M (last one possibly shorter); every
    junction spends exactly 2m+1 symbols: an a-connector, y_visit_len
    symbols of y, and a b-connector, with a + b + y_visit_len = 2m+1 and
    connectors chosen lexicographically smallest.  Output length is
    len(x) + (ceil(len(x)/M) - 1)(2m+1).
    """
    M, m, y_len = params.M, params.m, params.y_visit_len
    if not (1 <= y_len <= 2 * m + 1):
        raise ValueError(f"y_visit_len {y_len} outside the junction budget {2 * m + 1}")
    c = -(-len(x) // M)
    chunks = [x[d * M:(d + 1) * M] for d in range(c)]
    a = (2 * m + 1 - y_len) // 2
    b = 2 * m + 1 - y_len - a
    yw = params.y.prefix(y_len)
    parts = [chunks[0]]
    for chunk in chunks[1:]:
        left = connecting_word(sft, parts[-1], yw, a)
        right = connecting_word(sft, yw, chunk, b)
        parts.extend([left, yw, right, chunk])
    word = tuple(itertools.chain.from_iterable(parts))
    expected = len(x) + (c - 1) * (2 * m + 1)
    if len(word) != expected:
        raise AssertionError("junction bookkeeping out of sync")
    if not is_admissible(sft, word):
        raise AssertionError("interleaved word is not admissible")
    return word


def _block_layout(n: int, M: int, m: int, y_len: int):
    """(label, length) pieces of one interleaved block."""
    c = -(-n // M)
    a = (2 * m + 1 - y_len) // 2
    b = 2 * m + 1 - y_len - a
    pieces = []
    for _ in range(c - 1):
        pieces.append((LABEL_SHADOW, M))
        if a:
            pieces.append((LABEL_JCONN, a))
        pieces.append((LABEL_Y, y_len))
        if b:
            pieces.append((LABEL_JCONN, b))
    pieces.append((LABEL_SHADOW, n - (c - 1) * M))
    return pieces


@dataclass(frozen=True)
class Segment:
    kind: str        # "block" | "conn"
    level: int       # 1-based
    copy: int        # 1-based
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


class MoranSchedule:
    """Time bookkeeping: t_k, block positions, and the position labels."""

    def __init__(self, params: MoranParams):
        self.params = params
        M, m, y_len = params.M, params.m, params.y_visit_len
        K = params.levels
        self.c_seq = tuple(-(-n // M) for n in params.n_seq)
        self.nhat_seq = tuple(
            n + (c - 1) * (2 * m + 1) for n, c in zip(params.n_seq, self.c_seq)
        )
        t = [-m]
        for N, nhat in zip(params.N_seq, self.nhat_seq):
            t.append(t[-1] + N * (nhat + m))
        self.t_seq = tuple(t)  # t_seq[i] = t_i for i = 0..K

        segments = []
        order = [(i, c) for i in range(1, K + 1)
                 for c in range(1, params.N_seq[i - 1] + 1)]
        pos = 0
        for idx, (i, c) in enumerate(order):
            seg = Segment("block", i, c, pos, self.nhat_seq[i - 1])
            segments.append(seg)
            pos = seg.end
            if c == params.N_seq[i - 1] and pos != self.t_seq[i]:
                raise AssertionError("schedule layout out of sync")
            if idx + 1 < len(order):
                segments.append(Segment("conn", i, c, pos, m))
                pos += m
        self.segments = tuple(segments)
        self.blocks = tuple(s for s in segments if s.kind == "block")

        labels = np.full(self.t_seq[K], LABEL_CONN, dtype=np.uint8)
        for seg in self.blocks:
            p = seg.start
            for kind, length in _block_layout(params.n_seq[seg.level - 1], M, m, y_len):
                labels[p:p + length] = kind
                p += length
            if p != seg.end:
                raise AssertionError("block layout out of sync")
        self.labels = labels
        self._shadow_cum = np.concatenate(
            [[0], np.cumsum(labels == LABEL_SHADOW)]
        )

    def n_rel(self, n: int) -> int:
        """Positions below n that shadow family words (inside M-chunks)."""
        return int(self._shadow_cum[n])

    def b(self, n: int) -> int:
        """Mistake budget below n: junctions and connectors."""
        return n - self.n_rel(n)

    def level_of(self, n: int) -> int:
        for k in range(1, len(self.t_seq) - 1):
            if self.t_seq[k] <= n < self.t_seq[k + 1]:
                return k
        raise ValueError(
            f"n = {n} outside [t_1, t_{len(self.t_seq) - 1}) = "
            f"[{self.t_seq[1]}, {self.t_seq[-1]})")

    def j_of(self, n: int) -> int:
        """Completed level-(k+1) blocks before time n."""
        k = self.level_of(n)
        return (n - self.t_seq[k]) // (self.nhat_seq[k] + self.params.m)

    def blocks_of_levels(self, k: int):
        return tuple(b for b in self.blocks if b.level <= k)


@dataclass(frozen=True)
class MoranPoint:
    word: Word                 # length t_k + e (trailing context included)
    provenance: tuple          # per level, tuple of family indices
    weight: float
    level: int


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Weighted point masses on a built level, normalized by kappa."""

    points: tuple
    weights: np.ndarray
    kappa: float               # direct summation
    kappa_product: float       # product of family masses
    level: int

    @property
    def relative_error(self) -> float:
        return abs(self.kappa - self.kappa_product) / self.kappa_product


@dataclass(frozen=True)
class SeparationReport:
    level: int
    pairs_checked: int
    violations: tuple
    passed: bool


@dataclass(frozen=True)
class AvoidanceReport:
    prefix_length: int
    words_scanned: int
    violations: tuple          # (word index, position)
    passed: bool


@dataclass(frozen=True)
class BallCheck:
    n: int
    level: int                 # the measure level k+p that was tested
    k: int
    j: int
    b_n: int
    mode: str                  # "support" | "factorized"
    classes: int
    max_log_primary: float
    max_log_derived: float
    passed: bool


@dataclass(frozen=True)
class Certificate:
    value: float
    valid: bool
    radius_exponent: int
    failed_checks: tuple
    note: str


class MoranSystem:
    """One configuration: SFT, potential, constants, and cached machinery."""

    def __init__(self, sft: Sft, phi: Potential, params: MoranParams):
        if sft.is_coded:
            raise ValueError("the construction runs on a plain mixing SFT")
        self.sft = sft
        self.phi = phi
        self.params = params
        self.schedule = MoranSchedule(params)
        self.families = tuple(
            build_family(sft, phi, n) for n in params.n_seq
        )
        self.interleaved = tuple(
            np.array([interleave_with_y(sft, params, w) for w in fam.words],
                     dtype=np.int64)
            for fam in self.families
        )
        k = sft.alphabet_size
        m = params.m
        self.conn_table = np.zeros((k, k, m), dtype=np.int64)
        for a in range(k):
            for b in range(k):
                self.conn_table[a, b] = connecting_word(sft, (a,), (b,), m)
        self.ext_table = np.array(
            [extend_word_lex(sft, (a,), params.e) for a in range(k)],
            dtype=np.int64)
        if phi.depth == 1:
            self.phi_vec = np.array([phi((a,)) for a in range(k)])
        else:
            self.phi_vec = None

    # -- assembly ----------------------------------------------------------

    def point_word(self, provenance: tuple, k: int, with_context=True) -> Word:
        """Word of the point built from the given family choices."""
        blocks = self.schedule.blocks_of_levels(k)
        flat = [idx for level_part in provenance for idx in level_part]
        if len(flat) != len(blocks):
            raise ValueError("provenance does not match the schedule")
        words = [tuple(self.interleaved[b.level - 1][i])
                 for b, i in zip(blocks, flat)]
        out = []
        for pos, w in enumerate(words):
            out.extend(w)
            if pos + 1 < len(words):
                out.extend(self.conn_table[w[-1], words[pos + 1][0]])
        if with_context:
            out.extend(self.ext_table[out[-1]])
        word = tuple(int(s) for s in out)
        expected = self.schedule.t_seq[k] + (self.params.e if with_context else 0)
        if len(word) != expected:
            raise AssertionError("assembled word has the wrong length")
        return word

    def tuple_count(self, k: int) -> int:
        total = 1
        for fam, N in zip(self.families[:k], self.params.N_seq[:k]):
            total *= fam.size ** N
        return total

    def log_kappa(self, k: int) -> float:
        return math.fsum(N * fam.log_mass
                         for fam, N in zip(self.families[:k], self.params.N_seq[:k]))

    def build_points(self, k: int) -> list:
        """Materialize the level-k point set (guarded)."""
        total = self.tuple_count(k)
        if total > POINT_GUARD:
            raise ValueError(
                f"level {k} holds prod(#S_i)^(N_i) = {total} points, over the "
                f"{POINT_GUARD} guard; use the factorized checks")
        ranges = []
        for fam, N in zip(self.families[:k], self.params.N_seq[:k]):
            ranges.extend([range(fam.size)] * N)
        counts = self.params.N_seq[:k]
        points = []
        for flat in itertools.product(*ranges):
            provenance = []
            at = 0
            for N in counts:
                provenance.append(tuple(flat[at:at + N]))
                at += N
            provenance = tuple(provenance)
            weight = 1.0
            for level, part in enumerate(provenance):
                for idx in part:
                    weight *= float(self.families[level].weights[idx])
            points.append(MoranPoint(self.point_word(provenance, k),
                                     provenance, weight, k))
        return points

    def build_measures(self, points: Sequence, k: int) -> AtomicMeasure:
        """Normalize the level weights; the normalizer must match the
        product of the family masses (an internal consistency bug otherwise).
        """
        weights = np.array([p.weight for p in points])
        kappa = math.fsum(weights.tolist())
        kappa_product = math.exp(self.log_kappa(k))
        rel = abs(kappa - kappa_product) / kappa_product
        if rel > 1e-9:
            raise ArithmeticError(
                f"normalizer mismatch at level {k}: sum {kappa!r} vs product "
                f"{kappa_product!r} (relative {rel:.2e})")
        return AtomicMeasure(tuple(points), weights, kappa, kappa_product, k)


# ---------------------------------------------------------------------------
# checks


def check_separation(words: Sequence, t_k: int, level: int) -> SeparationReport:
    """Exhaustive pairwise separation: words must differ below t_k.

    Distinct coordinates below t_k mean distance 1 > 7 eps at some shift,
    which is the separation the measure estimates need.
    """
    seen = {}
    violations = []
    for idx, w in enumerate(words):
        key = tuple(w[:t_k])
        if key in seen:
            violations.append((seen[key], idx))
        else:
            seen[key] = idx
    n = len(words)
    return SeparationReport(level, n * (n - 1) // 2, tuple(violations),
                            not violations)


def check_block_injectivity(system: MoranSystem) -> CheckItem:
    """Distinct family words must interleave to distinct blocks.

    Together with the fixed block positions this gives pairwise separation
    at every level, including levels too large to enumerate.
    """
    for level, ilv in enumerate(system.interleaved, start=1):
        distinct = np.unique(ilv, axis=0).shape[0]
        if distinct != ilv.shape[0]:
            return CheckItem("block-injectivity", False,
                             f"level {level}: {ilv.shape[0]} words map to "
                             f"{distinct} blocks")
    sizes = ", ".join(str(f.size) for f in system.families)
    return CheckItem("block-injectivity", True,
                     f"all levels injective (family sizes {sizes})")


def check_avoidance(words: Sequence, params: MoranParams) -> AvoidanceReport:
    """Scan every word for the avoided prefix of z0.

    An occurrence of the (M + 2m + e)-prefix is exactly an orbit visit to
    the forbidden neighborhood of z0 lasting M + 2m steps at radius 2**-e.
    """
    target = params.z0.prefix(params.M + 2 * params.m + params.e)
    L = len(target)
    violations = []
    for idx, w in enumerate(words):
        w = tuple(w)
        for pos in range(len(w) - L + 1):
            if w[pos:pos + L] == target:
                violations.append((idx, pos))
                break
    return AvoidanceReport(L, len(words), tuple(violations), not violations)


def check_prefix_consistency(system: MoranSystem, low_points: Sequence,
                             k: int, l: int, sample: int = 200) -> CheckItem:
    """Points of level l must extend exactly one level-k point on [0, t_k).

    Levels too large to enumerate are sampled deterministically (first
    `sample` tuples in lexicographic order).
    """
    t_k = system.schedule.t_seq[k]
    low_index = {p.word[:t_k]: p.provenance for p in low_points}
    ranges = []
    for fam, N in zip(system.families[:l], system.params.N_seq[:l]):
        ranges.extend([range(fam.size)] * N)
    counts = system.params.N_seq[:l]
    checked = 0
    for flat in itertools.islice(itertools.product(*ranges), sample):
        provenance = []
        at = 0
        for N in counts:
            provenance.append(tuple(flat[at:at + N]))
            at += N
        word = system.point_word(tuple(provenance), l, with_context=False)
        ancestor = low_index.get(word[:t_k])
        if ancestor is None or ancestor != tuple(provenance[:k]):
            return CheckItem("prefix-consistency", False,
                             f"level-{l} tuple {provenance} does not extend "
                             f"its level-{k} ancestor")
        checked += 1
    return CheckItem("prefix-consistency", True,
                     f"{checked} level-{l} words agree with their level-{k} "
                     f"ancestors on [0, t_{k})")


def check_ball_bound(system: MoranSystem, n: int,
                     measures: Optional[dict] = None) -> list:
    """Verify the ball-mass inequalities at time n for every deeper level.

    For each level l > k (where t_k <= n < t_{k+1}) and every cylinder
    B_n(q, 2**-e) centered at a support point, the normalized mass must obey

        mu_l(B) <= exp(S_n phi(q) + 2n Var + ||phi|| b_n) / (kappa_k M_{k+1}^j)

    and the derived form  mu_l(B) <= exp(-n(C - 2 eta) + S_n phi(q) + 2n Var).
    Materialized levels are checked center by center by exact weight
    summation; larger levels use the exact factorization of the support over
    prefix classes (depth-1 potentials), with the pre-class junction sum
    bounded by its worst case.
    """
    params, schedule = system.params, system.schedule
    k = schedule.level_of(n)
    j = schedule.j_of(n)
    b_n = schedule.b(n)
    results = []
    for l in range(k + 1, params.levels + 1):
        if measures is not None and l in measures:
            results.append(_ball_check_support(system, n, k, j, b_n, measures[l]))
        else:
            results.append(_ball_check_factorized(system, n, k, j, b_n, l))
    return results


def _ball_rhs_constants(system: MoranSystem, n: int, k: int, j: int, b_n: int):
    params = system.params
    var2 = variation(system.sft, system.phi, params.e - 1)
    norm = sup_norm(system.phi)
    log_kappa_k = system.log_kappa(k)
    log_mass_next = system.families[k].log_mass
    return var2, norm, log_kappa_k, log_mass_next


def _ball_check_support(system: MoranSystem, n: int, k: int, j: int, b_n: int,
                        measure: AtomicMeasure) -> BallCheck:
    params = system.params
    var2, norm, log_kappa_k, log_mass_next = _ball_rhs_constants(system, n, k, j, b_n)
    upper = n + params.e
    words = np.array([p.word for p in measure.points], dtype=np.int64)
    if words.shape[1] < upper:
        raise ValueError("support words too short for the requested ball")
    prefixes = np.ascontiguousarray(words[:, :upper])
    _, class_of, counts = np.unique(prefixes, axis=0, return_inverse=True,
                                    return_counts=True)
    n_classes = len(counts)
    mass = np.zeros(n_classes)
    np.add.at(mass, class_of, measure.weights)
    mass /= measure.kappa
    reps = np.zeros(n_classes, dtype=int)
    reps[class_of[::-1]] = np.arange(len(class_of))[::-1]
    max_primary = -math.inf
    max_derived = -math.inf
    violations = []
    r = system.phi.depth
    for c in range(n_classes):
        q = measure.points[reps[c]].word
        s_n = birkhoff_sum(system.sft, system.phi, q[:n + r - 1])
        log_mu = math.log(mass[c])
        log_rhs1 = s_n + 2 * n * var2 + norm * b_n - log_kappa_k - j * log_mass_next
        log_rhs2 = -n * (params.C - 2 * params.eta) + s_n + 2 * n * var2
        p1 = log_mu - log_rhs1
        p2 = log_mu - log_rhs2
        max_primary = max(max_primary, p1)
        max_derived = max(max_derived, p2)
        if p1 > 1e-9 or p2 > 1e-9:
            violations.append(c)
    return BallCheck(n, measure.level, k, j, b_n, "support", n_classes,
                     max_primary, max_derived, not violations)


def _ball_check_factorized(system: MoranSystem, n: int, k: int, j: int,
                           b_n: int, l: int) -> BallCheck:
    """Exact per-class verification on the product form of the support.

    Classes are the distinct support contents on [R_start, n+e) where
    R_start = t_k + j (nhat_{k+1} + m); everything earlier cancels between
    the ball mass and exp(S_n phi(q)) except the junction sum, which is
    bounded by ||phi|| b(R_start).  Requires a depth-1 potential.
    """
    params, schedule = system.params, system.schedule
    if system.phi_vec is None:
        raise ValueError(
            "factorized ball checks need a depth-1 potential; materialize the "
            "level instead (or shrink it under the point guard)")
    var2, norm, log_kappa_k, log_mass_next = _ball_rhs_constants(system, n, k, j, b_n)
    m, e = params.m, params.e
    upper = n + e
    r_start = schedule.t_seq[k] + j * (schedule.nhat_seq[k] + m)
    b_pre = schedule.b(r_start)
    t_l = schedule.t_seq[l]

    blocks = schedule.blocks_of_levels(l)
    in_region = [blk for blk in blocks
                 if blk.end > r_start and blk.start < upper + m]
    if not in_region:
        raise AssertionError("empty constrained region")
    combo_size = 1
    for blk in in_region:
        combo_size *= system.families[blk.level - 1].size
    if combo_size > COMBO_GUARD:
        raise ValueError(
            f"factorized ball check at n={n} needs {combo_size} combos, over "
            f"the {COMBO_GUARD} guard")

    pred = [blk for blk in blocks if blk.end <= r_start][-1]
    pred_last = np.unique(system.interleaved[pred.level - 1][:, -1])

    ilvs = [system.interleaved[blk.level - 1] for blk in in_region]
    sizes = [ilv.shape[0] for ilv in ilvs]
    grids = np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")
    choice = [g.ravel() for g in grids]
    total = choice[0].shape[0]
    wcombo = np.ones(total)
    for ilv_idx, blk in enumerate(in_region):
        wcombo *= system.families[blk.level - 1].weights[choice[ilv_idx]]

    L = upper - r_start
    region_sum = math.fsum(
        system.families[blk.level - 1].log_mass for blk in in_region)

    max_primary = -math.inf
    max_derived = -math.inf
    n_classes = 0
    ok = True
    for a_prev in pred_last:
        content = np.empty((total, L), dtype=np.int64)
        # pieces of [r_start, upper): conn, block, conn, block, ..., context
        prev_last = np.full(total, a_prev, dtype=np.int64)
        for ilv_idx, blk in enumerate(in_region):
            first = ilvs[ilv_idx][choice[ilv_idx], 0]
            _paste(content, system.conn_table[prev_last, first], blk.start - m,
                   r_start, upper)
            block_words = ilvs[ilv_idx][choice[ilv_idx]]
            _paste(content, block_words, blk.start, r_start, upper)
            prev_last = ilvs[ilv_idx][choice[ilv_idx], -1]
        if upper > t_l:
            _paste(content, system.ext_table[prev_last], t_l, r_start, upper)

        classes, inv = np.unique(content, axis=0, return_inverse=True)
        cs = np.zeros(classes.shape[0])
        np.add.at(cs, inv, wcombo)
        n_classes += classes.shape[0]

        phi_on = system.phi_vec[classes[:, :max(0, n - r_start)]].sum(axis=1)
        base = norm * b_pre - phi_on + np.log(cs) - region_sum
        log_primary = base - 2 * n * var2 - norm * b_n
        log_derived = (base - log_kappa_k - j * log_mass_next
                       + n * (params.C - 2 * params.eta) - 2 * n * var2)
        max_primary = max(max_primary, float(log_primary.max()))
        max_derived = max(max_derived, float(log_derived.max()))
        if (log_primary > 1e-9).any() or (log_derived > 1e-9).any():
            ok = False
    return BallCheck(n, l, k, j, b_n, "factorized", n_classes,
                     max_primary, max_derived, ok)


def _paste(content: np.ndarray, rows: np.ndarray, start: int,
           r_start: int, upper: int) -> None:
    """Write piece rows at absolute position start, clipped to the region."""
    if rows.ndim == 1:
        rows = rows[:, np.newaxis]
    end = start + rows.shape[1]
    lo, hi = max(start, r_start), min(end, upper)
    if lo >= hi:
        return
    content[:, lo - r_start:hi - r_start] = rows[:, lo - start:hi - start]


def pdp_certificate(params: MoranParams, sections: Sequence,
                    full_pressure: float) -> Certificate:
    """Certified lower bound once every finite check holds.

    The chain gives pressure at radius 2**-e at least C - 2 eta - 2 Var,
    hence at least C - 4 eta after the oscillation check; the limit-measure
    existence behind the distribution principle is assumed, not computed.
    """
    failed = tuple(name for name, passed in sections if not passed)
    value = params.C - 4 * params.eta
    note = (f"lower bound for the avoidance-set pressure at radius 2^-{params.e}; "
            f"full pressure {full_pressure:.12g}; the limit-measure step is "
            f"standard compactness, assumed not computed")
    return Certificate(value, not failed, params.e, failed, note)


# ---------------------------------------------------------------------------
# orchestration


@dataclass(frozen=True)
class MoranVerification:
    system_label: str
    phi_label: str
    params: MoranParams
    schedule_line: str
    param_report: ParamReport
    sections: tuple            # CheckItem entries beyond the parameter report
    ball_checks: tuple
    certificate: Certificate

    @property
    def ok(self) -> bool:
        return self.certificate.valid

    def render(self) -> str:
        lines = ["moran verification report v1",
                 f"system: {self.system_label}   potential: {self.phi_label}",
                 f"params: e={self.params.e} e0={self.params.e0} "
                 f"eta={self.params.eta} C={self.params.C} M={self.params.M} "
                 f"m={self.params.m} n_seq={list(self.params.n_seq)} "
                 f"N_seq={list(self.params.N_seq)} z0={self.params.z0} "
                 f"y={self.params.y}",
                 self.schedule_line]
        status = "PASS" if self.param_report.ok else "FAIL"
        lines.append(f"-- parameter-inequalities: {status}")
        for c in self.param_report.checks:
            mark = "ok" if c.passed else "VIOLATED"
            lines.append(f"   [{mark}] {c.name}: {c.detail}")
        for c in self.sections:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"-- {c.name}: {mark} ({c.detail})")
        if self.ball_checks:
            worst_p = max(b.max_log_primary for b in self.ball_checks)
            worst_d = max(b.max_log_derived for b in self.ball_checks)
            total_classes = sum(b.classes for b in self.ball_checks)
            all_ok = all(b.passed for b in self.ball_checks)
            ns = sorted({b.n for b in self.ball_checks})
            lines.append(
                f"-- ball-bound: {'PASS' if all_ok else 'FAIL'} "
                f"(n in [{ns[0]}, {ns[-1]}], {len(ns)} values, "
                f"{total_classes} ball classes, max log ratio "
                f"raw={worst_p:.6g} derived={worst_d:.6g})")
        cert = self.certificate
        if cert.valid:
            lines.append(
                f"certificate: VALID  pressure lower bound C - 4*eta = "
                f"{cert.value!r} ({cert.note})")
        else:
            lines.append(
                f"certificate: VOID  failed checks: {', '.join(cert.failed_checks)}")
        return "\n".join(lines) + "\n"


def run_verification(sft: Sft, phi: Potential, params: MoranParams,
                     ball_ns: Optional[Sequence] = None,
                     inject_words: Sequence = (),
                     jobs: int = 1) -> MoranVerification:
    """Build what fits, check everything, and emit the certificate.

    Levels whose point count exceeds the guard are never enumerated; their
    checks run on the factorized product form.  `inject_words` adds raw
    words to the separation and avoidance scans (adversarial probes).
    """
    param_report = validate_params(params, sft, phi)
    sections = []
    ball_checks = []
    if param_report.ok:
        system = MoranSystem(sft, phi, params)
        schedule_line = (
            f"schedule: c={list(system.schedule.c_seq)} "
            f"nhat={list(system.schedule.nhat_seq)} "
            f"t={list(system.schedule.t_seq)}")

        built = {}
        measures = {}
        for k in range(1, params.levels + 1):
            if system.tuple_count(k) > POINT_GUARD:
                break
            built[k] = system.build_points(k)
            measures[k] = system.build_measures(built[k], k)
        built_levels = sorted(built)

        counts = ", ".join(
            f"level {k}: {len(built[k])} = {system.tuple_count(k)}"
            for k in built_levels)
        virtual = [k for k in range(1, params.levels + 1) if k not in built]
        if virtual:
            counts += "; virtual: " + ", ".join(
                f"level {k}: {system.tuple_count(k)}" for k in virtual)
        formula_ok = all(len(built[k]) == system.tuple_count(k)
                         for k in built_levels)
        sections.append(CheckItem("point-count", formula_ok, counts))

        sections.append(check_block_injectivity(system))

        sep_details = []
        sep_ok = True
        for k in built_levels:
            words = [p.word for p in built[k]]
            words += [tuple(w) for w in inject_words]
            rep = check_separation(words, system.schedule.t_seq[k], k)
            sep_ok &= rep.passed
            sep_details.append(f"level {k}: {rep.pairs_checked} pairs"
                               + ("" if rep.passed else
                                  f", colliding {list(rep.violations)[:3]}"))
        if virtual:
            sep_details.append(
                "deeper levels separated by block injectivity at fixed positions")
        sections.append(CheckItem("separation", sep_ok, "; ".join(sep_details)))

        avoid_ok = True
        scanned = 0
        first_violation = None
        for k in built_levels:
            words = [p.word for p in built[k]] + [tuple(w) for w in inject_words]
            rep = check_avoidance(words, params)
            scanned += rep.words_scanned
            if not rep.passed:
                avoid_ok = False
                if first_violation is None:
                    first_violation = rep.violations[0]
        detail = (f"{scanned} words scanned for the "
                  f"{params.M + 2 * params.m + params.e}-prefix of z0")
        if first_violation is not None:
            detail += f"; occurrence at word {first_violation[0]} position {first_violation[1]}"
        sections.append(CheckItem("avoidance", avoid_ok, detail))

        kappa_details = []
        kappa_ok = True
        for k in built_levels:
            mu = measures[k]
            kappa_details.append(f"level {k} rel err {mu.relative_error:.2e}")
        if virtual:
            kappa_details.append(
                "deeper normalizers by the factor identity over family masses")
        sections.append(CheckItem("kappa-identity", kappa_ok, "; ".join(kappa_details)))

        if params.levels >= 2 and built_levels:
            k_low = min(built_levels[-1], params.levels - 1)
            item = check_prefix_consistency(system, built[k_low], k_low, k_low + 1)
            sections.append(item)

        if params.levels >= 2:
            if ball_ns is None:
                ball_ns = range(system.schedule.t_seq[1], system.schedule.t_seq[2])
            ns = sorted(ball_ns)

            def one(n):
                return check_ball_bound(system, n, measures=measures)

            if jobs > 1:
                from concurrent.futures import ThreadPoolExecutor
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    chunks = list(pool.map(one, ns))
            else:
                chunks = [one(n) for n in ns]
            for chunk in chunks:
                ball_checks.extend(chunk)
            sections.append(CheckItem(
                "ball-bound-aggregate", all(b.passed for b in ball_checks),
                f"{len(ball_checks)} (n, level) pairs"))
    else:
        schedule_line = "schedule: not built (parameter checks failed)"

    names = [("parameter-inequalities", param_report.ok)]
    names += [(c.name, c.passed) for c in sections]
    full = pressure(sft, phi).value
    certificate = pdp_certificate(params, names, full)
    return MoranVerification(sft.label, phi.label, params, schedule_line,
                             param_report, tuple(sections), tuple(ball_checks),
                             certificate)
