"""Topological pressure, Gibbs Markov measures, and the variational principle.

Pressure of an SFT with a locally constant potential is log of the Perron
root of the weighted transition matrix.  The Perron root is computed by
power iteration with min/max Rayleigh-quotient brackets, which certify an
enclosure for nonnegative matrices; reducible matrices are handled per
strongly connected component and an empty subshift gets the -inf sentinel.

`pressure_by_words` is the independent finite-scale route: the plain
weighted word sum (1/n) log sum exp(S_n phi), kept free of any spectral
machinery so the two paths can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .sft import Sft, count_words, higher_block, iter_words, primitivity_gap
from .potentials import Potential, birkhoff_sum

WORD_SUM_GUARD = 10**7


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """Nonnegative matrix A[u][v] * exp(phi at the word u extends to v)."""

    entries: np.ndarray
    state_words: tuple          # base-alphabet word behind each state
    label: str = "transfer"

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralResult:
    value: float
    lo: float
    hi: float
    error_bound: float
    iterations: int
    empty: bool = False


@dataclass(frozen=True)
class PressureResult:
    value: float
    method: str                  # "spectral" | "word_sum"
    error_bound: float
    iterations: int
    empty: bool = False

    def to_dict(self):
        return {"value": self.value, "method": self.method,
                "error_bound": self.error_bound, "iterations": self.iterations}


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov chain: stochastic matrix and stationary vector."""

    stochastic: np.ndarray
    stationary: np.ndarray
    state_words: tuple
    label: str = "markov"


def transfer_matrix(sft: Sft, phi: Potential) -> WeightedMatrix:
    """Weighted transition matrix after reducing phi to depth one.

    A depth-r potential is handled by recoding to the block alphabet whose
    symbols read off full r-windows; on a word-avoidance presentation the
    potential (given on the original alphabet) is transported through the
    block coding first.  Entries: B[u][v] = A[u][v] * exp(phi(window of v)).
    """
    if sft.is_coded:
        graph = Sft(sft.transitions, label=sft.label)
        state_words = tuple(sft.coding)
        ell = sft.block_length
    else:
        graph = sft
        state_words = tuple((a,) for a in range(sft.alphabet_size))
        ell = 1
    r = phi.depth
    extra = max(1, r - ell + 1)
    if extra > 1:
        graph, blocks = higher_block(graph, extra)
        state_words = tuple(
            state_words[b[0]] + tuple(state_words[s][-1] for s in b[1:])
            for b in blocks
        )
    if any(len(w) < r for w in state_words):
        raise ValueError("internal: state windows shorter than potential depth")
    weights = np.array([math.exp(phi(w)) for w in state_words])
    entries = graph.transitions.astype(float) * weights[np.newaxis, :]
    return WeightedMatrix(entries, state_words, label=f"transfer({sft.label},{phi.label})")


def spectral_radius(matrix, tol: float = 1e-13,
                    max_iterations: int = 200_000) -> SpectralResult:
    """Perron root with a certified bracket.

    Power iteration runs on B + I restricted to each strongly connected
    component (the shift kills periodicity), intersecting the Collatz-
    Wielandt brackets min_i (Mx)_i/x_i <= rho(M) <= max_i (Mx)_i/x_i along
    the way.  The overall root is the maximum over components; a matrix with
    no cycle reports value 0 with the empty flag.
    """
    B = matrix.entries if isinstance(matrix, WeightedMatrix) else np.asarray(matrix, float)
    n = B.shape[0]
    if n == 0 or not B.any():
        return SpectralResult(0.0, 0.0, 0.0, 0.0, 0, empty=True)
    n_comp, labels = connected_components(csr_matrix(B > 0), connection="strong")
    best: Optional[SpectralResult] = None
    total_iter = 0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if len(idx) == 1 and B[idx[0], idx[0]] == 0:
            continue  # transient vertex, contributes nothing
        sub = B[np.ix_(idx, idx)]
        res = _power_bracket(sub, tol, max_iterations)
        total_iter += res.iterations
        if best is None or res.value > best.value:
            best = res
    if best is None:
        return SpectralResult(0.0, 0.0, 0.0, 0.0, total_iter, empty=True)
    return SpectralResult(best.value, best.lo, best.hi, best.error_bound,
                          total_iter, empty=False)


def _power_bracket(sub: np.ndarray, tol: float, max_iterations: int) -> SpectralResult:
    n = sub.shape[0]
    op = csr_matrix(sub) if n > 128 else sub
    x = np.full(n, 1.0 / n)
    lo_best, hi_best = -math.inf, math.inf
    iterations = 0
    while iterations < max_iterations:
        y = op @ x + x  # action of (B + I), primitive on an irreducible block
        ratios = y / x
        lo_best = max(lo_best, ratios.min() - 1.0)
        hi_best = min(hi_best, ratios.max() - 1.0)
        iterations += 1
        if hi_best - lo_best <= tol * max(1.0, abs(hi_best)):
            break
        x = y / y.sum()
    value = 0.5 * (lo_best + hi_best)
    return SpectralResult(value, lo_best, hi_best, hi_best - lo_best, iterations)


def pressure(sft: Sft, phi: Potential) -> PressureResult:
    """Topological pressure: log Perron root of the transfer matrix.

    An empty subshift yields the -inf sentinel value, flagged, never raised.
    """
    tm = transfer_matrix(sft, phi)
    sp = spectral_radius(tm)
    if sp.empty:
        return PressureResult(-math.inf, "spectral", 0.0, sp.iterations, empty=True)
    err = math.log(sp.hi) - math.log(sp.lo) if sp.lo > 0 else math.inf
    return PressureResult(math.log(sp.value), "spectral", err, sp.iterations)


def pressure_by_words(sft: Sft, phi: Potential, n: int) -> PressureResult:
    """Finite-scale pressure (1/n) log sum over words of exp(S_n phi).

    The sum ranges over admissible words of length n + depth - 1, so every
    Birkhoff window is determined.  Refuses to enumerate more than 10^7
    words.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    length = n + phi.depth - 1
    total_words = count_words(sft, length)
    if total_words > WORD_SUM_GUARD:
        raise ValueError(
            f"word sum at n={n} needs {total_words} words of length {length}, "
            f"over the {WORD_SUM_GUARD} guard"
        )
    if total_words == 0:
        return PressureResult(-math.inf, "word_sum", 0.0, 0, empty=True)
    total = math.fsum(
        math.exp(birkhoff_sum(sft, phi, w)) for w in iter_words(sft, length)
    )
    return PressureResult(math.log(total) / n, "word_sum", 0.0, total_words)


def gibbs_markov_measure(sft: Sft, phi: Potential) -> MarkovMeasure:
    """Equilibrium state of a mixing SFT for a locally constant potential.

    Built from Perron eigendata of the transfer matrix: P[u][v] =
    B[u][v] r[v] / (rho r[u]) with right eigenvector r, stationary vector
    proportional to l*r with left eigenvector l.
    """
    tm = transfer_matrix(sft, phi)
    support = Sft((tm.entries > 0).astype(np.uint8), label=tm.label)
    primitivity_gap(support)  # raises on a non-mixing chain
    B = tm.entries
    rho, right = _perron_vector(B)
    _, left = _perron_vector(B.T)
    P = B * right[np.newaxis, :] / (rho * right[:, np.newaxis])
    P /= P.sum(axis=1, keepdims=True)  # absorb eigenvector residual
    pi = left * right
    pi /= pi.sum()
    residual = np.abs(pi @ P - pi).max()
    if residual > 1e-12:
        raise ArithmeticError(f"stationarity residual {residual:.2e} exceeds 1e-12")
    return MarkovMeasure(P, pi, tm.state_words, label=f"gibbs({sft.label},{phi.label})")


def _perron_vector(B: np.ndarray, tol: float = 1e-15, max_iterations: int = 500_000):
    n = B.shape[0]
    x = np.full(n, 1.0 / n)
    rho = 1.0
    for _ in range(max_iterations):
        y = B @ x + x
        rho = y @ x / (x @ x) - 1.0
        y /= y.sum()
        if np.abs(B @ y - rho * y).max() <= tol * max(1.0, rho):
            return rho, y
        x = y
    return rho, x


def entropy_and_integral(mu: MarkovMeasure, sft: Sft, phi: Potential):
    """(h, I): entropy of the chain and the integral of phi.

    h = -sum_u pi_u sum_v P_uv log P_uv; the integral evaluates phi on the
    window carried by each state, I = sum_u pi_u phi(window_u).
    """
    P, pi = mu.stochastic, mu.stationary
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(P > 0, P * np.log(np.where(P > 0, P, 1.0)), 0.0)
    h = float(-(pi @ plogp.sum(axis=1)))
    integral = math.fsum(
        pi[u] * phi(mu.state_words[u]) for u in range(len(pi))
    )
    return h, integral


def variational_defect(sft: Sft, phi: Potential) -> float:
    """|pressure - (h + integral)| for the Gibbs Markov measure.

    The two sides come from different computations (bracketed Perron root
    versus eigenvector entropy), so this is a live consistency check of the
    variational principle; contract: <= 1e-8 on mixing systems.
    """
    p = pressure(sft, phi).value
    mu = gibbs_markov_measure(sft, phi)
    h, integral = entropy_and_integral(mu, sft, phi)
    return abs(p - (h + integral))
