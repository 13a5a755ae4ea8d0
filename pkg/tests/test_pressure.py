import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sftpress as sp
from sftpress import (Potential, Sft, entropy_and_integral, full_shift,
                      gibbs_markov_measure, golden_mean_shift, pressure,
                      pressure_by_words, spectral_radius, transfer_matrix,
                      variational_defect)

GOLDEN = (1 + math.sqrt(5)) / 2


def weighted_full2():
    f2 = full_shift(2)
    return f2, Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})


class TestTransferMatrix:
    def test_zero_potential_is_transition_matrix(self):
        f2 = full_shift(2)
        tm = transfer_matrix(f2, Potential.zero(f2))
        assert np.allclose(tm.entries, np.ones((2, 2)))

    def test_column_weighting(self):
        f2, phi = weighted_full2()
        tm = transfer_matrix(f2, phi)
        assert np.allclose(tm.entries, [[1.0, 2.0], [1.0, 2.0]])

    def test_golden_mean_zero(self):
        gm = golden_mean_shift()
        tm = transfer_matrix(gm, Potential.zero(gm))
        assert np.allclose(tm.entries, [[1.0, 1.0], [1.0, 0.0]])

    def test_depth_two_recodes(self):
        gm = golden_mean_shift()
        phi = Potential.from_table(gm, 2, {"01": 1.0}, default=0.0)
        tm = transfer_matrix(gm, phi)
        assert tm.size == 3  # states 00, 01, 10
        assert tm.state_words == ((0, 0), (0, 1), (1, 0))


class TestSpectralRadius:
    def test_all_ones(self):
        res = spectral_radius(np.ones((2, 2)))
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_golden_mean_quadratic_root(self):
        res = spectral_radius(np.array([[1.0, 1.0], [1.0, 0.0]]))
        assert res.value == pytest.approx(GOLDEN, abs=1e-12)
        assert res.hi - res.lo <= 1e-12
        assert res.lo <= GOLDEN <= res.hi

    def test_rank_one(self):
        res = spectral_radius(np.array([[1.0, 2.0], [1.0, 2.0]]))
        assert res.value == pytest.approx(3.0, abs=1e-12)

    def test_periodic_matrix(self):
        # eigenvalues of [[0,2],[1,0]] are +-sqrt(2); iteration must not stall
        res = spectral_radius(np.array([[0.0, 2.0], [1.0, 0.0]]))
        assert res.value == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_reducible_takes_max_over_components(self):
        res = spectral_radius(np.array([[3.0, 1.0], [0.0, 2.0]]))
        assert res.value == pytest.approx(3.0, abs=1e-12)

    def test_no_cycle_empty(self):
        res = spectral_radius(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert res.empty and res.value == 0.0


class TestPressure:
    def test_full_shift_entropy(self):
        f2 = full_shift(2)
        assert pressure(f2, Potential.zero(f2)).value == pytest.approx(
            math.log(2), abs=1e-12)

    def test_weighted_log3(self):
        f2, phi = weighted_full2()
        assert pressure(f2, phi).value == pytest.approx(math.log(3), abs=1e-12)

    def test_golden_mean(self):
        gm = golden_mean_shift()
        assert pressure(gm, Potential.zero(gm)).value == pytest.approx(
            math.log(GOLDEN), abs=1e-10)

    def test_empty_sentinel(self):
        nil = Sft(np.array([[0, 1], [0, 0]], dtype=np.uint8))
        res = pressure(nil, Potential.zero(full_shift(2)))
        assert res.empty and res.value == -math.inf

    def test_serialization_record(self):
        f2 = full_shift(2)
        rec = pressure(f2, Potential.zero(f2)).to_dict()
        assert set(rec) == {"value", "method", "error_bound", "iterations"}


class TestPressureByWords:
    def test_full_shift_exact(self):
        f2 = full_shift(2)
        res = pressure_by_words(f2, Potential.zero(f2), 10)
        assert res.value == pytest.approx(math.log(2), abs=1e-13)
        assert res.method == "word_sum"

    def test_golden_mean_fibonacci(self):
        gm = golden_mean_shift()
        res = pressure_by_words(gm, Potential.zero(gm), 12)
        assert res.value == pytest.approx(math.log(377) / 12, abs=1e-13)

    def test_weighted_binomial_identity(self):
        f2, phi = weighted_full2()
        res = pressure_by_words(f2, phi, 8)
        assert res.value == pytest.approx(math.log(3), abs=1e-13)

    def test_guard(self):
        f2 = full_shift(3)
        with pytest.raises(ValueError, match="guard"):
            pressure_by_words(f2, Potential.zero(f2), 20)

    def test_oracle_agreement_and_convergence(self):
        systems = [
            (full_shift(2), Potential.zero(full_shift(2)), range(4, 17)),
            (golden_mean_shift(), Potential.zero(golden_mean_shift()), range(4, 17)),
            (weighted_full2()[0], weighted_full2()[1], range(4, 17)),
            (full_shift(3), Potential.zero(full_shift(3)), range(4, 13)),
        ]
        for sft, phi, ns in systems:
            exact = pressure(sft, phi).value
            diffs = [abs(pressure_by_words(sft, phi, n).value - exact) for n in ns]
            k = sft.alphabet_size
            c0 = max(n * d / math.log(k) for n, d in zip(ns, diffs))
            assert c0 < 2.0  # reported constant in units of log(alphabet)
            for a, b in zip(diffs, diffs[1:]):
                assert b <= a + 1e-12


class TestGibbs:
    def test_uniform_bernoulli(self):
        f2 = full_shift(2)
        mu = gibbs_markov_measure(f2, Potential.zero(f2))
        assert np.allclose(mu.stochastic, 0.5)
        assert np.allclose(mu.stationary, 0.5)

    def test_weighted_bernoulli_third(self):
        f2, phi = weighted_full2()
        mu = gibbs_markov_measure(f2, phi)
        assert np.allclose(mu.stationary, [1 / 3, 2 / 3], atol=1e-12)
        assert np.allclose(mu.stochastic, [[1 / 3, 2 / 3]] * 2, atol=1e-12)

    def test_parry_measure(self):
        gm = golden_mean_shift()
        mu = gibbs_markov_measure(gm, Potential.zero(gm))
        expected = np.array([GOLDEN ** 2, 1.0])
        expected /= expected.sum()
        assert np.allclose(mu.stationary, expected, atol=1e-10)
        assert np.abs(mu.stationary @ mu.stochastic - mu.stationary).max() <= 1e-12

    def test_non_mixing_rejected(self):
        two_points = Sft(np.eye(2, dtype=np.uint8))
        with pytest.raises(ValueError, match="not mixing"):
            gibbs_markov_measure(two_points, Potential.zero(full_shift(2)))


class TestVariationalPrinciple:
    def test_entropy_and_integral_uniform(self):
        f2 = full_shift(2)
        mu = gibbs_markov_measure(f2, Potential.zero(f2))
        h, integral = entropy_and_integral(mu, f2, Potential.zero(f2))
        assert h == pytest.approx(math.log(2), abs=1e-12)
        assert integral == 0.0

    def test_closed_form_weighted(self):
        f2, phi = weighted_full2()
        mu = gibbs_markov_measure(f2, phi)
        h, integral = entropy_and_integral(mu, f2, phi)
        assert h == pytest.approx(math.log(3) - (2 / 3) * math.log(2), abs=1e-12)
        assert integral == pytest.approx((2 / 3) * math.log(2), abs=1e-12)

    def test_parry_entropy(self):
        gm = golden_mean_shift()
        mu = gibbs_markov_measure(gm, Potential.zero(gm))
        h, _ = entropy_and_integral(mu, gm, Potential.zero(gm))
        assert h == pytest.approx(math.log(GOLDEN), abs=1e-10)

    def test_defect_small(self):
        assert variational_defect(full_shift(2), Potential.zero(full_shift(2))) <= 1e-12
        gm = golden_mean_shift()
        assert variational_defect(gm, Potential.zero(gm)) <= 1e-10


def test_monotone_under_transition_deletion():
    for sft in (full_shift(2), golden_mean_shift(), full_shift(3)):
        phi = Potential.zero(sft)
        base = pressure(sft, phi).value
        A = sft.transitions
        for i in range(sft.alphabet_size):
            for j in range(sft.alphabet_size):
                if not A[i, j]:
                    continue
                cut = np.array(A)
                cut[i, j] = 0
                sub = Sft(cut, f"{sft.label} minus {i}->{j}")
                assert pressure(sub, phi).value <= base + 1e-12


@given(st.floats(-2.0, 2.0, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_constant_shift_moves_pressure_exactly(c):
    gm = golden_mean_shift()
    phi = Potential.from_table(gm, 1, {"0": 0.4, "1": -0.3})
    base = pressure(gm, phi).value
    shifted = pressure(gm, phi.plus_constant(c)).value
    assert shifted == pytest.approx(base + c, abs=1e-12)


def test_variational_defect_random_primitive_instances():
    rng = np.random.default_rng(20240811)
    count = 0
    while count < 100:
        A = rng.integers(0, 2, size=(3, 3)).astype(np.uint8)
        sft = Sft(A, f"random-{count}")
        try:
            sp.primitivity_gap(sft)
        except ValueError:
            continue
        table = {(a,): float(v) for a, v in zip(range(3), rng.uniform(-1, 1, 3))}
        phi = Potential(1, table, label="random")
        assert variational_defect(sft, phi) <= 1e-8
        count += 1
