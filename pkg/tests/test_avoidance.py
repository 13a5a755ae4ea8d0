import math

import pytest

import sftpress as sp
from sftpress import (Potential, avoidance_pressure_sweep, avoidance_subshift,
                      cylinder_word, eventually_periodic, full_shift,
                      golden_mean_shift, is_transitive_point, pressure)

GOLDEN = (1 + math.sqrt(5)) / 2


class TestCylinderWord:
    def test_fixed_point(self):
        assert cylinder_word(eventually_periodic("", "0"), 3) == (0, 0, 0)

    def test_preperiodic(self):
        assert cylinder_word(eventually_periodic("1", "0"), 3) == (1, 0, 0)

    def test_periodic(self):
        assert cylinder_word(eventually_periodic("", "01"), 4) == (0, 1, 0, 1)


class TestAvoidanceSubshift:
    def test_full3_level1_drops_symbol(self):
        sub = avoidance_subshift(full_shift(3), eventually_periodic("", "0"), 1)
        assert sp.count_words(sub, 5) == 2 ** 5

    def test_forbid_01_leaves_entropy_zero(self):
        sub = avoidance_subshift(full_shift(2), eventually_periodic("", "01"), 2)
        assert not sp.subshift_is_empty(sub)
        phi = Potential.zero(full_shift(2))
        assert pressure(sub, phi).value == pytest.approx(0.0, abs=1e-12)

    def test_forbid_00_relabeled_golden_mean(self):
        sub = avoidance_subshift(full_shift(2), eventually_periodic("", "0"), 2)
        phi = Potential.zero(full_shift(2))
        assert pressure(sub, phi).value == pytest.approx(math.log(GOLDEN), abs=1e-10)

    def test_nesting_of_levels(self):
        f2 = full_shift(2)
        z0 = eventually_periodic("", "0")
        for n in range(1, 8):
            low = avoidance_subshift(f2, z0, n)
            high = avoidance_subshift(f2, z0, n + 1)
            for m in range(1, 11):
                words_low = set(sp.iter_words(low, m))
                words_high = set(sp.iter_words(high, m))
                assert words_low <= words_high


class TestTransitivity:
    def test_fixed_point_not_transitive_in_full_shift(self):
        assert not is_transitive_point(full_shift(2), eventually_periodic("", "0"))

    def test_single_fixed_point_space(self):
        import numpy as np
        one = sp.Sft(np.array([[1]], dtype=np.uint8), "point")
        assert is_transitive_point(one, eventually_periodic("", "0"))

    def test_golden_mean_fixed_point(self):
        assert not is_transitive_point(golden_mean_shift(),
                                       eventually_periodic("", "0"))

    def test_two_cycle_space(self):
        import numpy as np
        swap = sp.Sft(np.array([[0, 1], [1, 0]], dtype=np.uint8), "swap")
        assert is_transitive_point(swap, eventually_periodic("", "01"))


class TestSweep:
    def test_gaps_shrink_below_tolerance(self):
        f2 = full_shift(2)
        sweep = avoidance_pressure_sweep(f2, Potential.zero(f2),
                                         eventually_periodic("", "0"), 10)
        values = [lv.result.value for lv in sweep.levels]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert sweep.levels[-1].gap_to_full < 1e-3
        assert all(lv.gap_to_full >= -1e-12 for lv in sweep.levels)
        assert sweep.full_pressure == pytest.approx(math.log(2), abs=1e-12)

    def test_symbol_deletion_gap(self):
        f3 = full_shift(3)
        sweep = avoidance_pressure_sweep(f3, Potential.zero(f3),
                                         eventually_periodic("", "0"), 1)
        assert sweep.levels[0].gap_to_full == pytest.approx(
            math.log(3) - math.log(2), abs=1e-12)

    def test_weighted_sweep_toward_log3(self):
        f2 = full_shift(2)
        phi = Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})
        sweep = avoidance_pressure_sweep(f2, phi, eventually_periodic("", "0"), 10)
        gaps = [lv.gap_to_full for lv in sweep.levels]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 2e-3
        assert sweep.full_pressure == pytest.approx(math.log(3), abs=1e-12)

    def test_transitive_point_rejected(self):
        import numpy as np
        swap = sp.Sft(np.array([[0, 1], [1, 0]], dtype=np.uint8), "swap")
        with pytest.raises(ValueError, match="transitive"):
            avoidance_pressure_sweep(swap, Potential.zero(swap),
                                     eventually_periodic("", "01"), 3)

    def test_nonempty_levels_stay_nonempty(self):
        f2 = full_shift(2)
        sweep = avoidance_pressure_sweep(f2, Potential.zero(f2),
                                         eventually_periodic("", "0"), 8)
        seen_nonempty = False
        for lv in sweep.levels:
            if seen_nonempty:
                assert not lv.empty
            seen_nonempty = seen_nonempty or not lv.empty

    def test_parallel_jobs_identical(self):
        f2 = full_shift(2)
        z0 = eventually_periodic("", "0")
        phi = Potential.zero(f2)
        base = avoidance_pressure_sweep(f2, phi, z0, 8, jobs=1).to_csv()
        assert avoidance_pressure_sweep(f2, phi, z0, 8, jobs=4).to_csv() == base
        assert avoidance_pressure_sweep(f2, phi, z0, 8, jobs=8).to_csv() == base

    def test_csv_schema(self):
        f2 = full_shift(2)
        sweep = avoidance_pressure_sweep(f2, Potential.zero(f2),
                                         eventually_periodic("", "0"), 3)
        lines = sweep.to_csv().splitlines()
        assert lines[0] == "n,pressure,error_bound,gap_to_full,empty_flag"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[0] == "1" and first[4] == "0"


def test_coded_pressure_matches_native_presentation():
    # forbidding 00 in the full 2-shift is the shift on [[0,1],[1,1]]: the
    # avoidance presentation must price any potential identically, including
    # depth-2 tables transported through the block coding
    import numpy as np
    f2 = full_shift(2)
    coded = avoidance_subshift(f2, eventually_periodic("", "0"), 2)
    native = sp.Sft(np.array([[0, 1], [1, 1]], dtype=np.uint8), "no-00")
    for table, depth in [({"0": 0.3, "1": -0.2}, 1),
                         ({"01": 1.0, "10": -0.5, "11": 0.25}, 2)]:
        phi = Potential.from_table(native, depth, table)
        phi_full = Potential.from_table(f2, depth, table, default=0.0)
        assert pressure(coded, phi_full).value == pytest.approx(
            pressure(native, phi).value, abs=1e-11)
        # finite-scale route through the coded presentation agrees too
        spectral = pressure(coded, phi_full).value
        n = 14
        word_sum = sp.pressure_by_words(coded, phi_full, n).value
        assert abs(word_sum - spectral) < 0.2


def test_levels_match_word_sum_estimates():
    # spectral level pressures against plain word-count growth at length 16
    f2 = full_shift(2)
    z0 = eventually_periodic("", "0")
    phi = Potential.zero(f2)
    for n in range(1, 5):
        sub = avoidance_subshift(f2, z0, n)
        spectral = pressure(sub, phi).value
        estimate = sp.pressure_by_words(sub, phi, 16).value
        assert abs(estimate - spectral) < 0.01
