"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; every tolerance is pinned here.
"""

import math
import os
import time

import numpy as np
import pytest

import sftpress as sp
from sftpress import cli
from sftpress.moran import MoranParams, run_verification

GOLDEN = (1 + math.sqrt(5)) / 2
CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def _report(i, name):
    print(f"ACCEPTANCE {i} {name}: PASS")


def test_criterion_1_entropy_exactness():
    start = time.perf_counter()
    gm = sp.golden_mean_shift()
    assert abs(sp.pressure(gm, sp.Potential.zero(gm)).value
               - math.log(GOLDEN)) <= 1e-9
    for k in (2, 3, 5, 10):
        fk = sp.full_shift(k)
        assert abs(sp.pressure(fk, sp.Potential.zero(fk)).value
                   - math.log(k)) <= 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    _report(1, "entropy exactness")


def test_criterion_2_pressure_two_path_agreement():
    f2 = sp.full_shift(2)
    phi = sp.Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})
    assert abs(sp.pressure(f2, phi).value - math.log(3)) <= 1e-10
    assert abs(sp.pressure_by_words(f2, phi, 8).value - math.log(3)) <= 1e-10
    _report(2, "pressure two-path agreement")


def _counts_avoiding_zero_run(run_length, max_len):
    """Binary words without a zero run of the given length: plain dict DP,
    independent of all matrix machinery."""
    target = (0,) * run_length
    states = {(): 1}
    out = {}
    for L in range(1, max_len + 1):
        nxt = {}
        for suffix, cnt in states.items():
            for s in (0, 1):
                tail = suffix + (s,)
                if tail[-run_length:] == target:
                    continue
                key = tail[-(run_length - 1):] if run_length > 1 else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
        out[L] = sum(states.values())
    return out


def test_criterion_3_avoidance_sweep_unweighted():
    start = time.perf_counter()
    f2 = sp.full_shift(2)
    phi = sp.Potential.zero(f2)
    z0 = sp.eventually_periodic("", "0")
    sweep = sp.avoidance_pressure_sweep(f2, phi, z0, 10)
    values = [lv.result.value for lv in sweep.levels]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert sweep.levels[-1].gap_to_full < 1e-3

    for n in range(1, 7):
        sub = sp.avoidance_subshift(f2, z0, n)
        counts = _counts_avoiding_zero_run(n, 24)
        for L in range(1, 13):
            assert counts[L] == sp.count_words(sub, L)
        estimate = math.log(counts[24] / counts[23])
        assert abs(estimate - sp.pressure(sub, phi).value) <= 1e-6
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    _report(3, "avoidance pressures, unweighted, against brute-force counts")


def test_criterion_4_avoidance_sweep_weighted():
    f2 = sp.full_shift(2)
    phi = sp.Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})
    sweep = sp.avoidance_pressure_sweep(f2, phi, sp.eventually_periodic("", "0"), 10)
    assert sweep.full_pressure == pytest.approx(math.log(3), abs=1e-12)
    gaps = [lv.gap_to_full for lv in sweep.levels]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 2e-3
    _report(4, "avoidance pressures, weighted")


def test_criterion_5_bowen_equation():
    sft3, phi3 = sp.code_map(sp.times_k(3))
    sweep = sp.dimension_sweep(sft3, phi3, sp.eventually_periodic("", "0"), 7)
    levels = dict(sweep.levels)
    assert abs(levels[1].s_star - math.log(2) / math.log(3)) <= 1e-6
    assert levels[7].s_star >= 0.99
    for k in (2, 3, 10):
        sft, phi = sp.code_map(sp.times_k(k))
        assert abs(sp.bowen_root(sft, phi).s_star - 1.0) <= 1e-9
    _report(5, "Bowen equation dimensions")


def test_criterion_6_variational_principle_random_instances():
    start = time.perf_counter()
    rng = np.random.default_rng(20240811)
    done = 0
    while done < 100:
        A = rng.integers(0, 2, size=(3, 3)).astype(np.uint8)
        sft = sp.Sft(A, f"random-{done}")
        try:
            sp.primitivity_gap(sft)
        except ValueError:
            continue
        phi = sp.Potential(
            1, {(a,): float(v) for a, v in enumerate(rng.uniform(-1, 1, 3))})
        assert sp.variational_defect(sft, phi) <= 1e-8
        done += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    _report(6, "variational principle on 100 random primitive systems")


def test_criterion_7_moran_construction_suite():
    start = time.perf_counter()
    f2 = sp.full_shift(2)
    phi = sp.Potential.zero(f2)
    params = MoranParams(e=5, e0=3, eta=0.2, C=0.5, M=6, m=1,
                         n_seq=(7, 8), N_seq=(1, 2),
                         z0=sp.eventually_periodic("", "0"),
                         y=sp.eventually_periodic("", "1"))
    v = run_verification(f2, phi, params)
    assert v.param_report.ok
    by_name = {c.name: c for c in v.sections}
    assert by_name["point-count"].passed
    assert by_name["block-injectivity"].passed
    assert by_name["separation"].passed
    assert by_name["avoidance"].passed
    assert by_name["kappa-identity"].passed
    assert by_name["prefix-consistency"].passed
    t1, t2 = 10, 34
    covered = {b.n for b in v.ball_checks}
    assert covered == set(range(t1, t2))
    assert all(b.passed for b in v.ball_checks)
    # certificate value is C - 4 eta by the final chain of estimates
    assert v.certificate.valid
    assert v.certificate.value == pytest.approx(params.C - 4 * params.eta)
    assert v.certificate.value <= math.log(2)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    _report(7, "fractal construction suite")


def test_criterion_8_scaling_covariance():
    systems = [
        sp.code_map(sp.times_k(2)),
        sp.code_map(sp.times_k(3)),
        sp.code_map(sp.times_k(10)),
        (sp.full_shift(2), sp.Potential.constant(sp.full_shift(2), math.log(3))),
        (sp.golden_mean_shift(),
         sp.Potential.constant(sp.golden_mean_shift(), math.log(2))),
    ]
    for sft, phi in systems:
        base = sp.bowen_root(sft, phi).s_star
        doubled = sp.bowen_root(sft, phi.scaled(2.0)).s_star
        assert abs(doubled - base / 2) <= 1e-9
    _report(8, "Bowen root scaling covariance")


def test_criterion_9_parallel_determinism(tmp_path):
    sweep_outputs = []
    verify_outputs = []
    for jobs in ("1", "4", "8"):
        sweep = tmp_path / f"sweep-{jobs}.csv"
        assert cli.main(["avoid-sweep", os.path.join(CONFIGS, "full2.json"),
                         "--z0", "z0", "--nmax", "10", "--jobs", jobs,
                         "--out", str(sweep)]) == 0
        sweep_outputs.append(sweep.read_bytes())
        report = tmp_path / f"verify-{jobs}.txt"
        assert cli.main(["moran-verify", os.path.join(CONFIGS, "full2.json"),
                         "--params", os.path.join(CONFIGS, "moran_full2.json"),
                         "--jobs", jobs, "--out", str(report)]) == 0
        verify_outputs.append(report.read_bytes())
    assert sweep_outputs[0] == sweep_outputs[1] == sweep_outputs[2]
    assert verify_outputs[0] == verify_outputs[1] == verify_outputs[2]
    _report(9, "byte-identical outputs across 1, 4, 8 jobs")
