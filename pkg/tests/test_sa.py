import math

import numpy as np
import pytest

from qsep.instance import HammingSpectrum, Instance, build_hard_instance, build_watermarked_instance
from qsep.overlap_dist import shell_weights
from qsep.sa import (
    SaSchedule,
    default_schedule,
    sa_run,
    sa_shell_occupancy,
    sa_success_probability,
    sa_trace,
    wilson_interval,
)


def _wilson(k, n, z=1.959963984540054):
    p = k / n
    centre = p + z * z / (2 * n)
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    d = 1 + z * z / n
    return (centre - half) / d, (centre + half) / d


@pytest.mark.parametrize("k,n", [(8, 1000), (3, 40), (500, 1000), (37, 37), (0, 1000)])
def test_wilson_interval(k, n):
    lo, hi = wilson_interval(k, n)
    rlo, rhi = _wilson(k, n)
    assert lo == pytest.approx(max(rlo, 0.0), abs=1e-12)
    assert hi == pytest.approx(min(rhi, 1.0), abs=1e-12)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


def test_zero_successes_interval():
    assert wilson_interval(0, 1000) == (0.0, pytest.approx(0.003826758485555125, abs=1e-12))


def test_schedule_validation_and_temperatures():
    with pytest.raises(ValueError):
        SaSchedule(0.1, 1.0, 10)
    with pytest.raises(ValueError):
        SaSchedule(1.0, 0.1, 0)
    with pytest.raises(ValueError):
        SaSchedule(1.0, 0.1, 5, "cubic")
    t = SaSchedule(1.0, 0.01, 3).temperatures()
    assert np.allclose(t, [1.0, 0.1, 0.01])
    t = SaSchedule(1.0, 0.5, 3, "linear").temperatures()
    assert np.allclose(t, [1.0, 0.75, 0.5])


def test_default_schedule():
    s = default_schedule(build_hard_instance(10))
    u = build_hard_instance(10).spectrum.values
    assert s.t_start == pytest.approx((max(u) - min(u)) * math.pi / 4 / 10)
    assert (s.t_end, s.sweeps, s.cooling) == (0.01, 1000, "geometric")


def test_frozen_runs():
    inst = build_hard_instance(10)
    r0 = sa_run(inst, seed=0)
    assert (r0.final_bits, r0.final_hamming, r0.accepted_moves, r0.success) == ("1001101100", 5, 1887, False)
    r1 = sa_run(inst, seed=1)
    assert r1.best_success and not r1.success
    assert r1.best_energy == pytest.approx(-10 * math.pi / 4)


def test_same_seed_same_result():
    inst = build_hard_instance(12, "010011001010")
    assert sa_run(inst, seed=5) == sa_run(inst, seed=5)


def test_thread_count_does_not_change_results():
    inst = build_hard_instance(10)
    sched = SaSchedule(5.0, 0.05, 200)
    a = sa_success_probability(inst, sched, runs=40, seed0=3, workers=1)
    b = sa_success_probability(inst, sched, runs=40, seed0=3, workers=4)
    assert a.results == b.results


def test_energy_bookkeeping_is_exact():
    spec = HammingSpectrum.quarter_pi([-5, 9, 2, 40, 11, 70])
    inst = Instance("01101", spec, [((0, 2), 1), ((1, 3, 4), -2)])
    _, trace = sa_trace(inst, SaSchedule(20.0, 0.1, 300), seed=2, record_bits=True)
    for e, d, bits in zip(trace.energy_units, trace.hamming, trace.bits):
        assert e == inst.energy_units(bits)
        assert d == int(np.count_nonzero(bits != inst.target.array))


def test_float_instance_bookkeeping():
    inst = Instance("0110", HammingSpectrum.radians([0.0, 1.3, -0.4, 2.2, 0.9]), [((1, 2), 1)])
    _, trace = sa_trace(inst, SaSchedule(3.0, 0.1, 200), seed=4, record_bits=True)
    for e, bits in zip(trace.energy, trace.bits):
        assert e == pytest.approx(inst.energy(bits), abs=1e-9)


@pytest.mark.parametrize("values,temp", [([0, 2, 1, 3, 2], 1.5), ([-4, 6, 0, 74, 516], 3.0), ([0, 1, 3], 0.8)])
def test_fixed_temperature_reaches_gibbs_shells(values, temp):
    spec = HammingSpectrum.quarter_pi(values)
    n = spec.n
    inst = Instance("0" * n, spec)
    occ = sa_shell_occupancy(inst, temp, sweeps=40000, seed=9, burn_in=200)
    # batch means give a standard error that accounts for autocorrelation
    batches = occ.reshape(40, -1)
    freq = np.stack([np.bincount(b, minlength=n + 1) / b.size for b in batches])
    se = freq.std(axis=0, ddof=1) / math.sqrt(len(batches))
    exact = shell_weights(spec, 1 / temp)
    # shells too rare to be visited have zero spread; allow one count of resolution
    assert np.all(np.abs(freq.mean(axis=0) - exact) <= 3 * se + 1 / occ.size)


def test_frozen_start_at_target_stays():
    inst = build_hard_instance(12, "100110100011")
    r = sa_run(inst, SaSchedule(1e-9, 1e-9, 20), seed=3, start=inst.target.bits)
    assert r.success and r.final_hamming == 0 and r.accepted_moves == 0


def test_generous_schedule_examples():
    sched = SaSchedule(50.0, 0.01, 200)
    assert sa_success_probability(build_hard_instance(2), sched, runs=500).estimate > 0.5
    assert sa_success_probability(build_hard_instance(30), sched, runs=1000).estimate < 0.01


def test_monotone_hardness():
    ests = {}
    for n in (10, 20, 30):
        inst = build_hard_instance(n)
        ests[n] = sa_success_probability(inst, default_schedule(inst), runs=1000)
    assert ests[10].estimate >= ests[20].estimate >= ests[30].estimate
    # only the end points are resolvable at 1000 runs
    assert ests[30].wilson_high < ests[10].wilson_low


def test_easy_instance_is_solved():
    est = sa_success_probability(build_watermarked_instance("0" * 20), runs=50)
    assert est.successes == 50 and est.wilson_high == 1.0


def test_hard_n2_mostly_solved():
    est = sa_success_probability(build_hard_instance(2), runs=200)
    assert est.estimate > 0.5


def test_start_state_and_runs_validation():
    inst = build_hard_instance(4)
    r = sa_run(inst, SaSchedule(0.001, 0.001, 5), start="0000")
    assert r.success and r.final_bits == "0000"
    with pytest.raises(ValueError):
        sa_success_probability(inst, runs=0)


def test_summary_keys():
    s = sa_success_probability(build_hard_instance(4), SaSchedule(1, 0.1, 10), runs=5).summary()
    assert set(s) == {"runs", "successes", "estimate", "wilson_low", "wilson_high"}
