"""Simulated annealing with single-spin-flip Metropolis updates.

Energies are tracked incrementally: the Hamming-shell part through the
running distance to the target, the extra ``2*pi*m`` terms through their
local products.  On quarter-pi instances all bookkeeping is in integer
units (held exactly in float64) and only the acceptance test sees radians.

Each run draws its start state, proposal sites and acceptance uniforms from
its own counter-based Philox stream keyed by the run's seed, so results do
not depend on execution order or threading.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from ._numerics import QUARTER_PI, as_bits, bits_to_str
from .instance import Instance


@dataclass(frozen=True)
class SaSchedule:
    t_start: float
    t_end: float
    sweeps: int
    cooling: str = "geometric"

    def __post_init__(self):
        if not (self.t_start >= self.t_end > 0):
            raise ValueError("need t_start >= t_end > 0")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.cooling not in ("geometric", "linear"):
            raise ValueError(f"unknown cooling law {self.cooling!r}")

    def temperatures(self) -> np.ndarray:
        """Temperature used during each sweep."""
        if self.sweeps == 1:
            return np.array([self.t_start])
        x = np.arange(self.sweeps) / (self.sweeps - 1)
        if self.cooling == "geometric":
            return self.t_start * (self.t_end / self.t_start) ** x
        return self.t_start + (self.t_end - self.t_start) * x


def default_schedule(instance: Instance) -> SaSchedule:
    """Geometric cooling from (spectral spread)/n down to 0.01 over 100*n sweeps."""
    e = instance.spectrum.energies()
    t_start = max(float(e.max() - e.min()) / instance.n, 0.01)
    return SaSchedule(t_start, 0.01, 100 * instance.n, "geometric")


@dataclass(frozen=True)
class SaResult:
    final_bits: str
    final_energy: float
    success: bool
    accepted_moves: int
    final_hamming: int
    best_energy: float
    best_success: bool


class SaTrace(NamedTuple):
    """Per-sweep record of the tracked energy, distance to target and (optionally) states.

    ``energy_units`` is in quarter-pi units for exact instances, radians otherwise.
    """

    energy_units: np.ndarray
    hamming: np.ndarray
    bits: np.ndarray
    scale: float

    @property
    def energy(self) -> np.ndarray:
        return self.energy_units * self.scale


@numba.njit(cache=True, nogil=True)
def _extra_local(spins, i, term_ptr, term_sites, term_coef, site_ptr, site_terms):
    # sum over terms containing i of coef * prod spins
    acc = 0.0
    for k in range(site_ptr[i], site_ptr[i + 1]):
        t = site_terms[k]
        p = term_coef[t]
        for j in range(term_ptr[t], term_ptr[t + 1]):
            p *= spins[term_sites[j]]
        acc += p
    return acc


@numba.njit(cache=True, nogil=True)
def _sa_kernel(bits, target, shell, term_ptr, term_sites, term_coef, site_ptr, site_terms,
               temps, sites, uniforms, scale, energy0, trace_e, trace_d, trace_bits, best_bits):
    n = bits.size
    spins = np.empty(n)
    delta = 0
    for i in range(n):
        spins[i] = 1.0 - 2.0 * bits[i]
        if bits[i] != target[i]:
            delta += 1
    energy = energy0
    best = energy
    best_bits[:] = bits
    accepted = 0
    k = 0
    keep_bits = trace_bits.shape[0] > 0
    for sweep in range(temps.size):
        temp = temps[sweep]
        for _ in range(n):
            i = sites[k]
            u = uniforms[k]
            k += 1
            nd = delta - 1 if bits[i] != target[i] else delta + 1
            de = shell[nd] - shell[delta]
            if site_ptr[i + 1] > site_ptr[i]:
                de -= 2.0 * _extra_local(spins, i, term_ptr, term_sites, term_coef, site_ptr, site_terms)
            if de <= 0.0 or u < math.exp(-de * scale / temp):
                bits[i] ^= 1
                spins[i] = -spins[i]
                delta = nd
                energy += de
                accepted += 1
                if energy < best:
                    best = energy
                    best_bits[:] = bits
        trace_e[sweep] = energy
        trace_d[sweep] = delta
        if keep_bits:
            trace_bits[sweep, :] = bits
    return energy, accepted, best


class _Compiled(NamedTuple):
    shell: np.ndarray
    term_ptr: np.ndarray
    term_sites: np.ndarray
    term_coef: np.ndarray
    site_ptr: np.ndarray
    site_terms: np.ndarray
    scale: float


def _compile(instance: Instance) -> _Compiled:
    if instance.exact:
        shell = np.array(instance.spectrum.values, dtype=np.float64)
        unit, scale = 8.0, QUARTER_PI
    else:
        shell = instance.spectrum.energies()
        unit, scale = 2 * math.pi, 1.0
    terms = [(s, m) for s, m in instance.extra_terms if s]
    term_ptr = np.zeros(len(terms) + 1, dtype=np.int64)
    for t, (s, _) in enumerate(terms):
        term_ptr[t + 1] = term_ptr[t] + len(s)
    term_sites = np.array([i for s, _ in terms for i in s], dtype=np.int64)
    term_coef = np.array([unit * m for _, m in terms], dtype=np.float64)
    per_site = [[] for _ in range(instance.n)]
    for t, (s, _) in enumerate(terms):
        for i in s:
            per_site[i].append(t)
    site_ptr = np.zeros(instance.n + 1, dtype=np.int64)
    for i, lst in enumerate(per_site):
        site_ptr[i + 1] = site_ptr[i] + len(lst)
    site_terms = np.array([t for lst in per_site for t in lst], dtype=np.int64)
    return _Compiled(shell, term_ptr, term_sites, term_coef, site_ptr, site_terms, scale)


def _energy_in_units(instance: Instance, bits) -> float:
    if instance.exact:
        return float(instance.energy_units(bits))
    return instance.energy(bits)


def _run(instance, compiled, schedule, seed, start, temps, record_bits):
    n = instance.n
    rng = np.random.Generator(np.random.Philox(seed))
    init = rng.integers(0, 2, size=n, dtype=np.uint8)
    if start is not None:
        init = as_bits(start, n).copy()
    total = schedule.sweeps * n
    sites = rng.integers(0, n, size=total, dtype=np.int64)
    uniforms = rng.random(total)
    bits = init.copy()
    target = instance.target.array
    trace_e = np.empty(schedule.sweeps)
    trace_d = np.empty(schedule.sweeps, dtype=np.int64)
    trace_bits = np.empty((schedule.sweeps if record_bits else 0, n), dtype=np.uint8)
    best_bits = np.empty(n, dtype=np.uint8)
    energy, accepted, best = _sa_kernel(
        bits, target, compiled.shell, compiled.term_ptr, compiled.term_sites, compiled.term_coef,
        compiled.site_ptr, compiled.site_terms, temps, sites, uniforms, compiled.scale,
        _energy_in_units(instance, init), trace_e, trace_d, trace_bits, best_bits,
    )
    fh = int(trace_d[-1])
    result = SaResult(
        final_bits=bits_to_str(bits),
        final_energy=energy * compiled.scale,
        success=fh == 0,
        accepted_moves=int(accepted),
        final_hamming=fh,
        best_energy=best * compiled.scale,
        best_success=bool(np.array_equal(best_bits, target)),
    )
    return result, SaTrace(trace_e, trace_d, trace_bits, compiled.scale)


def sa_run(instance: Instance, schedule: SaSchedule | None = None, seed: int = 0, start=None) -> SaResult:
    """One annealing run from a seeded random (or given) start state."""
    schedule = schedule or default_schedule(instance)
    return _run(instance, _compile(instance), schedule, seed, start, schedule.temperatures(), False)[0]


def sa_trace(instance: Instance, schedule: SaSchedule, seed: int = 0, start=None, record_bits: bool = False):
    """Like :func:`sa_run` but also returns the per-sweep :class:`SaTrace`."""
    return _run(instance, _compile(instance), schedule, seed, start, schedule.temperatures(), record_bits)


def sa_shell_occupancy(instance: Instance, temperature: float, sweeps: int, seed: int = 0, burn_in: int = 0):
    """Fixed-temperature chain; returns the distance to target after each post-burn-in sweep."""
    schedule = SaSchedule(temperature, temperature, sweeps + burn_in)
    _, trace = sa_trace(instance, schedule, seed)
    return trace.hamming[burn_in:]


def wilson_interval(successes: int, runs: int, alpha: float = 0.05) -> tuple[float, float]:
    from statsmodels.stats.proportion import proportion_confint

    lo, hi = proportion_confint(successes, runs, alpha=alpha, method="wilson")
    # statsmodels leaves ~1e-19 residue at the boundaries
    if successes == 0:
        lo = 0.0
    if successes == runs:
        hi = 1.0
    return float(lo), float(hi)


class SaEstimate(NamedTuple):
    runs: int
    successes: int
    estimate: float
    wilson_low: float
    wilson_high: float
    results: list

    def summary(self) -> dict:
        return {
            "runs": self.runs,
            "successes": self.successes,
            "estimate": self.estimate,
            "wilson_low": self.wilson_low,
            "wilson_high": self.wilson_high,
        }


def _thread_count(workers):
    if workers is not None:
        return max(1, int(workers))
    return max(1, int(os.environ.get("QSEP_THREADS", "1")))


def sa_success_probability(instance: Instance, schedule: SaSchedule | None = None, runs: int = 1000,
                           seed0: int = 0, best_seen: bool = False, workers: int | None = None) -> SaEstimate:
    """Success fraction over seeds ``seed0 .. seed0+runs-1`` with a Wilson 95% interval."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    schedule = schedule or default_schedule(instance)
    compiled = _compile(instance)
    temps = schedule.temperatures()

    def one(seed):
        return _run(instance, compiled, schedule, seed, None, temps, False)[0]

    seeds = range(seed0, seed0 + runs)
    nthreads = _thread_count(workers)
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(s) for s in seeds]
    successes = sum(r.best_success if best_seen else r.success for r in results)
    lo, hi = wilson_interval(successes, runs)
    return SaEstimate(runs, successes, successes / runs, lo, hi, results)


SA_CSV_HEADER = ("seed", "success", "final_energy", "final_hamming")


def sa_csv_rows(estimate: SaEstimate, seed0: int):
    for k, r in enumerate(estimate.results):
        yield (seed0 + k, r.success, r.final_energy, r.final_hamming)
