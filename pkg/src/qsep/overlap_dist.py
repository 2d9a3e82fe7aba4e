"""Exact two-replica overlap distribution for Hamming-shell Hamiltonians.

With replica A at distance ``d`` from the target and replica B differing
from A on ``k`` sites, of which ``j`` are sites where A disagrees with the
target, B sits at distance ``d + k - 2j``.  Counting such pairs gives

    P(k) ~ sum_d sum_j C(n,d) C(n-d, k-j) C(d, j) w(d) w(d + k - 2j),

``w(d) = exp(-b E(d))``, which is O(n^3) terms instead of ``4**n``.
The overlap is ``q = (n - 2k)/n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._numerics import log_binom
from .errors import NoUniqueMinimum
from .instance import HammingSpectrum, Instance

GROUND_WEIGHT_BRACKET = (0.2, 0.5)
BISECTION_STEPS = 60


@dataclass(frozen=True)
class OverlapDistribution:
    n: int
    q_values: np.ndarray
    probabilities: np.ndarray
    inverse_temperature: float = float("nan")

    def mass(self, mask) -> float:
        return float(math.fsum(self.probabilities[mask]))

    @property
    def p_one(self) -> float:
        """Probability of the ``q = 1`` bin (identical replicas)."""
        return float(self.probabilities[0])


def q_values(n: int) -> np.ndarray:
    return (n - 2 * np.arange(n + 1)) / n


def overlap_distribution(spectrum: HammingSpectrum, inverse_temperature: float) -> OverlapDistribution:
    """``P(q_k)`` for ``k = 0..n`` at the given inverse temperature, normalised to 1."""
    if not inverse_temperature > 0:
        raise ValueError("inverse_temperature must be positive")
    n = spectrum.n
    logw = -inverse_temperature * spectrum.energies()
    d = np.arange(n + 1)[:, None, None]   # replica-A distance
    k = np.arange(n + 1)[None, :, None]   # inter-replica distance
    j = np.arange(n + 1)[None, None, :]   # flipped sites among A's wrong bits
    d2 = d + k - 2 * j
    valid = (j <= k) & (j <= d) & (k - j <= n - d) & (d2 >= 0) & (d2 <= n)
    d2c = np.clip(d2, 0, n)
    with np.errstate(invalid="ignore"):
        logt = (
            log_binom(n, d)
            + log_binom(n - d, k - j)
            + log_binom(d, j)
            + logw[np.broadcast_to(d, d2.shape)]
            + logw[d2c]
        )
    logt = np.where(valid, logt, -np.inf)
    logp = logsumexp(logt, axis=(0, 2))
    probs = np.exp(logp - logsumexp(logp))
    return OverlapDistribution(n, q_values(n), probs, float(inverse_temperature))


def overlap_distribution_bruteforce(instance: Instance, inverse_temperature: float) -> OverlapDistribution:
    """Direct sum over all ``2**n x 2**n`` replica pairs (small n only)."""
    n = instance.n
    e = instance.diagonal()
    w = np.exp(-inverse_temperature * (e - e.min()))
    p = w / w.sum()
    idx = np.arange(2**n)
    dist = np.bitwise_count(idx[:, None] ^ idx[None, :])
    probs = np.bincount(dist.ravel(), weights=np.outer(p, p).ravel(), minlength=n + 1)
    return OverlapDistribution(n, q_values(n), probs, float(inverse_temperature))


def shell_weights(spectrum: HammingSpectrum, inverse_temperature: float) -> np.ndarray:
    """Gibbs probability of each Hamming shell, ``C(n,D) w(D) / Z``."""
    n = spectrum.n
    logs = log_binom(n, np.arange(n + 1)) - inverse_temperature * spectrum.energies()
    return np.exp(logs - logsumexp(logs))


def pick_temperature(spectrum: HammingSpectrum, bracket=GROUND_WEIGHT_BRACKET, steps: int = BISECTION_STEPS,
                     floor: float = 1e-12) -> float:
    """Inverse temperature putting the ground shell's Gibbs weight inside ``bracket``.

    Bisects in log(b) toward the bracket centre.  If even ``b = floor``
    already exceeds the bracket (tiny systems) the floor is returned.
    """
    e = np.asarray(spectrum.energies())
    order = np.argsort(e, kind="stable")
    if e.size < 2 or e[order[0]] == e[order[1]]:
        raise NoUniqueMinimum("spectrum has no unique minimum shell")
    ground = int(order[0])
    lo_w, hi_w = bracket
    goal = 0.5 * (lo_w + hi_w)

    def weight(b):
        return shell_weights(spectrum, b)[ground]

    lo = floor
    if weight(lo) >= goal:
        return lo
    hi = 1.0
    while weight(hi) < goal:
        hi *= 2.0
        if hi > 1e300:
            raise NoUniqueMinimum("ground shell weight never reaches the bracket")
    loglo, loghi = math.log(lo), math.log(hi)
    mid = math.sqrt(lo * hi)
    for _ in range(steps):
        mid = math.exp(0.5 * (loglo + loghi))
        if weight(mid) < goal:
            loglo = math.log(mid)
        else:
            loghi = math.log(mid)
    return mid


@dataclass(frozen=True)
class HardnessVerdict:
    mass_below: float
    p_one: float
    verdict: str


def hardness_indicator(dist: OverlapDistribution, threshold: float = 0.75, min_small_q_mass: float = 0.25,
                       min_self_overlap: float = 0.05) -> HardnessVerdict:
    """``hard`` when |q| < threshold carries enough mass and the q = 1 peak is also present."""
    below = dist.mass(np.abs(dist.q_values) < threshold)
    p1 = dist.mass(dist.q_values == 1.0)
    hard = below >= min_small_q_mass and p1 >= min_self_overlap
    return HardnessVerdict(below, p1, "hard" if hard else "easy")


PQ_CSV_HEADER = ("q", "probability")
