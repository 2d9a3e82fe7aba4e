"""Closed-system quantum annealing from ``|+>`` under a linear schedule.

``H(s) = mixer_sign * (1 - s) * sum_i X_i + s * H_P`` with ``s = t/T``.  The
default ``mixer_sign = -1`` makes ``|+>`` the instantaneous ground state at
``s = 0``.

Time stepping is the fourth-order commutator-free Magnus scheme

    U(t+h, t) = exp(-i h (a1 H(t+c1 h) + a2 H(t+c2 h)))
              * exp(-i h (a2 H(t+c1 h) + a1 H(t+c2 h)))

with Gauss nodes ``c1,2 = 1/2 -+ sqrt(3)/6`` and ``a1,2 = 1/4 -+ sqrt(3)/6``.
Since ``H`` is affine in ``s`` each factor is ``exp(-i h/2 H(s_eff))``.  Each
exponential is evaluated to machine precision (dense ``eigh`` in the
permutation-symmetric subspace, ``expm_multiply`` in the full space) so the
two engines integrate identical dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import expm_multiply

from ._numerics import log_binom
from .errors import SymmetryBroken, TooLarge
from .instance import HammingSpectrum, Instance

FULL_SPACE_MAX_N = 14

_SQ3 = math.sqrt(3.0)
_NODES = (0.5 - _SQ3 / 6, 0.5 + _SQ3 / 6)
_WEIGHTS = (0.25 - _SQ3 / 6, 0.25 + _SQ3 / 6)
# effective s-offsets (in units of h) of the two exponentials, applied in this order
_S_EFF = (
    (_WEIGHTS[1] * _NODES[0] + _WEIGHTS[0] * _NODES[1]) * 2,
    (_WEIGHTS[0] * _NODES[0] + _WEIGHTS[1] * _NODES[1]) * 2,
)


@dataclass(frozen=True)
class AnnealSchedule:
    """Linear schedule ``s(t) = t / total_time`` integrated in ``steps`` steps."""

    total_time: float
    steps: int

    def __post_init__(self):
        if not self.total_time > 0:
            raise ValueError("total_time must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    @property
    def dt(self) -> float:
        return self.total_time / self.steps

    def sub_points(self):
        """``s`` values of the two exponentials in each step, in application order."""
        for k in range(self.steps):
            for off in _S_EFF:
                yield (k + off) / self.steps


DEFAULT_SCHEDULE = AnnealSchedule(20.0, 4000)


class AnnealResult(NamedTuple):
    success: float
    norm_deviation: float
    state: np.ndarray


def symmetric_mixer_offdiagonal(n: int) -> np.ndarray:
    """``<w+1| sum X |w> = sqrt((w+1)(n-w))`` for w = 0..n-1."""
    w = np.arange(n)
    return np.sqrt((w + 1.0) * (n - w))


def symmetric_mixer(n: int) -> np.ndarray:
    off = symmetric_mixer_offdiagonal(n)
    return np.diag(off, 1) + np.diag(off, -1)


def plus_state_symmetric(n: int) -> np.ndarray:
    """``|+>^n`` in the normalised Dicke basis: ``sqrt(C(n,w) / 2^n)``."""
    w = np.arange(n + 1)
    return np.exp(0.5 * (log_binom(n, w) - n * math.log(2.0))).astype(complex)


def _spectrum_of(problem) -> HammingSpectrum:
    if isinstance(problem, Instance):
        if problem.extra_terms:
            raise SymmetryBroken("extra terms break permutation symmetry; use qa_statevector")
        return problem.spectrum
    return problem


def anneal_symmetric(problem, schedule: AnnealSchedule = DEFAULT_SCHEDULE, mixer_sign: int = -1) -> AnnealResult:
    """Anneal in the ``n+1`` dimensional symmetric subspace (target gauged to ``0...0``)."""
    spectrum = _spectrum_of(problem)
    n = spectrum.n
    energies = spectrum.energies()
    off = mixer_sign * symmetric_mixer_offdiagonal(n)
    psi = plus_state_symmetric(n)
    tau = 0.5 * schedule.dt
    for s in schedule.sub_points():
        w, v = eigh_tridiagonal(s * energies, (1.0 - s) * off)
        psi = v @ (np.exp(-1j * tau * w) * (v.T @ psi))
    norm = float(np.vdot(psi, psi).real)
    return AnnealResult(float(abs(psi[0]) ** 2), abs(math.sqrt(norm) - 1.0), psi)


def qa_symmetric(problem, schedule: AnnealSchedule = DEFAULT_SCHEDULE, mixer_sign: int = -1) -> float:
    """Probability of ending in the target after annealing, symmetric-subspace engine."""
    return anneal_symmetric(problem, schedule, mixer_sign).success


def full_mixer(n: int) -> sparse.csr_matrix:
    """``sum_i X_i`` on ``2**n`` amplitudes."""
    dim = 2**n
    idx = np.arange(dim)
    rows = np.repeat(idx, n)
    cols = (idx[:, None] ^ (1 << np.arange(n))[None, :]).ravel()
    return sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(dim, dim))


def anneal_statevector(instance: Instance, schedule: AnnealSchedule = DEFAULT_SCHEDULE, mixer_sign: int = -1) -> AnnealResult:
    """Same dynamics in the full ``2**n`` space; no symmetry assumed."""
    n = instance.n
    if n > FULL_SPACE_MAX_N:
        raise TooLarge(f"full-space annealing limited to n <= {FULL_SPACE_MAX_N}")
    dim = 2**n
    mixer = mixer_sign * full_mixer(n)
    diag = sparse.diags(instance.diagonal())
    psi = np.full(dim, 2.0 ** (-n / 2), dtype=complex)
    tau = 0.5 * schedule.dt
    for s in schedule.sub_points():
        h = ((1.0 - s) * mixer + s * diag).tocsr()
        psi = expm_multiply(-1j * tau * h, psi)
    norm = float(np.vdot(psi, psi).real)
    return AnnealResult(float(abs(psi[instance.target.index]) ** 2), abs(math.sqrt(norm) - 1.0), psi)


def qa_statevector(instance: Instance, schedule: AnnealSchedule = DEFAULT_SCHEDULE, mixer_sign: int = -1) -> float:
    """Probability of ending in the target after annealing, full-space engine."""
    return anneal_statevector(instance, schedule, mixer_sign).success


QA_CSV_HEADER = ("n", "T", "steps", "success_prob")
