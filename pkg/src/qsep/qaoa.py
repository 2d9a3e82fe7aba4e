"""Depth-1 QAOA overlap with the target state.

For a Hamming-shell spectrum the ``2**n``-term overlap collapses to ``n+1``
shells:

    <t| e^{-i beta H_X} e^{-i gamma H_P} |+>
        = sum_D C(n,D) 2^{-n/2} e^{-i(gamma E(D) + pi D/2)} cos^{n-D}(beta) sin^D(beta)

with ``H_X = sum_i X_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from ._numerics import TWO_PI, log_binom, unit_phase
from .errors import TooLarge
from .instance import (
    DEFAULT_GAMMAS,
    HammingSpectrum,
    Instance,
    SpectralCertificate,
    _exact_gamma_units,
    find_gamma,
)

STATEVECTOR_MAX_N = 20


@dataclass(frozen=True)
class QaoaParams:
    beta: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and math.isfinite(self.gamma)):
            raise ValueError("QAOA angles must be finite")


@dataclass(frozen=True)
class AmplitudeResult:
    re: float
    im: float
    prob: float

    @classmethod
    def from_complex(cls, z: complex) -> "AmplitudeResult":
        z = complex(z)
        return cls(z.real, z.imag, z.real * z.real + z.imag * z.imag)

    @property
    def amplitude(self) -> complex:
        return complex(self.re, self.im)


def _shell_magnitudes(n: int, beta: float) -> np.ndarray:
    """Signed ``C(n,D) 2^{-n/2} cos^{n-D} sin^D`` for D = 0..n, via logs."""
    c, s = math.cos(beta), math.sin(beta)
    d = np.arange(n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmag = (
            log_binom(n, d)
            + (n - d) * (math.log(abs(c)) if c else -np.inf)
            + d * (math.log(abs(s)) if s else -np.inf)
            - 0.5 * n * math.log(2.0)
        )
    # 0**0 = 1 at the ends
    if c == 0:
        logmag[n] = log_binom(n, n) + n * math.log(abs(s)) - 0.5 * n * math.log(2.0)
    if s == 0:
        logmag[0] = n * math.log(abs(c)) - 0.5 * n * math.log(2.0)
    mag = np.exp(logmag)
    sign = np.where(((c < 0) * (n - d) + (s < 0) * d) % 2 == 1, -1.0, 1.0)
    return sign * mag


def _shell_phases(spectrum: HammingSpectrum, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """``(cos, -sin)`` of ``gamma E(D) + pi D/2`` per shell, exact mod 8 when possible."""
    n = spectrum.n
    gu = _exact_gamma_units(spectrum, gamma)
    if gu is not None:
        pairs = [unit_phase(g + 2 * d) for d, g in enumerate(gu)]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])
    theta = np.mod(gamma * spectrum.energies() + 0.5 * math.pi * np.arange(n + 1), TWO_PI)
    return np.cos(theta), -np.sin(theta)


def overlap_collapsed(spectrum: HammingSpectrum, params: QaoaParams) -> AmplitudeResult:
    """Target amplitude of the depth-1 QAOA state from the ``n+1`` Hamming shells."""
    mag = _shell_magnitudes(spectrum.n, params.beta)
    re, im = _shell_phases(spectrum, params.gamma)
    return AmplitudeResult.from_complex(complex(math.fsum(mag * re), math.fsum(mag * im)))


def overlap_bruteforce(spectrum: HammingSpectrum, target, params: QaoaParams) -> AmplitudeResult:
    """Literal ``2**n``-term sum over basis states; reference for small n."""
    from .instance import Instance

    inst = Instance(target, spectrum)
    delta = inst.hamming_array()
    energy = inst.diagonal()
    n = inst.n
    c, s = math.cos(params.beta), math.sin(params.beta)
    terms = (
        np.exp(-1j * (params.gamma * energy + 0.5 * math.pi * delta))
        * c ** (n - delta)
        * s**delta
        / math.sqrt(2.0**n)
    )
    return AmplitudeResult.from_complex(terms.sum())


def _apply_mixer(psi: np.ndarray, n: int, beta: float) -> np.ndarray:
    """Apply ``prod_i exp(-i beta X_i)``."""
    c, s = math.cos(beta), math.sin(beta)
    psi = psi.reshape((2,) * n)
    for q in range(n):
        psi = c * psi - 1j * s * np.flip(psi, axis=q)
    return psi.reshape(-1)


def _phase_layer(instance: Instance, gamma: float) -> np.ndarray:
    """Diagonal of ``exp(-i gamma H_P)`` over all basis states."""
    if instance.exact:
        g = Fraction(gamma)
        scaled = instance.diagonal_units() * g.numerator
        if np.all(scaled % g.denominator == 0):
            # gamma*u integral on every state: reduce mod 8 exactly
            k = np.mod(scaled // g.denominator, 8)
            return np.exp(-1j * math.pi / 4 * k)
    return np.exp(-1j * gamma * instance.diagonal())


def qaoa_statevector(instance: Instance, params: QaoaParams) -> np.ndarray:
    """Full depth-1 QAOA state ``e^{-i beta H_X} e^{-i gamma H_P} |+>``."""
    n = instance.n
    if n > STATEVECTOR_MAX_N:
        raise TooLarge(f"statevector limited to n <= {STATEVECTOR_MAX_N}")
    psi = np.full(2**n, 2.0 ** (-n / 2), dtype=complex) * _phase_layer(instance, params.gamma)
    return _apply_mixer(psi, n, params.beta)


def overlap_statevector(instance: Instance, params: QaoaParams) -> AmplitudeResult:
    psi = qaoa_statevector(instance, params)
    return AmplitudeResult.from_complex(psi[instance.target.index])


class GridScan(NamedTuple):
    best: QaoaParams
    best_prob: float
    table: list  # rows (beta, gamma, re, im, prob), beta-major


def grid_scan(spectrum: HammingSpectrum, beta_grid: Sequence[float], gamma_grid: Sequence[float]) -> GridScan:
    """Exhaustive scan; the first grid point (beta-major) wins ties."""
    beta_grid, gamma_grid = list(beta_grid), list(gamma_grid)
    if not beta_grid or not gamma_grid:
        raise ValueError("grids must be non-empty")
    table = []
    best, best_prob = None, -1.0
    for b in beta_grid:
        for g in gamma_grid:
            p = QaoaParams(float(b), float(g))
            r = overlap_collapsed(spectrum, p)
            table.append((p.beta, p.gamma, r.re, r.im, r.prob))
            if r.prob > best_prob:
                best, best_prob = p, r.prob
    return GridScan(best, best_prob, table)


GRID_CSV_HEADER = ("beta", "gamma", "re", "im", "prob")


class Verification(NamedTuple):
    deterministic: bool
    params: QaoaParams | None
    certificate: SpectralCertificate | None
    prob: float


def _gamma_candidates(instance: Instance, candidates):
    # extra terms are multiples of 2*pi only for integer gamma*m
    for g in candidates:
        if all((Fraction(g) * m).denominator == 1 for _, m in instance.extra_terms):
            yield g


def verify_deterministic(instance: Instance, tol: float = 1e-9, candidates=DEFAULT_GAMMAS) -> Verification:
    """Find a witness ``gamma`` and confirm success probability >= 1 - tol at ``beta = pi/4``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    cands = list(_gamma_candidates(instance, candidates))
    found = find_gamma(instance.spectrum, cands) if cands else None
    if found is None:
        # report the success probability at the convention's trained angle anyway
        params = QaoaParams(math.pi / 4, instance.sign_convention.trained_gamma)
        if instance.extra_terms and instance.n <= STATEVECTOR_MAX_N:
            prob = overlap_statevector(instance, params).prob
        else:
            prob = overlap_collapsed(instance.spectrum, params).prob
        return Verification(False, params, None, prob)
    gamma, cert = found
    params = QaoaParams(math.pi / 4, gamma)
    prob = overlap_collapsed(instance.spectrum, params).prob
    return Verification(prob >= 1 - tol, params, cert, prob)


@dataclass(frozen=True)
class TrainedStateReport:
    gamma: float
    identity_part: bool
    max_residue: float
    fidelity: float
    global_phase: complex
    product_state: bool

    @property
    def passed(self) -> bool:
        return self.identity_part and self.product_state


def trained_state_checks(instance: Instance, fidelity_tol: float = 1e-10) -> TrainedStateReport:
    """Check that the trained circuit is a product of single-qubit gates.

    (a) the diagonal minus the linear watermark is a multiple of ``2*pi``
    on every basis state, so ``exp(-i gamma* H_2pi)`` is the identity;
    (b) the trained state is ``|t>`` up to a global phase.
    """
    n = instance.n
    if n > STATEVECTOR_MAX_N:
        raise TooLarge(f"statevector limited to n <= {STATEVECTOR_MAX_N}")
    gamma = instance.sign_convention.trained_gamma
    linear = instance.linear_units(instance.hamming_array())
    if instance.exact:
        rest = instance.diagonal_units() - linear
        residue = np.mod(gamma * rest, 8)
        max_residue = float(np.minimum(residue, 8 - residue).max()) * math.pi / 4
        identity_part = bool(max_residue == 0.0)
    else:
        rest = gamma * (instance.diagonal() - linear * math.pi / 4)
        r = np.mod(rest, TWO_PI)
        max_residue = float(np.minimum(r, TWO_PI - r).max())
        identity_part = max_residue <= 1e-9 * max(1.0, float(np.abs(rest).max()))
    psi = qaoa_statevector(instance, QaoaParams(math.pi / 4, gamma))
    amp = complex(psi[instance.target.index])
    fidelity = abs(amp) ** 2
    return TrainedStateReport(
        float(gamma), identity_part, max_residue, fidelity, amp, fidelity >= 1 - fidelity_tol
    )
