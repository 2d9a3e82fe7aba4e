"""Targets, Hamming-indexed spectra and the deterministic-QAOA instance families.

Energies live in one of two representations.  ``QUARTER_PI`` spectra hold
signed integers ``u`` with ``E = u * pi/4``; all phase arithmetic on them is
exact modulo 8.  ``FLOAT`` spectra hold energies in radians.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._numerics import QUARTER_PI, TWO_PI, as_bits, basis_bits, circular_distance, log_binom
from .errors import LengthMismatch, LocalityExceeded, OddN, Overflow

INT64_MAX = 2**63 - 1
MAX_EXTRA_LOCALITY = 4
DEFAULT_TOL = 1e-9
DEFAULT_GAMMAS = (1.0, -1.0, 0.5, -0.5, 2.0, -2.0)


class SignConvention(enum.Enum):
    """Sign of the linear watermark term.

    ``TARGET_IS_GROUND`` uses ``-(pi/4) * sum_i t_i Z_i`` so the target is the
    unique ground state of the hard family; ``PAPER_LITERAL`` uses ``+``.
    """

    TARGET_IS_GROUND = "ground"
    PAPER_LITERAL = "paper"

    @property
    def sigma(self) -> int:
        return 1 if self is SignConvention.TARGET_IS_GROUND else -1

    @property
    def trained_gamma(self) -> int:
        return -self.sigma


class SpectrumKind(enum.Enum):
    QUARTER_PI = "quarter_pi"
    FLOAT = "float"


@dataclass(frozen=True)
class TargetState:
    bits: str

    def __post_init__(self):
        bits = self.bits
        if not isinstance(bits, str):
            bits = "".join(str(int(b)) for b in np.asarray(bits).ravel())
            object.__setattr__(self, "bits", bits)
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"target must be a non-empty bitstring, got {self.bits!r}")

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def array(self) -> np.ndarray:
        return as_bits(self.bits)

    @property
    def spins(self) -> np.ndarray:
        """t_i = 1 - 2 b_i."""
        return 1 - 2 * self.array.astype(np.int64)

    @property
    def index(self) -> int:
        return int(self.bits, 2)

    def flipped(self, i: int) -> "TargetState":
        b = list(self.bits)
        b[i] = "1" if b[i] == "0" else "0"
        return TargetState("".join(b))

    @classmethod
    def zeros(cls, n: int) -> "TargetState":
        return cls("0" * n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "TargetState":
        return cls(rng.integers(0, 2, size=n))

    def __str__(self):
        return self.bits


def _as_target(target) -> TargetState:
    return target if isinstance(target, TargetState) else TargetState(target)


@dataclass(frozen=True)
class HammingSpectrum:
    """Energies ``E(Delta)`` for ``Delta = 0..n``."""

    n: int
    kind: SpectrumKind
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != self.n + 1:
            raise LengthMismatch(f"spectrum for n={self.n} needs {self.n + 1} values, got {len(values)}")
        if self.kind is SpectrumKind.QUARTER_PI:
            ints = []
            for v in values:
                if isinstance(v, float) or (isinstance(v, Fraction) and v.denominator != 1):
                    if float(v) != int(v):
                        raise TypeError(f"quarter-pi spectrum entries must be integers, got {v!r}")
                iv = int(v)
                if abs(iv) > INT64_MAX:
                    raise Overflow(f"spectrum entry {iv} does not fit in 64 bits")
                ints.append(iv)
            values = tuple(ints)
        else:
            values = tuple(float(v) for v in values)
        object.__setattr__(self, "values", values)

    @classmethod
    def quarter_pi(cls, units: Sequence[int]) -> "HammingSpectrum":
        units = list(units)
        return cls(len(units) - 1, SpectrumKind.QUARTER_PI, tuple(units))

    @classmethod
    def radians(cls, energies: Sequence[float]) -> "HammingSpectrum":
        energies = list(energies)
        return cls(len(energies) - 1, SpectrumKind.FLOAT, tuple(energies))

    @property
    def exact(self) -> bool:
        return self.kind is SpectrumKind.QUARTER_PI

    def energies(self) -> np.ndarray:
        """Energies in radians as a float array."""
        if self.exact:
            return np.array([QUARTER_PI * u for u in self.values])
        return np.array(self.values)

    def with_value(self, delta: int, value) -> "HammingSpectrum":
        vals = list(self.values)
        vals[delta] = value
        return HammingSpectrum(self.n, self.kind, tuple(vals))


ExtraTerm = tuple  # (sites tuple, integer m) meaning 2*pi*m * prod Z_sites


def _normalise_extra_terms(extra_terms, n) -> tuple:
    out = []
    for sites, m in extra_terms or ():
        sites = tuple(sorted(int(s) for s in sites))
        if len(set(sites)) != len(sites):
            raise ValueError(f"duplicate site in extra term {sites}")
        if len(sites) > MAX_EXTRA_LOCALITY:
            raise LocalityExceeded(f"extra term {sites} is {len(sites)}-local (max {MAX_EXTRA_LOCALITY})")
        if sites and (sites[0] < 0 or sites[-1] >= n):
            raise ValueError(f"extra term sites {sites} out of range for n={n}")
        if int(m) != m:
            raise TypeError(f"extra term multiplier must be an integer, got {m!r}")
        out.append((sites, int(m)))
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """Diagonal problem Hamiltonian ``E(Delta_t(l)) + sum 2*pi*m * prod Z``.

    ``extra_terms`` is the integer-multiple-of-``2*pi`` spin glass added on
    top of the Hamming-dependent spectrum.
    """

    target: TargetState
    spectrum: HammingSpectrum
    extra_terms: tuple = ()
    sign_convention: SignConvention = SignConvention.TARGET_IS_GROUND
    family: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "target", _as_target(self.target))
        if self.spectrum.n != self.target.n:
            raise LengthMismatch(f"spectrum n={self.spectrum.n} but target n={self.target.n}")
        object.__setattr__(self, "extra_terms", _normalise_extra_terms(self.extra_terms, self.n))
        object.__setattr__(self, "sign_convention", SignConvention(self.sign_convention))

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def sigma(self) -> int:
        return self.sign_convention.sigma

    @property
    def exact(self) -> bool:
        return self.spectrum.exact

    def linear_units(self, delta):
        """Watermark term in quarter-pi units, ``-sigma * (n - 2*delta)``."""
        return -self.sigma * (self.n - 2 * np.asarray(delta))

    def without_extra_terms(self) -> "Instance":
        return Instance(self.target, self.spectrum, (), self.sign_convention, self.family)

    def hamming(self, bits) -> int:
        return hamming_distance(bits, self.target)

    def extra_units(self, bits) -> int:
        """Extra-term energy in quarter-pi units (``2*pi`` is 8 units)."""
        s = 1 - 2 * as_bits(bits, self.n).astype(np.int64)
        return sum(8 * m * int(np.prod(s[list(sites)])) for sites, m in self.extra_terms)

    def energy_units(self, bits) -> int:
        if not self.exact:
            raise TypeError("energy_units needs a quarter-pi spectrum")
        return self.spectrum.values[self.hamming(bits)] + self.extra_units(bits)

    def energy(self, bits) -> float:
        """Diagonal energy of one basis state, in radians."""
        if self.exact:
            return QUARTER_PI * self.energy_units(bits)
        return self.spectrum.values[self.hamming(bits)] + QUARTER_PI * self.extra_units(bits)

    # full-register arrays, basis index with qubit 0 as the most significant bit

    def hamming_array(self) -> np.ndarray:
        idx = np.arange(2**self.n, dtype=np.int64)
        return np.bitwise_count(idx ^ self.target.index).astype(np.int64)

    def extra_units_array(self) -> np.ndarray:
        out = np.zeros(2**self.n, dtype=np.int64)
        if not self.extra_terms:
            return out
        spins = 1 - 2 * basis_bits(self.n).astype(np.int64)
        for sites, m in self.extra_terms:
            out += 8 * m * np.prod(spins[:, list(sites)], axis=1)
        return out

    def diagonal_units(self) -> np.ndarray:
        if not self.exact:
            raise TypeError("diagonal_units needs a quarter-pi spectrum")
        spec = np.array(self.spectrum.values, dtype=np.int64)
        return spec[self.hamming_array()] + self.extra_units_array()

    def diagonal(self) -> np.ndarray:
        """All ``2**n`` diagonal energies in radians."""
        spec = self.spectrum.energies()
        return spec[self.hamming_array()] + QUARTER_PI * self.extra_units_array()


def hamming_distance(bits, target) -> int:
    """Number of positions where ``bits`` differs from ``target``."""
    target = _as_target(target)
    arr = as_bits(bits)
    if arr.size != target.n:
        raise LengthMismatch(f"bitstring has {arr.size} bits, target has {target.n}")
    return int(np.count_nonzero(arr != target.array))


def hard_units(n: int, sign: SignConvention = SignConvention.TARGET_IS_GROUND) -> list[int]:
    """Quarter-pi energies of the 4-local hard family, as Python ints."""
    if n < 2 or n % 2:
        raise OddN(f"hard instances need even n >= 2, got n={n}")
    sigma = SignConvention(sign).sigma
    half = n // 2
    return [-sigma * (n - 2 * d) + 8 * d * d * (d - half) ** 2 for d in range(n + 1)]


def build_hard_instance(n: int, target=None, sign=SignConvention.TARGET_IS_GROUND) -> Instance:
    """Watermark plus ``2*pi * Delta^2 (Delta - n/2)^2``.

    The quartic has minima on the target and on every one of the C(n, n/2)
    states at Hamming distance n/2; the linear term splits them by
    ``n*pi/4``.
    """
    target = TargetState.zeros(n) if target is None else _as_target(target)
    if target.n != n:
        raise LengthMismatch(f"target has {target.n} bits, expected {n}")
    spectrum = HammingSpectrum.quarter_pi(hard_units(n, sign))
    return Instance(target, spectrum, (), sign, family="hard4local")


def build_watermarked_instance(target, extra_terms=(), sign=SignConvention.TARGET_IS_GROUND) -> Instance:
    """Linear watermark ``-sigma*(pi/4) sum t_i Z_i`` on top of an integer ``2*pi`` spin glass."""
    target = _as_target(target)
    sigma = SignConvention(sign).sigma
    units = [-sigma * (target.n - 2 * d) for d in range(target.n + 1)]
    return Instance(target, HammingSpectrum.quarter_pi(units), tuple(extra_terms), sign)


@dataclass(frozen=True)
class SpectralCertificate:
    gamma: float
    c: float
    satisfied: bool
    max_deviation: float
    tolerance: float = DEFAULT_TOL
    exact: bool = False
    phases: tuple = field(default=(), repr=False)


def _exact_gamma_units(spectrum: HammingSpectrum, gamma) -> list[int] | None:
    """``gamma * u`` as ints, or None when not integral."""
    if not spectrum.exact:
        return None
    try:
        g = Fraction(gamma)
    except (TypeError, ValueError):
        return None
    out = []
    for u in spectrum.values:
        x = g * u
        if x.denominator != 1:
            return None
        out.append(int(x))
    return out


def _circular_centre(phases: np.ndarray) -> float:
    z = np.exp(1j * phases).sum()
    if abs(z) < 1e-9 * len(phases):
        return float(phases[0])
    return float(np.mod(np.angle(z), TWO_PI))


def check_spectral_condition(spectrum: HammingSpectrum, gamma: float, tol: float = DEFAULT_TOL) -> SpectralCertificate:
    """Check that ``gamma*E(Delta) + (pi/2)*Delta`` is constant modulo ``2*pi``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    deltas = np.arange(spectrum.n + 1)
    gu = _exact_gamma_units(spectrum, gamma)
    if gu is not None:
        k = [(g + 2 * d) % 8 for g, d in zip(gu, range(spectrum.n + 1))]
        phases = np.array(k) * QUARTER_PI
        if len(set(k)) == 1:
            return SpectralCertificate(float(gamma), float(phases[0]), True, 0.0, tol, True, tuple(phases))
        c = _circular_centre(phases)
        dev = float(circular_distance(phases, c).max())
        return SpectralCertificate(float(gamma), c, False, dev, tol, True, tuple(phases))

    phases = np.mod(gamma * spectrum.energies() + 0.5 * math.pi * deltas, TWO_PI)
    c = _circular_centre(phases)
    dev = float(circular_distance(phases, c).max())
    return SpectralCertificate(float(gamma), c, dev <= tol, dev, tol, False, tuple(phases))


def find_gamma(spectrum: HammingSpectrum, candidates: Iterable[float] = DEFAULT_GAMMAS, tol: float = DEFAULT_TOL):
    """First candidate ``gamma`` satisfying the spectral condition, as ``(gamma, certificate)``."""
    candidates = list(candidates)
    if not candidates:
        raise ValueError("need at least one candidate gamma")
    for g in candidates:
        cert = check_spectral_condition(spectrum, g, tol)
        if cert.satisfied:
            return g, cert
    return None


def density_of_states(n: int) -> np.ndarray:
    """C(n, Delta) / 2**n for Delta = 0..n."""
    if n < 1:
        raise ValueError("n must be positive")
    d = np.arange(n + 1)
    return np.exp(log_binom(n, d) - n * math.log(2.0))


# -- JSON file format ---------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    out = {
        "n": instance.n,
        "target": instance.target.bits,
        "kind": instance.family if instance.family == "hard4local" else "custom",
        "sign": instance.sign_convention.value,
    }
    if instance.exact:
        out["spectrum_quarter_pi"] = list(instance.spectrum.values)
    else:
        out["spectrum_float"] = list(instance.spectrum.values)
    out["extra_terms"] = [{"sites": list(s), "m": m} for s, m in instance.extra_terms]
    return out


def instance_from_dict(data: dict) -> Instance:
    n = int(data["n"])
    target = TargetState(data["target"])
    sign = SignConvention(data.get("sign", "ground"))
    extra = [(t["sites"], t["m"]) for t in data.get("extra_terms", [])]
    kind = data.get("kind", "custom")
    has_q = data.get("spectrum_quarter_pi") is not None
    has_f = data.get("spectrum_float") is not None
    if kind == "hard4local":
        inst = build_hard_instance(n, target, sign)
        if has_q and list(data["spectrum_quarter_pi"]) != list(inst.spectrum.values):
            raise ValueError("spectrum_quarter_pi does not match the hard4local formula")
        return Instance(inst.target, inst.spectrum, extra, sign, "hard4local")
    if kind != "custom":
        raise ValueError(f"unknown instance kind {kind!r}")
    if has_q == has_f:
        raise ValueError("custom instances need exactly one of spectrum_quarter_pi / spectrum_float")
    if has_q:
        spectrum = HammingSpectrum(n, SpectrumKind.QUARTER_PI, tuple(data["spectrum_quarter_pi"]))
    else:
        spectrum = HammingSpectrum(n, SpectrumKind.FLOAT, tuple(data["spectrum_float"]))
    return Instance(target, spectrum, extra, sign)


def save_instance(instance: Instance, path) -> None:
    from ._io import atomic_write_text

    atomic_write_text(path, json.dumps(instance_to_dict(instance)) + "\n")


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))
