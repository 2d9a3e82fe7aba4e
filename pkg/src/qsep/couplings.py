"""Hamming-distance polynomials as explicit k-local spin glasses, and circuit export.

With ``S = sum_i t_i Z_i`` the Hamming distance operator is ``(n - S)/2``.
Powers of ``S`` reduce (using ``Z**2 = 1``) to combinations of the
elementary symmetric sums ``e_a = sum_{|A|=a} prod_{i in A} t_i Z_i``, so a
degree-d polynomial in the distance is at most d-local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from ._numerics import QUARTER_PI, as_bits, basis_bits
from .errors import LengthMismatch, NotPolynomial, Overflow, TooLarge
from .instance import INT64_MAX, HammingSpectrum, Instance, TargetState
from .qaoa import QaoaParams

MAX_DEGREE = 4
VERIFY_MAX_N = 14
FLOAT_VERIFY_TOL = 1e-9


@dataclass(frozen=True)
class SpinGlass:
    """Sparse Z-polynomial ``sum_A J_A prod_{i in A} Z_i``.

    ``terms`` maps sorted site tuples to coefficients.  On the exact path
    (``exact=True``) coefficients are Fractions in units of pi/4, otherwise
    floats in radians.  The empty tuple holds the constant offset.
    """

    n: int
    terms: Mapping[tuple, object]
    max_locality: int
    exact: bool = True

    def __post_init__(self):
        for sites in self.terms:
            if list(sites) != sorted(set(sites)):
                raise ValueError(f"subset {sites} is not sorted and duplicate-free")
            if len(sites) > self.max_locality:
                raise ValueError(f"subset {sites} exceeds max_locality={self.max_locality}")
        object.__setattr__(self, "terms", MappingProxyType(dict(self.terms)))

    @property
    def locality(self) -> int:
        return max((len(s) for s in self.terms), default=0)

    @property
    def scale(self) -> float:
        """Radians per coefficient unit."""
        return QUARTER_PI if self.exact else 1.0

    def coefficient(self, sites) -> float:
        """Coefficient of ``prod Z_sites`` in radians (0 when absent)."""
        return float(self.terms.get(tuple(sites), 0)) * self.scale

    def nonconstant_terms(self):
        return [(s, c) for s, c in self.terms.items() if s]

    def energy_units(self, bits):
        s = 1 - 2 * as_bits(bits, self.n).astype(np.int64)
        total = Fraction(0) if self.exact else 0.0
        for sites, c in self.terms.items():
            total += c * int(np.prod(s[list(sites)])) if sites else c
        return total

    def with_term(self, sites, coefficient) -> "SpinGlass":
        terms = dict(self.terms)
        terms[tuple(sites)] = coefficient
        return SpinGlass(self.n, terms, max(self.max_locality, len(sites)), self.exact)


def symmetric_power_levels(n: int, max_power: int) -> list[list[int]]:
    """``levels[j][a]``: coefficient of ``e_a`` in ``S**j``, for j <= max_power.

    Uses ``S * e_a = (a+1) e_{a+1} + (n-a+1) e_{a-1}``.
    """
    width = max_power + 2
    levels = [[1] + [0] * (width - 1)]
    for _ in range(max_power):
        prev = levels[-1]
        nxt = [0] * width
        for b in range(width):
            if b >= 1:
                nxt[b] += prev[b - 1] * b
            if b + 1 < width and b + 1 <= n:
                nxt[b] += prev[b + 1] * (n - b)
        levels.append(nxt)
    return [row[: max_power + 1] for row in levels]


def hamming_polynomial_levels(n: int, coefficients: Sequence) -> list:
    """Map ``sum_d p_d Delta**d`` to coefficients of ``e_0 .. e_deg``."""
    deg = len(coefficients) - 1
    exact = all(isinstance(c, (int, Fraction)) for c in coefficients)
    zero = Fraction(0) if exact else 0.0
    powers = symmetric_power_levels(n, deg)
    out = [zero] * (deg + 1)
    for d, p in enumerate(coefficients):
        if p == 0:
            continue
        # Delta**d = 2**-d * sum_j C(d,j) n**(d-j) (-S)**j
        scale = Fraction(p, 2**d) if exact else p / 2**d
        for j in range(d + 1):
            w = math.comb(d, j) * n ** (d - j) * (-1) ** j
            for a in range(j + 1):
                if powers[j][a]:
                    out[a] += scale * (w * powers[j][a])
    return out


def expand_polynomial(coefficients: Sequence, target, exact: bool | None = None) -> SpinGlass:
    """Spin glass whose energy on every basis state is ``sum_d p_d Delta_t**d``."""
    target = target if isinstance(target, TargetState) else TargetState(target)
    if exact is None:
        exact = all(isinstance(c, (int, Fraction)) for c in coefficients)
    coefficients = [Fraction(c) if exact else float(c) for c in coefficients]
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    n = target.n
    levels = hamming_polynomial_levels(n, coefficients)
    tbits = target.bits
    terms = {}
    for a, coef in enumerate(levels):
        if coef == 0 or a > n:
            continue
        neg = -coef
        for sites in combinations(range(n), a):
            odd = sum(tbits[i] == "1" for i in sites) & 1
            terms[sites] = neg if odd else coef
    return SpinGlass(n, terms, max(len(coefficients) - 1, 0), exact)


def _falling_factorial_poly(d: int) -> list[int]:
    """Monomial coefficients of Delta (Delta-1) ... (Delta-d+1)."""
    poly = [1]
    for r in range(d):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= r * c
        poly = nxt
    return poly


def interpolate_spectrum(spectrum: HammingSpectrum, max_degree: int = MAX_DEGREE) -> list:
    """Monomial coefficients of the lowest-degree polynomial through ``E(0..n)``.

    Exact spectra are interpolated in rationals with Newton forward
    differences; float spectra by least squares with a residual check.
    Raises :class:`NotPolynomial` if the degree exceeds ``max_degree``.
    """
    n = spectrum.n
    if spectrum.exact:
        diffs = [Fraction(v) for v in spectrum.values]
        newton = []
        for _ in range(n + 1):
            newton.append(diffs[0])
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        deg = max((d for d, c in enumerate(newton) if c != 0), default=0)
        if deg > max_degree:
            raise NotPolynomial(f"spectrum has degree {deg} in the Hamming distance (max {max_degree})")
        coeffs = [Fraction(0)] * (deg + 1)
        for d in range(deg + 1):
            if newton[d] == 0:
                continue
            scale = newton[d] / math.factorial(d)
            for i, c in enumerate(_falling_factorial_poly(d)):
                coeffs[i] += scale * c
        return coeffs

    values = np.asarray(spectrum.values)
    deg = min(max_degree, n)
    x = np.arange(n + 1, dtype=float)
    coeffs = np.polynomial.polynomial.polyfit(x, values, deg)
    resid = np.abs(np.polynomial.polynomial.polyval(x, coeffs) - values).max()
    if resid > FLOAT_VERIFY_TOL * max(1.0, np.abs(values).max()):
        raise NotPolynomial(f"no polynomial of degree <= {max_degree} fits the spectrum (residual {resid:.3g})")
    return [float(c) for c in coeffs]


def expand_hamming_polynomial(instance: Instance) -> SpinGlass:
    """Explicit couplings reproducing the full instance diagonal, extra terms included."""
    coeffs = interpolate_spectrum(instance.spectrum)
    sg = expand_polynomial(coeffs, instance.target, exact=instance.exact)
    terms = dict(sg.terms)
    locality = sg.max_locality
    for sites, m in instance.extra_terms:
        add = 8 * m if instance.exact else 2 * math.pi * m
        terms[sites] = terms.get(sites, 0) + add
        locality = max(locality, len(sites))
    terms = {s: c for s, c in terms.items() if c != 0 or not s}
    if instance.exact:
        for c in terms.values():
            if abs(c.numerator) > INT64_MAX:
                raise Overflow("coupling numerator does not fit in 64 bits")
    return SpinGlass(instance.n, terms, locality, instance.exact)


def spin_glass_energy(sg: SpinGlass, bits) -> float:
    """Energy of one basis state in radians; ``Z_i`` has eigenvalue ``1 - 2 b_i``."""
    arr = as_bits(bits)
    if arr.size != sg.n:
        raise LengthMismatch(f"bitstring has {arr.size} bits, spin glass has {sg.n}")
    return float(sg.energy_units(arr)) * sg.scale


@dataclass(frozen=True)
class ExpansionReport:
    n: int
    states: int
    max_deviation: float
    exact: bool
    passed: bool


def _spin_glass_energies(sg: SpinGlass, spins: np.ndarray, scale_to_int: int | None):
    if scale_to_int is not None:
        out = np.zeros(spins.shape[0], dtype=np.int64)
        for sites, c in sg.terms.items():
            ci = int(c * scale_to_int)
            out += ci * (np.prod(spins[:, list(sites)], axis=1) if sites else 1)
        return out
    out = np.zeros(spins.shape[0])
    for sites, c in sg.terms.items():
        out += float(c) * (np.prod(spins[:, list(sites)], axis=1) if sites else 1.0)
    return out


def verify_expansion(sg: SpinGlass, instance: Instance) -> ExpansionReport:
    """Brute-force comparison of the spin glass against the instance diagonal over all 2**n states."""
    n = instance.n
    if n > VERIFY_MAX_N:
        raise TooLarge(f"brute-force verification limited to n <= {VERIFY_MAX_N}")
    if sg.n != n:
        raise LengthMismatch("spin glass and instance sizes differ")
    spins = 1 - 2 * basis_bits(n).astype(np.int64)
    if sg.exact and instance.exact:
        denom = math.lcm(*(Fraction(c).denominator for c in sg.terms.values())) if sg.terms else 1
        got = _spin_glass_energies(sg, spins, denom)
        want = instance.diagonal_units() * denom
        dev = float(np.abs(got - want).max()) / denom * QUARTER_PI
        return ExpansionReport(n, 2**n, dev, True, dev == 0.0)
    got = _spin_glass_energies(sg, spins, None) * sg.scale
    want = instance.diagonal()
    dev = float(np.abs(got - want).max())
    tol = FLOAT_VERIFY_TOL * max(1.0, float(np.abs(want).max()))
    return ExpansionReport(n, 2**n, dev, False, dev <= tol)


# -- circuit export -----------------------------------------------------------


@dataclass(frozen=True)
class MultiZRotation:
    """``exp(-i angle/2 prod Z_sites)``."""

    sites: tuple
    angle: float


@dataclass(frozen=True)
class XRotation:
    """``exp(-i angle/2 X_site)``."""

    site: int
    angle: float


@dataclass(frozen=True)
class CircuitDescription:
    n: int
    gates: tuple
    params: QaoaParams = field(default=None)

    def entangler_count(self) -> int:
        return sum(2 * (len(g.sites) - 1) for g in self.gates if isinstance(g, MultiZRotation))


def export_circuit(sg: SpinGlass, params: QaoaParams) -> CircuitDescription:
    """One ``(gamma, beta)`` block: a multi-Z rotation per coupling, then RX(2 beta) on every qubit.

    ``exp(-i gamma J prod Z)`` is a multi-Z rotation by ``2 gamma J``; the
    constant term is a global phase and is dropped.
    """
    gates = []
    for sites, c in sg.terms.items():
        if not sites:
            continue
        angle = 2.0 * params.gamma * float(c) * sg.scale
        if not math.isfinite(angle):
            raise ValueError(f"non-finite rotation angle for {sites}")
        gates.append(MultiZRotation(tuple(sites), angle))
    gates.extend(XRotation(q, 2.0 * params.beta) for q in range(sg.n))
    return CircuitDescription(sg.n, tuple(gates), params)


def _fmt_angle(x: float) -> str:
    return repr(float(x))


def render_circuit(circuit: CircuitDescription, ladder: bool = False) -> str:
    """Text form, one gate per line.

    Compact: ``MZ q0 q2 <angle>`` / ``RX q1 <angle>``.  With ``ladder=True``
    each multi-Z term becomes a CX chain, one RZ on the last site and the
    inverse chain (2(k-1) CX lines for a k-local term).
    """
    lines = [f"# n={circuit.n}"]
    if circuit.params is not None:
        lines.append(f"# beta={_fmt_angle(circuit.params.beta)}")
        lines.append(f"# gamma={_fmt_angle(circuit.params.gamma)}")
    for g in circuit.gates:
        if isinstance(g, XRotation):
            lines.append(f"RX q{g.site} {_fmt_angle(g.angle)}")
        elif not ladder:
            lines.append("MZ " + " ".join(f"q{s}" for s in g.sites) + f" {_fmt_angle(g.angle)}")
        else:
            chain = list(zip(g.sites, g.sites[1:]))
            lines.extend(f"CX q{a} q{b}" for a, b in chain)
            lines.append(f"RZ q{g.sites[-1]} {_fmt_angle(g.angle)}")
            lines.extend(f"CX q{a} q{b}" for a, b in reversed(chain))
    return "\n".join(lines) + "\n"
