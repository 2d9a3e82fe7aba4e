"""Recover the watermark target from n+1 energy queries.

For ``E = -sigma (pi/4)(n - 2 D) + 2 pi * integer`` the residue of ``E``
modulo ``2 pi``, in quarter-pi units, is ``2 sigma D - sigma n (mod 8)``.
Flipping one spin moves ``D`` by +-1 and the residue by +-``2 sigma``, and the
two cases are distinct mod 8.  So one query per spin decides whether the
spin was already correct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._numerics import QUARTER_PI, TWO_PI, as_bits, bits_to_str
from .errors import InconsistentOracle
from .instance import Instance, SignConvention

LATTICE_TOL = 1e-6


@dataclass
class QueryLog:
    entries: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.entries)

    def record(self, bits, energy):
        self.entries.append((bits_to_str(bits), energy))

    def to_json(self) -> list:
        return [{"bits": b, "energy": e if isinstance(e, int) else float(e)} for b, e in self.entries]


def instance_oracle(instance: Instance, exact: bool = True) -> Callable:
    """Energy oracle for an instance.

    With ``exact=True`` (quarter-pi instances only) it returns integer
    quarter-pi units; otherwise radians as floats.
    """
    if exact and not instance.exact:
        raise TypeError("exact oracle needs a quarter-pi instance")
    target = instance.target.array
    spec = instance.spectrum.values
    constant = 8 * sum(m for s, m in instance.extra_terms if not s)
    terms = [(s, m) for s, m in instance.extra_terms if s]
    flat = np.array([i for s, _ in terms for i in s], dtype=np.int64)
    starts = np.cumsum([0] + [len(s) for s, _ in terms[:-1]], dtype=np.int64)
    coef = np.array([8 * m for _, m in terms], dtype=np.int64)

    def units(bits):
        b = as_bits(bits, instance.n)
        d = int(np.count_nonzero(b != target))
        extra = constant
        if terms:
            parity = np.add.reduceat(b[flat], starts) & 1
            extra += int(coef @ (1 - 2 * parity.astype(np.int64)))
        return spec[d], extra

    if exact:
        def query(bits):
            s, e = units(bits)
            return s + e
    elif instance.exact:
        def query(bits):
            s, e = units(bits)
            return QUARTER_PI * (s + e)
    else:
        def query(bits):
            s, e = units(bits)
            return s + QUARTER_PI * e
    return query


def residue(energy, units: str = "radians") -> int:
    """Quarter-pi residue class of an energy modulo ``2 pi``, in 0..7."""
    if units == "quarter_pi":
        return int(energy) % 8
    r = math.fmod(float(energy), TWO_PI) / QUARTER_PI
    k = round(r)
    if abs(r - k) > LATTICE_TOL / QUARTER_PI:
        raise InconsistentOracle(f"energy {energy!r} is not on the pi/4 lattice modulo 2 pi")
    return k % 8


def solve(energy_query: Callable, n: int, seed=None, sign=SignConvention.TARGET_IS_GROUND,
          units: str = "radians", start=None, auto_sign: bool = False):
    """Return ``(target bits, QueryLog)`` using n+1 queries (n+2 with ``auto_sign``).

    ``auto_sign`` decodes with ``sign`` assumed, then spends one query on
    the complement of the result: residues cannot tell ``(t, sigma)`` from
    ``(complement t, -sigma)``, so the lower-energy candidate is kept.
    """
    sigma = SignConvention(sign).sigma
    log = QueryLog()
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, size=n, dtype=np.uint8) if start is None else as_bits(start, n).copy()

    e = energy_query(x)
    log.record(x, e)
    cur_e, cur = e, residue(e, units)
    up, down = (2 * sigma) % 8, (-2 * sigma) % 8
    for i in range(n):
        x[i] ^= 1
        e = energy_query(x)
        log.record(x, e)
        r = residue(e, units)
        step = (r - cur) % 8
        if step == down:
            cur_e, cur = e, r
        elif step == up:
            x[i] ^= 1
        else:
            raise InconsistentOracle(f"flip of spin {i} changed the residue by {step} quarter-pi units")

    if auto_sign:
        comp = 1 - x
        e = energy_query(comp)
        log.record(comp, e)
        if e < cur_e:
            x = comp.astype(np.uint8)
    return bits_to_str(x), log
