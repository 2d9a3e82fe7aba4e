"""Small numerical helpers shared by the engines."""

import math

import numpy as np
from scipy.special import gammaln

QUARTER_PI = math.pi / 4
TWO_PI = 2 * math.pi


def log_binom(n, k):
    """Natural log of C(n, k), vectorised over ``k``; -inf outside 0 <= k <= n."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    kk = np.where(valid, k, 0.0)
    nn = np.where(valid, n, 0.0)
    out = gammaln(nn + 1) - gammaln(kk + 1) - gammaln(nn - kk + 1)
    return np.where(valid, out, -np.inf)


def unit_phase(units):
    """exp(-i*pi*k/4) for integer ``k``, exact on the eighth roots of unity."""
    k = int(units) % 8
    return _EIGHTH_ROOTS[k]


_R = math.sqrt(0.5)
# exp(-i*pi*k/4), k = 0..7
_EIGHTH_ROOTS = (
    (1.0, 0.0),
    (_R, -_R),
    (0.0, -1.0),
    (-_R, -_R),
    (-1.0, 0.0),
    (-_R, _R),
    (0.0, 1.0),
    (_R, _R),
)


def eighth_roots_array():
    return np.array([complex(re, im) for re, im in _EIGHTH_ROOTS])


def circular_distance(a, b):
    d = np.mod(np.asarray(a) - b, TWO_PI)
    return np.minimum(d, TWO_PI - d)


def as_bits(bits, n=None):
    """Coerce a bitstring (``"0101"``, sequence or array) to a uint8 array."""
    from .errors import LengthMismatch

    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits, dtype=np.uint8).ravel()
    if arr.size and arr.max() > 1:
        raise ValueError(f"not a bitstring: {bits!r}")
    if n is not None and arr.size != n:
        raise LengthMismatch(f"expected {n} bits, got {arr.size}")
    return arr


def bits_to_str(bits):
    arr = np.asarray(bits).ravel() != 0
    return (arr.astype(np.uint8) + ord("0")).tobytes().decode("ascii")


def basis_bits(n):
    """All 2**n basis states as a (2**n, n) uint8 array; qubit 0 is the most significant bit."""
    idx = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def bits_to_index(bits):
    out = 0
    for b in np.asarray(bits).ravel():
        out = (out << 1) | int(b)
    return out
