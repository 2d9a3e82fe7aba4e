import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qsep.couplings import (
    MultiZRotation,
    XRotation,
    expand_hamming_polynomial,
    expand_polynomial,
    export_circuit,
    interpolate_spectrum,
    render_circuit,
    spin_glass_energy,
    symmetric_power_levels,
    verify_expansion,
)
from qsep.errors import LengthMismatch, NotPolynomial, TooLarge
from qsep.instance import (
    HammingSpectrum,
    Instance,
    SignConvention,
    TargetState,
    build_hard_instance,
    build_watermarked_instance,
    hamming_distance,
)
from qsep.qaoa import QaoaParams


def test_linear_distance_expansion():
    sg = expand_polynomial([0, 1], "00")
    assert dict(sg.terms) == {(): 1, (0,): Fraction(-1, 2), (1,): Fraction(-1, 2)}
    assert spin_glass_energy(sg, "00") == 0
    assert spin_glass_energy(sg, "11") == pytest.approx(2 * math.pi / 4)
    assert sg.energy_units("11") == 2


def test_squared_distance_expansion():
    sg = expand_polynomial([0, 0, 1], "00")
    assert dict(sg.terms) == {(): Fraction(3, 2), (0,): -1, (1,): -1, (0, 1): Fraction(1, 2)}


def test_constant_polynomial():
    sg = expand_polynomial([Fraction(7, 3)], "0101")
    assert dict(sg.terms) == {(): Fraction(7, 3)}
    assert sg.energy_units("1111") == Fraction(7, 3)


def test_symmetric_powers_match_bruteforce():
    # coefficient of e_a in S^j, counted by enumerating all j-tuples of sites
    n = 5
    levels = symmetric_power_levels(n, 4)
    for j in range(5):
        counts = {}
        for seq in product(range(n), repeat=j):
            odd = tuple(sorted(i for i in set(seq) if seq.count(i) % 2))
            counts[odd] = counts.get(odd, 0) + 1
        for a in range(j + 1):
            want = {c for s, c in counts.items() if len(s) == a}
            assert want <= {levels[j][a]}


@pytest.mark.parametrize("target", ["0000", "0110", "1111"])
def test_polynomial_expansion_bruteforce(target):
    rng = np.random.default_rng(3)
    coeffs = [Fraction(int(c), 8) for c in rng.integers(-20, 20, size=5)]
    sg = expand_polynomial(coeffs, target)
    for l in range(16):
        bits = format(l, "04b")
        d = hamming_distance(bits, TargetState(target))
        assert sg.energy_units(bits) == sum(c * d**k for k, c in enumerate(coeffs))


@pytest.mark.parametrize("n", [4, 10])
def test_hard_expansion_exact(n):
    inst = build_hard_instance(n)
    rep = verify_expansion(expand_hamming_polynomial(inst), inst)
    assert rep.passed and rep.max_deviation == 0 and rep.states == 2**n


def test_corrupted_coefficient_detected():
    inst = build_hard_instance(4)
    sg = expand_hamming_polynomial(inst)
    bad = sg.with_term((0, 1), sg.terms[(0, 1)] + Fraction(1, 2))
    rep = verify_expansion(bad, inst)
    assert not rep.passed and rep.max_deviation > 0


def test_extra_terms_appended():
    inst = Instance("0110", build_hard_instance(4).spectrum, [((0, 3), 1), ((1,), -2)])
    sg = expand_hamming_polynomial(inst)
    assert verify_expansion(sg, inst).passed


def test_watermark_expansion_is_one_local():
    sg = expand_hamming_polynomial(build_watermarked_instance("0101"))
    assert sg.locality == 1
    assert dict(sg.terms) == {(0,): -1, (1,): 1, (2,): -1, (3,): 1}


def test_locality_bound_up_to_40():
    for n in range(2, 41, 2):
        sg = expand_hamming_polynomial(build_hard_instance(n))
        assert max(len(s) for s in sg.terms) <= 4


@pytest.mark.parametrize("i", [0, 3, 5])
def test_gauge_covariance(i):
    t = TargetState("011010")
    a = expand_hamming_polynomial(build_hard_instance(6, t))
    b = expand_hamming_polynomial(build_hard_instance(6, t.flipped(i)))
    assert a.terms.keys() == b.terms.keys()
    for sites, c in a.terms.items():
        assert b.terms[sites] == (-c if i in sites else c)


def test_float_spectrum_expansion():
    e = build_hard_instance(6).spectrum.energies()
    inst = Instance("010101", HammingSpectrum.radians(e))
    sg = expand_hamming_polynomial(inst)
    assert not sg.exact
    assert verify_expansion(sg, inst).passed


def test_not_polynomial():
    spec = HammingSpectrum.quarter_pi([0, 1, 0, 1, 0, 1, 0])
    with pytest.raises(NotPolynomial):
        interpolate_spectrum(spec)
    with pytest.raises(NotPolynomial):
        interpolate_spectrum(HammingSpectrum.radians([0, 1, 0, 1, 0, 1, 0.0]))


def test_small_n_any_spectrum_interpolates():
    inst = Instance("101", HammingSpectrum.quarter_pi([5, -3, 11, 2]))
    assert verify_expansion(expand_hamming_polynomial(inst), inst).passed


def test_energy_length_mismatch_and_size_limit():
    sg = expand_hamming_polynomial(build_hard_instance(4))
    with pytest.raises(LengthMismatch):
        spin_glass_energy(sg, "000")
    with pytest.raises(TooLarge):
        verify_expansion(expand_hamming_polynomial(build_hard_instance(16)), build_hard_instance(16))


def test_circuit_structure():
    params = QaoaParams(math.pi / 4, -1.0)
    one_local = expand_hamming_polynomial(build_watermarked_instance("0"))
    text = render_circuit(export_circuit(one_local, params), ladder=True)
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert [l.split()[0] for l in body] == ["RZ", "RX"]

    two = expand_polynomial([0, 0, 1], "00")
    circ = export_circuit(two, params)
    lad = render_circuit(circ, ladder=True).splitlines()
    assert sum(l.startswith("CX") for l in lad) == 2
    assert sum(l.startswith("RZ") for l in lad) == 3


def test_hard_circuit_counts():
    sg = expand_hamming_polynomial(build_hard_instance(4))
    circ = export_circuit(sg, QaoaParams(math.pi / 4, -1.0))
    mz = [g for g in circ.gates if isinstance(g, MultiZRotation)]
    rx = [g for g in circ.gates if isinstance(g, XRotation)]
    assert len(mz) == len(sg.nonconstant_terms())
    assert len(rx) == 4 and all(g.angle == pytest.approx(math.pi / 2) for g in rx)
    lad = render_circuit(circ, ladder=True).splitlines()
    assert sum(l.startswith("CX") for l in lad) == circ.entangler_count()
    # the single 4-local term costs 6 entanglers
    four = [g for g in mz if len(g.sites) == 4]
    assert len(four) == 1 and 2 * (len(four[0].sites) - 1) == 6
    compact = render_circuit(circ)
    assert "MZ q0 q1 q2 q3 " in compact and compact.startswith("# n=4\n# beta=")


def test_circuit_angles():
    sg = expand_polynomial([0, 1], "00")
    circ = export_circuit(sg, QaoaParams(0.3, 2.0))
    # coefficient -1/2 quarter-pi units -> angle 2*gamma*(-pi/8)
    assert circ.gates[0].angle == pytest.approx(2 * 2.0 * (-math.pi / 8))


def test_circuit_reproduces_statevector():
    # simulate the exported gate list directly and compare with the QAOA engine
    from qsep.qaoa import qaoa_statevector

    inst = build_hard_instance(4, "0110", SignConvention.PAPER_LITERAL)
    params = QaoaParams(0.37, 0.81)
    circ = export_circuit(expand_hamming_polynomial(inst), params)
    n = 4
    psi = np.full(16, 0.25, dtype=complex)
    spins = 1 - 2 * ((np.arange(16)[:, None] >> np.arange(n - 1, -1, -1)) & 1)
    for g in circ.gates:
        if isinstance(g, MultiZRotation):
            z = np.prod(spins[:, list(g.sites)], axis=1)
            psi = psi * np.exp(-0.5j * g.angle * z)
        else:
            psi = psi.reshape((2,) * n)
            psi = math.cos(g.angle / 2) * psi - 1j * math.sin(g.angle / 2) * np.flip(psi, axis=g.site)
            psi = psi.reshape(-1)
    ref = qaoa_statevector(inst, params)
    overlap = abs(np.vdot(ref, psi))
    assert overlap == pytest.approx(1.0, abs=1e-12)
