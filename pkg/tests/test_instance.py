import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsep.errors import LengthMismatch, LocalityExceeded, OddN, Overflow
from qsep.instance import (
    HammingSpectrum,
    Instance,
    SignConvention,
    SpectrumKind,
    TargetState,
    build_hard_instance,
    build_watermarked_instance,
    check_spectral_condition,
    density_of_states,
    find_gamma,
    hamming_distance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
)

GROUND = SignConvention.TARGET_IS_GROUND
PAPER = SignConvention.PAPER_LITERAL


@pytest.mark.parametrize("bits,target,expected", [("0000", "0000", 0), ("0101", "0000", 2), ("1111", "0101", 2)])
def test_hamming_distance(bits, target, expected):
    assert hamming_distance(bits, TargetState(target)) == expected


def test_hamming_distance_length_mismatch():
    with pytest.raises(LengthMismatch):
        hamming_distance("010", TargetState("0101"))


def test_target_spins():
    t = TargetState("0110")
    assert t.n == 4
    assert list(t.spins) == [1, -1, -1, 1]
    assert TargetState([0, 1, 1, 0]) == t


def test_hard_instance_examples():
    assert build_hard_instance(4).spectrum.values == (-4, 6, 0, 74, 516)
    assert build_hard_instance(2).spectrum.values == (-2, 0, 34)
    assert build_hard_instance(4, sign=PAPER).spectrum.values == (4, 10, 0, 70, 508)
    with pytest.raises(OddN):
        build_hard_instance(3)


def _hard_oracle(n, sigma):
    # E/(pi/4) = -sigma*(n - 2D) + 8 D^2 (D - n/2)^2, evaluated in floats-free rationals
    from fractions import Fraction

    return [int(-sigma * (n - 2 * d) + 8 * d**2 * (Fraction(d) - Fraction(n, 2)) ** 2) for d in range(n + 1)]


@pytest.mark.parametrize("n", [2, 6, 10, 40, 100])
@pytest.mark.parametrize("sign", [GROUND, PAPER])
def test_hard_instance_formula(n, sign):
    assert list(build_hard_instance(n, sign=sign).spectrum.values) == _hard_oracle(n, sign.sigma)


def test_overflow_detected():
    with pytest.raises(Overflow):
        HammingSpectrum.quarter_pi([0, 2**63])
    with pytest.raises(Overflow):
        build_hard_instance(2 * 10**5)


def test_watermark_examples():
    inst = build_watermarked_instance("00")
    assert inst.spectrum.values == (-2, 0, 2)
    one = build_watermarked_instance("0", [((0,), 1)])
    assert one.energy("0") == pytest.approx(-math.pi / 4 + 2 * math.pi)
    assert one.energy("1") == pytest.approx(math.pi / 4 - 2 * math.pi)
    assert one.energy_units("0") == -1 + 8
    with pytest.raises(LocalityExceeded):
        build_watermarked_instance("000000", [((0, 1, 2, 3, 4), 1)])


def test_extra_terms_are_sorted():
    inst = build_watermarked_instance("0000", [((3, 1), 2)])
    assert inst.extra_terms == (((1, 3), 2),)


def test_diagonal_matches_pointwise_energy():
    inst = Instance("0110", build_hard_instance(4).spectrum, [((0, 2), 1), ((1, 2, 3), -2)])
    diag = inst.diagonal_units()
    for l in range(16):
        bits = format(l, "04b")
        assert diag[l] == inst.energy_units(bits)


def test_spectral_condition_examples():
    cert = check_spectral_condition(build_hard_instance(4).spectrum, -1)
    assert cert.satisfied and cert.exact
    assert cert.c == pytest.approx(math.pi)
    assert cert.max_deviation == 0

    flat = check_spectral_condition(HammingSpectrum.quarter_pi([0, 0, 0]), 1)
    assert not flat.satisfied
    assert np.allclose(flat.phases, [0, math.pi / 2, math.pi])

    paper = check_spectral_condition(build_hard_instance(4, sign=PAPER).spectrum, 1)
    assert paper.satisfied and paper.c == pytest.approx(math.pi)


def test_spectral_condition_float_path():
    spec = HammingSpectrum.radians(build_hard_instance(6).spectrum.energies())
    cert = check_spectral_condition(spec, -1.0)
    assert not cert.exact
    assert cert.satisfied and cert.max_deviation <= 1e-9
    assert not check_spectral_condition(spec, 1.0).satisfied


def test_spectral_condition_rejects_bad_tol():
    with pytest.raises(ValueError):
        check_spectral_condition(build_hard_instance(2).spectrum, 1, tol=0)


def test_find_gamma_examples():
    g, cert = find_gamma(build_hard_instance(4).spectrum)
    assert g == -1 and cert.satisfied
    assert find_gamma(HammingSpectrum.quarter_pi([0] * 5)) is None
    g, cert = find_gamma(build_hard_instance(4, sign=PAPER).spectrum)
    assert g == 1 and cert.satisfied
    with pytest.raises(ValueError):
        find_gamma(build_hard_instance(4).spectrum, [])


@pytest.mark.parametrize("sign", [GROUND, PAPER])
def test_hard_family_satisfies_condition_exactly(sign):
    for n in range(2, 41, 2):
        cert = check_spectral_condition(build_hard_instance(n, sign=sign).spectrum, -sign.sigma)
        assert cert.exact and cert.satisfied and cert.max_deviation == 0


def test_target_is_unique_ground_state_and_gap():
    for n in range(2, 101, 2):
        u = build_hard_instance(n).spectrum.values
        assert min(u) == u[0] and u.count(u[0]) == 1
        assert u[n // 2] - u[0] == n


def test_density_of_states():
    assert np.allclose(density_of_states(4), np.array([1, 4, 6, 4, 1]) / 16, rtol=0, atol=1e-15)
    assert np.allclose(density_of_states(2), [0.25, 0.5, 0.25], rtol=0, atol=1e-15)
    exact = math.comb(100, 50) / 2**100
    assert density_of_states(100)[50] == pytest.approx(exact, rel=1e-12)
    assert abs(density_of_states(100)[50] - 0.0796) < 1e-4


@given(st.integers(1, 400))
def test_density_of_states_normalised_and_symmetric(n):
    dos = density_of_states(n)
    assert abs(math.fsum(dos) - 1) <= 1e-12
    assert np.allclose(dos, dos[::-1], rtol=1e-12, atol=0)


def test_json_roundtrip(tmp_path):
    inst = build_hard_instance(6, "011010", PAPER)
    path = tmp_path / "i.json"
    save_instance(inst, path)
    assert load_instance(path) == inst

    custom = Instance("01", HammingSpectrum.radians([0.1, 0.2, 0.3]), [((0, 1), 3)])
    data = instance_to_dict(custom)
    assert data["kind"] == "custom" and "spectrum_float" in data and "spectrum_quarter_pi" not in data
    assert instance_from_dict(data) == custom


def test_json_rejects_both_spectra():
    with pytest.raises(ValueError):
        instance_from_dict({"n": 1, "target": "0", "kind": "custom", "spectrum_quarter_pi": [0, 1],
                            "spectrum_float": [0.0, 1.0]})


def test_json_hard_consistency_check():
    data = instance_to_dict(build_hard_instance(4))
    data["spectrum_quarter_pi"][2] += 8
    with pytest.raises(ValueError):
        instance_from_dict(data)


def test_spectrum_kind_and_length():
    assert HammingSpectrum.quarter_pi([1, 2]).kind is SpectrumKind.QUARTER_PI
    with pytest.raises(LengthMismatch):
        HammingSpectrum(3, SpectrumKind.FLOAT, (0.0, 1.0))
    with pytest.raises(LengthMismatch):
        Instance("000", HammingSpectrum.quarter_pi([0, 1]))
