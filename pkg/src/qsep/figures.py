"""Data and plots for the energy-landscape and overlap-distribution figures."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import _svg
from ._io import atomic_write_text, write_csv
from .instance import Instance, density_of_states
from .overlap_dist import (
    PQ_CSV_HEADER,
    OverlapDistribution,
    hardness_indicator,
    overlap_distribution,
    pick_temperature,
)

FIG1A_HEADER = ("delta", "energy", "density")


def energy_profile(instance: Instance):
    """Rows ``(Delta, E(Delta) in radians, C(n,Delta)/2^n)``."""
    e = instance.spectrum.energies()
    dos = density_of_states(instance.n)
    return [(d, float(e[d]), float(dos[d])) for d in range(instance.n + 1)]


def profile_svg(rows, n: int) -> str:
    # energies span many decades at large n; plot log10(1 + E - E_min)
    e = np.array([r[1] for r in rows])
    scaled = np.log10(1.0 + (e - e.min()))
    return _svg.dual_axis_chart(
        [r[0] for r in rows], list(scaled), [r[2] for r in rows],
        title=f"Energy and density of states vs Hamming distance (n={n})",
        xlabel="Hamming distance to target",
        left_label="log10(1 + E - E_min)  [dashed]",
        right_label="normalised density of states  [solid]",
    )


def overlap_figure(instance: Instance, inverse_temperature: float | None = None) -> OverlapDistribution:
    b = pick_temperature(instance.spectrum) if inverse_temperature is None else inverse_temperature
    return overlap_distribution(instance.spectrum, b)


def overlap_svg(dist: OverlapDistribution, log_y: bool = False) -> str:
    return _svg.bar_chart(
        dist.q_values, dist.probabilities,
        title=f"Overlap distribution P(q), n={dist.n}, inverse temperature {dist.inverse_temperature:.6g}",
        xlabel="q", ylabel="P(q)", log_y=log_y,
        highlight=lambda q: abs(q) < 0.75,
    )


def write_fig1(instance: Instance, out_dir, inverse_temperature: float | None = None, log_y: bool = False) -> dict:
    """Write fig1a.csv/.svg and fig1b.csv/.svg; return a small summary."""
    out = Path(out_dir)
    rows = energy_profile(instance)
    write_csv(out / "fig1a.csv", FIG1A_HEADER, rows)
    atomic_write_text(out / "fig1a.svg", profile_svg(rows, instance.n))
    dist = overlap_figure(instance, inverse_temperature)
    write_csv(out / "fig1b.csv", PQ_CSV_HEADER, zip(map(float, dist.q_values), map(float, dist.probabilities)))
    atomic_write_text(out / "fig1b.svg", overlap_svg(dist, log_y))
    verdict = hardness_indicator(dist)
    return {
        "n": instance.n,
        "inverse_temperature": dist.inverse_temperature,
        "p_q1": verdict.p_one,
        "mass_abs_q_below_0.75": verdict.mass_below,
        "verdict": verdict.verdict,
        "normalisation": math.fsum(dist.probabilities),
    }
