"""Deterministic depth-1 QAOA instances and the annealing baselines they defeat."""

from .instance import (
    HammingSpectrum,
    Instance,
    SignConvention,
    SpectralCertificate,
    SpectrumKind,
    TargetState,
    build_hard_instance,
    build_watermarked_instance,
    check_spectral_condition,
    density_of_states,
    find_gamma,
    hamming_distance,
    load_instance,
    save_instance,
)
from .qaoa import (
    AmplitudeResult,
    QaoaParams,
    grid_scan,
    overlap_collapsed,
    overlap_statevector,
    trained_state_checks,
    verify_deterministic,
)
from .couplings import (
    SpinGlass,
    expand_hamming_polynomial,
    export_circuit,
    render_circuit,
    spin_glass_energy,
    verify_expansion,
)
from .dynamics import AnnealSchedule, qa_statevector, qa_symmetric
from .sa import SaSchedule, default_schedule, sa_run, sa_success_probability, wilson_interval
from .overlap_dist import hardness_indicator, overlap_distribution, pick_temperature
from .oracle_solver import instance_oracle, solve

__version__ = "0.1.0"
