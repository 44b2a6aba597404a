"""Benjamin-Ono numerical lab: Python bindings over the C++ core."""

import json

from ._core import (
    NumericalError,
    ValidationError,
    besov_sup_norm,
    check_res3,
    check_res4,
    chi,
    derivative,
    free_propagator,
    hamiltonian,
    hilbert_transform,
    omega,
    omega_n,
    periodic_travelling_wave,
    periodic_travelling_wave_speed,
    project_band,
    run_cli,
    sobolev_norm,
    solve,
)
from ._core import bona_smith_report as _bona_smith_report


def bona_smith():
    """Default Bona-Smith experiment report as a dict."""
    return json.loads(_bona_smith_report())


__all__ = [
    "NumericalError",
    "ValidationError",
    "besov_sup_norm",
    "bona_smith",
    "check_res3",
    "check_res4",
    "chi",
    "derivative",
    "free_propagator",
    "hamiltonian",
    "hilbert_transform",
    "omega",
    "omega_n",
    "periodic_travelling_wave",
    "periodic_travelling_wave_speed",
    "project_band",
    "run_cli",
    "sobolev_norm",
    "solve",
]
