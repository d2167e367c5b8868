"""Angular resolution limit of a far-field / near-field source pair on a ULA.

All functions take configuration text in the same ``section.key = value``
format the ``arlkit`` command line tool reads. Empty text means defaults.
"""

from ._arlkit import (
    ArlkitError,
    arl,
    crb,
    default_config,
    electrical,
    normalize_config,
    solve_quartic,
    steering_ff,
    steering_nf,
    sweep,
    sweep_csv,
    validate,
)

__all__ = [
    "ArlkitError",
    "arl",
    "crb",
    "default_config",
    "electrical",
    "normalize_config",
    "solve_quartic",
    "steering_ff",
    "steering_nf",
    "sweep",
    "sweep_csv",
    "validate",
]
