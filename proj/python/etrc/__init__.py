"""Event-triggered robust control toolkit.

Thin Python surface over the C++ core: scenario handling, robust gain
design, closed-loop simulation, and analytic inter-event bounds.
"""

from ._core import (
    Design,
    EtrcError,
    Metrics,
    Scenario,
    Trace,
    design,
    dynamic_tau,
    is_positive_definite,
    load_scenario,
    parse_scenario,
    preset_names,
    preset_text,
    pseudo_inverse,
    simulate,
    spectral_norm,
    static_tau,
    sym_eigenvalues,
)

__all__ = [
    "Design",
    "EtrcError",
    "Metrics",
    "Scenario",
    "Trace",
    "design",
    "dynamic_tau",
    "is_positive_definite",
    "load_scenario",
    "parse_scenario",
    "preset_names",
    "preset_text",
    "pseudo_inverse",
    "simulate",
    "spectral_norm",
    "static_tau",
    "sym_eigenvalues",
]

__version__ = "0.1.0"
