"""Robust consensus protocol synthesis for multi-agent LTI systems."""

from ._robcons import (
    Controller,
    Error,
    StateSpace,
    case_study_margin,
    default_config_json,
    freq_response,
    generalized_stability_margin,
    hankel_norm,
    hinf_norm,
    laplacian_eigenvalues,
    max_stability_margin,
    nu_gap,
    reference_controller,
    solve_care,
    solve_lyapunov,
    synthesize_controller,
)

__all__ = [
    "Controller",
    "Error",
    "StateSpace",
    "case_study_margin",
    "default_config_json",
    "freq_response",
    "generalized_stability_margin",
    "hankel_norm",
    "hinf_norm",
    "laplacian_eigenvalues",
    "max_stability_margin",
    "nu_gap",
    "reference_controller",
    "solve_care",
    "solve_lyapunov",
    "synthesize_controller",
]
