"""Weighted Bergman-type operators on the upper half-plane."""

from ._core import (
    DivergenceError,
    DomainError,
    Error,
    Exponents,
    Function,
    InfeasibleError,
    InputError,
    Point,
    admissible,
    apply,
    dyadic_apply,
    lemma_scaling,
    norm_ratio,
    run_cli,
    solve_rst,
    tiling_violations,
    weight_constant,
)

__all__ = [
    "DivergenceError",
    "DomainError",
    "Error",
    "Exponents",
    "Function",
    "InfeasibleError",
    "InputError",
    "Point",
    "admissible",
    "apply",
    "dyadic_apply",
    "lemma_scaling",
    "norm_ratio",
    "run_cli",
    "solve_rst",
    "tiling_violations",
    "weight_constant",
]
