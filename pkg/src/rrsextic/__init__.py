"""Arbitrary-precision modular functions and a solver for b^2/(20a) + bX^3 + aX^6 = C1 X^5."""

__version__ = "0.1.0"

from .errors import BranchError, ConvergenceError, DomainError, RRSexticError, VerificationError
from .numkernel import PrecCtx, parse_number
from .qseries import Nome, eta, f_minus, theta_nulls
from .elliptic import ModulusPair, beta_modulus, ellipK, k_inverse, k_modulus, k_pair, p_iterate
from .rrcf import Method, a_quotient, n_value, rrcf
from .jinv import ModularPoint, Route, j_value, u_forward, u_inverse
from .sextic import (
    SexticInstance,
    SolveMethod,
    nested_radical,
    solve_from_L,
    solve_modular,
    solve_series,
)
from .verify import ResidualReport, conjecture_suite, identity_suite

__all__ = [
    "BranchError", "ConvergenceError", "DomainError", "RRSexticError", "VerificationError",
    "PrecCtx", "parse_number", "Nome", "eta", "f_minus", "theta_nulls",
    "ModulusPair", "beta_modulus", "ellipK", "k_inverse", "k_modulus", "k_pair", "p_iterate",
    "Method", "a_quotient", "n_value", "rrcf",
    "ModularPoint", "Route", "j_value", "u_forward", "u_inverse",
    "SexticInstance", "SolveMethod", "nested_radical", "solve_from_L", "solve_modular",
    "solve_series", "ResidualReport", "conjecture_suite", "identity_suite",
]
