"""Verification laboratory for form factors of monodromy-matrix entries in
GL(3)-invariant integrable chains.

The package pairs closed determinant representations for the (1,2)- and
(1,3)-entry form factors (plus the zero-mode relations connecting all nine
entries) with an independent brute-force oracle built from dense exact
diagonalization of a concrete inhomogeneous SU(3)-invariant chain, and ships
the identity and limit suites that validate every piece.
"""

from .bethe import BetheRoots, SolveConfig, bethe_residual, solve_bethe, tau
from .chain import ChainSpec, monodromy, rtt_residual, vacuum_ratios, zero_modes
from .formfactors import (
    FormFactorRequest,
    det_form_factor,
    det_form_factor_12,
    det_form_factor_13,
    direct_form_factor,
    map_phi,
    map_psi,
    universal_form_factor,
)
from .kernels import dwpf, f, g, h, kernel_quadruple, t
from .vectors import bethe_vector, dual_vector, on_shell_residual, zero_mode_action
from .verify import run_manifest

__version__ = "0.1.0"

__all__ = [
    "BetheRoots",
    "ChainSpec",
    "FormFactorRequest",
    "SolveConfig",
    "bethe_residual",
    "bethe_vector",
    "det_form_factor",
    "det_form_factor_12",
    "det_form_factor_13",
    "direct_form_factor",
    "dual_vector",
    "dwpf",
    "f",
    "g",
    "h",
    "kernel_quadruple",
    "map_phi",
    "map_psi",
    "monodromy",
    "on_shell_residual",
    "rtt_residual",
    "run_manifest",
    "solve_bethe",
    "t",
    "tau",
    "universal_form_factor",
    "vacuum_ratios",
    "zero_mode_action",
    "zero_modes",
]
