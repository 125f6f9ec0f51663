"""Exact deformation calculus for Dolbeault complexes on a single chart.

Coefficients are Gaussian-rational polynomials in z, zbar truncated in the
deformation parameter t; every identity is checked to exact zero.
"""

from .coeff_ring import GaussRational, PolySeries, RingMismatch
from .forms import Form
from .bundles import (E, ENDE, KINV, T, ConnectionData, Factor, FiberEndo, OmegaP, ValuedForm,
                      curvature, dbar_valued, end_act, nabla, nabla10)
from .deformation import (BeltramiField, EndoField, bracket, contract, exp_contract,
                          integrability_check, lie10_conn, lie10_scalar, lie_full, mc_residual,
                          phi_from_trivialization, psi_from_transition, psi_kinv, psi_omega,
                          psi_omega_p, psi_tensor, second_residual)
from .correspondence import (CorrespondenceContext, OffShellError, conjugated_nabla, coro1_residual,
                             identity_LRY, identity_nabla01, identity_pro2, identity_pro4,
                             identity_thm1, identity_thm2, iso_I, iso_I_inv)
from .extension import (DeformationFamily, dbar_solve, extend_bundle, extend_nq, extend_scalar,
                        homotopy_h)
from .expr import parse_poly, poly
from .scenario import parse_scenario, print_scenario, random_scenario, run_suites

__version__ = "0.1.0"

__all__ = [
    "GaussRational", "PolySeries", "RingMismatch", "Form", "E", "ENDE", "KINV", "T",
    "ConnectionData", "Factor", "FiberEndo", "OmegaP", "ValuedForm", "curvature",
    "dbar_valued", "end_act", "nabla", "nabla10", "BeltramiField", "EndoField", "bracket",
    "contract", "exp_contract", "integrability_check", "lie10_conn", "lie10_scalar",
    "lie_full", "mc_residual", "phi_from_trivialization", "psi_from_transition", "psi_kinv",
    "psi_omega", "psi_omega_p", "psi_tensor", "second_residual", "CorrespondenceContext",
    "OffShellError", "conjugated_nabla", "coro1_residual", "identity_LRY", "identity_nabla01",
    "identity_pro2", "identity_pro4", "identity_thm1", "identity_thm2", "iso_I", "iso_I_inv",
    "DeformationFamily", "dbar_solve", "extend_bundle", "extend_nq", "extend_scalar",
    "homotopy_h", "parse_poly", "poly", "parse_scenario", "print_scenario", "random_scenario",
    "run_suites",
]
