"""Exact solutions, symmetries and order reduction for the hyperbolic Ernst equation."""

from .errors import ConfigError, DomainError, ErnstLabError, NotInSpanError, PoleError, QuadratureError
from .jets import Jet2, Taylor3, fd_partials, jet2_apply, taylor3_apply
from .lie import BASIS, Poly4, VectorField4, commutator_table, decompose_in_basis, lie_bracket, structure_check
from .potentials import (
    EPD_BASIS,
    EpdCombination,
    FamilyParams,
    PotentialSample,
    TrigFamilyParams,
    epd_basis_eval,
    epd_residual,
    epd_to_ernst,
    ernst_residual,
    eval_trig_family,
    eval_x1_family,
    eval_x2_family,
    family_as_epd,
    invariant_surface_residual,
)
from .reduction import (
    AlphaAnsatz,
    IntegratingFactor,
    JetPoint,
    determining_system_residuals,
    first_integral_identity_check,
    line_integral_first_integral,
    psi_algebraic_identity,
    psi_values,
    reduced_ode_residual,
    rhs_F,
)
from .scenario import Scenario, run_scenario
from .transforms import (
    CoordinateAction,
    GroupParams,
    MoebiusMatrix,
    apply_coordinate_action,
    apply_moebius,
    apply_x5_action,
    compose_moebius,
    ehlers_from_real,
    generator_coefficients,
    generator_derivative_check,
    moebius_from_params,
    shift_scale,
)

__version__ = "0.1.0"
