"""Exact-arithmetic toolkit for germs of foliations given by polynomial
1-forms: exterior calculus, local classification, Milnor numbers, blow-ups,
truncated first-integral/integrating-factor searches, degree-2 normal
families and closed-form catalogues, plus an HTTP service and CLI."""

__version__ = "0.1.0"

from .exactmath import LinSolution, Poly, Rat, RatFn, VarCtx, linear_solve, poly_gcd
from .forms import (
    KForm,
    PolyMap,
    VecField,
    exterior_derivative,
    initial_part,
    interior_product,
    is_dicritical,
    is_integrable,
    lie_derivative,
    pullback,
    wedge,
)
from .germ import (
    DeploymentOutcome,
    GermReport,
    JetClass,
    LorayData,
    QuadCase,
    SearchResult,
    analyze_germ,
    deployment_outcomes,
    first_integral_search,
    integrating_factor_search,
    is_center_to_order,
    loray_form,
    milnor_number,
    one_jet_class,
    prop24_case,
)
from .blowup import (
    BlowupChart,
    StrictTransform,
    blowup_chart,
    divisor_singular_points,
    strict_transform,
    weighted_substitute,
)
from .degree2 import (
    DulacForm,
    HomogForm,
    NotInFamily,
    OmegaFamilyData,
    SingularBudget,
    chi_contains,
    dulac_build,
    family_extract,
    homogenize_affine,
    invariant_curve_check,
    log_form_build,
    mu_table,
    omega1_form,
    omega2_form,
    restrict_to_chart,
    singular_budget_check,
    sl2_triplet_check,
    transversely_affine_check,
)
from .parsing import ParseError, parse_form, render_form

__all__ = [name for name in dir() if not name.startswith("_")]
