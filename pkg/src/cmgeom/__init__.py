"""Barycentric geometry of metric affine spaces of arbitrary signature.

Points, quadratic functions, metrics (squared-distance matrices) and the
Cayley-Menger bilinear form, all in coordinates relative to one referential.
"""

from .affine import (
    affine_eval,
    apply_map,
    as_hollow,
    as_weight,
    bary_combine,
    differential,
    hollow_basis,
    invert_point,
    validate_weight_matrix,
    vector_between,
    vertex,
)
from .cayley_menger import (
    CMForm,
    cm_apply,
    cm_coordinates,
    cm_inverse_pair,
    cm_matrix,
    cm_pair,
    cm_signature,
    functoriality_check,
    hyperbolic_split,
    localize,
    pushforward_matrix,
    quadric_test,
    sphere_fit,
    u_m,
    v_m,
    v_of_point,
)
from .errors import (
    ColumnSumError,
    DimensionError,
    NotClosedError,
    SingularCMError,
    SymmetryError,
    WeightError,
)
from .metric import (
    InertiaIndex,
    Metric,
    embed,
    half_sq_fn_at,
    hessian_restriction,
    inertia,
    is_nondegenerate,
    metric_of,
    pullback_metric,
    radical_basis,
    sq_pseudodistance,
)
from .quadratic import (
    AffineCovectorField,
    QuadFn,
    QuadMap,
    field_of,
    from_affine,
    from_midpoint_values,
    from_midpoint_values_map,
    gradient_at,
    hessian_pair,
    homogenize_at,
    is_closed,
    potential,
    quad_eval,
    reduce_at_referential,
)

__version__ = "0.1.0"
