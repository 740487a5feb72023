"""Double bracket vector fields, leaf metrics and Brockett flows on Poisson
manifolds.

The package couples a Poisson bivector with a (pseudo-)Riemannian metric
through the symmetric tensor D = Pi^T g Pi, drives descent fields -D dG,
restricts them to symplectic leaves through explicit charts, and integrates
the classical double bracket flow L' = [L, [L, N]] with conservation
monitors.
"""

from .algebra import (
    LieAlgebra,
    change_basis,
    from_matrix_basis,
    lie_algebra,
    load_structure_constants,
    save_structure_constants,
    sl2_elementary,
    sl2_rotated,
    so3,
    so4,
)
from .backends import BACKEND
from .charts import (
    LeafChart,
    cone_chart,
    expression_chart,
    hyperboloid_sheet,
    identity_chart,
    one_sheet,
    product_sphere_chart,
    sphere_chart,
    stereographic_disc,
)
from .cometric import (
    MetricField,
    cometric_matrix,
    constant_metric,
    double_bracket_field,
    euclidean_metric,
    kernel_rank_check,
    killing_metric,
    lie_double_bracket,
)
from .flow import Trajectory, brockett_flow, equilibrium_report, integrate
from .leaf import (
    compare_with_normal_metric,
    double_bracket_metric,
    gradient_residual,
    induced_metric,
    leaf_gradient,
    leaf_metric_report,
    leaf_symplectic,
    normal_metric,
    restricted_cometric,
)
from .poisson import (
    PoissonStructure,
    canonical_structure,
    casimir_residual,
    hamiltonian_field,
    jacobi_residual,
    lie_poisson,
    polynomial_structure,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "LeafChart",
    "LieAlgebra",
    "MetricField",
    "PoissonStructure",
    "Trajectory",
    "brockett_flow",
    "canonical_structure",
    "casimir_residual",
    "change_basis",
    "cometric_matrix",
    "compare_with_normal_metric",
    "cone_chart",
    "constant_metric",
    "double_bracket_field",
    "double_bracket_metric",
    "equilibrium_report",
    "euclidean_metric",
    "expression_chart",
    "from_matrix_basis",
    "gradient_residual",
    "hamiltonian_field",
    "hyperboloid_sheet",
    "identity_chart",
    "induced_metric",
    "integrate",
    "jacobi_residual",
    "kernel_rank_check",
    "killing_metric",
    "leaf_gradient",
    "leaf_metric_report",
    "leaf_symplectic",
    "lie_algebra",
    "lie_double_bracket",
    "lie_poisson",
    "load_structure_constants",
    "normal_metric",
    "one_sheet",
    "polynomial_structure",
    "product_sphere_chart",
    "restricted_cometric",
    "save_structure_constants",
    "sl2_elementary",
    "sl2_rotated",
    "so3",
    "so4",
    "sphere_chart",
    "stereographic_disc",
]
