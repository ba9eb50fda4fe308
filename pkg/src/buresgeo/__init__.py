"""Bures geometry toolkit: metric, connection, curvature and cross-checks.

Library layout:

  matrixcore  - Hermitian algebra, Jacobi eigensolver, invariants, companion matrix
  superops    - operators on matrix space (L, R, solves, comultiplication, traces)
  geometry    - metric, normal field, covariant derivative, Riemann/sectional curvature
  ricciscalar - Ricci form/mapping and every scalar-curvature route, bound checks
  fdoracle    - independent finite-difference geometry engine
  sampling    - random states (simplex eigenvalues, Haar basis)
  cli         - file- and sample-driven command line interface
"""

from .errors import (
    BuresError,
    DegeneratePlane,
    DegenerateSpectrumWarning,
    DenominatorNearZero,
    NoConvergence,
    NotHermitian,
    NotPositive,
    SingularMatrix,
    StepUnderflow,
    ValidationError,
    WrongDimension,
)
from .matrixcore import (
    DensityMatrix,
    InvariantVector,
    SpectralDecomposition,
    TangentVector,
    char_poly_deriv_eval,
    char_poly_eval,
    companion_matrix,
    density_matrix,
    elementary_invariants,
    hermitian_basis,
    spectral_decompose,
    tangent_vector,
)
from .superops import (
    ProductMap,
    SuperOperator,
    ad_op,
    comultiplication,
    inv_lplusr,
    inv_lplusr_super,
    left_mul,
    lr_over_lplusr,
    lr_over_lplusr_super,
    right_mul,
    superop_trace,
)
from .geometry import (
    VectorField,
    constant_field,
    covariant_derivative,
    curvature_map,
    lie_bracket,
    metric,
    metric_gram,
    normal_field,
    normal_split,
    position_field,
    riemann,
    sectional,
)
from .ricciscalar import (
    BoundCheck,
    DivergenceReport,
    RicciForm,
    ScalarReport,
    bound_check,
    divergence_probe,
    ricci_contraction,
    ricci_eigenbasis,
    ricci_mapping_eigen,
    ricci_mapping_super,
    ricci_mapping_tensor,
    scalar_by_method,
    scalar_charpoly,
    scalar_closed_form,
    scalar_companion,
    scalar_eigen_sum,
    scalar_lower_bound,
    scalar_trace_f,
    scalar_trace_h,
)
from .fdoracle import (
    Chart,
    OracleReport,
    christoffel,
    gauss_defect,
    make_chart,
    metric_components,
    oracle_report,
    ricci_fd,
    riemann_fd,
    scalar_fd,
)
from .sampling import (
    haar_unitary,
    random_density_matrix,
    random_spectral,
    random_tangent,
    simplex_eigenvalues,
)

__version__ = "0.1.0"
