"""Matrix-valued spherical functions of Gelfand pairs and their contraction limits."""

__version__ = "0.1.0"

from .groups import (  # noqa: E402
    CompactElement,
    IwasawaFactors,
    LorentzElement,
    MotionElement,
    QuaternionPair,
    Rotation,
    cartan_log,
    contract_compact,
    contract_lorentz,
    contraction_defect,
    exp_cartan,
    exp_lorentz,
    iwasawa_so21,
    lift_so4,
)
from .partitions import (  # noqa: E402
    Partition,
    branch,
    commutativity_check,
    contracting_label,
    min_contracting_index,
    multiplicity,
    validate_partition,
)
from .quadrature import QuadratureRule, quadrature  # noqa: E402
from .repmodels import (  # noqa: E402
    CompactRepLabel,
    IsotypicBasis,
    MotionRepParams,
    PrincipalSeriesParams,
    TauModel,
    compact_rep_matrix,
    motion_action,
    motion_isotypic_basis,
    principal_action,
    scalar_character_rep,
    tau_matrix,
)
from .specfun import EvalConfig, bessel_j, jacobi_p, mehler_heine_error, wigner_d  # noqa: E402
from .spherical import (  # noqa: E402
    ProjectionMatrix,
    SphericalFunction,
    SphericalValue,
    motion_oracle_n2,
    projection_matrix,
    schur_identify,
    spherical_value,
)
