"""matdist: exact classification of finite functions of several variables.

Finite probability spaces with rational weights stand in for the measure
spaces; value matrices stand in for measurable functions of two variables.
The library computes the classifying invariants exactly (metric types,
canonical forms of extended pure factors, corner distributions of the random
value matrix), samples matrices reproducibly, rebuilds functions from single
samples, and decides simplicity through congruence groups.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .distribution import (
    CornerDistribution,
    SampledMatrix,
    SampledTensor,
    TensorCornerDistribution,
    corner_distributions_equal,
    exact_corner_distribution,
    exact_tensor_corner,
    sample_matrix,
    sample_tensor,
    total_variation,
)
from .errors import (
    AmbiguousCell,
    BudgetExceeded,
    DepthExceedsMatrix,
    EmptyCell,
    MatdistError,
    ParseError,
    SizeMismatch,
    ZeroMassValue,
)
from .functions import (
    CanonicalForm,
    ExtendedValueLabel,
    FactorMaps,
    FiniteFunction,
    IsomorphismWitness,
    TensorFunction,
    canonical_form,
    extended_pure_factor,
    is_pure,
    isomorphic,
    label_key,
    purify,
)
from .measure import (
    FiniteMeasureSpace,
    MetricType,
    OneVarFunction,
    RokhlinInvariant,
    conditional_measure,
    metric_type,
    rokhlin_invariant,
    rokhlin_isomorphic,
)
from .reconstruction import (
    EmpiricalModel,
    JointCell,
    ReconstructionReport,
    definetti_diagnostic,
    empirical_col_measure,
    empirical_joint,
    empirical_model,
    empirical_row_measure,
    reconstruct,
    reconstruction_check,
)
from .symmetry import (
    CollisionWitness,
    CongruenceGroup,
    SimplicityDiagnostic,
    SimplicityViolation,
    collision_witness,
    congruence_group,
    empirical_simplicity_diagnostic,
    is_completely_pure,
    simplicity_decision,
)

__all__ = [name for name in dir() if not name.startswith("_")]
