"""Frobenius sets, path multiplicities and directional growth of vector semigroups."""
from .errors import (
    BetaNotInterior,
    EmptyRepresentationSet,
    FrobndError,
    GaugeUnavailable,
    HorizonTooSmall,
    InconclusiveSampling,
    IterationTooLarge,
    NoConvergence,
    NoHalfSpace,
    NotCoplanar,
    NotFullRank,
    NotInSemigroup,
    NumericalError,
    RegionGrowthExceeded,
    SingularTransform,
    ValidationError,
    ZeroVector,
)
from .growth import (
    GrowthEstimate,
    gamma_closed,
    gamma_curve,
    gamma_empirical,
    slack,
    subadditive_limit,
)
from .maxent import GibbsSolution, PartitionEvaluation, max_entropy_constrained, partition_eval, solve_gibbs
from .multiplicity import (
    MultiplicityTable,
    hausdorff_A,
    multiplicity,
    multiplicity_at,
    multiplicity_from_representations,
    representations,
)
from .rigidity import (
    IteratedSet,
    RigidityVerdict,
    iterate,
    permutation_equal,
    same_growth,
    transform_set,
)
from .semigroup import (
    FrobeniusSet,
    SaturationContext,
    frobenius_set,
    in_semigroup,
    is_saturated,
    saturation_context,
)
from .vecset import (
    ConeGeometry,
    CoplanarityCertificate,
    LatticeBasis,
    VectorSet,
    cone_geometry,
    coplanar_normal,
    in_lattice,
    lattice_basis,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BetaNotInterior",
    "ConeGeometry",
    "CoplanarityCertificate",
    "EmptyRepresentationSet",
    "FrobeniusSet",
    "FrobndError",
    "GaugeUnavailable",
    "GibbsSolution",
    "GrowthEstimate",
    "HorizonTooSmall",
    "InconclusiveSampling",
    "IteratedSet",
    "IterationTooLarge",
    "LatticeBasis",
    "MultiplicityTable",
    "NoConvergence",
    "NoHalfSpace",
    "NotCoplanar",
    "NotFullRank",
    "NotInSemigroup",
    "NumericalError",
    "PartitionEvaluation",
    "RegionGrowthExceeded",
    "RigidityVerdict",
    "SaturationContext",
    "SingularTransform",
    "ValidationError",
    "VectorSet",
    "ZeroVector",
    "cone_geometry",
    "coplanar_normal",
    "frobenius_set",
    "gamma_closed",
    "gamma_curve",
    "gamma_empirical",
    "hausdorff_A",
    "in_lattice",
    "in_semigroup",
    "is_saturated",
    "iterate",
    "lattice_basis",
    "max_entropy_constrained",
    "multiplicity",
    "multiplicity_at",
    "multiplicity_from_representations",
    "partition_eval",
    "permutation_equal",
    "representations",
    "same_growth",
    "saturation_context",
    "slack",
    "solve_gibbs",
    "subadditive_limit",
    "transform_set",
    "validate",
]
