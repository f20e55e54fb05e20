"""Rényi information measures and the complexity and multifractal
quantities built on them."""

from .binned import BinnedDensity, batty_decomposition, binned_renyi_entropy
from .catalog import (
    EventCatalog,
    energy_partition,
    frequency_partition,
    parse_catalog,
    split_phases,
)
from .complexity import (
    ComplexityMap,
    c_lmc,
    complexity_map,
    generalized_complexity,
    generalized_relative_complexity,
)
from .errors import (
    CatalogError,
    DegenerateSupportError,
    DomainError,
    FitError,
    InfiniteDivergenceError,
    InputError,
    MeasureError,
    PartitionMismatchError,
)
from .info_measures import (
    ProbDist,
    diversity_index,
    kl_divergence,
    renyi_divergence,
    renyi_entropy,
    shannon_entropy,
)
from .multifractal import (
    CascadeSpec,
    DimensionCurve,
    PartitionDistribution,
    generalized_dimensions,
    generalized_relative_dimensions,
)
from .simplex import evaluate_field, simplex_grid

__version__ = "0.1.0"

__all__ = [
    "BinnedDensity",
    "CascadeSpec",
    "CatalogError",
    "ComplexityMap",
    "DegenerateSupportError",
    "DimensionCurve",
    "DomainError",
    "EventCatalog",
    "FitError",
    "InfiniteDivergenceError",
    "InputError",
    "MeasureError",
    "PartitionDistribution",
    "PartitionMismatchError",
    "ProbDist",
    "batty_decomposition",
    "binned_renyi_entropy",
    "c_lmc",
    "complexity_map",
    "diversity_index",
    "energy_partition",
    "evaluate_field",
    "frequency_partition",
    "generalized_complexity",
    "generalized_dimensions",
    "generalized_relative_complexity",
    "generalized_relative_dimensions",
    "kl_divergence",
    "parse_catalog",
    "renyi_divergence",
    "renyi_entropy",
    "shannon_entropy",
    "simplex_grid",
    "split_phases",
]
