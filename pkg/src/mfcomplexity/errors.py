"""Exception types raised across the package."""


class MeasureError(ValueError):
    """Base class for invalid inputs to an information or complexity measure."""


class DomainError(MeasureError):
    """Argument outside the domain where the measure is defined."""


class DegenerateSupportError(MeasureError):
    """Non-positive order applied to a distribution with zero entries."""


class InfiniteDivergenceError(MeasureError):
    """The first distribution is not absolutely continuous w.r.t. the second."""


class PartitionMismatchError(MeasureError):
    """Two partitions (bins, lattices, grids) that must coincide do not."""


class FitError(MeasureError):
    """A scaling regression cannot be carried out."""


class CatalogError(ValueError):
    """Malformed or unusable event catalog."""


class InputError(ValueError):
    """An input file is missing or malformed."""
