"""Exception types shared across quakesurf modules."""


class QuakesurfError(Exception):
    """Base class for all package errors."""


class ClassMismatchError(QuakesurfError):
    """An operation received an isometry of the wrong conjugacy class."""


class ExistenceError(QuakesurfError):
    """Requested block data violates the existence bound (trace equation not solvable)."""


class AssemblyError(QuakesurfError):
    """Holonomy assembly failed an invariant (relator or peripheral residual)."""


class IncomparableMarkingError(QuakesurfError):
    """Two surfaces carry different decompositions/markings and cannot be compared."""


class UnsupportedCurveError(QuakesurfError):
    """A curve class is outside the implementable slice (not a pants curve, or non-simple)."""


class RecoveryError(QuakesurfError):
    """Fenchel-Nielsen recovery from a holonomy representation failed."""


class NonConvergenceError(QuakesurfError):
    """Iterative solver stagnated above tolerance."""


class DegenerateSampleError(QuakesurfError):
    """A grid sample hit a degenerate (non-invertible) operator."""


class SchemaError(QuakesurfError):
    """A JSON input failed schema validation."""
