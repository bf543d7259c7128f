"""Exception hierarchy shared by all modules."""


class IsingForgeError(Exception):
    """Base class for all package errors."""


class CatalogueError(IsingForgeError, KeyError):
    """Unknown fixed-matrix identifier."""


class DimensionError(IsingForgeError, ValueError):
    """Operator dimensions incompatible, or Hilbert-space cap exceeded."""


class DegeneracyError(IsingForgeError, ValueError):
    """A field's low eigenspace is not the required doublet."""


class NonProjectiveError(IsingForgeError, ValueError):
    """a b a^dag b^dag is not proportional to the identity."""


class PathMismatchError(IsingForgeError, ValueError):
    """Model shape incompatible with the requested transmutation path."""


class SingularityError(IsingForgeError, ZeroDivisionError):
    """Closed-form coupling evaluated at a pole."""


class SchemaError(IsingForgeError, ValueError):
    """Model file violates the published schema; message names the field."""


class NonConvergenceError(IsingForgeError, RuntimeError):
    """Iterative eigensolver failed its residual contract."""


class GaplessError(IsingForgeError, ValueError):
    """Topological invariant requested for a gapless spectrum."""


class PresetError(IsingForgeError, ValueError):
    """Missing or inconsistent preset parameters."""


class InputError(IsingForgeError, ValueError):
    """Bad CLI input (maps to exit status 2)."""


class HierarchyWarning(UserWarning):
    """Scale hierarchy of a validation harness not satisfied; results annotated."""
