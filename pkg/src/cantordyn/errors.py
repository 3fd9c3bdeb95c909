"""Exception types shared across the library."""


class CantorDynError(Exception):
    """Base class for all library-specific errors."""


class ParameterError(CantorDynError, ValueError):
    """A requested construction is infeasible or an argument is invalid."""


class ResourceBudgetError(CantorDynError, RuntimeError):
    """An exact computation exceeded its configured budget."""


class BackendSelectionError(CantorDynError, ValueError):
    """The requested solver backend cannot handle the given input."""


class CertificationError(CantorDynError, ValueError):
    """A structure failed re-verification against its declared shape."""
