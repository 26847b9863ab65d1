"""Exception types shared across the package."""


class MapFormatError(Exception):
    """Raised when an ASCII map file is malformed."""


class MapConflictError(Exception):
    """Raised when a sensor update contradicts the belief map state."""


class EnergyExhaustedError(Exception):
    """Raised when a consume call would drive the energy budget negative."""


class PlanningError(Exception):
    """Raised when a retreat/advance path that must exist cannot be found."""
