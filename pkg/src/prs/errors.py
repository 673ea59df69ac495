"""Exception types shared across the package."""


class PrsError(Exception):
    """Base class for all data/validation errors raised by this package."""


class DatasetError(PrsError):
    """A dataset file or manifest failed to load or validate."""


class DegenerateDataError(PrsError):
    """Input is constant where variation is required (segment, column, ...)."""
