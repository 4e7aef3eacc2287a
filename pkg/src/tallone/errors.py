"""Exception hierarchy shared by all tallone modules."""


class TalloneError(Exception):
    """Base class for every error raised by tallone."""


class InputError(TalloneError):
    """Raised when user-supplied data does not satisfy a precondition."""
