"""Exception types raised across the package."""


class WidthMismatchError(ValueError):
    """Operands act on registers of different size."""


class HermiticityError(ValueError):
    """A generator that must be Hermitian (phase 0) is not."""


class ConsistencyError(RuntimeError):
    """An identity that must hold exactly failed; indicates a bug."""


class TaperingError(ValueError):
    """Invalid symmetry or tapering plan."""


class SizeGuardError(ValueError):
    """Dense matrices requested for too many modes."""


class ParseError(ValueError):
    """Malformed operator text; ``pos`` is the offending character offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)
