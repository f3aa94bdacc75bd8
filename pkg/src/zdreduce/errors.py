"""Exception hierarchy shared by every module of the package."""


class ZdError(ValueError):
    """Base class for domain errors raised by zdreduce."""


class NotAUnitError(ZdError):
    """An element that had to be invertible modulo d is not."""


class DimensionError(ZdError):
    """Operands have incompatible shapes, ambient dimensions or moduli."""


class CompositeModulusError(ZdError):
    """An operation defined only inside a single Chinese factor got a composite modulus."""


class FamilyNotFreeError(ZdError):
    """A family of vectors was required to be free and is not."""


class OracleSizeError(ZdError):
    """A brute-force enumeration would exceed its size guard."""


class InternalCheckError(ZdError):
    """A result failed its own re-verification; this indicates a bug, not bad input."""
