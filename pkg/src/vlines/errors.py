"""
Exceptions raised by vlines.

Every subclass is also a ValueError so that callers can treat them the same way as
pydantic's ValidationError, which is itself a ValueError.
"""


class VlinesError(Exception):
    pass


class PrimeMismatchError(VlinesError, ValueError):
    """Two objects over different prime fields were combined."""


class AmbientMismatchError(VlinesError, ValueError):
    """Two subspaces do not live in the same ambient space."""


class ShapeMismatchError(VlinesError, ValueError):
    """Maps, complexes or towers do not fit together."""


class UndefinedConnectivityError(VlinesError, ValueError):
    """Connectivity was requested for a complex with zero homology."""


class InexactCoupleError(VlinesError, ValueError):
    """A couple failed its exactness check and cannot be derived."""


class NotARetractError(VlinesError, ValueError):
    pass


class DocumentError(VlinesError, ValueError):
    """A tower, complex or map document could not be loaded."""


class UnknownFormatError(VlinesError, ValueError):
    pass
