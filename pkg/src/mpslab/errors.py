"""Exception types shared across the package."""


class MpslabError(ValueError):
    """Base class for all domain errors."""


class CapacityError(MpslabError):
    """Requested dense object exceeds the desk-scale size cap."""


class MalformedTensorError(MpslabError):
    """Occupation tensor carries weight outside its particle-number sector."""


class InsufficientPrimesError(MpslabError):
    """Prime pool too small for the requested coefficient count."""


class UnsupportedEntryError(MpslabError):
    """Matrix entry is not (plus or minus) the square root of a pool prime."""


class ZeroStateError(MpslabError):
    """Operation undefined on the zero state."""


class OrderingSearchError(MpslabError):
    """Exhaustive ordering search rejected; a heuristic mode is available."""
