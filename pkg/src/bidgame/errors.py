"""Exception hierarchy shared across the package."""


class BidgameError(Exception):
    """Base class for all errors raised by this package."""


class EncodingError(BidgameError, ValueError):
    """A position encoding is malformed or violates game constraints."""


class GameDefinitionError(BidgameError, ValueError):
    """A game definition document is invalid."""


class CycleError(BidgameError):
    """The position graph contains a cycle; backward induction refuses it."""


class IllegalActionError(BidgameError, ValueError):
    """A bid or move violates the rules of the current state."""


class DomainError(BidgameError, ValueError):
    """An operation was applied to a state outside its domain."""


class TranscriptError(BidgameError, ValueError):
    """A transcript or bid-script document is malformed."""
