"""Exception types shared across the package."""


class TwistGrowthError(Exception):
    """Base class for all package errors."""


class WordSyntaxError(TwistGrowthError, ValueError):
    """Malformed word text, or a generator not in the basis."""


class InvalidInput(TwistGrowthError, ValueError):
    """An argument violates an operation's input contract."""


class BasisMismatch(InvalidInput):
    """Operands over different bases."""


class PreconditionNotSatisfied(TwistGrowthError, RuntimeError):
    """A stated mathematical precondition fails; refusing to answer."""


class UnsupportedConfiguration(TwistGrowthError, RuntimeError):
    """The object is outside the configurations this code supports."""


class VerificationFailed(TwistGrowthError, RuntimeError):
    """An internal consistency check that theory guarantees has failed."""


class BlockerNotFound(TwistGrowthError, RuntimeError):
    """Cancellation-blocker search exhausted its budget."""
