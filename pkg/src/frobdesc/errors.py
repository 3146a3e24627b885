"""Exception types shared across the package."""


class FrobdescError(Exception):
    """Base class for all package-specific errors."""


class GuardError(FrobdescError):
    """An input exceeded a size guard meant to keep exact computations bounded."""


class InvariantError(FrobdescError):
    """A mathematical invariant that must hold by construction was violated."""


class WitnessRejected(FrobdescError):
    """A tower step witness failed the claim it was supposed to certify."""


class RepresentationError(FrobdescError):
    """A value fell outside the representations this artifact supports."""


class NotRegularError(FrobdescError):
    """A function was evaluated at a prime where it has a pole."""


class UnsupportedPrimeError(FrobdescError):
    """An operation was requested at a prime kind it does not support."""


class ElaborationError(FrobdescError):
    """A tower description could not be turned into shadow arithmetic."""


class InfeasibleError(FrobdescError):
    """A constraint system admitted no solution; signals a modeling bug."""


class SchemaError(FrobdescError):
    """A serialized document violated its schema.

    Carries a JSON-pointer-style path to the offending field.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
