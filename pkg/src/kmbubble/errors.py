"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a physical or numerical precondition."""


class ParseError(ValueError):
    """A score file or config value could not be parsed."""


class CollapseError(RuntimeError):
    """The bubble radius fell below the collapse guard during integration."""

    def __init__(self, tau, message=None):
        self.tau = tau
        super().__init__(message or f"bubble collapsed at tau={tau:.6g}")


class SingularityError(RuntimeError):
    """The leading coefficient of the radial acceleration vanished."""
