"""Exception hierarchy shared by the solver modules and the CLI."""


class ContestError(ValueError):
    """Invalid contest, instance or argument."""


class ScenarioError(ContestError):
    """A scenario file or contest description could not be parsed."""


class NotMDUError(ContestError):
    """A solver that relies on monotonically decreasing utility got a non-MDU contest."""


class UnsupportedModelError(ContestError):
    """The requested computation has no supported algorithm (e.g. non-MDU with m > 2)."""


class CapExceededError(ContestError):
    """An enumeration would exceed its configured size cap."""


class ClosedFormInapplicable(ContestError):
    """The full-rent-dissipation closed form gives a probability outside [0, 1]."""
