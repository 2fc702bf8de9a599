"""Exception hierarchy shared by every module.

Everything derives from :class:`DesignError` so callers (and the CLI) can
catch one type and map it to an exit status.
"""


class DesignError(Exception):
    """Base class for all library errors."""


class NumericFailure(DesignError):
    """A numeric routine failed to produce a trustworthy answer."""


class EvalOnPole(NumericFailure):
    pass


class ConvergenceFailure(NumericFailure):
    pass


class AmbiguousType(DesignError, ValueError):
    pass


class DelayUnsupported(DesignError, ValueError):
    pass


class TypeMismatch(DesignError, ValueError):
    pass


class NonpositiveGain(DesignError, ValueError):
    pass


class Infeasible(DesignError):
    """No compensator of the requested family meets the targets.

    ``reason`` is a short machine-readable code (``"phase"``,
    ``"magnitude"``, ``"bound"`` ...); the message carries the details.
    """

    def __init__(self, message, reason="infeasible", **details):
        super().__init__(message)
        self.reason = reason
        self.details = details


class InfeasibleAtFrequency(Infeasible):
    pass


class NoFeasibleCrossover(Infeasible):
    pass


class DegeneratePhase(DesignError, ValueError):
    pass


class ResonanceFrequency(DesignError, ValueError):
    pass


class RealFormUnavailable(DesignError, ValueError):
    pass


class ParseError(DesignError, ValueError):
    """Malformed request document; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
