"""Exception types shared across the toolkit."""


class CrossmiError(Exception):
    """Base class for toolkit errors."""


class ValidationError(CrossmiError):
    """Bad inputs: malformed files, schema violations, inconsistent arguments."""


class ZeroProbabilityError(CrossmiError):
    """A scorer assigned probability zero to an observed event.

    Carries the offending unit and its context so the caller can tell
    which event broke (typically an unseen event under MLE smoothing).
    """

    def __init__(self, unit, context=()):
        self.unit = unit
        self.context = tuple(context)
        super().__init__(
            f"zero probability for unit {unit!r} in context {self.context!r}"
        )


class PipelineError(CrossmiError):
    """A pipeline stage failed; names the stage and chains the cause."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
