"""Exception hierarchy shared across the package.

Everything user-facing derives from MisinfoError so the CLI can map it to
exit code 1; anything else escaping to the top level is an internal error.
"""


class MisinfoError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(MisinfoError):
    """Input file unreadable or too corrupt to load (>50% malformed rows)."""


class SchemaError(MisinfoError):
    """Structured input (glossary, config) violates its schema."""


class ContractError(MisinfoError):
    """Caller broke an API precondition (mismatched feature space, bad lengths)."""


class DegenerateDataError(MisinfoError):
    """Training or splitting input cannot support the requested operation."""


class NotFoundError(MisinfoError):
    """A referenced tweet id does not exist in the session's dataset."""


class ValidationError(MisinfoError):
    """A submitted value (label, annotator id) fails validation."""


class AdjudicationError(MisinfoError):
    """Finalization attempted while ties are still unresolved."""

    def __init__(self, tweet_ids):
        self.tweet_ids = list(tweet_ids)
        super().__init__(
            "unresolved ties for tweet ids: %s" % ", ".join(self.tweet_ids)
        )


class NumericError(MisinfoError):
    """Non-finite values encountered during optimization."""

    def __init__(self, message, epoch=None):
        self.epoch = epoch
        if epoch is not None:
            message = f"{message} (epoch {epoch})"
        super().__init__(message)


class ModelFormatError(MisinfoError):
    """Persisted model file is unreadable or has an unsupported version."""
