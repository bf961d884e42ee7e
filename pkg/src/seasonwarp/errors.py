"""Exception hierarchy shared across the toolkit.

Everything raised on bad *data* derives from :class:`MarketDataError` so the
CLI can map it to exit code 2.  Programming mistakes (bad flag values, out of
range parameters) raise plain ``ValueError``/``TypeError`` as usual.
"""


class MarketDataError(Exception):
    """Base class for all data-level failures."""


class DataIntegrityError(MarketDataError):
    """Structurally broken input: duplicate weeks, malformed rows, missing weeks."""


class SchemaError(DataIntegrityError):
    """CSV header does not contain a configured column."""


class InsufficientDataError(MarketDataError):
    """Too few observations for the requested computation."""


class DegenerateDataError(MarketDataError):
    """Numerically degenerate input: zero variance, singular regressors."""


class NoValidPathError(MarketDataError):
    """Sakoe-Chiba band too narrow to connect the corners of the cost matrix."""
