"""Exception hierarchy shared by all platform services."""

from __future__ import annotations


class SrlSpaceError(Exception):
    """Base class for every error raised by this package."""


# -- catalog ---------------------------------------------------------------

class CatalogParseError(SrlSpaceError):
    """The catalog document could not be parsed."""


class CatalogValidationError(SrlSpaceError):
    """The catalog parsed but failed cross-reference validation.

    ``problems`` lists every dangling reference or structural violation found,
    not just the first one.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnknownStrategy(SrlSpaceError):
    pass


class UnknownEntity(SrlSpaceError):
    pass


class UnknownWidget(SrlSpaceError):
    pass


# -- learner model ---------------------------------------------------------

class UnknownCatalogReference(SrlSpaceError):
    """A competence or history entry references an id the catalog does not know."""


class UnknownTechnique(SrlSpaceError):
    pass


class UnknownLearner(SrlSpaceError):
    pass


class NonMonotonicTimestamp(SrlSpaceError):
    """An application event is older than the tail of the learner's history."""


# -- spaces ----------------------------------------------------------------

class UnknownSpace(SrlSpaceError):
    pass


class NameTaken(SrlSpaceError):
    pass


class InvalidName(SrlSpaceError):
    pass


class NotAMember(SrlSpaceError):
    pass


class LastMember(SrlSpaceError):
    """The sole remaining member owns the space and cannot leave it."""


class UnknownActivity(SrlSpaceError):
    pass


class UnknownInstance(SrlSpaceError):
    pass


class EventOrderError(SrlSpaceError):
    """Per-space event timestamps must be non-decreasing."""


class UnknownVerb(SrlSpaceError):
    pass


# -- realtime hub ----------------------------------------------------------

class ConnectionClosed(SrlSpaceError):
    pass


class EmptyMessage(SrlSpaceError):
    pass


# -- recommenders ----------------------------------------------------------

class StaleRecommendation(SrlSpaceError):
    """Outcome reported for a recommendation the scheduler did not just issue."""


class CorpusUnavailable(SrlSpaceError):
    pass


# -- analytics -------------------------------------------------------------

class ConfigParseError(SrlSpaceError):
    """A filter/geo/config file for the analytics pipeline failed to parse."""
