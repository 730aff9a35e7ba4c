"""Exception types shared across the package.

Every error raised on purpose by detour derives from :class:`DetourError`, so
callers that only want "did the input make sense" can catch one class.
"""

from __future__ import annotations


class DetourError(Exception):
    """Base class for all detour errors."""


# -- network documents / GTFS ------------------------------------------------

class SchemaError(DetourError):
    """A document is malformed (missing key, wrong type, unknown key...)."""


class DanglingReference(DetourError):
    """A line references a station id that does not exist."""


class DuplicateId(DetourError):
    pass


class MissingTable(DetourError):
    pass


class MalformedRow(DetourError):
    def __init__(self, table: str, row_index: int, message: str):
        super().__init__(f"{table} row {row_index}: {message}")
        self.table = table
        self.row_index = row_index


class EmptyFeed(DetourError):
    pass


# -- lookups ------------------------------------------------------------------

class NotFound(DetourError):
    """No station matches a name."""


class Ambiguous(DetourError):
    def __init__(self, name: str, candidates: list[str]):
        super().__init__(f"{name!r} is ambiguous: {', '.join(candidates)}")
        self.name = name
        self.candidates = candidates


class UnknownStation(DetourError):
    pass


class UnknownLine(DetourError):
    pass


class InvalidZone(DetourError):
    pass


class NotOnLine(DetourError):
    pass


class DirectionUnavailable(DetourError):
    pass


# -- routing ------------------------------------------------------------------

class NoRoute(DetourError):
    pass


class ForbiddenEndpoint(DetourError):
    pass


class TooLarge(DetourError):
    pass


class InvariantViolation(DetourError):
    pass


# -- LLM pipeline -------------------------------------------------------------

class EmptyPlan(DetourError):
    pass


class MissingAttachmentFile(DetourError):
    pass


class ProviderError(DetourError):
    """Anything that went wrong talking to a model provider."""


class TransportError(ProviderError):
    pass


class AuthError(ProviderError):
    pass


class RateLimited(ProviderError):
    pass


class ReplayMiss(ProviderError):
    def __init__(self, key: str):
        super().__init__(f"no recorded transcript for key {key}")
        self.key = key


# -- scenarios / reports ------------------------------------------------------

class MissingNetwork(DetourError):
    pass


class MissingAttachment(DetourError):
    pass


class EmptyGroup(DetourError):
    pass


class MissingColumn(DetourError):
    pass
