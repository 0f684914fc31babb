class SeqSpaceError(Exception):
    """Base class for library errors."""


class UnsupportedCombination(SeqSpaceError):
    """The result exists mathematically but has no finite description in our kinds."""


class ConfigurationError(SeqSpaceError):
    """A request exceeds what the configured precision or limits can represent."""


class PsiTableTooShort(SeqSpaceError):
    pass


class NonMemberError(SeqSpaceError):
    """An operation required membership in a space and the input is not a member."""


class ConstructionError(SeqSpaceError):
    """A witness construction broke one of its own invariants."""


class SchemaError(SeqSpaceError):
    """Malformed JSON payload.  ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
