"""Exception hierarchy shared across the package."""


class SkillmatchError(Exception):
    """Base class for all errors raised by skillmatch."""


class ValidationError(SkillmatchError, ValueError):
    """Input data failed a schema or invariant check."""


class NotFoundError(SkillmatchError, KeyError):
    """A requested document, concept or word does not exist."""

    def __str__(self):
        # KeyError quotes its argument; keep messages readable.
        return str(self.args[0]) if self.args else ""
