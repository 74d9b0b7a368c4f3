"""Exception types shared across the package."""


class TagFormatError(ValueError):
    """Malformed tag notation."""


class LexiconFormatError(ValueError):
    """Malformed lexicon or category-inventory line."""


class UnknownWordError(LookupError):
    """A word token has no lexicon entry; initial tagging cannot proceed."""

    def __init__(self, token):
        self.token = token
        super().__init__(f"unknown word {token.text!r} at position {token.position}")


class LatticeFormatError(ValueError):
    """Invalid lattice structure or serialization."""


class GrammarFormatError(ValueError):
    """Invalid grammar document or structure."""


class CorpusFormatError(ValueError):
    """Malformed corpus file."""


class EnumerationOverflow(RuntimeError):
    """A path enumeration exceeded the configured limit."""
