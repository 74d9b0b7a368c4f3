"""Morphological lexicon, tokenizer, and initial-tagging lattice builder.

Lexicon files are UTF-8, one entry per line:

    surface,lemma.CAT(;SUB)*([+TRAIT])*(:FEATS)*

``#`` starts a comment line.  Compound entries write both surface and lemma
with spaces; the lemma is stored ``/``-joined.  Several ``:FEATS`` groups
are alternatives, each expanding to one complete tag:

    suis,suivre.V:P1s:P2s:Y2s
    sur le moment,sur le moment.ADV;PDETC

The category inventory is a separate file, one main code per line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import LexiconFormatError, UnknownWordError
from .lattice import Lattice
from .tags import (
    Category,
    CompleteTag,
    FeatureSet,
    SEPARATOR_CHARS,
    Separator,
    parse_category,
    parse_features,
)

_TOKEN_RE = re.compile(rf"[^\s{re.escape(SEPARATOR_CHARS)}]+|[{re.escape(SEPARATOR_CHARS)}]")


class TokenKind(Enum):
    WORD = "word"
    SEPARATOR = "separator"


@dataclass(frozen=True)
class Token:
    """One word or separator occurrence.

    ``lookup`` is the form used for dictionary consultation: the leading
    capital of the first word of a text is folded there, while ``text``
    preserves the original spelling.
    """

    text: str
    kind: TokenKind
    position: int
    lookup: str


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    surface_tokens: tuple[str, ...]
    lemma: str
    category: Category
    alternatives: tuple[FeatureSet, ...]  # empty means invariable

    @property
    def compound(self) -> bool:
        return len(self.surface_tokens) > 1


@dataclass(frozen=True)
class Lexicon:
    simple: Mapping[str, tuple[LexiconEntry, ...]]
    compounds: Mapping[str, tuple[LexiconEntry, ...]]
    categories: tuple[str, ...]

    def lookup(self, surface: str) -> tuple[CompleteTag, ...]:
        """All complete tags for one simple surface form."""
        tags: list[CompleteTag] = []
        for entry in self.simple.get(surface, ()):
            tags.extend(expand_entry(entry))
        return tuple(tags)


def expand_entry(entry: LexiconEntry) -> tuple[CompleteTag, ...]:
    """One complete tag per feature alternative (one tag if invariable)."""
    alternatives = entry.alternatives or (frozenset(),)
    return tuple(
        CompleteTag(entry.surface, entry.lemma, entry.category, feats, entry.compound)
        for feats in alternatives
    )


def load_categories(lines: Iterable[str]) -> tuple[str, ...]:
    """Read the category inventory, one main code per line."""
    codes: list[str] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line not in codes:
            codes.append(line)
    if not codes:
        raise LexiconFormatError("empty category inventory")
    return tuple(codes)


def _parse_entry(line: str, line_no: int, categories: tuple[str, ...]) -> LexiconEntry:
    surface, comma, rest = line.partition(",")
    surface = surface.strip()
    if not comma or not surface:
        raise LexiconFormatError(f"line {line_no}: expected 'surface,lemma.CODES'")
    lemma_part, dot, codes = rest.strip().rpartition(".")
    if not dot or not lemma_part or not codes:
        raise LexiconFormatError(f"line {line_no}: expected 'lemma.CODES' after the comma")
    groups = codes.split(":")
    try:
        category = parse_category(groups[0], categories)
        alternatives = tuple(parse_features(g, validate=True) for g in groups[1:])
    except Exception as exc:
        raise LexiconFormatError(f"line {line_no}: {exc}") from exc
    surface_tokens = tuple(_TOKEN_RE.findall(surface))
    if not surface_tokens:
        raise LexiconFormatError(f"line {line_no}: empty surface form")
    lemma = "/".join(lemma_part.split())
    return LexiconEntry(surface, surface_tokens, lemma, category, alternatives)


def load_lexicon(lines: Iterable[str], categories: tuple[str, ...]) -> Lexicon:
    """Load entries, grouping simple words by surface and compounds by
    their first token.  Identical duplicate lines are silently dropped."""
    simple: dict[str, list[LexiconEntry]] = {}
    compounds: dict[str, list[LexiconEntry]] = {}
    seen: set[LexiconEntry] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entry = _parse_entry(line, line_no, categories)
        if entry in seen:
            continue
        seen.add(entry)
        table = compounds if entry.compound else simple
        table.setdefault(entry.surface_tokens[0], []).append(entry)
    return Lexicon(
        simple={k: tuple(v) for k, v in simple.items()},
        compounds={k: tuple(v) for k, v in compounds.items()},
        categories=categories,
    )


def tokenize(text: str) -> list[Token]:
    """Split on whitespace; apostrophes, hyphens, and sentence punctuation
    become separator tokens.  The first word's leading capital is folded
    into its lookup form."""
    tokens: list[Token] = []
    first_word_seen = False
    for position, piece in enumerate(_TOKEN_RE.findall(text)):
        if piece in SEPARATOR_CHARS and len(piece) == 1:
            tokens.append(Token(piece, TokenKind.SEPARATOR, position, piece))
            continue
        lookup = piece
        if not first_word_seen:
            first_word_seen = True
            if piece[0].isupper():
                lookup = piece[0].lower() + piece[1:]
        tokens.append(Token(piece, TokenKind.WORD, position, lookup))
    return tokens


def compound_matches(tokens: list[Token], start: int, lexicon: Lexicon) -> list[LexiconEntry]:
    """Compound entries whose token sequence matches the stream at ``start``.

    Matching compares token by token, so a compound never crosses a
    separator unless its own surface includes that separator.
    """
    matches: list[LexiconEntry] = []
    for entry in lexicon.compounds.get(tokens[start].lookup, ()):
        k = len(entry.surface_tokens)
        if start + k > len(tokens):
            continue
        if all(tokens[start + j].lookup == entry.surface_tokens[j] for j in range(k)):
            matches.append(entry)
    return matches


def build_initial_lattice(tokens: list[Token], lexicon: Lexicon) -> Lattice:
    """Dictionary consultation: one edge per analysis.

    States are token boundaries 0..n.  Every feature alternative of every
    simple entry yields an edge over one token; compound entries span their
    whole token range as parallel branches; separators carry themselves.
    Unknown words abort (guessing would risk eliminating the correct
    analysis later, so it is deliberately unsupported).
    """
    edges = []
    n = len(tokens)
    for token in tokens:
        i = token.position
        if token.kind is TokenKind.SEPARATOR:
            edges.append((i, i + 1, Separator(token.text)))
            continue
        entries = lexicon.simple.get(token.lookup)
        if not entries:
            raise UnknownWordError(token)
        for entry in entries:
            for tag in expand_entry(entry):
                if tag.surface != token.lookup:
                    tag = CompleteTag(token.lookup, tag.lemma, tag.category, tag.features, False)
                edges.append((i, i + 1, tag))
        for entry in compound_matches(tokens, i, lexicon):
            for tag in expand_entry(entry):
                edges.append((i, i + len(entry.surface_tokens), tag))
    return Lattice.build(initial=0, final=n, edges=edges, extra_states=range(n + 1))
