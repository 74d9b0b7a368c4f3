"""Loaders for the bundled demonstration lexicon and grammars."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .grammar import LocalGrammar, load_grammar
from .lexicon import Lexicon, load_categories, load_lexicon

GRAMMAR_FILES = {
    "de-ce-que-chain": "de_ce_que_chain.json",
    "subject-inversion": "subject_inversion.json",
    "ne-verb": "ne_verb.json",
    "ne-lui": "ne_lui.json",
    "preverb-pronouns": "preverb_pronouns.json",
    "de-le-and-inversion": "de_le_inversion.json",
    "aucun-pronoun": "aucun_pronoun.json",
}


def _data(name: str):
    return resources.files("locgram").joinpath("data", name)


def data_path(name: str) -> str:
    """Filesystem path of a bundled data file (for CLI invocations)."""
    return str(_data(name))


def categories_path() -> str:
    return data_path("categories.txt")


def lexicon_path() -> str:
    return data_path("french_core.dic")


def corpus_path() -> str:
    return data_path("demo_corpus.txt")


def grammar_path(name: str) -> str:
    return data_path(GRAMMAR_FILES[name])


@lru_cache(maxsize=None)
def core_categories() -> tuple[str, ...]:
    return load_categories(_data("categories.txt").read_text(encoding="utf-8").splitlines())


@lru_cache(maxsize=None)
def core_lexicon() -> Lexicon:
    lines = _data("french_core.dic").read_text(encoding="utf-8").splitlines()
    return load_lexicon(lines, core_categories())


@lru_cache(maxsize=None)
def grammar(name: str) -> LocalGrammar:
    text = _data(GRAMMAR_FILES[name]).read_text(encoding="utf-8")
    return load_grammar(text, core_categories())
