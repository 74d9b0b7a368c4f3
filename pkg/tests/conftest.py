import pytest

from locgram import build_initial_lattice, fixtures, tokenize
from locgram.engine import parse_tag_sequence, resolve_tag_sequence

SENTENCES = {
    "confirm-chain": "Cela vient de ce que je ne me le suis pas fait confirmer aussitôt",
    "accounts": "Ne fait-il les comptes que pour rendre service ?",
    "tell-him": "Ne lui dis pas",
    "pressing": "Pourquoi me pressent-il de le lui dire ?",
    "limit": "Mais aucun ne peut dépasser cette limite",
    "railway": "Il traverse le chemin de fer.",
    "moment": "Je ne me le suis pas fait confirmer sur le moment",
}


@pytest.fixture(scope="session")
def categories():
    return fixtures.core_categories()


@pytest.fixture(scope="session")
def lexicon():
    return fixtures.core_lexicon()


@pytest.fixture(scope="session")
def grammars():
    return {name: fixtures.grammar(name) for name in fixtures.GRAMMAR_FILES}


@pytest.fixture(scope="session")
def lattices(lexicon):
    return {
        key: build_initial_lattice(tokenize(text), lexicon)
        for key, text in SENTENCES.items()
    }


@pytest.fixture(scope="session")
def find_path(categories):
    def _find(lattice, sequence_text):
        labels = parse_tag_sequence(sequence_text, categories)
        path = resolve_tag_sequence(lattice, labels)
        assert path is not None, f"sequence is not a path: {sequence_text}"
        return path

    return _find
