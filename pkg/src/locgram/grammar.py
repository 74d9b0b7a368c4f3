"""Local disambiguation grammars: finite transducers over incomplete tags.

Each transition carries an input pattern, used to select the text portions
the grammar applies to, and an output pattern, the constraint imposed on
those portions.  Grammars are combined by giving them one shared initial
state and one shared final state; the acceptance rules then apply to the
combination as a whole, so combined grammars can behave unlike any member
taken alone.

Grammar documents are JSON::

    {"name": ..., "states": [...], "initial": ..., "finals": [...],
     "transitions": [{"from": ..., "to": ..., "in": ..., "out": ...}, ...]}

with ``in``/``out`` in tag notation.  Cycles are permitted; application to
a sentence is bounded by the sentence length.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import GrammarFormatError
from .tags import (
    AnyWord,
    CategoryPattern,
    IncompleteTag,
    LemmaPattern,
    Separator,
    SurfaceForm,
    parse_incomplete_tag,
)


@dataclass(frozen=True)
class Transition:
    src: Hashable
    dst: Hashable
    inp: IncompleteTag
    out: IncompleteTag


@dataclass(frozen=True)
class LocalGrammar:
    name: str
    states: tuple[Hashable, ...]
    initial: Hashable
    finals: frozenset
    transitions: tuple[Transition, ...]

    def by_source(self) -> dict[Hashable, tuple[Transition, ...]]:
        table: dict[Hashable, list[Transition]] = {s: [] for s in self.states}
        for t in self.transitions:
            table[t.src].append(t)
        return {s: tuple(ts) for s, ts in table.items()}


class GrammarClass(enum.IntEnum):
    """Which acceptance rule is available, from most to least special."""

    SIMPLE_INPUTS = 1
    OUTPUT_IMPLIES_INPUT = 2
    GENERAL = 3


def _validate(g: LocalGrammar) -> LocalGrammar:
    states = set(g.states)
    if g.initial not in states:
        raise GrammarFormatError(f"initial state {g.initial!r} not declared")
    if not g.finals:
        raise GrammarFormatError("grammar has no final state")
    if not g.finals <= states:
        raise GrammarFormatError("final states must be declared states")
    for t in g.transitions:
        if t.src not in states or t.dst not in states:
            raise GrammarFormatError(f"transition endpoint not declared: {t.src!r} -> {t.dst!r}")
    by_source = g.by_source()
    reached = {g.initial}
    stack = [g.initial]
    while stack:
        for t in by_source[stack.pop()]:
            if t.dst not in reached:
                reached.add(t.dst)
                stack.append(t.dst)
    if reached != states:
        missing = sorted(map(str, states - reached))
        raise GrammarFormatError(f"unreachable states: {', '.join(missing)}")
    incoming: dict[Hashable, list[Hashable]] = {s: [] for s in g.states}
    for t in g.transitions:
        incoming[t.dst].append(t.src)
    coreached = set(g.finals)
    stack = list(g.finals)
    while stack:
        for src in incoming[stack.pop()]:
            if src not in coreached:
                coreached.add(src)
                stack.append(src)
    if coreached != states:
        missing = sorted(map(str, states - coreached))
        raise GrammarFormatError(f"states reaching no final state: {', '.join(missing)}")
    return g


def load_grammar(text: str, categories: Iterable[str]) -> LocalGrammar:
    """Parse and validate a grammar document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarFormatError(f"invalid JSON: {exc}") from exc
    try:
        name = doc["name"]
        states = tuple(doc["states"])
        initial = doc["initial"]
        finals = frozenset(doc["finals"])
        raw_transitions = doc["transitions"]
    except (KeyError, TypeError) as exc:
        raise GrammarFormatError(f"missing grammar field: {exc}") from exc
    categories = tuple(categories)
    transitions = []
    for item in raw_transitions:
        try:
            inp = parse_incomplete_tag(item["in"], categories)
            out = parse_incomplete_tag(item["out"], categories)
        except Exception as exc:
            raise GrammarFormatError(f"bad transition label in {item!r}: {exc}") from exc
        transitions.append(Transition(item["from"], item["to"], inp, out))
    return _validate(LocalGrammar(name, states, initial, finals, tuple(transitions)))


def dumps_grammar(g: LocalGrammar) -> str:
    doc = {
        "name": g.name,
        "states": list(g.states),
        "initial": g.initial,
        "finals": sorted(g.finals, key=str),
        "transitions": [
            {"from": t.src, "to": t.dst, "in": t.inp.notation(), "out": t.out.notation()}
            for t in g.transitions
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def union(grammars: Sequence[LocalGrammar]) -> LocalGrammar:
    """Combine grammars by identifying all their initial states as one
    state and all their final states as one shared final state."""
    if not grammars:
        raise ValueError("union of no grammars")

    def rename(i: int, g: LocalGrammar, s: Hashable) -> Hashable:
        if s == g.initial:
            return "I"
        if s in g.finals:
            return "F"
        return (f"g{i}", s)

    states: list[Hashable] = ["I"]
    finals: set[Hashable] = set()
    transitions: list[Transition] = []
    for i, g in enumerate(grammars):
        if g.initial in g.finals:
            finals.add("I")
        for s in g.states:
            renamed = rename(i, g, s)
            if renamed not in states:
                states.append(renamed)
            if renamed == "F":
                finals.add("F")
        for t in g.transitions:
            transitions.append(
                Transition(rename(i, g, t.src), rename(i, g, t.dst), t.inp, t.out)
            )
    name = "|".join(g.name for g in grammars)
    combined = LocalGrammar(name, tuple(states), "I", frozenset(finals), tuple(transitions))
    return _validate(combined)


def output_implies_input(inp: IncompleteTag, out: IncompleteTag) -> bool:
    """Sound syntactic test that every complete tag conforming to ``out``
    conforms to ``inp``: equal patterns, a same-variant pattern whose
    constraints are a subset of the output's, or the universal simple-word
    pattern against an output that only matches simple words.  Incomplete
    by design; a miss only demotes the grammar to the general rule."""
    if inp == out:
        return True
    if isinstance(inp, AnyWord):
        return isinstance(out, (SurfaceForm, AnyWord))
    if isinstance(inp, CategoryPattern) and isinstance(out, CategoryPattern):
        return inp.main == out.main and inp.features <= out.features
    if isinstance(inp, LemmaPattern) and isinstance(out, LemmaPattern):
        return inp.lemma == out.lemma and inp.features <= out.features
    return False


def classify(g: LocalGrammar) -> GrammarClass:
    """Deterministic classification from the transitions alone."""
    if all(isinstance(t.inp, (SurfaceForm, Separator)) for t in g.transitions):
        return GrammarClass.SIMPLE_INPUTS
    if all(
        isinstance(t.inp, (SurfaceForm, Separator)) or output_implies_input(t.inp, t.out)
        for t in g.transitions
    ):
        return GrammarClass.OUTPUT_IMPLIES_INPUT
    return GrammarClass.GENERAL


def input_sequences(g: LocalGrammar, max_len: int) -> frozenset:
    """All input label sequences along initial-to-final paths of length at
    most ``max_len`` (cycles are unrolled up to the bound)."""
    by_source = g.by_source()
    found: set[tuple] = set()

    def walk(state: Hashable, acc: tuple) -> None:
        if state in g.finals:
            found.add(acc)
        if len(acc) >= max_len:
            return
        for t in by_source[state]:
            walk(t.dst, acc + (t.inp,))

    walk(g.initial, ())
    return frozenset(found)


def path_label_pairs(g: LocalGrammar, max_len: int) -> frozenset:
    """All (input, output) pair sequences along initial-to-final paths of
    length at most ``max_len``; the language the union laws speak about."""
    by_source = g.by_source()
    found: set[tuple] = set()

    def walk(state: Hashable, acc: tuple) -> None:
        if state in g.finals:
            found.add(acc)
        if len(acc) >= max_len:
            return
        for t in by_source[state]:
            walk(t.dst, acc + ((t.inp, t.out),))

    walk(g.initial, ())
    return frozenset(found)


def to_dot(g: LocalGrammar) -> str:
    """Deterministic DOT rendering with ``in / out`` edge labels."""
    names = {s: str(s) for s in g.states}
    lines = [
        "digraph grammar {",
        "  rankdir=LR;",
        "  node [shape=circle];",
        f'  "{names[g.initial]}" [style=bold];',
    ]
    for s in sorted(g.finals, key=str):
        lines.append(f'  "{names[s]}" [shape=doublecircle];')
    rendered = sorted(
        (names[t.src], names[t.dst], f"{t.inp.notation()} / {t.out.notation()}")
        for t in g.transitions
    )
    for src, dst, label in rendered:
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
