"""Acceptance of tag sequences under a grammar, lattice filtering, and
zero-silence checking.

A complete tag sequence (a lattice path) is accepted when it can be cut
into consecutive, non-overlapping portions of two kinds:

* a *matched portion* follows one initial-to-final transducer path,
  conforming edge by edge to the output labels, while some tagging of the
  same text span conforms to the paired input labels;
* a *free portion* is one single edge such that no tagging of the text
  starting there conforms to any complete input sequence of the grammar.

The free-portion condition looks beyond the tag at hand: it quantifies
over every analysis the lattice still admits from that state.  Filtering
therefore never eliminates a sequence the grammar accepts, whatever the
other sequences are.

Two restricted rules are available when the grammar's shape allows them:
with only surface-form inputs the matched portion may check the portion's
own tags against the inputs directly, and the same shortcut is sound
whenever conformity to each output implies conformity to its input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from .errors import CorpusFormatError, EnumerationOverflow
from .grammar import GrammarClass, LocalGrammar, classify
from .lattice import (
    DEFAULT_PATH_LIMIT,
    Edge,
    Lattice,
    Path,
    enumerate_paths,
    path_labels,
    trim,
)
from .lexicon import Lexicon, build_initial_lattice, tokenize
from .tags import (
    CompleteTag,
    EdgeLabel,
    IncompleteTag,
    Separator,
    SurfaceForm,
    conforms,
    parse_complete_tag,
)

MatchableIndex = dict  # lattice state -> bool


@dataclass(frozen=True)
class MatchedBlock:
    """A transducer-covered portion: edge positions [start, end) of the
    path, with the (input, output) pair consumed at each position."""

    start: int
    end: int
    pairs: tuple


@dataclass(frozen=True)
class FreeBlock:
    """A single-edge portion at this path position."""

    position: int


Block = Union[MatchedBlock, FreeBlock]


@dataclass(frozen=True)
class Decomposition:
    """A witness partition of a path into matched and free portions."""

    blocks: tuple


def _match_index(l: Lattice, g: LocalGrammar, match: Callable) -> MatchableIndex:
    """For each lattice state: does some path from it match a complete
    input sequence of the grammar, edge by edge, under ``match``?

    Product reachability over (lattice state, grammar state); the lattice
    is acyclic, so grammar cycles are bounded by the remaining depth.
    """
    by_source = l.edges_by_source
    transitions = g.by_source()
    memo: dict[tuple, bool] = {}

    def walk(q: int, t) -> bool:
        if t in g.finals:
            return True
        key = (q, t)
        if key in memo:
            return memo[key]
        memo[key] = False
        result = any(
            match(e.label, tr.inp) and walk(e.dst, tr.dst)
            for e in by_source[q]
            for tr in transitions[t]
        )
        memo[key] = result
        return result

    return {q: walk(q, g.initial) for q in range(l.n_states)}


def matchable(l: Lattice, g: LocalGrammar) -> MatchableIndex:
    """States from which some admitted tagging conforms to a complete
    input sequence of the grammar."""
    return _match_index(l, g, conforms)


def _surface_match(label: EdgeLabel, pattern: IncompleteTag) -> bool:
    # Text-level matching, for grammars whose inputs are all literal:
    # only the written form matters, not the analysis carried by the edge.
    if isinstance(pattern, Separator):
        return label == pattern
    if isinstance(pattern, SurfaceForm):
        return isinstance(label, CompleteTag) and label.surface == pattern.form
    return False


def surface_matchable(l: Lattice, g: LocalGrammar) -> MatchableIndex:
    """States from which the raw text matches some input sequence."""
    return _match_index(l, g, _surface_match)


def _check_path(l: Lattice, p: Sequence[Edge]) -> tuple:
    edges = tuple(p)
    edge_set = set(l.edges)
    if not edges:
        if l.initial != l.final:
            raise ValueError("empty sequence is not a path of this lattice")
        return edges
    if edges[0].src != l.initial or edges[-1].dst != l.final:
        raise ValueError("sequence does not join the initial state to the final state")
    for a, b in zip(edges, edges[1:]):
        if a.dst != b.src:
            raise ValueError("sequence edges are not consecutive")
    for e in edges:
        if e not in edge_set:
            raise ValueError(f"edge {e!r} does not belong to the lattice")
    return edges


def _decompose(
    g: LocalGrammar,
    p: Sequence[Edge],
    l: Lattice,
    *,
    use_witness: bool,
    index: MatchableIndex,
) -> Decomposition | None:
    """Dynamic programming over path positions.  Matched portions check the
    path's own tags against inputs, or (``use_witness``) any same-span edge
    of the lattice, which realizes equivalence: same text, same
    delimitation.  Any valid partition suffices."""
    edges = _check_path(l, p)
    m = len(edges)
    spans = l.labels_by_span if use_witness else None
    transitions = g.by_source()

    def step_ok(tr, e: Edge) -> bool:
        if use_witness:
            return conforms(e.label, tr.out) and any(
                conforms(w, tr.inp) for w in spans[(e.src, e.dst)]
            )
        return conforms(e.label, tr.inp) and conforms(e.label, tr.out)

    def blocks_from(i: int):
        # transducer paths consuming edges i.. ; yields (end, pairs) in
        # deterministic discovery order; one visit per (position, state)
        found = []
        visited = {(i, g.initial)}
        stack = [(i, g.initial, ())]
        while stack:
            pos, t, pairs = stack.pop()
            if t in g.finals and pos > i:
                found.append((pos, pairs))
            if pos >= m:
                continue
            e = edges[pos]
            for tr in reversed(transitions[t]):
                if (pos + 1, tr.dst) in visited:
                    continue
                if step_ok(tr, e):
                    visited.add((pos + 1, tr.dst))
                    stack.append((pos + 1, tr.dst, pairs + ((tr.inp, tr.out),)))
        found.sort(key=lambda item: item[0])
        return found

    memo: dict[int, tuple | None] = {m: ()}

    def solve(i: int):
        if i in memo:
            return memo[i]
        memo[i] = None
        result = None
        if not index[edges[i].src]:
            rest = solve(i + 1)
            if rest is not None:
                result = (FreeBlock(i),) + rest
        if result is None:
            for end, pairs in blocks_from(i):
                rest = solve(end)
                if rest is not None:
                    result = (MatchedBlock(i, end, pairs),) + rest
                    break
        memo[i] = result
        return result

    blocks = solve(0)
    return Decomposition(blocks) if blocks is not None else None


def decompose(g: LocalGrammar, p: Path, l: Lattice) -> Decomposition | None:
    """Witness partition under the general rule, or None when rejected."""
    return _decompose(g, p, l, use_witness=True, index=matchable(l, g))


def accepts(g: LocalGrammar, p: Path, l: Lattice) -> bool:
    """General acceptance rule; ``p`` must be a path of ``l``."""
    return decompose(g, p, l) is not None


def accepts_case_a(g: LocalGrammar, p: Path, l: Lattice) -> bool:
    """Restricted rule for grammars whose inputs are all literal forms:
    matched portions check their own tags against input and output, free
    portions require the raw text to match no input sequence."""
    if classify(g) is not GrammarClass.SIMPLE_INPUTS:
        raise ValueError("rule requires a grammar with only surface-form inputs")
    index = surface_matchable(l, g)
    return _decompose(g, p, l, use_witness=False, index=index) is not None


def accepts_case_b(g: LocalGrammar, p: Path, l: Lattice) -> bool:
    """Restricted rule for grammars where conformity to each output label
    implies conformity to its input label (literal inputs included)."""
    if classify(g) is GrammarClass.GENERAL:
        raise ValueError("rule requires output labels that imply their input labels")
    index = matchable(l, g)
    return _decompose(g, p, l, use_witness=False, index=index) is not None


_FREE = None  # product mode marker for "between portions"


def filter(g: LocalGrammar, l: Lattice) -> Lattice:
    """Trim lattice whose paths are exactly the accepted paths of ``l``.

    Product of the lattice with the portion structure: states are
    (lattice state, mode) where mode is free or an in-portion transducer
    state; free moves need an unmatchable source state, portion moves
    follow the transducer checking outputs against the edge and inputs
    against same-span edges of the original lattice.  An empty result is
    permitted; callers can test ``is_empty_language``.
    """
    index = matchable(l, g)
    spans = l.labels_by_span
    transitions = g.by_source()
    by_source = l.edges_by_source

    def portion_steps(t, e: Edge):
        for tr in transitions[t]:
            if conforms(e.label, tr.out) and any(conforms(w, tr.inp) for w in spans[(e.src, e.dst)]):
                yield tr.dst

    start = (l.initial, _FREE)
    goal = (l.final, _FREE)
    product_edges = []
    seen = {start}
    worklist = [start]
    while worklist:
        q, mode = worklist.pop(0)
        for e in by_source[q]:
            targets = []
            if mode is _FREE:
                if not index[q]:
                    targets.append((e.dst, _FREE))
                source_state = g.initial
            else:
                source_state = mode
            for t in portion_steps(source_state, e):
                targets.append((e.dst, t))
                if t in g.finals:
                    targets.append((e.dst, _FREE))
            for target in targets:
                product_edges.append(((q, mode), target, e.label))
                if target not in seen:
                    seen.add(target)
                    worklist.append(target)
    built = Lattice.build(start, goal, product_edges, extra_states=(start, goal))
    return trim(built)


def filter_oracle(g: LocalGrammar, l: Lattice, limit: int = DEFAULT_PATH_LIMIT) -> Lattice:
    """Brute-force reference: enumerate every path, keep the accepted ones,
    and rebuild a lattice as the trie union of the survivors."""
    enum = enumerate_paths(l, limit)
    if enum.truncated:
        raise EnumerationOverflow(f"more than {limit} paths")
    index = matchable(l, g)
    survivors = [
        path_labels(p)
        for p in enum.paths
        if _decompose(g, p, l, use_witness=True, index=index) is not None
    ]
    return _trie_lattice(survivors)


def _trie_lattice(sequences: Iterable[tuple]) -> Lattice:
    sequences = list(sequences)
    if not sequences:
        return Lattice.build(0, 1, [], extra_states=(0, 1))
    if sequences == [()]:
        return Lattice.build(0, 0, [])
    root = ()
    edges = []
    children: dict[tuple, dict] = {}
    for seq in sequences:
        node = root
        for i, label in enumerate(seq):
            if i == len(seq) - 1:
                edges.append((node, "END", label))
            else:
                node_children = children.setdefault(node, {})
                if label not in node_children:
                    node_children[label] = node + (label,)
                child = node_children[label]
                edges.append((node, child, label))
                node = child
    deduped = []
    seen = set()
    for edge in edges:
        if edge not in seen:
            seen.add(edge)
            deduped.append(edge)
    return Lattice.build(root, "END", deduped)


@dataclass(frozen=True)
class CorpusItem:
    sentence_id: str
    text: str
    gold: str  # tag sequence in notation


@dataclass(frozen=True)
class SilenceViolation:
    sentence_id: str
    span: tuple
    grammar: str


@dataclass(frozen=True)
class SilenceReport:
    violations: tuple
    corpus_errors: tuple

    def lines(self) -> list[str]:
        out = [
            f"SILENCE {v.sentence_id} {v.span[0]}-{v.span[1]} {v.grammar}"
            for v in self.violations
        ]
        out.extend(f"CORPUS-ERROR {sid} {message}" for sid, message in self.corpus_errors)
        return out


def parse_tag_sequence(text: str, categories: Iterable[str]) -> list[EdgeLabel]:
    """Parse a whitespace-separated sequence of complete tags and bare
    separator characters, e.g. ``<faire V:P3s> - <il PRO:3ms>``."""
    labels: list[EdgeLabel] = []
    for piece in re.findall(r"<[^<>]*>|\S", text):
        if piece.startswith("<"):
            labels.append(parse_complete_tag(piece, categories))
        elif len(piece) == 1:
            labels.append(Separator(piece))
        else:
            raise CorpusFormatError(f"unparsable sequence item {piece!r}")
    return labels


def _label_matches_gold(edge_label: EdgeLabel, gold: EdgeLabel) -> bool:
    # Gold tags carry lemma-derived surfaces; match on the analysis proper.
    if isinstance(gold, Separator) or isinstance(edge_label, Separator):
        return edge_label == gold
    return (
        edge_label.lemma == gold.lemma
        and edge_label.category == gold.category
        and edge_label.features == gold.features
    )


def resolve_tag_sequence(l: Lattice, labels: Sequence[EdgeLabel]) -> Path | None:
    """Find a lattice path whose edges carry the given analyses, matching
    separators literally and tags by lemma, category, and features."""
    by_source = l.edges_by_source

    def walk(q: int, i: int, acc: list) -> Path | None:
        if i == len(labels):
            return tuple(acc) if q == l.final else None
        for e in by_source[q]:
            if _label_matches_gold(e.label, labels[i]):
                acc.append(e)
                found = walk(e.dst, i + 1, acc)
                acc.pop()
                if found is not None:
                    return found
        return None

    return walk(l.initial, 0, [])


def _failure_span(g: LocalGrammar, p: Path, l: Lattice) -> tuple:
    """Diagnostic for a rejected path: the furthest position reachable by
    valid portions, extended over the longest portion attempt stuck there."""
    edges = tuple(p)
    m = len(edges)
    index = matchable(l, g)
    spans = l.labels_by_span
    transitions = g.by_source()

    reach = {0}
    worklist = [0]
    while worklist:
        i = worklist.pop()
        if i >= m:
            continue
        nxt = []
        if not index[edges[i].src]:
            nxt.append(i + 1)
        visited = {(i, g.initial)}
        stack = [(i, g.initial)]
        while stack:
            pos, t = stack.pop()
            if t in g.finals and pos > i:
                nxt.append(pos)
            if pos >= m:
                continue
            e = edges[pos]
            for tr in transitions[t]:
                ok = conforms(e.label, tr.out) and any(
                    conforms(w, tr.inp) for w in spans[(e.src, e.dst)]
                )
                if ok and (pos + 1, tr.dst) not in visited:
                    visited.add((pos + 1, tr.dst))
                    stack.append((pos + 1, tr.dst))
        for j in nxt:
            if j not in reach:
                reach.add(j)
                worklist.append(j)
    stuck = max(reach)
    touched = stuck  # last edge position examined by a portion attempt
    visited = {(stuck, g.initial)}
    stack = [(stuck, g.initial)]
    while stack:
        pos, t = stack.pop()
        if pos >= m:
            continue
        touched = max(touched, pos)
        e = edges[pos]
        for tr in transitions[t]:
            ok = conforms(e.label, tr.out) and any(
                conforms(w, tr.inp) for w in spans[(e.src, e.dst)]
            )
            if ok and (pos + 1, tr.dst) not in visited:
                visited.add((pos + 1, tr.dst))
                stack.append((pos + 1, tr.dst))
    return (stuck, touched + 1)


def silence_check(g: LocalGrammar, corpus: Sequence[CorpusItem], lexicon: Lexicon) -> SilenceReport:
    """Report every corpus item whose gold tagging the grammar rejects.

    A gold sequence that is no path of its sentence's initial lattice is a
    corpus error, not silence.
    """
    violations = []
    errors = []
    for item in corpus:
        try:
            tokens = tokenize(item.text)
            l = build_initial_lattice(tokens, lexicon)
            labels = parse_tag_sequence(item.gold, lexicon.categories)
        except Exception as exc:
            errors.append((item.sentence_id, str(exc)))
            continue
        path = resolve_tag_sequence(l, labels)
        if path is None:
            errors.append((item.sentence_id, "gold tagging is not admitted by the lexicon"))
            continue
        if decompose(g, path, l) is None:
            violations.append(SilenceViolation(item.sentence_id, _failure_span(g, path, l), g.name))
    return SilenceReport(tuple(violations), tuple(errors))


def load_corpus(lines: Iterable[str]) -> list[CorpusItem]:
    """Parse the flat corpus format: alternating ``T:`` text lines and
    ``G:`` gold tag sequence lines."""
    items = []
    pending_text = None
    count = 0
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("T:"):
            if pending_text is not None:
                raise CorpusFormatError(f"line {line_no}: text line without a gold line before it")
            pending_text = line[2:].strip()
        elif line.startswith("G:"):
            if pending_text is None:
                raise CorpusFormatError(f"line {line_no}: gold line without a preceding text line")
            count += 1
            items.append(CorpusItem(f"s{count}", pending_text, line[2:].strip()))
            pending_text = None
        else:
            raise CorpusFormatError(f"line {line_no}: expected 'T:' or 'G:'")
    if pending_text is not None:
        raise CorpusFormatError("corpus ends with a text line missing its gold line")
    return items
