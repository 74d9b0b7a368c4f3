"""Acyclic automata over tag-labeled edges.

A lattice has one initial and one final state and represents the finite
set of tag sequences currently admitted for a text.  Edge labels are
complete tags or separators and are treated as opaque symbols: two labels
are the same symbol only when structurally equal, surface included.
Ambiguity reduction may shrink the path set while the number of states
and transitions grows or shrinks independently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import EnumerationOverflow, LatticeFormatError
from .tags import EdgeLabel, Separator, label_sort_key, parse_complete_tag

DEFAULT_PATH_LIMIT = 100_000


class Edge(NamedTuple):
    src: int
    dst: int
    label: EdgeLabel


Path = tuple  # consecutive edges from the initial to the final state


@dataclass(frozen=True)
class PathEnumeration:
    paths: tuple[Path, ...]
    truncated: bool


@dataclass(frozen=True)
class Lattice:
    n_states: int
    initial: int
    final: int
    edges: tuple[Edge, ...]

    @classmethod
    def build(
        cls,
        initial: Hashable,
        final: Hashable,
        edges: Iterable[tuple[Hashable, Hashable, EdgeLabel]],
        extra_states: Iterable[Hashable] = (),
    ) -> "Lattice":
        """Construct from arbitrary hashable states, renumbering them in a
        deterministic topological order.  Raises on cycles."""
        edges = list(edges)
        order: list[Hashable] = []
        seen: set[Hashable] = set()
        for state in [initial, *(s for e in edges for s in (e[0], e[1])), final, *extra_states]:
            if state not in seen:
                seen.add(state)
                order.append(state)
        indegree = {s: 0 for s in order}
        outgoing: dict[Hashable, list[tuple[Hashable, Hashable, EdgeLabel]]] = {s: [] for s in order}
        for e in edges:
            indegree[e[1]] += 1
            outgoing[e[0]].append(e)
        ready = [s for s in order if indegree[s] == 0]
        topo: list[Hashable] = []
        while ready:
            state = ready.pop(0)
            topo.append(state)
            for e in outgoing[state]:
                indegree[e[1]] -= 1
                if indegree[e[1]] == 0:
                    ready.append(e[1])
        if len(topo) != len(order):
            raise LatticeFormatError("lattice has a cycle")
        number = {s: i for i, s in enumerate(topo)}
        renumbered = sorted(
            (Edge(number[e[0]], number[e[1]], e[2]) for e in edges),
            key=lambda e: (e.src, e.dst, label_sort_key(e.label)),
        )
        return cls(len(topo), number[initial], number[final], tuple(renumbered))

    @cached_property
    def edges_by_source(self) -> dict[int, tuple[Edge, ...]]:
        table: dict[int, list[Edge]] = {q: [] for q in range(self.n_states)}
        for e in self.edges:
            table[e.src].append(e)
        return {q: tuple(es) for q, es in table.items()}

    @cached_property
    def labels_by_span(self) -> dict[tuple[int, int], tuple[EdgeLabel, ...]]:
        table: dict[tuple[int, int], list[EdgeLabel]] = {}
        for e in self.edges:
            table.setdefault((e.src, e.dst), []).append(e.label)
        return {span: tuple(labels) for span, labels in table.items()}

    def is_empty_language(self) -> bool:
        """True when no path joins the initial to the final state."""
        return self.final not in _forward_reachable(self)

    def accepts_empty_path(self) -> bool:
        return self.initial == self.final


def _forward_reachable(l: Lattice) -> set[int]:
    reached = {l.initial}
    stack = [l.initial]
    while stack:
        q = stack.pop()
        for e in l.edges_by_source[q]:
            if e.dst not in reached:
                reached.add(e.dst)
                stack.append(e.dst)
    return reached


def _backward_reachable(l: Lattice) -> set[int]:
    incoming: dict[int, list[int]] = {q: [] for q in range(l.n_states)}
    for e in l.edges:
        incoming[e.dst].append(e.src)
    reached = {l.final}
    stack = [l.final]
    while stack:
        q = stack.pop()
        for p in incoming[q]:
            if p not in reached:
                reached.add(p)
                stack.append(p)
    return reached


def path_labels(path: Sequence[Edge]) -> tuple[EdgeLabel, ...]:
    return tuple(e.label for e in path)


def enumerate_paths(l: Lattice, limit: int = DEFAULT_PATH_LIMIT) -> PathEnumeration:
    """All initial-to-final paths in lexicographic edge order, truncated at
    ``limit`` with the overflow flag set."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    paths: list[Path] = []
    truncated = False

    def walk(q: int, acc: list[Edge]) -> bool:
        nonlocal truncated
        if q == l.final:
            if len(paths) >= limit:
                truncated = True
                return False
            paths.append(tuple(acc))
        for e in l.edges_by_source[q]:
            acc.append(e)
            keep_going = walk(e.dst, acc)
            acc.pop()
            if not keep_going:
                return False
        return True

    walk(l.initial, [])
    return PathEnumeration(tuple(paths), truncated)


def language(l: Lattice, limit: int = DEFAULT_PATH_LIMIT) -> frozenset:
    """The set of path label sequences.  Raises on enumeration overflow."""
    enum = enumerate_paths(l, limit)
    if enum.truncated:
        raise EnumerationOverflow(f"more than {limit} paths")
    return frozenset(path_labels(p) for p in enum.paths)


def language_equal(a: Lattice, b: Lattice, limit: int = DEFAULT_PATH_LIMIT) -> bool:
    return language(a, limit) == language(b, limit)


def trim(l: Lattice) -> Lattice:
    """Drop states and edges on no accepting path; the language is
    unchanged.  The initial and final states are always retained."""
    useful = _forward_reachable(l) & _backward_reachable(l)
    edges = [e for e in l.edges if e.src in useful and e.dst in useful]
    keep = sorted(useful | {l.initial, l.final})
    return Lattice.build(l.initial, l.final, edges, extra_states=keep)


def minimize(l: Lattice) -> Lattice:
    """Deterministic minimal acyclic automaton with the same path label
    sequence set: subset construction, then merging of states with equal
    right languages.

    Lattices anchored on token boundaries have prefix-free path label sets;
    for other inputs whose minimal automaton would need a final state with
    outgoing edges, this raises rather than silently changing the language.
    """
    l = trim(l)
    if l.is_empty_language() and not l.accepts_empty_path():
        return Lattice.build(0, 1, [], extra_states=(0, 1))

    start = frozenset({l.initial})
    subset_edges: list[tuple[frozenset, frozenset, EdgeLabel]] = []
    subsets: list[frozenset] = [start]
    worklist = [start]
    seen = {start}
    while worklist:
        subset = worklist.pop(0)
        moves: dict[EdgeLabel, set[int]] = {}
        for q in subset:
            for e in l.edges_by_source[q]:
                moves.setdefault(e.label, set()).add(e.dst)
        for label in sorted(moves, key=label_sort_key):
            target = frozenset(moves[label])
            subset_edges.append((subset, target, label))
            if target not in seen:
                seen.add(target)
                subsets.append(target)
                worklist.append(target)

    outgoing: dict[frozenset, list[tuple[EdgeLabel, frozenset]]] = {s: [] for s in subsets}
    for src, dst, label in subset_edges:
        outgoing[src].append((label, dst))
    is_final = {s: l.final in s for s in subsets}

    # Merge bottom-up: states with equal finality and identical outgoing
    # signatures (after merging their targets) share one representative.
    order = _subset_topo_order(subsets, subset_edges)
    representative: dict[frozenset, frozenset] = {}
    by_signature: dict[tuple, frozenset] = {}
    for subset in reversed(order):
        signature = (
            is_final[subset],
            tuple(
                sorted(
                    (label_sort_key(lab), _subset_key(representative[dst]))
                    for lab, dst in outgoing[subset]
                )
            ),
        )
        if signature in by_signature:
            representative[subset] = by_signature[signature]
        else:
            by_signature[signature] = subset
            representative[subset] = subset

    final_classes = {representative[s] for s in subsets if is_final[s]}
    merged = _merged_edges(subset_edges, representative)
    if len(final_classes) != 1 or any(src in final_classes for src, _, _ in merged):
        raise LatticeFormatError("path label set is not prefix-free; cannot keep a single final state")
    return Lattice.build(representative[start], final_classes.pop(), merged)


def _merged_edges(subset_edges, representative):
    merged = []
    seen = set()
    for src, dst, label in subset_edges:
        edge = (representative[src], representative[dst], label)
        key = (_subset_key(edge[0]), _subset_key(edge[1]), label_sort_key(label))
        if key not in seen:
            seen.add(key)
            merged.append(edge)
    return merged


def _subset_key(subset: frozenset) -> tuple:
    return tuple(sorted(subset))


def _subset_topo_order(subsets, subset_edges):
    indegree = {s: 0 for s in subsets}
    outgoing = {s: [] for s in subsets}
    for src, dst, _ in subset_edges:
        indegree[dst] += 1
        outgoing[src].append(dst)
    ready = [s for s in subsets if indegree[s] == 0]
    order = []
    while ready:
        s = ready.pop(0)
        order.append(s)
        for t in outgoing[s]:
            indegree[t] -= 1
            if indegree[t] == 0:
                ready.append(t)
    if len(order) != len(subsets):
        raise LatticeFormatError("subset construction produced a cycle")
    return order


def to_dot(l: Lattice) -> str:
    """Render as a DOT digraph, one edge per transition.  Output is
    deterministic: byte-identical across runs for equal lattices."""
    lines = [
        "digraph lattice {",
        "  rankdir=LR;",
        "  node [shape=circle];",
        f"  {l.initial} [style=bold];",
        f"  {l.final} [shape=doublecircle];",
    ]
    for e in l.edges:
        label = e.label.notation().replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  {e.src} -> {e.dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(l: Lattice) -> str:
    doc = {
        "states": list(range(l.n_states)),
        "initial": l.initial,
        "final": l.final,
        "edges": [
            {"from": e.src, "to": e.dst, "surface": e.label.surface, "tag": e.label.notation()}
            for e in l.edges
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def from_json(text: str, categories: Iterable[str]) -> Lattice:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeFormatError(f"invalid JSON: {exc}") from exc
    try:
        states = list(doc["states"])
        initial = doc["initial"]
        final = doc["final"]
        raw_edges = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise LatticeFormatError(f"missing lattice field: {exc}") from exc
    edges = []
    for item in raw_edges:
        tag_text = item["tag"]
        surface = item["surface"]
        if tag_text.startswith("<"):
            label: EdgeLabel = parse_complete_tag(tag_text, categories, surface=surface)
        else:
            if tag_text != surface:
                raise LatticeFormatError(f"separator edge with mismatched surface: {item!r}")
            label = Separator(tag_text)
        edges.append((item["from"], item["to"], label))
    return Lattice.build(initial, final, edges, extra_states=states)
