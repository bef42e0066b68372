"""Blank node canonicalization by iterative neighbourhood hashing.

Three refinement rounds over (direction, predicate, neighbour signature)
multisets. ``canonical_labels`` orders nodes left with equal hashes by their
original label, which is enough for stable serializer output. ``isomorphic``
does not rely on that order: it backtracks over candidate mappings inside each
equal-hash class and checks every triple.
"""

from __future__ import annotations

import hashlib
from collections import Counter

from .graph import Graph, Triple
from .terms import BlankNode, Term

ROUNDS = 3


def _signature(term: Term, hashes: dict[BlankNode, str]) -> str:
    if isinstance(term, BlankNode):
        return "_:" + hashes[term]
    return str(term)


def _blank_nodes(graph: Graph) -> list[BlankNode]:
    blanks: dict[BlankNode, None] = {}
    for triple in graph:
        for term in (triple.subject, triple.object):
            if isinstance(term, BlankNode):
                blanks.setdefault(term, None)
    return list(blanks)


def blank_node_hashes(graph: Graph, rounds: int = ROUNDS) -> dict[BlankNode, str]:
    blanks = _blank_nodes(graph)
    hashes = {node: "" for node in blanks}
    for _ in range(rounds):
        updated = {}
        for node in blanks:
            entries = [
                f"out|{t.predicate.value}|{_signature(t.object, hashes)}" for t in graph.match(node, None, None)
            ]
            entries += [
                f"in|{t.predicate.value}|{_signature(t.subject, hashes)}" for t in graph.match(None, None, node)
            ]
            digest = hashlib.sha256()
            digest.update(hashes[node].encode())
            for entry in sorted(entries):
                digest.update(entry.encode())
                digest.update(b"\x00")
            updated[node] = digest.hexdigest()
        hashes = updated
    return hashes


def canonical_labels(graph: Graph) -> dict[BlankNode, str]:
    hashes = blank_node_hashes(graph)
    ordered = sorted(hashes, key=lambda node: (hashes[node], node.label))
    width = len(str(len(ordered)))
    return {node: f"c{index:0{width}d}" for index, node in enumerate(ordered)}


def canonicalize(graph: Graph) -> set[Triple]:
    labels = canonical_labels(graph)

    def relabel(term: Term) -> Term:
        return BlankNode(labels[term]) if isinstance(term, BlankNode) else term

    return {Triple(relabel(t.subject), t.predicate, relabel(t.object)) for t in graph}


class _Matcher:
    """Backtracking search for a blank node bijection between two graphs."""

    def __init__(self, first: Graph, second: Graph):
        self.first = first
        self.target = set(second)
        first_hashes = blank_node_hashes(first)
        second_hashes = blank_node_hashes(second)
        self.feasible = Counter(first_hashes.values()) == Counter(second_hashes.values())
        by_hash: dict[str, list[BlankNode]] = {}
        for node, digest in second_hashes.items():
            by_hash.setdefault(digest, []).append(node)
        self.candidates = {node: by_hash.get(digest, []) for node, digest in first_hashes.items()}
        # smallest classes first prunes earliest
        self.order = sorted(self.candidates, key=lambda node: (len(self.candidates[node]), node.label))
        self.mapping: dict[BlankNode, BlankNode] = {}
        self.used: set[BlankNode] = set()

    def _image(self, term: Term) -> Term | None:
        if isinstance(term, BlankNode):
            return self.mapping.get(term)
        return term

    def _consistent(self, node: BlankNode) -> bool:
        for triple in self.first.match(node, None, None) + self.first.match(None, None, node):
            subject, obj = self._image(triple.subject), self._image(triple.object)
            if subject is None or obj is None:
                continue
            if Triple(subject, triple.predicate, obj) not in self.target:
                return False
        return True

    def search(self, index: int = 0) -> bool:
        if index == len(self.order):
            return True
        node = self.order[index]
        for candidate in self.candidates[node]:
            if candidate in self.used:
                continue
            self.mapping[node] = candidate
            self.used.add(candidate)
            if self._consistent(node) and self.search(index + 1):
                return True
            del self.mapping[node]
            self.used.discard(candidate)
        return False


def isomorphic(first: Graph, second: Graph) -> bool:
    if len(first) != len(second):
        return False
    if canonicalize(first) == canonicalize(second):
        return True
    matcher = _Matcher(first, second)
    if not matcher.feasible:
        return False
    ground = {t for t in first if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    if not ground <= matcher.target:
        return False
    return matcher.search()
