"""Canonical N-Triples export and graph isomorphism.

Blank nodes are relabelled by colour refinement over their neighbourhoods;
remaining ties (automorphic nodes) are broken by individualisation, taking
the lexicographically smallest serialisation. Two graphs are isomorphic iff
their canonical exports are equal.
"""

from __future__ import annotations

import hashlib

from .store import Graph
from .terms import BNode, Triple


def _line(s, p, o) -> str:
    return f"{s.n3()} {p.n3()} {o.n3()} .\n"


def serialize_ntriples(graph: Graph) -> str:
    """Sorted N-Triples using the graph's own blank node labels."""
    return "".join(sorted(_line(*t) for t in graph))


def _digest(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()


def _refine(triples: list[Triple], colours: dict[BNode, str]) -> dict[BNode, str]:
    def show(term):
        return "_:" + colours[term] if isinstance(term, BNode) else term.n3()

    while True:
        signature: dict[BNode, list[str]] = {b: [colours[b]] for b in colours}
        for s, p, o in triples:
            if isinstance(s, BNode):
                signature[s].append("+" + p.n3() + show(o))
            if isinstance(o, BNode):
                signature[o].append("-" + p.n3() + show(s))
        new = {b: _digest("|".join(sorted(sig))) for b, sig in signature.items()}
        if len(set(new.values())) == len(set(colours.values())):
            return new
        colours = new


def _labels(colours: dict[BNode, str]) -> dict[BNode, str]:
    order = {c: f"c{i}" for i, c in enumerate(sorted(set(colours.values())))}
    return {b: order[c] for b, c in colours.items()}


def _render(triples: list[Triple], labels: dict[BNode, str]) -> list[str]:
    def show(term):
        return "_:" + labels[term] if isinstance(term, BNode) else term.n3()

    return sorted(f"{show(s)} {p.n3()} {show(o)} .\n" for s, p, o in triples)


def _canonical(triples: list[Triple], colours: dict[BNode, str]) -> tuple[list[str], dict[BNode, str]]:
    colours = _refine(triples, colours)
    groups: dict[str, list[BNode]] = {}
    for b, c in colours.items():
        groups.setdefault(c, []).append(b)
    ties = [c for c, members in groups.items() if len(members) > 1]
    if not ties:
        labels = _labels(colours)
        return _render(triples, labels), labels
    target = min(ties, key=lambda c: (len(groups[c]), c))
    best = None
    for node in groups[target]:
        trial = dict(colours)
        trial[node] = _digest(colours[node] + "*")
        result = _canonical(triples, trial)
        if best is None or result[0] < best[0]:
            best = result
    return best


def _blank_nodes(triples: list[Triple]) -> set[BNode]:
    return {t for tr in triples for t in (tr.subject, tr.object) if isinstance(t, BNode)}


def canonical_labels(graph: Graph) -> dict[BNode, str]:
    """Blank node labels that depend only on the graph's structure."""
    triples = list(graph)
    bnodes = _blank_nodes(triples)
    if not bnodes:
        return {}
    return _canonical(triples, {b: "b" for b in bnodes})[1]


def canonical_ntriples(graph: Graph) -> str:
    triples = list(graph)
    bnodes = _blank_nodes(triples)
    if not bnodes:
        return "".join(sorted(_line(*t) for t in triples))
    return "".join(_canonical(triples, {b: "b" for b in bnodes})[0])


def isomorphic(a: Graph, b: Graph) -> bool:
    return len(a) == len(b) and canonical_ntriples(a) == canonical_ntriples(b)
