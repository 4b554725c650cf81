"""In-memory triple store with SPO/POS/OSP indexes."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .namespaces import RDF
from .terms import IRI, BNode, Literal, Term, Triple, make_triple


def _index():
    return defaultdict(lambda: defaultdict(set))


class Graph:
    """A set of triples plus a prefix map and an optional base IRI.

    Inserting a triple that is already present is a no-op, so ``len(graph)``
    is always the number of distinct triples.
    """

    def __init__(self, triples: Iterable = (), namespaces: dict[str, str] | None = None,
                 base: str | None = None):
        self._spo = _index()
        self._pos = _index()
        self._osp = _index()
        self._size = 0
        self.namespaces: dict[str, str] = dict(namespaces or {})
        self.base = base
        for t in triples:
            self.add(t)

    def bind(self, prefix: str, namespace: str) -> None:
        self.namespaces[prefix] = str(namespace)

    def add(self, triple, predicate=None, obj=None) -> bool:
        """Insert a triple; returns True when the graph grew."""
        if predicate is not None:
            triple = (triple, predicate, obj)
        s, p, o = make_triple(*triple)
        objects = self._spo[s][p]
        if o in objects:
            return False
        objects.add(o)
        self._pos[p][o].add(s)
        self._osp[o][s].add(p)
        self._size += 1
        return True

    def update(self, triples: Iterable) -> None:
        for t in triples:
            self.add(t)

    def remove(self, triple) -> bool:
        s, p, o = triple
        objects = self._spo.get(s, {}).get(p)
        if not objects or o not in objects:
            return False
        objects.discard(o)
        self._pos[p][o].discard(s)
        self._osp[o][s].discard(p)
        for idx, a, b in ((self._spo, s, p), (self._pos, p, o), (self._osp, o, s)):
            if not idx[a][b]:
                del idx[a][b]
            if not idx[a]:
                del idx[a]
        self._size -= 1
        return True

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Triple]:
        return self.triples()

    def __contains__(self, triple) -> bool:
        s, p, o = triple
        return o in self._spo.get(s, {}).get(p, ())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return len(self) == len(other) and all(t in other for t in self)

    def __or__(self, other: "Graph") -> "Graph":
        g = self.copy()
        g.update(other)
        for prefix, ns in other.namespaces.items():
            g.namespaces.setdefault(prefix, ns)
        return g

    def copy(self) -> "Graph":
        return Graph(self, self.namespaces, self.base)

    def triples(self, subject=None, predicate=None, obj=None) -> Iterator[Triple]:
        """Yield triples matching a pattern; None is a wildcard."""
        s, p, o = subject, predicate, obj
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            preds = [p] if p is not None else list(by_p)
            for pp in preds:
                objects = by_p.get(pp, ())
                if o is not None:
                    if o in objects:
                        yield Triple(s, pp, o)
                else:
                    for oo in list(objects):
                        yield Triple(s, pp, oo)
        elif p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            objs = [o] if o is not None else list(by_o)
            for oo in objs:
                for ss in list(by_o.get(oo, ())):
                    yield Triple(ss, p, oo)
        elif o is not None:
            for ss, preds in list(self._osp.get(o, {}).items()):
                for pp in list(preds):
                    yield Triple(ss, pp, o)
        else:
            for ss, by_p in list(self._spo.items()):
                for pp, objects in list(by_p.items()):
                    for oo in list(objects):
                        yield Triple(ss, pp, oo)

    def count(self, subject=None, predicate=None, obj=None) -> int:
        return sum(1 for _ in self.triples(subject, predicate, obj))

    def subjects(self, predicate=None, obj=None) -> set:
        if predicate is None and obj is None:
            return set(self._spo)
        return {t.subject for t in self.triples(None, predicate, obj)}

    def predicates(self) -> set:
        return set(self._pos)

    def objects(self, subject=None, predicate=None) -> set:
        if subject is None and predicate is None:
            return set(self._osp)
        return {t.object for t in self.triples(subject, predicate, None)}

    def value(self, subject, predicate):
        """One object of (subject, predicate), picked deterministically."""
        from .terms import term_key
        objs = self.objects(subject, predicate)
        return min(objs, key=term_key) if objs else None

    def types(self, subject) -> set:
        return self.objects(subject, RDF.type)

    def instances(self, cls) -> set:
        return self.subjects(RDF.type, cls)

    def has_subject(self, subject) -> bool:
        return subject in self._spo

    def blank_nodes(self) -> set:
        out = {s for s in self._spo if isinstance(s, BNode)}
        out.update(o for o in self._osp if isinstance(o, BNode))
        return out

    def qname(self, iri: IRI) -> str | None:
        """Compact an IRI using the prefix map, or None if no prefix fits."""
        best = None
        for prefix, ns in self.namespaces.items():
            if iri.value.startswith(ns) and (best is None or len(ns) > len(best[1])):
                best = (prefix, ns)
        if best is None:
            return None
        return f"{best[0]}:{iri.value[len(best[1]):]}"


@dataclass(frozen=True)
class GraphStats:
    classes: int
    properties: int
    class_histogram: dict = field(default_factory=dict)
    predicate_histogram: dict = field(default_factory=dict)


def stats(graph: Graph) -> GraphStats:
    """Class count is the number of distinct rdf:type objects; property count
    the number of distinct predicates."""
    class_hist = Counter(t.object for t in graph.triples(None, RDF.type, None))
    pred_hist = Counter()
    for p in graph.predicates():
        pred_hist[p] = graph.count(None, p, None)
    return GraphStats(len(class_hist), len(pred_hist), dict(class_hist), dict(pred_hist))


__all__ = ["Graph", "GraphStats", "stats", "IRI", "BNode", "Literal", "Term", "Triple"]
