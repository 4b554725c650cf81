"""Shape mining from instance data and replay as node validation.

Object kinds form a small lattice. The most specific kinds are a class
membership (``class``), a literal datatype (``datatype``) and, for
rdf:type, a fixed value (``value``). Above them sit ``iri`` and
``literal``, and ``any`` tops everything.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from ..graph import RDF, XSD, Graph
from ..graph.namespaces import STANDARD_PREFIXES
from ..graph.terms import RDF_LANGSTRING, IRI, Literal

DEFAULT_FLOOR = 0.05


@dataclass(frozen=True, order=True)
class ObjectKind:
    kind: str                   # value | class | datatype | iri | literal | any
    term: str | None = None

    @property
    def level(self) -> int:
        return {"value": 0, "class": 0, "datatype": 0, "iri": 1, "literal": 1}.get(self.kind, 2)


ANY = ObjectKind("any")


@dataclass(frozen=True)
class PropertyDeclaration:
    predicate: IRI
    kind: ObjectKind
    required: bool
    support: float


@dataclass
class Shape:
    target: IRI
    instances: int
    declarations: list[PropertyDeclaration] = field(default_factory=list)

    @property
    def required(self) -> list[PropertyDeclaration]:
        return [d for d in self.declarations if d.required]


@dataclass
class ShapeSet:
    shapes: list[Shape]
    threshold: float
    floor: float = DEFAULT_FLOOR

    def __iter__(self):
        return iter(self.shapes)

    def __len__(self) -> int:
        return len(self.shapes)

    def get(self, target: IRI) -> Shape | None:
        return next((s for s in self.shapes if s.target == target), None)


def _literal_datatype(lit: Literal) -> str:
    if lit.lang:
        return RDF_LANGSTRING
    return lit.datatype or XSD.string.value


def object_kinds(graph: Graph, predicate: IRI, obj) -> list[ObjectKind]:
    """Every kind the object satisfies, most specific first."""
    if isinstance(obj, Literal):
        return [ObjectKind("datatype", _literal_datatype(obj)), ObjectKind("literal"), ANY]
    if predicate == RDF.type and isinstance(obj, IRI):
        return [ObjectKind("value", obj.value), ObjectKind("iri"), ANY]
    kinds = [ObjectKind("class", c.value) for c in sorted(graph.types(obj), key=str)
             if isinstance(c, IRI)]
    if isinstance(obj, IRI):
        kinds.append(ObjectKind("iri"))
    kinds.append(ANY)
    return kinds


def satisfies(graph: Graph, node, decl: PropertyDeclaration) -> bool:
    """At least one value of the predicate carries the declared kind."""
    return any(decl.kind in object_kinds(graph, decl.predicate, o)
               for o in graph.objects(node, decl.predicate))


def _required_kind(graph: Graph, predicate: IRI, nodes) -> ObjectKind:
    # the most specific kind every supporting node satisfies; ties by frequency, then name
    common = None
    tally: Counter = Counter()
    for node in nodes:
        kinds = set()
        for o in graph.objects(node, predicate):
            ks = object_kinds(graph, predicate, o)
            kinds.update(ks)
            tally.update(ks)
        common = kinds if common is None else common & kinds
    common = common or {ANY}
    return min(common, key=lambda k: (k.level, -tally[k], k))


def _majority_kind(graph: Graph, predicate: IRI, nodes) -> ObjectKind:
    tally: Counter = Counter()
    for node in nodes:
        for o in graph.objects(node, predicate):
            tally[object_kinds(graph, predicate, o)[0]] += 1
    return min(tally, key=lambda k: (-tally[k], k))


def mine_shapes(graph: Graph, threshold: float, floor: float = DEFAULT_FLOOR) -> ShapeSet:
    """One shape per class that has instances.

    Support of a predicate is the share of the class's instances that use
    it. Support at or above ``threshold`` makes it required; at or above
    ``floor`` optional; below that it is left out.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if not 0.0 < floor <= 1.0:
        raise ValueError(f"floor must be in (0, 1], got {floor}")
    shapes = []
    classes = sorted({o for o in graph.objects(None, RDF.type) if isinstance(o, IRI)}, key=str)
    for cls in classes:
        members = sorted(graph.instances(cls), key=lambda n: n.n3())
        by_predicate: dict[IRI, list] = {}
        for node in members:
            for p in {t.predicate for t in graph.triples(node, None, None)}:
                by_predicate.setdefault(p, []).append(node)
        decls = []
        for p in sorted(by_predicate, key=str):
            nodes = by_predicate[p]
            support = len(nodes) / len(members)
            if support >= threshold:
                decls.append(PropertyDeclaration(p, _required_kind(graph, p, nodes), True, support))
            elif support >= floor:
                decls.append(PropertyDeclaration(p, _majority_kind(graph, p, nodes), False, support))
        shapes.append(Shape(cls, len(members), decls))
    return ShapeSet(shapes, threshold, floor)


@dataclass
class NodeResult:
    node: str
    shape: str
    violated: list[str] = field(default_factory=list)

    @property
    def conforms(self) -> bool:
        return not self.violated


@dataclass
class ConformanceReport:
    results: list[NodeResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def nonconforming(self) -> list[NodeResult]:
        return [r for r in self.results if not r.conforms]

    @property
    def rate(self) -> float:
        if not self.results:
            return 1.0
        return sum(r.conforms for r in self.results) / len(self.results)


def validate_shapes(graph: Graph, shapes: ShapeSet) -> ConformanceReport:
    report = ConformanceReport()
    for shape in shapes:
        members = sorted(graph.instances(shape.target), key=lambda n: n.n3())
        if not members:
            report.warnings.append(f"no instances of {shape.target.value}; shape skipped")
            continue
        for node in members:
            violated = [d.predicate.value for d in shape.required if not satisfies(graph, node, d)]
            report.results.append(NodeResult(node.n3(), shape.target.value, violated))
    return report


class _Names:
    """Compacts IRIs and remembers which prefixes were used."""

    def __init__(self, namespaces: dict[str, str]):
        self.graph = Graph(namespaces={**STANDARD_PREFIXES, **namespaces})
        self.used: set[str] = set()

    def qname(self, iri: str) -> str | None:
        q = self.graph.qname(IRI(iri))
        if q:
            self.used.add(q.split(":", 1)[0])
        return q

    def show(self, iri: str) -> str:
        return self.qname(iri) or f"<{iri}>"

    def label(self, iri: str) -> str:
        q = self.qname(iri)
        name = q.replace(":", "_") if q else re.split(r"[/#]", iri.rstrip("/#"))[-1]
        return f"<{name}Shape>"


def to_shexc(shapes: ShapeSet, graph: Graph | None = None) -> str:
    """Render in ShEx compact syntax, optional properties marked ``?``."""
    names = _Names(graph.namespaces if graph is not None else {})
    body = []
    for shape in shapes:
        body.append("")
        body.append(f"{names.label(shape.target.value)} {{")
        for i, d in enumerate(shape.declarations):
            k = d.kind
            if k.kind == "value":
                expr = f"[{names.show(k.term)}]"
            elif k.kind == "class":
                expr = "@" + names.label(k.term)
            elif k.kind == "datatype":
                expr = names.show(k.term)
            elif k.kind == "iri":
                expr = "IRI"
            elif k.kind == "literal":
                expr = "LITERAL"
            else:
                expr = "."
            card = "" if d.required else " ?"
            end = " ;" if i < len(shape.declarations) - 1 else ""
            body.append(f"   {names.show(d.predicate.value)}  {expr}{card}{end}"
                        f"  # support {d.support:.2f}")
        body.append("}")
    ns = names.graph.namespaces
    header = [f"PREFIX {p}: <{ns[p]}>" for p in sorted(names.used)]
    return "\n".join(header + body) + "\n"
