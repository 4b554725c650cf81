"""VoID self-description of a dataset."""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

from ..graph import (BF, DCTERMS, SCHEMA, OWL, RDF, RDFS, STANDARD_PREFIXES, VOID, XSD, Graph, stats)
from ..graph.namespaces import FORMATS
from ..graph.terms import IRI, Literal, is_absolute_iri

FORMAT_FEATURES = {
    "turtle": FORMATS.Turtle,
    "rdfxml": FORMATS.RDF_XML,
    "ntriples": FORMATS["N-Triples"],
}
PRIMARY_CLASSES = (BF.Work, SCHEMA.VideoObject, SCHEMA.CreativeWork)
_SKIPPED_VOCABULARIES = {str(RDF), str(RDFS), str(XSD), str(OWL)}


class VoidError(ValueError):
    pass


@dataclass
class VoidMetadata:
    title: str
    license: str | None
    description: str = ""
    publisher: str | None = None
    contributor: str | None = None
    sources: list[str] = field(default_factory=list)
    modified: str | None = None         # ISO date; today when not pinned
    example_resource: str | None = None
    dataset: str | None = None          # dataset node IRI; defaults under the base

    @classmethod
    def from_dict(cls, data: dict) -> "VoidMetadata":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise VoidError(f"unknown VoID metadata keys: {sorted(unknown)}")
        return cls(**data)


def _agent(value: str):
    return IRI(value) if is_absolute_iri(value) else Literal(value)


def _vocabulary(term: IRI, prefixes: dict[str, str]) -> str | None:
    matches = [ns for ns in prefixes.values() if term.value.startswith(ns)]
    if matches:
        return max(matches, key=len)
    cut = max(term.value.rfind("#"), term.value.rfind("/"))
    return term.value[:cut + 1] if cut > term.value.find("//") + 1 else None


def used_vocabularies(graph: Graph, base: str) -> list[IRI]:
    """Namespaces of the predicates and classes in use, core RDF/OWL left out."""
    prefixes = dict(STANDARD_PREFIXES)
    prefixes.update(graph.namespaces)
    terms = set(graph.predicates())
    terms |= {o for o in graph.objects(None, RDF.type) if isinstance(o, IRI)}
    out = set()
    for t in terms:
        ns = _vocabulary(t, prefixes)
        if ns and ns not in _SKIPPED_VOCABULARIES and not ns.startswith(base):
            out.add(ns)
    return [IRI(ns) for ns in sorted(out)]


def _integer(n: int) -> Literal:
    return Literal(str(n), XSD.integer.value)


def dump_iri(base: str, fmt: str) -> IRI:
    from ..graph import FORMAT_EXTENSIONS
    return IRI(f"{base}dump.{FORMAT_EXTENSIONS[fmt]}")


def generate_void(graph: Graph, metadata: VoidMetadata, base: str,
                  formats: tuple[str, ...] | list[str] = ("turtle",)) -> Graph:
    """One void:Dataset node describing ``graph``; counts are computed here."""
    if not metadata.license:
        raise VoidError("a license IRI is required for the VoID description")
    if not is_absolute_iri(metadata.license):
        raise VoidError(f"license must be an IRI, not a string: {metadata.license!r}")
    if not metadata.title:
        raise VoidError("a dataset title is required")
    unknown = [f for f in formats if f not in FORMAT_FEATURES]
    if unknown:
        raise VoidError(f"unknown dump formats: {unknown}")
    modified = metadata.modified or _dt.date.today().isoformat()
    try:
        _dt.date.fromisoformat(modified)
    except ValueError:
        raise VoidError(f"modified must be an ISO date: {modified!r}") from None

    ds = IRI(metadata.dataset or f"{base}dataset")
    s = stats(graph)
    void = Graph(namespaces={p: STANDARD_PREFIXES[p] for p in ("rdf", "xsd", "dcterms", "void")})
    void.bind("formats", str(FORMATS))
    add = void.add
    add((ds, RDF.type, VOID.Dataset))
    add((ds, DCTERMS["title"], Literal(metadata.title)))
    if metadata.description:
        add((ds, DCTERMS.description, Literal(metadata.description)))
    add((ds, DCTERMS.license, IRI(metadata.license)))
    if metadata.publisher:
        add((ds, DCTERMS.publisher, _agent(metadata.publisher)))
    if metadata.contributor:
        add((ds, DCTERMS.contributor, _agent(metadata.contributor)))
    for src in metadata.sources:
        add((ds, DCTERMS.source, IRI(src) if is_absolute_iri(src) else Literal(src)))
    add((ds, DCTERMS.modified, Literal(modified, XSD.date.value)))
    for fmt in dict.fromkeys(formats):
        add((ds, VOID.feature, FORMAT_FEATURES[fmt]))
        add((ds, VOID.dataDump, dump_iri(base, fmt)))
    for vocab in used_vocabularies(graph, base):
        add((ds, VOID.vocabulary, vocab))
    add((ds, VOID.classes, _integer(s.classes)))
    add((ds, VOID.properties, _integer(s.properties)))
    add((ds, VOID.triples, _integer(len(graph))))
    example = metadata.example_resource or _first_resource(graph, base)
    if example:
        add((ds, VOID.exampleResource, IRI(example)))
    return void


def _first_resource(graph: Graph, base: str) -> str | None:
    # a work or film makes a better example than whichever agent sorts first
    own = sorted(s.value for s in graph.subjects() if isinstance(s, IRI) and s.value.startswith(base))
    primary = {s.value for c in PRIMARY_CLASSES for s in graph.instances(c)}
    preferred = [s for s in own if s in primary]
    return (preferred or own or [None])[0]


@dataclass(frozen=True)
class VoidCounts:
    classes: int
    properties: int
    triples: int


def void_counts(void: Graph) -> VoidCounts:
    """Read the three counts back from a VoID graph."""
    ds = sorted(void.instances(VOID.Dataset), key=str)
    if len(ds) != 1:
        raise VoidError(f"expected exactly one void:Dataset, found {len(ds)}")

    def number(p):
        value = void.value(ds[0], p)
        if not isinstance(value, Literal):
            raise VoidError(f"missing {p.value}")
        return int(value.lexical)

    return VoidCounts(number(VOID.classes), number(VOID.properties), number(VOID.triples))
