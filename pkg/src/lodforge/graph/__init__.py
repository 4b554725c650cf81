"""RDF data model, in-memory store, serializers and a small query engine."""

from .namespaces import (BF, BFLC, DC, DCTERMS, EDM, FOAF, OWL, PROV, RDF, RDFS, SCHEMA,
                         SKOS, STANDARD_PREFIXES, VOID, XSD, Namespace, expand_curie)
from .ntriples import canonical_ntriples, isomorphic, serialize_ntriples
from .rdfxml import RdfXmlError, parse_rdfxml, serialize_rdfxml
from .store import Graph, GraphStats, stats
from .terms import IRI, BNode, Literal, Term, TermError, Triple, term_key
from .turtle import TurtleSyntaxError, parse_turtle, serialize_turtle

__all__ = [
    "BF", "BFLC", "DC", "DCTERMS", "EDM", "FOAF", "OWL", "PROV", "RDF", "RDFS", "SCHEMA",
    "SKOS", "STANDARD_PREFIXES", "VOID", "XSD", "Namespace", "expand_curie",
    "canonical_ntriples", "isomorphic", "serialize_ntriples",
    "RdfXmlError", "parse_rdfxml", "serialize_rdfxml",
    "Graph", "GraphStats", "stats",
    "IRI", "BNode", "Literal", "Term", "TermError", "Triple", "term_key",
    "TurtleSyntaxError", "parse_turtle", "serialize_turtle",
    "load_graph", "dump_graph",
]


def dump_graph(graph: Graph, fmt: str) -> str:
    if fmt == "turtle":
        return serialize_turtle(graph)
    if fmt == "rdfxml":
        return serialize_rdfxml(graph)
    if fmt == "ntriples":
        return canonical_ntriples(graph)
    raise ValueError(f"unknown serialization format: {fmt}")


FORMAT_EXTENSIONS = {"turtle": "ttl", "rdfxml": "rdf", "ntriples": "nt"}


def load_graph(path) -> Graph:
    """Read a dump, choosing the parser from the file extension."""
    from pathlib import Path
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix in (".rdf", ".xml", ".owl"):
        return parse_rdfxml(text)
    return parse_turtle(text)
