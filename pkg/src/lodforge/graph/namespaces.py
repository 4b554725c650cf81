"""Well-known vocabulary namespaces."""

from __future__ import annotations

from .terms import IRI


class Namespace(str):
    """A namespace IRI; attribute or item access mints terms in it."""

    def term(self, name: str) -> IRI:
        return IRI(str(self) + name)

    def __getattr__(self, name: str) -> IRI:
        if name.startswith("__"):
            raise AttributeError(name)
        return self.term(name)

    def __getitem__(self, name) -> IRI:  # type: ignore[override]
        if isinstance(name, (int, slice)):
            return str.__getitem__(self, name)
        return self.term(name)


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
BF = Namespace("http://id.loc.gov/ontologies/bibframe/")
BFLC = Namespace("http://id.loc.gov/ontologies/bflc/")
SCHEMA = Namespace("https://schema.org/")
FOAF = Namespace("http://xmlns.com/foaf/0.1/")
EDM = Namespace("http://www.europeana.eu/schemas/edm/")
DC = Namespace("http://purl.org/dc/elements/1.1/")
DCTERMS = Namespace("http://purl.org/dc/terms/")
VOID = Namespace("http://rdfs.org/ns/void#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
PROV = Namespace("http://www.w3.org/ns/prov#")
FORMATS = Namespace("http://www.w3.org/ns/formats/")

STANDARD_PREFIXES: dict[str, str] = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "owl": str(OWL),
    "xsd": str(XSD),
    "bf": str(BF),
    "bflc": str(BFLC),
    "schema": str(SCHEMA),
    "foaf": str(FOAF),
    "edm": str(EDM),
    "dc": str(DC),
    "dcterms": str(DCTERMS),
    "void": str(VOID),
    "skos": str(SKOS),
    "prov": str(PROV),
}


def expand_curie(text: str, prefixes: dict[str, str] | None = None) -> IRI:
    """Expand ``bf:Work`` style names; absolute IRIs pass through unchanged."""
    prefixes = STANDARD_PREFIXES if prefixes is None else prefixes
    if text.startswith("<") and text.endswith(">"):
        return IRI(text[1:-1])
    prefix, sep, local = text.partition(":")
    if sep and prefix in prefixes and not local.startswith("//"):
        return IRI(prefixes[prefix] + local)
    return IRI(text)
