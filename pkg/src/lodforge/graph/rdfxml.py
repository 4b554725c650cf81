"""RDF/XML reader and writer.

The writer emits one ``rdf:Description`` per subject with flat property
elements. The reader covers the striped syntax produced by common tools:
typed node elements, property attributes, ``rdf:resource``/``rdf:nodeID``,
``rdf:datatype``, inherited ``xml:lang``, ``rdf:parseType="Resource"`` and
nested node elements.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from urllib.parse import urljoin

from .namespaces import RDF
from .ntriples import canonical_labels
from .store import Graph
from .terms import IRI, BNode, Literal, TermError, term_key

RDF_NS = str(RDF)
XML_NS = "http://www.w3.org/XML/1998/namespace"
_NCNAME_TAIL = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*$")
_NCNAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_XML_INVALID = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ufffe\uffff]")


class RdfXmlError(ValueError):
    pass


def _escape(text: str, attribute: bool = False) -> str:
    if _XML_INVALID.search(text):
        raise RdfXmlError(f"text not representable in XML 1.0: {text!r}")
    text = text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    text = text.replace("\r", "&#13;")
    if attribute:
        text = text.replace('"', "&quot;").replace("\n", "&#10;").replace("\t", "&#9;")
    return text


def split_iri(iri: str) -> tuple[str, str]:
    """Split a predicate IRI into (namespace, NCName local part)."""
    m = _NCNAME_TAIL.search(iri)
    if not m or m.start() == 0:
        raise RdfXmlError(f"cannot express predicate as an XML QName: {iri}")
    start = m.start()
    return iri[:start], iri[start:]


def serialize_rdfxml(graph: Graph) -> str:
    ns_prefix: dict[str, str] = {RDF_NS: "rdf"}
    for prefix, ns in sorted(graph.namespaces.items()):
        if prefix and _NCNAME.match(prefix) and ns not in ns_prefix and prefix != "rdf":
            ns_prefix[ns] = prefix

    def qname(iri: IRI) -> str:
        ns, local = split_iri(iri.value)
        if ns not in ns_prefix:
            used = set(ns_prefix.values())
            n = 0
            while f"ns{n}" in used:
                n += 1
            ns_prefix[ns] = f"ns{n}"
        return f"{ns_prefix[ns]}:{local}"

    labels = canonical_labels(graph)

    def node_id(b: BNode) -> str:
        return labels[b]

    def key(term) -> tuple:
        return (1, labels[term]) if isinstance(term, BNode) else term_key(term)

    descriptions = []
    for s in sorted(graph.subjects(), key=key):
        if isinstance(s, BNode):
            head = f'  <rdf:Description rdf:nodeID="{node_id(s)}">'
        else:
            head = f'  <rdf:Description rdf:about="{_escape(s.value, True)}">'
        props = []
        for t in sorted(graph.triples(s), key=lambda t: (t.predicate.value, key(t.object))):
            name = qname(t.predicate)
            o = t.object
            if isinstance(o, IRI):
                props.append(f'    <{name} rdf:resource="{_escape(o.value, True)}"/>')
            elif isinstance(o, BNode):
                props.append(f'    <{name} rdf:nodeID="{node_id(o)}"/>')
            else:
                attrs = ""
                if o.lang:
                    attrs = f' xml:lang="{o.lang}"'
                elif o.datatype:
                    attrs = f' rdf:datatype="{_escape(o.datatype, True)}"'
                props.append(f"    <{name}{attrs}>{_escape(o.lexical)}</{name}>")
        descriptions.append("\n".join([head, *props, "  </rdf:Description>"]))

    decls = " ".join(
        f'xmlns:{p}="{_escape(ns, True)}"'
        for ns, p in sorted(ns_prefix.items(), key=lambda item: item[1])
    )
    out = '<?xml version="1.0" encoding="utf-8"?>\n'
    if not descriptions:
        return out + f"<rdf:RDF {decls}/>\n"
    return out + f"<rdf:RDF {decls}>\n" + "\n".join(descriptions) + "\n</rdf:RDF>\n"


def _split(tag: str) -> tuple[str, str]:
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        return ns, local
    return "", tag


_RDF_ATTRS = {"about", "ID", "nodeID", "resource", "datatype", "parseType", "type"}


class _Reader:
    def __init__(self, base: str | None):
        self.graph = Graph(base=base)
        self.base = base
        self.bnodes: dict[str, BNode] = {}

    def bnode(self, label: str) -> BNode:
        return self.bnodes.setdefault(label, BNode())

    def resolve(self, ref: str, base: str | None) -> IRI:
        if base and not re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", ref):
            ref = urljoin(base, ref)
        try:
            return IRI(ref)
        except TermError as exc:
            raise RdfXmlError(str(exc)) from None

    def node(self, elem, lang, base):
        base = elem.get(f"{{{XML_NS}}}base", base)
        lang = elem.get(f"{{{XML_NS}}}lang", lang)
        attrs = elem.attrib
        if f"{{{RDF_NS}}}about" in attrs:
            subject = self.resolve(attrs[f"{{{RDF_NS}}}about"], base)
        elif f"{{{RDF_NS}}}ID" in attrs:
            subject = self.resolve("#" + attrs[f"{{{RDF_NS}}}ID"], base)
        elif f"{{{RDF_NS}}}nodeID" in attrs:
            subject = self.bnode(attrs[f"{{{RDF_NS}}}nodeID"])
        else:
            subject = BNode()
        ns, local = _split(elem.tag)
        if not (ns == RDF_NS and local == "Description"):
            self.graph.add((subject, RDF.type, self.resolve(ns + local, None)))
        self.property_attributes(subject, elem, lang, base)
        li = 0
        for child in elem:
            cns, clocal = _split(child.tag)
            if cns == RDF_NS and clocal == "li":
                li += 1
                predicate = RDF[f"_{li}"]
            else:
                predicate = self.resolve(cns + clocal, None)
            self.property(subject, predicate, child, lang, base)
        return subject

    def property_attributes(self, subject, elem, lang, base):
        for key, value in elem.attrib.items():
            ns, local = _split(key)
            if ns == XML_NS or (ns == RDF_NS and local in _RDF_ATTRS):
                if ns == RDF_NS and local == "type":
                    self.graph.add((subject, RDF.type, self.resolve(value, base)))
                continue
            if not ns:
                continue
            self.graph.add((subject, self.resolve(ns + local, None), Literal(value, lang=lang or None)))

    def property(self, subject, predicate, elem, lang, base):
        base = elem.get(f"{{{XML_NS}}}base", base)
        lang = elem.get(f"{{{XML_NS}}}lang", lang)
        attrs = elem.attrib
        parse_type = attrs.get(f"{{{RDF_NS}}}parseType")
        children = list(elem)
        if parse_type == "Resource":
            obj = BNode()
            self.graph.add((subject, predicate, obj))
            for child in children:
                cns, clocal = _split(child.tag)
                self.property(obj, self.resolve(cns + clocal, None), child, lang, base)
            return
        if parse_type == "Literal":
            inner = (elem.text or "") + "".join(ET.tostring(c, encoding="unicode") for c in children)
            self.graph.add((subject, predicate,
                            Literal(inner, RDF.XMLLiteral.value)))
            return
        if parse_type is not None:
            raise RdfXmlError(f"unsupported rdf:parseType {parse_type!r}")
        if children:
            if len(children) != 1:
                raise RdfXmlError(f"property element {elem.tag} has several node children")
            obj = self.node(children[0], lang, base)
            self.graph.add((subject, predicate, obj))
            return
        if f"{{{RDF_NS}}}resource" in attrs:
            obj = self.resolve(attrs[f"{{{RDF_NS}}}resource"], base)
        elif f"{{{RDF_NS}}}nodeID" in attrs:
            obj = self.bnode(attrs[f"{{{RDF_NS}}}nodeID"])
        elif any(_split(k)[0] not in (XML_NS, RDF_NS) for k in attrs):
            obj = BNode()
        else:
            datatype = attrs.get(f"{{{RDF_NS}}}datatype")
            text = elem.text or ""
            try:
                if datatype:
                    obj = Literal(text, self.resolve(datatype, base).value)
                else:
                    obj = Literal(text, lang=lang or None)
            except TermError as exc:
                raise RdfXmlError(str(exc)) from None
            self.graph.add((subject, predicate, obj))
            return
        self.graph.add((subject, predicate, obj))
        # empty property element: remaining attributes describe the object
        self.property_attributes(obj, elem, lang, base)


def parse_rdfxml(text: str | bytes, base: str | None = None) -> Graph:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise RdfXmlError(f"malformed XML at line {line}, column {col}: {exc}") from None
    reader = _Reader(base)
    base = root.get(f"{{{XML_NS}}}base", base)
    ns, local = _split(root.tag)
    lang = root.get(f"{{{XML_NS}}}lang")
    if ns == RDF_NS and local == "RDF":
        for child in root:
            reader.node(child, lang, base)
    else:
        reader.node(root, lang, base)
    return reader.graph
