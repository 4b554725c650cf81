"""RDF terms: IRIs, blank nodes and literals.

Terms are immutable and hashable so they can live in sets and index dicts.
Literal equality is term equality: lexical form plus datatype or language
tag, never value-space equality.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import NamedTuple, Union

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
# characters that can never appear unescaped in an IRI reference
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|\\^`]')
_LANG = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")
_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.\-]*$")


class TermError(ValueError):
    """Raised for malformed terms (relative IRIs, bad language tags, ...)."""


def is_absolute_iri(value: str) -> bool:
    return bool(_SCHEME.match(value)) and not _IRI_FORBIDDEN.search(value)


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not _SCHEME.match(self.value):
            raise TermError(f"IRI must be absolute: {self.value!r}")
        if _IRI_FORBIDDEN.search(self.value):
            raise TermError(f"IRI contains forbidden characters: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


_bnode_counter = itertools.count()


@dataclass(frozen=True, slots=True)
class BNode:
    label: str = ""

    def __post_init__(self):
        if not self.label:
            object.__setattr__(self, "label", f"n{next(_bnode_counter)}")
        elif not _BNODE_LABEL.match(self.label):
            raise TermError(f"bad blank node label: {self.label!r}")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return self.n3()


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str | None = None
    lang: str | None = None

    def __post_init__(self):
        if not isinstance(self.lexical, str):
            raise TermError(f"literal lexical form must be a string: {self.lexical!r}")
        if self.datatype == XSD_STRING:
            object.__setattr__(self, "datatype", None)
        if self.datatype == RDF_LANGSTRING and self.lang:
            object.__setattr__(self, "datatype", None)
        if self.lang is not None:
            if self.datatype is not None:
                raise TermError("literal cannot carry both a datatype and a language tag")
            if not _LANG.match(self.lang):
                raise TermError(f"bad language tag: {self.lang!r}")
            object.__setattr__(self, "lang", self.lang.lower())
        if self.datatype is not None and not is_absolute_iri(self.datatype):
            raise TermError(f"datatype must be an absolute IRI: {self.datatype!r}")

    def n3(self) -> str:
        out = '"' + escape_string(self.lexical) + '"'
        if self.lang:
            return f"{out}@{self.lang}"
        if self.datatype:
            return f"{out}^^<{self.datatype}>"
        return out

    def __str__(self) -> str:
        return self.lexical


Term = Union[IRI, BNode, Literal]
Subject = Union[IRI, BNode]


class Triple(NamedTuple):
    subject: Subject
    predicate: IRI
    object: Term


def make_triple(s, p, o) -> Triple:
    if not isinstance(s, (IRI, BNode)):
        raise TermError(f"subject must be an IRI or blank node: {s!r}")
    if not isinstance(p, IRI):
        raise TermError(f"predicate must be an IRI: {p!r}")
    if not isinstance(o, (IRI, BNode, Literal)):
        raise TermError(f"object must be an RDF term: {o!r}")
    return Triple(s, p, o)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t",
            "\b": "\\b", "\f": "\\f"}


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


_KIND_ORDER = {IRI: 0, BNode: 1, Literal: 2}


def term_key(term: Term) -> tuple:
    """Total order over terms used wherever output must be deterministic."""
    if isinstance(term, Literal):
        return (2, term.lexical, term.datatype or "", term.lang or "")
    if isinstance(term, BNode):
        return (1, term.label)
    return (0, term.value)
