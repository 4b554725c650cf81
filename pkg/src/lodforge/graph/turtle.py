"""Turtle reader and writer."""

from __future__ import annotations

import re
from urllib.parse import urljoin

from .namespaces import RDF, XSD
from .ntriples import canonical_labels
from .store import Graph
from .terms import IRI, BNode, Literal, TermError, escape_string, term_key


class TurtleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


# ---------------------------------------------------------------- writing

_PN_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
_PREFIX = re.compile(r"^([A-Za-z][A-Za-z0-9_\-]*)?$")
_INTEGER = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL = re.compile(r"^[+-]?[0-9]*\.[0-9]+$")
_DOUBLE = re.compile(r"^[+-]?([0-9]+\.[0-9]*|\.?[0-9]+)[eE][+-]?[0-9]+$")


class _Writer:
    def __init__(self, graph: Graph):
        self.prefixes = sorted(
            ((p, ns) for p, ns in graph.namespaces.items() if _PREFIX.match(p)),
            key=lambda item: item[0],
        )
        self.bnode_labels = canonical_labels(graph)

    def iri(self, iri: IRI) -> str:
        best = None
        for prefix, ns in self.prefixes:
            if iri.value.startswith(ns):
                local = iri.value[len(ns):]
                if _PN_LOCAL.match(local) and (best is None or len(ns) > best[0]):
                    best = (len(ns), f"{prefix}:{local}")
        return best[1] if best else iri.n3()

    def key(self, term) -> tuple:
        if isinstance(term, BNode):
            return (1, self.bnode_labels[term])
        return term_key(term)

    def term(self, term) -> str:
        if isinstance(term, IRI):
            return self.iri(term)
        if isinstance(term, BNode):
            return f"_:{self.bnode_labels[term]}"
        lex = term.lexical
        if term.datatype == XSD.integer.value and _INTEGER.match(lex):
            return lex
        if term.datatype == XSD.decimal.value and _DECIMAL.match(lex):
            return lex
        if term.datatype == XSD.double.value and _DOUBLE.match(lex):
            return lex
        if term.datatype == XSD.boolean.value and lex in ("true", "false"):
            return lex
        out = '"' + escape_string(lex) + '"'
        if term.lang:
            return f"{out}@{term.lang}"
        if term.datatype:
            return f"{out}^^{self.iri(IRI(term.datatype))}"
        return out


def serialize_turtle(graph: Graph) -> str:
    w = _Writer(graph)
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in w.prefixes]
    body = []
    for s in sorted(graph.subjects(), key=w.key):
        preds = sorted({t.predicate for t in graph.triples(s)},
                       key=lambda p: (p != RDF.type, p.value))
        chunks = []
        for p in preds:
            objs = sorted(graph.objects(s, p), key=w.key)
            verb = "a" if p == RDF.type else w.iri(p)
            chunks.append(f"{verb} " + ", ".join(w.term(o) for o in objs))
        body.append(w.term(s) + " " + " ;\n    ".join(chunks) + " .")
    out = "\n".join(lines) + "\n"
    if body:
        out += "\n" + "\n\n".join(body) + "\n"
    return out


# ---------------------------------------------------------------- reading

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+|#[^\n]*"),
    ("IRIREF", r"<([^<>\"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>"),
    ("STRING_LONG", r'"""(?:[^"\\]|\\.|"(?!""))*"""' + r"|'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING", r'"(?:[^"\\\n\r]|\\.)*"' + r"|'(?:[^'\\\n\r]|\\.)*'"),
    ("DIRECTIVE", r"@prefix\b|@base\b"),
    ("LANGTAG", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("DOUBLE", r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"),
    ("DECIMAL", r"[+-]?[0-9]*\.[0-9]+"),
    ("INTEGER", r"[+-]?[0-9]+"),
    ("DTYPE", r"\^\^"),
    ("BNODE", r"_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"),
    ("PNAME", r"(?:[A-Za-z][A-Za-z0-9_\-.]*)?:(?:(?:[A-Za-z0-9_:\-]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])"
              r"(?:(?:[A-Za-z0-9_:.\-]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])*"
              r"(?:[A-Za-z0-9_:\-]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]))?)?"),
    ("KEYWORD", r"[A-Za-z][A-Za-z0-9_]*"),
    ("PUNCT", r"[.;,\[\]()]"),
]
_TOKENS = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _TOKEN_SPEC), re.DOTALL)
_ESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", re.DOTALL)
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
                   '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str, pos) -> str:
    def sub(m):
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            return chr(int(code[1:], 16))
        if code in _SIMPLE_ESCAPES:
            return _SIMPLE_ESCAPES[code]
        raise TurtleSyntaxError(f"bad escape \\{code}", *pos)
    return _ESCAPE.sub(sub, text)


class _Parser:
    def __init__(self, text: str, base: str | None):
        self.text = text
        self.tokens = self._tokenize(text)
        self.i = 0
        self.graph = Graph(base=base)
        self.base = base
        self.bnodes: dict[str, BNode] = {}

    def _position(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def _tokenize(self, text: str):
        out = []
        pos = 0
        while pos < len(text):
            m = _TOKENS.match(text, pos)
            if not m or m.end() == pos:
                raise TurtleSyntaxError(f"unexpected character {text[pos]!r}", *self._position(pos))
            if m.lastgroup != "WS":
                out.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        out.append(("EOF", "", len(text)))
        return out

    # token helpers
    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return TurtleSyntaxError(message, *self._position(tok[2]))

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)

    def parse(self) -> Graph:
        while self.peek()[0] != "EOF":
            self.statement()
        return self.graph

    def statement(self):
        kind, value, _ = self.peek()
        if kind == "DIRECTIVE":
            self.next()
            if value == "@prefix":
                self.prefix_decl()
            else:
                self.base_decl()
            self.expect(".")
        elif kind == "KEYWORD" and value.upper() in ("PREFIX", "BASE"):
            self.next()
            if value.upper() == "PREFIX":
                self.prefix_decl()
            else:
                self.base_decl()
        else:
            self.triples()
            self.expect(".")

    def prefix_decl(self):
        tok = self.next()
        if tok[0] != "PNAME" or not tok[1].endswith(":") or tok[1].count(":") != 1:
            raise self.error("expected prefix name", tok)
        iri = self.iriref(self.next())
        self.graph.namespaces[tok[1][:-1]] = iri.value

    def base_decl(self):
        iri = self.iriref(self.next())
        self.base = iri.value
        self.graph.base = iri.value

    def iriref(self, tok) -> IRI:
        if tok[0] != "IRIREF":
            raise self.error("expected IRI", tok)
        raw = _unescape(tok[1][1:-1], self._position(tok[2]))
        if self.base and not re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", raw):
            raw = urljoin(self.base, raw)
        try:
            return IRI(raw)
        except TermError as exc:
            raise self.error(str(exc), tok) from None

    def pname(self, tok) -> IRI:
        prefix, _, local = tok[1].partition(":")
        if prefix not in self.graph.namespaces:
            raise self.error(f"undeclared prefix {prefix!r}", tok)
        local = re.sub(r"\\(.)", r"\1", local)
        try:
            return IRI(self.graph.namespaces[prefix] + local)
        except TermError as exc:
            raise self.error(str(exc), tok) from None

    def triples(self):
        kind, value, _ = self.peek()
        if value == "[":
            subject = self.blank_node_property_list()
            if self.peek()[1] not in (".",):
                self.predicate_object_list(subject)
        else:
            subject = self.subject()
            self.predicate_object_list(subject)

    def subject(self):
        tok = self.next()
        kind, value, _ = tok
        if kind == "IRIREF":
            return self.iriref(tok)
        if kind == "PNAME":
            return self.pname(tok)
        if kind == "BNODE":
            return self.bnode(value[2:])
        if value == "(":
            return self.collection()
        raise self.error(f"unexpected {value or 'end of input'!r} in subject position", tok)

    def bnode(self, label: str) -> BNode:
        if label not in self.bnodes:
            self.bnodes[label] = BNode()
        return self.bnodes[label]

    def predicate_object_list(self, subject):
        self.verb_object_list(subject)
        while self.peek()[1] == ";":
            while self.peek()[1] == ";":
                self.next()
            if self.peek()[1] in (".", "]") or self.peek()[0] == "EOF":
                return
            self.verb_object_list(subject)

    def verb_object_list(self, subject):
        tok = self.next()
        if tok[0] == "KEYWORD" and tok[1] == "a":
            predicate = RDF.type
        elif tok[0] == "IRIREF":
            predicate = self.iriref(tok)
        elif tok[0] == "PNAME":
            predicate = self.pname(tok)
        else:
            raise self.error(f"expected predicate, found {tok[1] or 'end of input'!r}", tok)
        self.graph.add((subject, predicate, self.object()))
        while self.peek()[1] == ",":
            self.next()
            self.graph.add((subject, predicate, self.object()))

    def blank_node_property_list(self) -> BNode:
        self.expect("[")
        node = BNode()
        if self.peek()[1] != "]":
            self.predicate_object_list(node)
        self.expect("]")
        return node

    def collection(self):
        items = []
        while self.peek()[1] != ")":
            if self.peek()[0] == "EOF":
                raise self.error("unterminated collection")
            items.append(self.object())
        self.next()
        if not items:
            return RDF.nil
        head = node = BNode()
        for idx, item in enumerate(items):
            self.graph.add((node, RDF.first, item))
            nxt = BNode() if idx + 1 < len(items) else RDF.nil
            self.graph.add((node, RDF.rest, nxt))
            node = nxt
        return head

    def object(self):
        kind, value, _ = self.peek()
        if value == "[":
            return self.blank_node_property_list()
        if kind in ("STRING", "STRING_LONG"):
            return self.literal()
        if kind in ("INTEGER", "DECIMAL", "DOUBLE"):
            self.next()
            dt = {"INTEGER": XSD.integer, "DECIMAL": XSD.decimal, "DOUBLE": XSD.double}[kind]
            return Literal(value, dt.value)
        if kind == "KEYWORD" and value in ("true", "false"):
            self.next()
            return Literal(value, XSD.boolean.value)
        return self.subject()

    def literal(self) -> Literal:
        tok = self.next()
        kind, value, offset = tok
        quote = 3 if kind == "STRING_LONG" else 1
        lexical = _unescape(value[quote:-quote], self._position(offset))
        nxt = self.peek()
        try:
            if nxt[0] == "LANGTAG":
                self.next()
                return Literal(lexical, lang=nxt[1][1:])
            if nxt[0] == "DTYPE":
                self.next()
                dtok = self.next()
                dt = self.iriref(dtok) if dtok[0] == "IRIREF" else self.pname(dtok)
                return Literal(lexical, dt.value)
        except TermError as exc:
            raise self.error(str(exc), nxt) from None
        return Literal(lexical)


def parse_turtle(text: str, base: str | None = None) -> Graph:
    """Parse Turtle (and therefore N-Triples) into a new graph."""
    return _Parser(text, base).parse()
