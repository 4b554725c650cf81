"""Basic graph pattern matching with a SPARQL-like surface.

Supported: PREFIX, SELECT [DISTINCT] with variables, ``*`` or
``(COUNT([DISTINCT] ?v|*) AS ?alias)``, conjunctive triple patterns (with
``;`` and ``,`` abbreviations), ``FILTER regex(?v|str(?v), "re"[, "flags"])``,
``FILTER(?v op term)`` comparisons, GROUP BY, HAVING, ORDER BY, LIMIT and
OFFSET. Anything else (OPTIONAL, UNION, property paths, ...) is rejected at
compile time.

An aggregate query with no GROUP BY and no matching solutions returns no
rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .namespaces import RDF, STANDARD_PREFIXES, XSD
from .store import Graph
from .terms import IRI, BNode, Literal, Term, TermError, term_key


class QueryCompileError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


PatternTerm = Union[Var, IRI, BNode, Literal]


@dataclass(frozen=True)
class Regex:
    var: Var
    pattern: str
    flags: str = ""
    on_str: bool = False


@dataclass(frozen=True)
class Compare:
    var: Var
    op: str
    value: Term
    on_str: bool = False


Filter = Union[Regex, Compare]


@dataclass(frozen=True)
class Count:
    alias: Var
    var: Var | None = None  # None means COUNT(*)
    distinct: bool = False


@dataclass(frozen=True)
class Having:
    var: Var
    op: str
    value: float


@dataclass(frozen=True)
class OrderKey:
    var: Var
    descending: bool = False


@dataclass
class Query:
    patterns: list[tuple[PatternTerm, PatternTerm, PatternTerm]]
    projection: list[Union[Var, Count]] = field(default_factory=list)  # empty = SELECT *
    filters: list[Filter] = field(default_factory=list)
    distinct: bool = False
    group_by: list[Var] = field(default_factory=list)
    having: list[Having] = field(default_factory=list)
    order_by: list[OrderKey] = field(default_factory=list)
    limit: int | None = None
    offset: int = 0

    def pattern_vars(self) -> list[Var]:
        seen: list[Var] = []
        for pattern in self.patterns:
            for t in pattern:
                if isinstance(t, Var) and t not in seen:
                    seen.append(t)
        return seen

    @property
    def aggregates(self) -> list[Count]:
        return [p for p in self.projection if isinstance(p, Count)]

    def output_vars(self) -> list[Var]:
        if not self.projection:
            return self.pattern_vars()
        return [p.alias if isinstance(p, Count) else p for p in self.projection]

    def validate(self) -> "Query":
        bound = set(self.pattern_vars())
        if not self.patterns:
            raise QueryCompileError("query has no triple patterns")
        aliases = {c.alias for c in self.aggregates}
        for item in self.projection:
            if isinstance(item, Var) and item not in bound:
                raise QueryCompileError(f"projected variable {item} is not bound by any pattern")
            if isinstance(item, Count):
                if item.var is not None and item.var not in bound:
                    raise QueryCompileError(f"counted variable {item.var} is not bound by any pattern")
                if item.alias in bound:
                    raise QueryCompileError(f"alias {item.alias} clashes with a pattern variable")
        for f in self.filters:
            if f.var not in bound:
                raise QueryCompileError(f"filtered variable {f.var} is not bound by any pattern")
        for v in self.group_by:
            if v not in bound:
                raise QueryCompileError(f"grouped variable {v} is not bound by any pattern")
        grouped = bool(self.group_by or self.aggregates)
        if grouped:
            for item in self.projection:
                if isinstance(item, Var) and item not in self.group_by:
                    raise QueryCompileError(f"variable {item} must appear in GROUP BY")
            if not self.projection:
                raise QueryCompileError("SELECT * cannot be combined with GROUP BY")
        for h in self.having:
            if h.var not in aliases and h.var not in self.group_by:
                raise QueryCompileError(f"HAVING refers to unknown variable {h.var}")
        outputs = set(self.output_vars())
        for key in self.order_by:
            if key.var not in outputs and (grouped or key.var not in bound):
                raise QueryCompileError(f"ORDER BY refers to unknown variable {key.var}")
        if self.limit is not None and self.limit < 0:
            raise QueryCompileError("LIMIT must be non-negative")
        return self


# ------------------------------------------------------------ evaluation

_NUMERIC = {XSD[t].value for t in ("integer", "decimal", "double", "float", "int", "long",
                                    "short", "nonNegativeInteger", "positiveInteger")}


def numeric_value(term) -> float | None:
    if isinstance(term, Literal) and term.datatype in _NUMERIC:
        try:
            return float(term.lexical)
        except ValueError:
            return None
    return None


def _compare(left, op: str, right) -> bool:
    ln, rn = numeric_value(left), numeric_value(right)
    if ln is not None and rn is not None:
        a, b = ln, rn
    elif op in ("=", "!="):
        return (left == right) == (op == "=")
    elif isinstance(left, Literal) and isinstance(right, Literal) \
            and left.datatype == right.datatype and left.lang == right.lang:
        a, b = left.lexical, right.lexical
    else:
        return False
    return {"=": a == b, "!=": a != b, "<": a < b, ">": a > b,
            "<=": a <= b, ">=": a >= b}[op]


def _string_of(term, on_str: bool) -> str | None:
    if isinstance(term, Literal):
        return term.lexical
    if on_str and isinstance(term, IRI):
        return term.value
    return None


def filter_passes(f: Filter, binding: dict) -> bool:
    value = binding[f.var]
    if isinstance(f, Regex):
        text = _string_of(value, f.on_str)
        if text is None:
            return False
        flags = re.IGNORECASE if "i" in f.flags else 0
        flags |= re.MULTILINE if "m" in f.flags else 0
        flags |= re.DOTALL if "s" in f.flags else 0
        return re.search(f.pattern, text, flags) is not None
    if f.on_str:
        text = _string_of(value, True)
        value = Literal(text) if text is not None else None
        if value is None:
            return False
    return _compare(value, f.op, f.value)


def order_key(term) -> tuple:
    if isinstance(term, BNode):
        return (0, 0, 0.0, term_key(term))
    if isinstance(term, IRI):
        return (1, 0, 0.0, term_key(term))
    num = numeric_value(term)
    if num is not None:
        return (2, 0, num, term_key(term))
    return (2, 1, 0.0, term_key(term))


def _solutions(graph: Graph, query: Query) -> list[dict]:
    remaining = list(query.patterns)
    solutions: list[dict] = [{}]
    pending = list(query.filters)
    while remaining and solutions:
        sample = solutions[0]

        def boundness(pattern):
            return -sum(1 for t in pattern if not isinstance(t, Var) or t in sample)

        pattern = min(remaining, key=boundness)
        remaining.remove(pattern)
        extended = []
        for binding in solutions:
            s, p, o = (binding.get(t, None) if isinstance(t, Var) else t for t in pattern)
            if p is not None and not isinstance(p, IRI):
                continue
            if s is not None and isinstance(s, Literal):
                continue
            for triple in graph.triples(s, p, o):
                new = dict(binding)
                ok = True
                for var, value in zip(pattern, triple):
                    if isinstance(var, Var):
                        if var in new and new[var] != value:
                            ok = False
                            break
                        new[var] = value
                if ok:
                    extended.append(new)
        solutions = extended
        bound_now = set(solutions[0]) if solutions else set()
        ready = [f for f in pending if f.var in bound_now]
        if ready:
            solutions = [b for b in solutions if all(filter_passes(f, b) for f in ready)]
            pending = [f for f in pending if f not in ready]
    return solutions


def _count(group: list[dict], agg: Count) -> Literal:
    if agg.var is None:
        n = len(group) if not agg.distinct else len({tuple(sorted(
            ((v.name, term_key(t)) for v, t in b.items()))) for b in group})
    elif agg.distinct:
        n = len({b[agg.var] for b in group if agg.var in b})
    else:
        n = sum(1 for b in group if agg.var in b)
    return Literal(str(n), XSD.integer.value)


def evaluate(graph: Graph, query: Query) -> list[dict[str, Term]]:
    query.validate()
    solutions = _solutions(graph, query)
    outputs = query.output_vars()
    if query.aggregates or query.group_by:
        groups: dict[tuple, list[dict]] = {}
        for b in solutions:
            groups.setdefault(tuple(b[v] for v in query.group_by), []).append(b)
        rows = []
        for key, members in groups.items():
            row = dict(zip(query.group_by, key))
            for agg in query.aggregates:
                row[agg.alias] = _count(members, agg)
            if all(_compare(row[h.var], h.op, Literal(repr(h.value), XSD.double.value))
                   for h in query.having):
                rows.append(row)
    else:
        order_extra = [k.var for k in query.order_by if k.var not in outputs]
        rows = [{v: b[v] for v in outputs + order_extra} for b in solutions]
    if query.distinct:
        seen = set()
        unique = []
        for row in rows:
            key = tuple(row[v] for v in outputs)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique
    rows.sort(key=lambda r: tuple(term_key(r[v]) for v in outputs))
    for key in reversed(query.order_by):
        rows.sort(key=lambda r: order_key(r[key.var]), reverse=key.descending)
    end = None if query.limit is None else query.offset + query.limit
    rows = rows[query.offset:end]
    return [{v.name: row[v] for v in outputs} for row in rows]


def match(graph: Graph, query: Union[Query, str]) -> list[dict[str, Term]]:
    """Evaluate a query (object or query text) against a graph."""
    if isinstance(query, str):
        query = parse_query(query)
    return evaluate(graph, query)


# --------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"""
    (?P<WS>\s+|\#[^\n]*)
  | (?P<IRIREF><[^<>"{}|^`\\\s]*>)
  | (?P<STRING>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<VAR>[?$][A-Za-z_][A-Za-z0-9_]*)
  | (?P<LANGTAG>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<NUMBER>[+-]?(?:[0-9]+\.[0-9]+|[0-9]+))
  | (?P<DTYPE>\^\^)
  | (?P<PNAME>(?:[A-Za-z][A-Za-z0-9_\-.]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<OP>!=|<=|>=|&&|\|\||[=<>!])
  | (?P<PUNCT>[{}().;,*/|^+])
""", re.VERBOSE)

_UNSUPPORTED = {"OPTIONAL", "UNION", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH",
                "CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "FROM", "NOT",
                "EXISTS", "REDUCED", "SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT",
                "LOAD", "CLEAR", "DROP", "CREATE", "WITH", "USING", "IN", "BOUND",
                "LANG", "LANGMATCHES", "DATATYPE", "CONTAINS", "STRSTARTS", "IF"}


class _QueryParser:
    def __init__(self, text: str, prefixes: dict[str, str] | None):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise QueryCompileError(f"unsupported syntax near {text[pos:pos + 20]!r}")
            if m.lastgroup != "WS":
                self.tokens.append((m.lastgroup, m.group()))
            pos = m.end()
        self.tokens.append(("EOF", ""))
        self.i = 0
        self.prefixes = dict(STANDARD_PREFIXES if prefixes is None else prefixes)

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i = min(self.i + 1, len(self.tokens) - 1)
        return tok

    def is_kw(self, word: str, offset=0) -> bool:
        kind, value = self.peek(offset)
        return kind == "NAME" and value.upper() == word

    def expect(self, value: str):
        kind, got = self.next()
        if got.upper() != value.upper():
            self.unsupported(got, expected=value)

    def unsupported(self, value: str, expected: str | None = None):
        if value.upper() in _UNSUPPORTED:
            raise QueryCompileError(f"unsupported construct: {value.upper()}")
        if value in ("/", "|", "^", "+") or (value == "*" and expected != "*"):
            raise QueryCompileError(f"unsupported construct: property path '{value}'")
        if expected:
            raise QueryCompileError(f"expected {expected!r}, found {value or 'end of query'!r}")
        raise QueryCompileError(f"unsupported construct: {value or 'end of query'!r}")

    def parse(self) -> Query:
        while self.is_kw("PREFIX") or self.is_kw("BASE"):
            if self.next()[1].upper() == "BASE":
                raise QueryCompileError("unsupported construct: BASE")
            kind, pname = self.next()
            if kind != "PNAME" or not pname.endswith(":"):
                raise QueryCompileError(f"bad PREFIX declaration near {pname!r}")
            kind, iri = self.next()
            if kind != "IRIREF":
                raise QueryCompileError(f"bad PREFIX IRI near {iri!r}")
            self.prefixes[pname[:-1]] = iri[1:-1]
        if not self.is_kw("SELECT"):
            self.unsupported(self.peek()[1], expected="SELECT")
        self.next()
        query = Query(patterns=[])
        if self.is_kw("DISTINCT"):
            self.next()
            query.distinct = True
        if self.peek()[1] == "*":
            self.next()
        else:
            while self.peek()[0] == "VAR" or self.peek()[1] == "(":
                if self.peek()[0] == "VAR":
                    query.projection.append(Var(self.next()[1][1:]))
                else:
                    query.projection.append(self.aggregate())
            if not query.projection:
                self.unsupported(self.peek()[1], expected="projection")
        if self.is_kw("WHERE"):
            self.next()
        self.expect("{")
        self.group_graph_pattern(query)
        self.expect("}")
        self.modifiers(query)
        if self.peek()[0] != "EOF":
            self.unsupported(self.peek()[1])
        return query.validate()

    def aggregate(self) -> Count:
        self.expect("(")
        if not self.is_kw("COUNT"):
            self.unsupported(self.peek()[1], expected="COUNT")
        self.next()
        self.expect("(")
        distinct = False
        if self.is_kw("DISTINCT"):
            self.next()
            distinct = True
        kind, value = self.next()
        var = None
        if kind == "VAR":
            var = Var(value[1:])
        elif value != "*":
            self.unsupported(value, expected="variable or *")
        self.expect(")")
        self.expect("AS")
        kind, alias = self.next()
        if kind != "VAR":
            self.unsupported(alias, expected="alias variable")
        self.expect(")")
        return Count(Var(alias[1:]), var, distinct)

    def group_graph_pattern(self, query: Query):
        while self.peek()[1] != "}":
            if self.peek()[0] == "EOF":
                raise QueryCompileError("unterminated WHERE block")
            if self.is_kw("FILTER"):
                self.next()
                query.filters.append(self.filter())
            elif self.peek()[1] == "{":
                self.unsupported("{", expected="triple pattern")
            else:
                self.triples_same_subject(query)
            while self.peek()[1] == ".":
                self.next()

    def term(self, position: str):
        kind, value = self.next()
        if kind == "VAR":
            return Var(value[1:])
        if kind == "IRIREF":
            return self.iri(value[1:-1])
        if kind == "PNAME":
            prefix, _, local = value.partition(":")
            if prefix not in self.prefixes:
                raise QueryCompileError(f"undeclared prefix {prefix!r}")
            return self.iri(self.prefixes[prefix] + local)
        if kind == "NAME" and value == "a" and position == "predicate":
            return RDF.type
        if position == "object":
            if kind == "STRING":
                return self.literal(value)
            if kind == "NUMBER":
                dt = XSD.decimal if "." in value else XSD.integer
                return Literal(value, dt.value)
            if kind == "NAME" and value in ("true", "false"):
                return Literal(value, XSD.boolean.value)
        if value == "[" or value == "(":
            raise QueryCompileError("unsupported construct: blank node / collection syntax")
        self.unsupported(value, expected=f"{position} term")

    def iri(self, text: str) -> IRI:
        try:
            return IRI(text)
        except TermError as exc:
            raise QueryCompileError(str(exc)) from None

    def literal(self, token: str) -> Literal:
        lexical = re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t", "r": "\r"}.get(m.group(1), m.group(1)),
                         token[1:-1])
        if self.peek()[0] == "LANGTAG":
            return Literal(lexical, lang=self.next()[1][1:])
        if self.peek()[0] == "DTYPE":
            self.next()
            dt = self.term("datatype")
            return Literal(lexical, dt.value)
        return Literal(lexical)

    def triples_same_subject(self, query: Query):
        subject = self.term("subject")
        while True:
            predicate = self.term("predicate")
            if self.peek()[1] in ("/", "|", "*", "+", "?", "^"):
                self.unsupported(self.peek()[1])
            while True:
                query.patterns.append((subject, predicate, self.term("object")))
                if self.peek()[1] != ",":
                    break
                self.next()
            if self.peek()[1] != ";":
                break
            while self.peek()[1] == ";":
                self.next()
            if self.peek()[1] in (".", "}"):
                break

    def filter_operand(self):
        if self.is_kw("STR"):
            self.next()
            self.expect("(")
            kind, value = self.next()
            if kind != "VAR":
                self.unsupported(value, expected="variable")
            self.expect(")")
            return Var(value[1:]), True
        kind, value = self.next()
        if kind != "VAR":
            self.unsupported(value, expected="variable")
        return Var(value[1:]), False

    def filter(self) -> Filter:
        wrapped = self.peek()[1] == "("
        if wrapped:
            self.next()
        if self.is_kw("REGEX"):
            self.next()
            self.expect("(")
            var, on_str = self.filter_operand()
            self.expect(",")
            kind, pattern = self.next()
            if kind != "STRING":
                self.unsupported(pattern, expected="regex string")
            flags = ""
            if self.peek()[1] == ",":
                self.next()
                flags = self.literal(self.next()[1]).lexical
            self.expect(")")
            result: Filter = Regex(var, self.literal(pattern).lexical, flags, on_str)
        else:
            if self.peek()[0] == "NAME" and not self.is_kw("STR"):
                self.unsupported(self.peek()[1])
            var, on_str = self.filter_operand()
            kind, op = self.next()
            if kind != "OP" or op in ("&&", "||", "!"):
                self.unsupported(op, expected="comparison operator")
            value = self.term("object")
            if isinstance(value, Var):
                raise QueryCompileError("unsupported construct: variable-to-variable comparison")
            result = Compare(var, op, value, on_str)
        if self.peek()[1] in ("&&", "||"):
            self.unsupported(self.peek()[1])
        if wrapped:
            self.expect(")")
        return result

    def modifiers(self, query: Query):
        if self.is_kw("GROUP"):
            self.next()
            self.expect("BY")
            while self.peek()[0] == "VAR":
                query.group_by.append(Var(self.next()[1][1:]))
            if not query.group_by:
                self.unsupported(self.peek()[1], expected="GROUP BY variable")
        if self.is_kw("HAVING"):
            self.next()
            while self.peek()[1] == "(":
                self.next()
                kind, value = self.next()
                if kind != "VAR":
                    self.unsupported(value, expected="variable in HAVING")
                kind, op = self.next()
                if kind != "OP" or op in ("&&", "||", "!"):
                    self.unsupported(op, expected="comparison operator")
                kind, number = self.next()
                if kind != "NUMBER":
                    self.unsupported(number, expected="number")
                self.expect(")")
                query.having.append(Having(Var(value[1:]), op, float(number)))
        if self.is_kw("ORDER"):
            self.next()
            self.expect("BY")
            while True:
                if self.is_kw("ASC") or self.is_kw("DESC"):
                    descending = self.next()[1].upper() == "DESC"
                    self.expect("(")
                    kind, value = self.next()
                    if kind != "VAR":
                        self.unsupported(value, expected="variable")
                    self.expect(")")
                    query.order_by.append(OrderKey(Var(value[1:]), descending))
                elif self.peek()[0] == "VAR":
                    query.order_by.append(OrderKey(Var(self.next()[1][1:])))
                else:
                    break
            if not query.order_by:
                self.unsupported(self.peek()[1], expected="ORDER BY key")
        while self.is_kw("LIMIT") or self.is_kw("OFFSET"):
            word = self.next()[1].upper()
            kind, value = self.next()
            if kind != "NUMBER" or not value.isdigit():
                self.unsupported(value, expected="integer")
            if word == "LIMIT":
                query.limit = int(value)
            else:
                query.offset = int(value)


def parse_query(text: str, prefixes: dict[str, str] | None = None) -> Query:
    """Compile query text; standard prefixes are predeclared."""
    return _QueryParser(text, prefixes).parse()
