"""Syntactic validity of literals: regex rules plus datatype lexical checks."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import date, datetime
from importlib import resources
from pathlib import Path

from ..enrich.vocab import relator_terms
from ..graph import XSD, Graph
from ..graph.namespaces import expand_curie
from ..graph.terms import IRI, Literal


@dataclass(frozen=True)
class LiteralRule:
    id: str
    predicates: frozenset[IRI]
    pattern: re.Pattern
    literals_only: bool = False


@dataclass(frozen=True)
class Violation:
    subject: str
    predicate: str
    lexical: str
    rule: str


@dataclass
class LiteralResult:
    score: float
    checked: int
    valid: int
    violations: list[Violation] = field(default_factory=list)


def _xsd_checks():
    def iso(fn):
        def check(v):
            try:
                fn(v)
                return True
            except ValueError:
                return False
        return check

    return {
        XSD.gYear.value: lambda v: re.fullmatch(r"-?\d{4,}", v) is not None,
        XSD.date.value: iso(date.fromisoformat),
        XSD.dateTime.value: iso(datetime.fromisoformat),
        XSD.integer.value: lambda v: re.fullmatch(r"[+-]?\d+", v) is not None,
        XSD.decimal.value: lambda v: re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)", v) is not None,
        XSD.boolean.value: lambda v: v in ("true", "false", "1", "0"),
    }


DATATYPE_CHECKS = _xsd_checks()


def _rule_from_dict(raw: dict) -> LiteralRule:
    flags = re.IGNORECASE if raw.get("ignore_case") else 0
    if raw.get("terms") == "relators":
        alternatives = "|".join(re.escape(t) for t in sorted(relator_terms()))
        # ISBD terminal punctuation on a role is cataloguing practice, not an error
        pattern = re.compile(rf"^({alternatives})[.,;:]?$", flags)
    else:
        pattern = re.compile(raw["pattern"], flags)
    return LiteralRule(raw["id"], frozenset(expand_curie(p) for p in raw["predicates"]), pattern,
                       bool(raw.get("literals_only")))


def load_literal_rules(path: str | Path | None = None) -> list[LiteralRule]:
    if path is None:
        text = resources.files(__package__).joinpath("data").joinpath("literal_rules.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return [_rule_from_dict(r) for r in json.loads(text)["rules"]]


def syntactic_validity_literals(graph: Graph, rules: list[LiteralRule] | None = None) -> LiteralResult:
    """Micro-averaged: every (literal instance, applicable check) counts once.

    A literal is checked by each rule whose predicate set contains its
    predicate, and by its datatype's lexical check when the datatype is
    known. With nothing to check the score is 1.
    """
    rules = load_literal_rules() if rules is None else rules
    checked = valid = 0
    violations = []
    for s, p, o in sorted(graph, key=lambda t: (t[0].n3(), t[1].n3(), t[2].n3())):
        for rule in rules:
            if p not in rule.predicates:
                continue
            if not isinstance(o, Literal):
                if rule.literals_only:
                    continue
                text = o.n3()
                ok = False
            else:
                text = o.lexical
                ok = bool(rule.pattern.match(text.strip()))
            checked += 1
            if ok:
                valid += 1
            else:
                violations.append(Violation(str(s), p.value, text, rule.id))
        if isinstance(o, Literal) and o.datatype in DATATYPE_CHECKS:
            checked += 1
            if DATATYPE_CHECKS[o.datatype](o.lexical):
                valid += 1
            else:
                violations.append(Violation(str(s), p.value, o.lexical, "datatype"))
    score = valid / checked if checked else 1.0
    return LiteralResult(score, checked, valid, violations)
