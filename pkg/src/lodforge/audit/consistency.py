"""Disjointness and domain/range checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..graph import RDF, Graph
from ..graph.namespaces import expand_curie
from ..graph.terms import IRI, Literal

IRI_KIND = "@iri"
LITERAL_KIND = "@literal"


@dataclass
class Axioms:
    disjoint: list[tuple[IRI, IRI]] = field(default_factory=list)
    domain: dict[IRI, set] = field(default_factory=dict)
    range: dict[IRI, set] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "Axioms":
        def expand(values):
            return {v if v.startswith("@") else expand_curie(v) for v in values}
        return cls(
            [(expand_curie(a), expand_curie(b)) for a, b in data.get("disjoint", [])],
            {expand_curie(p): expand(v) for p, v in data.get("domain", {}).items()},
            {expand_curie(p): expand(v) for p, v in data.get("range", {}).items()},
        )


def load_axioms(path: str | Path | None = None) -> Axioms:
    if path is None:
        text = resources.files(__package__).joinpath("data").joinpath("axioms.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return Axioms.from_dict(json.loads(text))


@dataclass(frozen=True)
class ConsistencyViolation:
    kind: str           # "disjoint", "domain" or "range"
    subject: str
    detail: str


@dataclass
class ConsistencyResult:
    class_violations: list[ConsistencyViolation]
    relation_violations: list[ConsistencyViolation]
    typed_resources: int
    checked_triples: int

    @property
    def violations(self) -> list[ConsistencyViolation]:
        return self.class_violations + self.relation_violations

    @property
    def class_score(self) -> float:
        bad = len({v.subject for v in self.class_violations})
        return 1.0 - bad / self.typed_resources if self.typed_resources else 1.0

    @property
    def relation_score(self) -> float:
        bad = len(self.relation_violations)
        return 1.0 - bad / self.checked_triples if self.checked_triples else 1.0


def consistency_check(graph: Graph, axioms: Axioms | None = None) -> ConsistencyResult:
    axioms = load_axioms() if axioms is None else axioms
    class_violations = []
    typed = graph.subjects(RDF.type, None)
    for resource in sorted(typed, key=str):
        types = graph.types(resource)
        for a, b in axioms.disjoint:
            if a in types and b in types:
                class_violations.append(ConsistencyViolation(
                    "disjoint", str(resource), f"typed both {a.value} and {b.value}"))

    relation_violations = []
    checked = 0
    for p in sorted(set(axioms.domain) | set(axioms.range), key=str):
        for s, _, o in sorted(graph.triples(None, p, None), key=lambda t: (t[0].n3(), t[2].n3())):
            checked += 1
            problem = None
            allowed = axioms.domain.get(p)
            if allowed:
                types = graph.types(s)
                if types and not types & allowed:
                    problem = ("domain", f"{p.value} subject typed {_names(types)}")
            allowed = axioms.range.get(p)
            if allowed and problem is None:
                if isinstance(o, Literal):
                    if LITERAL_KIND not in allowed:
                        problem = ("range", f"{p.value} object is a literal {o.n3()}")
                elif LITERAL_KIND in allowed and len(allowed) == 1:
                    problem = ("range", f"{p.value} object {o.n3()} is not a literal")
                else:
                    classes = {a for a in allowed if isinstance(a, IRI)}
                    types = graph.types(o)
                    if classes and types and not types & classes:
                        problem = ("range", f"{p.value} object typed {_names(types)}")
            if problem:
                relation_violations.append(ConsistencyViolation(problem[0], str(s), problem[1]))
    return ConsistencyResult(class_violations, relation_violations, len(typed), checked)


def _names(types) -> str:
    return ", ".join(sorted(t.value for t in types if isinstance(t, IRI)))
