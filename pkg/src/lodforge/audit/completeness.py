"""Schema, column and population completeness against a gold standard."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from statistics import fmean

from ..enrich.labels import life_dates, name_key
from ..enrich.reconcile import LABEL_PREDICATES
from ..graph import RDF, SKOS, Graph
from ..graph.namespaces import expand_curie
from ..graph.terms import IRI, Literal

POPULATION_LABELS = LABEL_PREDICATES + (SKOS.prefLabel,)


class GoldError(ValueError):
    pass


@dataclass(frozen=True)
class GoldClass:
    name: str
    classes: tuple[IRI, ...]
    # property name -> alternatives, each a path of one or more predicates
    properties: dict[str, tuple[tuple[IRI, ...], ...]]


@dataclass(frozen=True)
class GoldStandard:
    classes: tuple[GoldClass, ...]
    population: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.classes and not self.population:
            raise GoldError("gold standard is empty")

    @property
    def pairs(self) -> list[tuple[GoldClass, str]]:
        return [(c, p) for c in self.classes for p in c.properties]

    @classmethod
    def from_dict(cls, data: dict) -> "GoldStandard":
        try:
            classes = tuple(
                GoldClass(name, tuple(expand_curie(c) for c in spec["classes"]),
                          {p: tuple(tuple(expand_curie(step) for step in alt.split("/")) for alt in alts)
                           for p, alts in spec.get("properties", {}).items()})
                for name, spec in data.get("classes", {}).items())
            population = tuple((p["label"], p.get("id", "")) for p in data.get("population", []))
        except (KeyError, TypeError, AttributeError) as exc:
            raise GoldError(f"malformed gold standard: {exc}") from None
        return cls(classes, population)


def load_gold(path: str | Path | None = None) -> GoldStandard:
    """Read a gold standard file; ``None`` gives the shipped one."""
    if path is None or str(path) == "builtin":
        text = resources.files(__package__).joinpath("data").joinpath("gold.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return GoldStandard.from_dict(json.loads(text))


def _follows(graph: Graph, node, path: tuple[IRI, ...]) -> bool:
    frontier = {node}
    for step in path:
        frontier = {o for n in frontier for o in graph.objects(n, step)}
        if not frontier:
            return False
    return True


def _path_anywhere(graph: Graph, path: tuple[IRI, ...]) -> bool:
    return any(_follows(graph, s, path) for s in graph.subjects(path[0], None))


def _members(graph: Graph, gold_class: GoldClass) -> set:
    out = set()
    for c in gold_class.classes:
        out |= graph.instances(c)
    return out


@dataclass
class CompletenessResult:
    schema: float
    column: float | None
    population: float | None
    missing_schema: list[str] = field(default_factory=list)
    column_rates: dict[str, float] = field(default_factory=dict)
    excluded_pairs: list[str] = field(default_factory=list)
    unmatched_population: list[str] = field(default_factory=list)


def schema_completeness(graph: Graph, gold: GoldStandard) -> tuple[float, list[str]]:
    total = 0
    missing = []
    for gc in gold.classes:
        total += 1
        if not _members(graph, gc):
            missing.append(gc.name)
        for prop, alternatives in gc.properties.items():
            total += 1
            if not any(_path_anywhere(graph, alt) for alt in alternatives):
                missing.append(f"{gc.name}.{prop}")
    score = (total - len(missing)) / total if total else 1.0
    return score, missing


def column_completeness(graph: Graph, gold: GoldStandard) -> tuple[float | None, dict, list[str]]:
    """Mean over (class, property) pairs of the share of instances bearing it."""
    rates = {}
    excluded = []
    for gc, prop in gold.pairs:
        members = _members(graph, gc)
        key = f"{gc.name}.{prop}"
        if not members:
            excluded.append(key)
            continue
        bearing = sum(1 for m in members
                      if any(_follows(graph, m, alt) for alt in gc.properties[prop]))
        rates[key] = bearing / len(members)
    return (fmean(rates.values()) if rates else None), rates, excluded


def _labels(graph: Graph) -> list[str]:
    out = []
    for p in POPULATION_LABELS:
        out.extend(o.lexical for o in graph.objects(None, p) if isinstance(o, Literal))
    return out


def population_completeness(graph: Graph, gold: GoldStandard) -> tuple[float | None, list[str]]:
    """Share of gold population labels matched by some resource label.

    Names compare by normalised key; when both sides carry life dates those
    must agree too.
    """
    if not gold.population:
        return None, []
    index: dict[str, set] = {}
    for label in _labels(graph):
        index.setdefault(name_key(label), set()).add(life_dates(label))
    unmatched = []
    for label, _ in gold.population:
        dates = life_dates(label)
        seen = index.get(name_key(label), set())
        if not any(d is None or dates is None or d == dates for d in seen):
            unmatched.append(label)
    return 1 - len(unmatched) / len(gold.population), unmatched


def completeness(graph: Graph, gold: GoldStandard) -> CompletenessResult:
    schema, missing = schema_completeness(graph, gold)
    column, rates, excluded = column_completeness(graph, gold)
    population, unmatched = population_completeness(graph, gold)
    return CompletenessResult(schema, column, population, missing, rates, excluded, unmatched)
