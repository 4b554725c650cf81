"""Duplicate agent detection by normalised label."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..enrich.labels import life_dates, normalize_label
from ..enrich.reconcile import ENTITY_CLASSES, LABEL_PREDICATES
from ..graph import Graph
from ..graph.terms import IRI, Literal


@dataclass
class DuplicateResult:
    clusters: list[list[str]] = field(default_factory=list)
    labeled_agents: int = 0

    @property
    def clustered(self) -> int:
        return sum(len(c) for c in self.clusters)

    @property
    def score(self) -> float:
        if not self.labeled_agents:
            return 1.0
        return 1.0 - self.clustered / self.labeled_agents


def _agent_labels(graph: Graph, classes, predicates) -> dict[IRI, str]:
    agents = set()
    for cls in classes:
        agents |= graph.instances(cls)
    out = {}
    for agent in agents:
        for p in predicates:
            lit = graph.value(agent, p)
            if isinstance(lit, Literal):
                out[agent] = lit.lexical
                break
    return out


def detect_duplicate_agents(graph: Graph, classes=ENTITY_CLASSES["agent"],
                            label_predicates=LABEL_PREDICATES) -> DuplicateResult:
    """Group agents whose labels agree after normalisation.

    Names are compared with life dates removed. Dates then split a group
    when two members carry different dates; an undated member joins the
    group only when exactly one dated variant exists.
    """
    labels = _agent_labels(graph, classes, label_predicates)
    by_name: dict[str, dict[str | None, list[str]]] = defaultdict(lambda: defaultdict(list))
    for agent, label in labels.items():
        by_name[normalize_label(label, drop_dates=True)][life_dates(label)].append(str(agent))
    clusters = []
    for variants in by_name.values():
        undated = variants.pop(None, [])
        dated = list(variants.values())
        if len(dated) == 1:
            dated[0].extend(undated)
        elif undated:
            dated.append(undated)
        clusters.extend(sorted(group) for group in dated if len(group) >= 2)
    clusters.sort()
    return DuplicateResult(clusters, len(labels))
