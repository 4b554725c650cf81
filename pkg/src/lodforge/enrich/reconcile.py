"""Label-based reconciliation against an external knowledge base.

Candidates are only proposed here. Nothing touches the graph until
``apply_sameas`` is called with an accepted list.
"""

from __future__ import annotations

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

import requests

from ..graph import BF, FOAF, OWL, RDFS, SCHEMA, Graph
from ..graph.terms import IRI, Literal, is_absolute_iri
from .labels import life_dates, name_key

log = logging.getLogger(__name__)

SCORE_EXACT_DATES = 1.0
SCORE_EXACT = 0.7
SCORE_NORMALIZED = 0.4

ENTITY_CLASSES = {
    "agent": (BF.Agent, BF.Person, BF.Organization, BF.Family, BF.Meeting, SCHEMA.Person,
              SCHEMA.Organization, FOAF.Person, FOAF.Organization),
    "person": (BF.Person, SCHEMA.Person, FOAF.Person),
    "organization": (BF.Organization, SCHEMA.Organization, FOAF.Organization),
    "place": (BF.Place, SCHEMA.Place),
    "work": (BF.Work, BF.Hub, SCHEMA.VideoObject, SCHEMA.CreativeWork),
}
LABEL_PREDICATES = (RDFS.label, SCHEMA.name, FOAF.name)


class ReconcileError(ValueError):
    pass


@dataclass(frozen=True)
class ReconciliationCandidate:
    source: IRI
    external: IRI
    label: str
    score: float
    evidence: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")


@dataclass
class ReconcileResult:
    candidates: list[ReconciliationCandidate] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)   # (subject IRI, message)


@dataclass(frozen=True)
class ExternalEntry:
    iri: str
    label: str
    birth: str | None = None
    death: str | None = None

    @property
    def dates(self) -> str | None:
        if self.birth or self.death:
            return f"{_year(self.birth)}-{_year(self.death)}"
        return life_dates(self.label)


def _year(value: str | None) -> str:
    if not value:
        return ""
    m = re.match(r"^-?(\d{3,4})", value.strip())
    return m.group(1) if m else ""


class LookupClient(Protocol):
    def lookup(self, label: str) -> list[ExternalEntry]:
        """Entries whose label equals ``label`` exactly."""

    def lookup_normalized(self, key: str) -> list[ExternalEntry]:
        """Entries whose ``name_key`` equals ``key``."""


def parse_sparql_json(payload: dict) -> list[ExternalEntry]:
    """Read SPARQL JSON results with variables item/label and optional birth/death."""
    try:
        bindings = payload["results"]["bindings"]
    except (KeyError, TypeError):
        raise ReconcileError("malformed SPARQL JSON results") from None
    out = []
    for b in bindings:
        try:
            iri = b["item"]["value"]
            label = b["label"]["value"]
        except (KeyError, TypeError):
            raise ReconcileError("result binding lacks item or label") from None
        if not is_absolute_iri(iri):
            raise ReconcileError(f"result item is not an absolute IRI: {iri!r}")
        out.append(ExternalEntry(iri, label, b.get("birth", {}).get("value"),
                                 b.get("death", {}).get("value")))
    return out


class FixtureClient:
    """Answers lookups from a SPARQL JSON results file held in memory."""

    def __init__(self, entries: Iterable[ExternalEntry]):
        self.entries = list(entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureClient":
        with open(path, encoding="utf-8") as fh:
            return cls(parse_sparql_json(json.load(fh)))

    def lookup(self, label: str) -> list[ExternalEntry]:
        return [e for e in self.entries if e.label == label]

    def lookup_normalized(self, key: str) -> list[ExternalEntry]:
        return [e for e in self.entries if name_key(e.label) == key]


def _sparql_string(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


class EndpointClient:
    """SPARQL protocol client (GET, JSON results)."""

    def __init__(self, endpoint: str, timeout: float = 10.0, session: requests.Session | None = None,
                 label_predicate: str = str(RDFS.label)):
        self.endpoint = endpoint
        self.timeout = timeout
        self.session = session or requests.Session()
        self.label_predicate = label_predicate

    def _select(self, condition: str) -> list[ExternalEntry]:
        query = (
            "SELECT ?item ?label WHERE { "
            f"?item <{self.label_predicate}> ?label . FILTER({condition}) }} LIMIT 50"
        )
        resp = self.session.get(self.endpoint, params={"query": query, "format": "json"},
                                headers={"Accept": "application/sparql-results+json"},
                                timeout=self.timeout)
        resp.raise_for_status()
        try:
            payload = resp.json()
        except ValueError:
            raise ReconcileError("endpoint returned non-JSON body") from None
        return parse_sparql_json(payload)

    def lookup(self, label: str) -> list[ExternalEntry]:
        return self._select(f"STR(?label) = {_sparql_string(label)}")

    def lookup_normalized(self, key: str) -> list[ExternalEntry]:
        found = self._select(f"CONTAINS(LCASE(STR(?label)), {_sparql_string(key)})")
        return [e for e in found if name_key(e.label) == key]


def score_candidate(label: str, entry: ExternalEntry) -> tuple[float, tuple[str, ...]] | None:
    """Score one external entry against a local label; None when it does not match."""
    local_dates = life_dates(label)
    other_dates = entry.dates
    if local_dates and other_dates and local_dates.rstrip("-") != other_dates.rstrip("-"):
        return None
    if entry.label == label:
        if local_dates and other_dates:
            return SCORE_EXACT_DATES, ("label:exact", "dates:match")
        return SCORE_EXACT, ("label:exact",)
    if name_key(entry.label) == name_key(label):
        evidence = ("label:normalized",)
        if local_dates and other_dates:
            evidence += ("dates:match",)
        return SCORE_NORMALIZED, evidence
    return None


def labeled_entities(graph: Graph, entity_kind: str) -> list[tuple[IRI, str]]:
    try:
        classes = ENTITY_CLASSES[entity_kind]
    except KeyError:
        raise ReconcileError(f"unknown entity kind {entity_kind!r}") from None
    subjects = set()
    for cls in classes:
        subjects |= graph.instances(cls)
    out = []
    for s in subjects:
        if not isinstance(s, IRI):
            continue
        for p in LABEL_PREDICATES:
            lit = graph.value(s, p)
            if isinstance(lit, Literal):
                out.append((s, lit.lexical))
                break
    return sorted(out, key=lambda pair: pair[0].value)


def _candidates_for(client: LookupClient, subject: IRI, label: str,
                    floor: float) -> list[ReconciliationCandidate]:
    entries = client.lookup(label)
    if not entries:
        entries = client.lookup_normalized(name_key(label))
    found: dict[str, ReconciliationCandidate] = {}
    for entry in entries:
        scored = score_candidate(label, entry)
        if scored is None or scored[0] < floor:
            continue
        score, evidence = scored
        prev = found.get(entry.iri)
        if prev is None or score > prev.score:
            found[entry.iri] = ReconciliationCandidate(subject, IRI(entry.iri), entry.label,
                                                       score, evidence)
    return list(found.values())


def reconcile(graph: Graph, entity_kind: str, client: LookupClient, floor: float = SCORE_NORMALIZED,
              budget: int = 4) -> ReconcileResult:
    """Propose owl:sameAs candidates for every labelled resource of a kind.

    Per-entity failures are recorded in ``errors`` and processing goes on.
    Candidates come back sorted by subject IRI, then score (descending),
    then external IRI.
    """
    entities = labeled_entities(graph, entity_kind)
    result = ReconcileResult()

    def work(item):
        subject, label = item
        try:
            return subject, _candidates_for(client, subject, label, floor), None
        except (requests.RequestException, ReconcileError, ValueError) as exc:
            return subject, [], f"{type(exc).__name__}: {exc}"

    with ThreadPoolExecutor(max_workers=max(1, budget)) as pool:
        outcomes = list(pool.map(work, entities))
    for subject, candidates, error in outcomes:
        if error:
            log.warning("reconciliation failed for %s: %s", subject.value, error)
            result.errors.append((subject.value, error))
        result.candidates.extend(candidates)
    result.candidates.sort(key=lambda c: (c.source.value, -c.score, c.external.value))
    return result


def auto_accept(candidates: Iterable[ReconciliationCandidate]) -> list[tuple[IRI, IRI]]:
    """Only perfect (score 1.0) candidates are accepted without review."""
    return [(c.source, c.external) for c in candidates if c.score >= SCORE_EXACT_DATES]


def read_acceptance(path: str | Path) -> list[tuple[IRI, IRI]]:
    """One ``<subject IRI> <external IRI>`` pair per line.

    Lines starting with ``#`` are comments (a ``#`` elsewhere belongs to a hash IRI).
    """
    pairs = []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace("<", " ").replace(">", " ").split()
        if len(parts) != 2:
            raise ReconcileError(f"{path}:{n}: expected two IRIs, got {line!r}")
        pairs.append((IRI(parts[0]), IRI(parts[1])))
    return pairs


def write_acceptance(pairs: Iterable[tuple[IRI, IRI]]) -> str:
    return "".join(f"{s.value} {o.value}\n" for s, o in pairs)


def apply_sameas(graph: Graph, accepted) -> Graph:
    """Return a copy of ``graph`` with one owl:sameAs triple per accepted pair."""
    pairs = [(c.source, c.external) if isinstance(c, ReconciliationCandidate) else tuple(c)
             for c in accepted]
    missing = sorted({s.value for s, _ in pairs if not graph.has_subject(s)})
    if missing:
        raise ReconcileError("accepted subjects not in graph: " + ", ".join(missing))
    out = graph.copy()
    out.bind("owl", str(OWL))
    for s, o in pairs:
        out.add((s, OWL.sameAs, o))
    return out
