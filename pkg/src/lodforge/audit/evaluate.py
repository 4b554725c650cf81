"""Run every catalogue criterion against a graph."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable
from urllib.parse import urldefrag, urlsplit

from ..graph import (DCTERMS, FOAF, OWL, PROV, RDF, RDFS, SCHEMA, SKOS, VOID, Graph, dump_graph,
                     isomorphic, parse_rdfxml, parse_turtle)
from ..graph.namespaces import expand_curie
from ..graph.terms import BNode, IRI, Literal
from ..mapping.config import MappingConfig
from ..mapping.uris import pattern_regexes
from .completeness import GoldStandard, completeness
from .consistency import consistency_check, load_axioms
from .duplicates import detect_duplicate_agents
from .links import DEFAULT_BUDGET, DEFAULT_TIMEOUT, LinkClient, check_links
from .literals import load_literal_rules, syntactic_validity_literals
from .report import Criterion, QualityReport, catalogue, declared_defaults

DEFAULT_SEED = 20200101
EVIDENCE_CAP = 10

LABEL_PREDICATES = (RDFS.label, SCHEMA.name, FOAF.name, SKOS.prefLabel, DCTERMS["title"])
LICENSE_PREDICATES = (DCTERMS.license, SCHEMA.license, IRI("http://creativecommons.org/ns#license"),
                      IRI("http://www.w3.org/1999/xhtml/vocab#license"))
REIFICATION = (RDF.subject, RDF.predicate, RDF.object)
UNKNOWN_VALUE_MARKERS = (IRI("http://wikiba.se/ontology#SomeValue"),
                         IRI("http://wikiba.se/ontology#NoValue"), OWL.Nothing)
STATEMENT_DATES = (DCTERMS.modified, DCTERMS.created, PROV.generatedAtTime)
STATEMENT_VALIDITY = (SCHEMA.validFrom, SCHEMA.validThrough, DCTERMS.valid, PROV.invalidatedAtTime)
LINKING_PREDICATES = (OWL.sameAs, OWL.equivalentClass, OWL.equivalentProperty, RDFS.subClassOf,
                      RDFS.subPropertyOf, SKOS.exactMatch, SKOS.closeMatch)
READABLE_FORMATS = ("turtle", "ntriples")
RESERVED_HOSTS = ("example.com", "example.org", "example.net")
RESERVED_SUFFIXES = (".example", ".test", ".invalid", ".localhost")


@dataclass
class AuditConfig:
    mapping: MappingConfig = field(default_factory=MappingConfig)
    formats: tuple[str, ...] = ("turtle",)
    declared: dict[str, float] = field(default_factory=declared_defaults)
    seed: int = DEFAULT_SEED
    link_sample: int = 500
    document_sample: int = 100
    link_budget: int = DEFAULT_BUDGET
    timeout: float = DEFAULT_TIMEOUT
    literal_rules: str | Path | None = None
    axioms: str | Path | None = None

    def __post_init__(self):
        self.formats = tuple(self.formats)
        for key, value in self.declared.items():
            if not 0.0 <= float(value) <= 1.0:
                raise ValueError(f"declared score for {key} outside [0, 1]: {value}")
        if self.link_sample < 1 or self.document_sample < 1:
            raise ValueError("sample sizes must be at least 1")

    @property
    def base(self) -> str:
        return self.mapping.base_uri

    def echo(self) -> dict:
        return {"base_uri": self.base, "formats": list(self.formats),
                "declared": dict(sorted(self.declared.items())), "link_sample": self.link_sample,
                "document_sample": self.document_sample, "link_budget": self.link_budget,
                "timeout": self.timeout}


class _NotScored(Exception):
    def __init__(self, status: str, reason: str):
        super().__init__(reason)
        self.status = status
        self.reason = reason


@dataclass
class _Context:
    graph: Graph
    combined: Graph
    config: AuditConfig
    gold: GoldStandard | None
    client: LinkClient | None
    reference: list[tuple[IRI, IRI, str]] | None
    cache: dict = field(default_factory=dict)

    def memo(self, key: str, fn: Callable):
        if key not in self.cache:
            self.cache[key] = fn()
        return self.cache[key]

    def base_subjects(self) -> list[IRI]:
        subs = sorted((s for s in self.graph.subjects() if isinstance(s, IRI)), key=str)
        own = [s for s in subs if s.value.startswith(self.config.base)]
        return own or subs

    def datasets(self) -> set:
        return self.combined.instances(VOID.Dataset)

    def statements(self) -> set:
        return self.graph.instances(RDF.Statement) | self.graph.subjects(RDF.subject, None)


def load_reference(path: str | Path) -> list[tuple[IRI, IRI, str]]:
    """Tab-separated lines: subject IRI, predicate (IRI or CURIE), expected value."""
    rows = []
    for n, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{n}: expected three tab-separated columns")
        subject, predicate, expected = (p.strip() for p in parts)
        rows.append((IRI(subject.strip("<>")), expand_curie(predicate.strip("<>")), expected))
    return rows


# -- evaluators: each returns (score, evidence) or raises _NotScored --------

def _documents(ctx: _Context):
    subjects = sorted(ctx.graph.subjects(), key=lambda s: s.n3())
    rng = random.Random(ctx.config.seed)
    sample = subjects if len(subjects) <= ctx.config.document_sample else \
        rng.sample(subjects, ctx.config.document_sample)
    formats = [f for f in ctx.config.formats if f in ("turtle", "rdfxml", "ntriples")] or ["turtle"]
    good, bad = 0, []
    for s in sample:
        piece = Graph(ctx.graph.triples(s, None, None), namespaces=ctx.graph.namespaces)
        problems = []
        for fmt in formats:
            try:
                text = dump_graph(piece, fmt)
                back = parse_rdfxml(text) if fmt == "rdfxml" else parse_turtle(text)
                if not isomorphic(piece, back):
                    problems.append(f"{fmt}: reparsed description differs")
            except Exception as exc:       # any serializer or parser failure counts against it
                problems.append(f"{fmt}: {exc}")
        if problems:
            bad.append(f"{s.n3()} ({'; '.join(problems)})")
        else:
            good += 1
    return (good / len(sample) if sample else 1.0), bad


def _literals(ctx: _Context):
    result = syntactic_validity_literals(ctx.graph, load_literal_rules(ctx.config.literal_rules))
    return result.score, [f"{v.subject} {v.predicate} {v.lexical!r} ({v.rule})" for v in result.violations]


def _semantic(ctx: _Context):
    if ctx.reference is None:
        raise _NotScored("not-evaluated", "no reference file supplied")
    if not ctx.reference:
        raise _NotScored("not-evaluated", "reference file is empty")
    good, bad = 0, []
    for s, p, expected in ctx.reference:
        values = {o.lexical if isinstance(o, Literal) else str(o) for o in ctx.graph.objects(s, p)}
        if expected in values:
            good += 1
        else:
            bad.append(f"{s.value} {p.value}: expected {expected!r}, found {sorted(values)}")
    return good / len(ctx.reference), bad


def _duplicates(ctx: _Context):
    result = detect_duplicate_agents(ctx.graph)
    return result.score, [" = ".join(c) for c in result.clusters]


def _dataset_level(ctx: _Context):
    sources = (DCTERMS.publisher, DCTERMS.creator, DCTERMS.source, PROV.wasDerivedFrom)
    hits = [d for d in ctx.datasets() if any(ctx.combined.count(d, p, None) for p in sources)]
    return (1.0 if hits else 0.0), [str(d) for d in hits] or ["no dataset-level provenance"]


def _statement_level(ctx: _Context):
    stmts = ctx.statements()
    prov = [p for p in ctx.graph.predicates() if p.value.startswith(str(PROV))]
    hits = sorted(str(s) for s in stmts)[:1] + [p.value for p in prov]
    return (1.0 if hits else 0.0), hits or ["no per-statement provenance"]


def _unknown_values(ctx: _Context):
    hits = [m.value for m in UNKNOWN_VALUE_MARKERS if ctx.graph.count(None, None, m)]
    return (1.0 if hits else 0.0), hits or ["no unknown or empty value markers"]


def _consistency(ctx: _Context):
    return ctx.memo("consistency", lambda: consistency_check(ctx.graph, load_axioms(ctx.config.axioms)))


def _class_constraints(ctx: _Context):
    result = _consistency(ctx)
    return result.class_score, [f"{v.subject}: {v.detail}" for v in result.class_violations]


def _relation_constraints(ctx: _Context):
    result = _consistency(ctx)
    return result.relation_score, [f"{v.subject}: {v.detail}" for v in result.relation_violations]


def _completeness(ctx: _Context):
    if ctx.gold is None:
        raise _NotScored("not-evaluated", "no gold standard supplied")
    return ctx.memo("completeness", lambda: completeness(ctx.graph, ctx.gold))


def _schema(ctx: _Context):
    result = _completeness(ctx)
    return result.schema, [f"missing {m}" for m in result.missing_schema]


def _column(ctx: _Context):
    result = _completeness(ctx)
    evidence = [f"{k}: {v:.3f}" for k, v in sorted(result.column_rates.items())]
    evidence += [f"excluded {k} (no instances)" for k in result.excluded_pairs]
    if result.column is None:
        raise _NotScored("not-evaluated", "no gold class has instances")
    return result.column, evidence


def _population(ctx: _Context):
    result = _completeness(ctx)
    if result.population is None:
        raise _NotScored("not-evaluated", "gold standard has no population list")
    return result.population, [f"unmatched {u}" for u in result.unmatched_population]


def _statement_has(ctx: _Context, predicates) -> list[str]:
    return [str(s) for s in sorted(ctx.statements(), key=str)
            if any(ctx.graph.count(s, p, None) for p in predicates)]


def _frequency(ctx: _Context):
    score, evidence = 0.0, []
    dated = [d for d in ctx.datasets() if ctx.combined.count(d, DCTERMS.modified, None)]
    if dated:
        score += 0.5
        evidence.append("dataset modification date present")
    if _statement_has(ctx, STATEMENT_DATES):
        score += 0.5
        evidence.append("per-statement dates present")
    return score, evidence or ["no modification metadata"]


def _validity_period(ctx: _Context):
    hits = _statement_has(ctx, STATEMENT_VALIDITY)
    return (1.0 if hits else 0.0), hits or ["no statement validity periods"]


def _modification_dates(ctx: _Context):
    hits = _statement_has(ctx, (DCTERMS.modified,))
    return (1.0 if hits else 0.0), hits or ["no per-statement modification dates"]


def _descriptions(ctx: _Context):
    subjects = ctx.base_subjects()
    if not subjects:
        return 1.0, []
    missing = [s.value for s in subjects if not any(ctx.graph.count(s, p, None) for p in LABEL_PREDICATES)]
    return 1 - len(missing) / len(subjects), [f"no label: {m}" for m in missing]


def _multilingual(ctx: _Context):
    langs = sorted({o.lang for p in LABEL_PREDICATES for o in ctx.graph.objects(None, p)
                    if isinstance(o, Literal) and o.lang})
    return (1.0 if len(langs) >= 2 else 0.0), [f"label languages: {langs or 'none tagged'}"]


def _understandable(ctx: _Context):
    readable = [f for f in ctx.config.formats if f in READABLE_FORMATS]
    return (1.0 if readable else 0.0), [f"formats: {list(ctx.config.formats)}"]


def _self_describing(ctx: _Context):
    regexes = {k: r for k, r in pattern_regexes(ctx.config.mapping).items() if k not in ("record", "field")}
    subjects = [s for s in ctx.graph.subjects() if isinstance(s, IRI) and s.value.startswith(ctx.config.base)]
    if not subjects:
        raise _NotScored("not-evaluated", "no subjects under the base namespace")
    opaque = sorted(s.value for s in subjects if not any(r.match(s.value) for r in regexes.values()))
    return 1 - len(opaque) / len(subjects), [f"opaque: {o}" for o in opaque]


def _blank_nodes(ctx: _Context):
    bad = [t for t in ctx.graph
           if isinstance(t.subject, BNode) or isinstance(t.object, BNode) or t.predicate in REIFICATION
           or (t.predicate == RDF.type and t.object == RDF.Statement)]
    total = len(ctx.graph)
    return 1 - len(bad) / total, [f"{t.subject.n3()} {t.predicate.n3()} {t.object.n3()}" for t in bad]


def _formats(ctx: _Context):
    n = len(set(ctx.config.formats))
    return min(1.0, n / 2), [f"{n} serialization format(s): {sorted(set(ctx.config.formats))}"]


def _external_vocabulary(ctx: _Context):
    base = ctx.config.base
    own = [t for t in ctx.graph if t.predicate.value.startswith(base)]
    return 1 - len(own) / len(ctx.graph), sorted({t.predicate.value for t in own})


def _proprietary(ctx: _Context):
    base = ctx.config.base
    terms = {p for p in ctx.graph.predicates() if p.value.startswith(base)}
    terms |= {o for o in ctx.graph.objects(None, RDF.type) if isinstance(o, IRI) and o.value.startswith(base)}
    if not terms:
        return 1.0, ["no terms minted under the base namespace"]
    unlinked = sorted(t.value for t in terms if not any(
        isinstance(o, IRI) and not o.value.startswith(base)
        for p in LINKING_PREDICATES for o in ctx.combined.objects(t, p)))
    return 1 - len(unlinked) / len(terms), [f"unlinked: {u}" for u in unlinked]


def reserved_host(base: str) -> bool:
    host = (urlsplit(base).hostname or "").lower()
    return host in RESERVED_HOSTS or host.endswith(RESERVED_SUFFIXES) or \
        any(host.endswith("." + h) for h in RESERVED_HOSTS)


def _dereferencing(ctx: _Context):
    base = ctx.config.base
    if reserved_host(base):
        return 0.0, [f"{urlsplit(base).hostname} is a reserved name; its IRIs cannot dereference"]
    if ctx.client is None:
        raise _NotScored("skipped", "no network budget granted")
    documents = sorted({urldefrag(s.value)[0] for s in ctx.base_subjects()})
    rng = random.Random(ctx.config.seed)
    sample = documents if len(documents) <= ctx.config.link_sample else rng.sample(documents, ctx.config.link_sample)
    if not sample:
        raise _NotScored("not-evaluated", "no subjects under the base namespace")
    results = [ctx.client.probe(u, ctx.config.timeout) for u in sample]
    failed = [f"{r.url}: {r.status or r.error}" for r in results if not r.ok]
    return 1 - len(failed) / len(results), failed


def _rdf_export(ctx: _Context):
    return (1.0 if ctx.config.formats else 0.0), [f"dump formats: {list(ctx.config.formats)}"]


def _metadata(ctx: _Context):
    ds = sorted(str(d) for d in ctx.datasets())
    return (1.0 if ds else 0.0), ds or ["no VoID description"]


def _license(ctx: _Context):
    hits = sorted(f"{s} {p.value} {o}" for p in LICENSE_PREDICATES
                  for s, _, o in ctx.combined.triples(None, p, None) if isinstance(o, IRI))
    return (1.0 if hits else 0.0), hits or ["no license stated as an IRI"]


def interlinking_rate(graph: Graph, base: str) -> tuple[float, list[str]]:
    """Share of subjects with at least one non-type link to an IRI outside ``base``."""
    subjects = graph.subjects()
    if not subjects:
        return 0.0, []
    linked = sorted(str(s) for s in subjects if any(
        isinstance(t.object, IRI) and t.predicate != RDF.type and not t.object.value.startswith(base)
        for t in graph.triples(s, None, None)))
    return len(linked) / len(subjects), linked


def _sameas(ctx: _Context):
    rate, linked = interlinking_rate(ctx.graph, ctx.config.base)
    return rate, linked


def _links(ctx: _Context):
    if ctx.client is None:
        raise _NotScored("skipped", "no network budget granted")
    result = check_links(ctx.graph, ctx.config.base, ctx.config.link_sample, ctx.config.seed,
                         ctx.client, ctx.config.link_budget, ctx.config.timeout)
    if result.rate is None:
        raise _NotScored("not-evaluated", "no external IRIs to probe")
    return result.rate, [f"{url}: {status}" for url, status in result.failures]


EVALUATORS: dict[str, Callable] = {
    "accuracy.syntactic_validity_documents": _documents,
    "accuracy.syntactic_validity_literals": _literals,
    "accuracy.semantic_validity_triples": _semantic,
    "accuracy.duplicate_check": _duplicates,
    "trustworthiness.dataset_level": _dataset_level,
    "trustworthiness.statement_level": _statement_level,
    "trustworthiness.unknown_empty_values": _unknown_values,
    "consistency.class_constraints": _class_constraints,
    "consistency.relation_constraints": _relation_constraints,
    "completeness.schema": _schema,
    "completeness.column": _column,
    "completeness.population": _population,
    "timeliness.frequency": _frequency,
    "timeliness.validity_period": _validity_period,
    "timeliness.modification_date_statements": _modification_dates,
    "ease.description_of_resources": _descriptions,
    "ease.multilingual_labels": _multilingual,
    "ease.understandable_serialization": _understandable,
    "ease.self_describing_uris": _self_describing,
    "interoperability.avoid_blank_nodes_reification": _blank_nodes,
    "interoperability.serialization_formats": _formats,
    "interoperability.external_vocabulary": _external_vocabulary,
    "interoperability.proprietary_vocabulary": _proprietary,
    "accessibility.dereferencing": _dereferencing,
    "accessibility.rdf_export": _rdf_export,
    "accessibility.metadata_provision": _metadata,
    "licensing.machine_readable": _license,
    "interlinking.sameas_rate": _sameas,
    "interlinking.external_uri_validity": _links,
}


def evaluate(graph: Graph, config: AuditConfig | None = None, gold: GoldStandard | None = None,
             void: Graph | None = None, link_client: LinkClient | None = None,
             reference: list[tuple[IRI, IRI, str]] | str | Path | None = None) -> QualityReport:
    """Score ``graph`` on every catalogue criterion.

    ``void`` is the dataset self-description, consulted for dataset-level
    metadata and licensing. NETWORK criteria run only with a ``link_client``;
    gold-dependent ones only with ``gold``. DECLARED criteria copy the
    configured assertion. Nothing is ever dropped from the report.
    """
    if not len(graph):
        raise ValueError("cannot audit an empty graph")
    config = config or AuditConfig()
    if isinstance(reference, (str, Path)):
        reference = load_reference(reference)
    combined = graph | void if void is not None else graph
    ctx = _Context(graph, combined, config, gold, link_client, reference)
    criteria = []
    for entry in catalogue():
        crit = Criterion(entry.id, entry.dimension, entry.kind, entry.title)
        if entry.kind == "DECLARED":
            if entry.id in config.declared:
                crit.score = float(config.declared[entry.id])
                crit.status = "declared"
                crit.evidence = ["asserted in configuration"]
            else:
                crit.evidence = ["no assertion configured"]
        else:
            try:
                score, evidence = EVALUATORS[entry.id](ctx)
            except _NotScored as ns:
                crit.status = ns.status
                crit.evidence = [ns.reason]
            else:
                crit.score = min(1.0, max(0.0, float(score)))
                crit.status = "evaluated"
                crit.evidence = list(evidence)[:EVIDENCE_CAP]
        criteria.append(crit)
    seeds = {"document_sample": config.seed, "link_sample": config.seed}
    echo = config.echo()
    echo["network"] = link_client is not None
    echo["gold"] = gold is not None
    return QualityReport(criteria, echo, seeds)
