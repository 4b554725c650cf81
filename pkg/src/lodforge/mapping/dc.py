"""Dublin Core record to Schema.org-style graph fragment."""

from __future__ import annotations

import re
from datetime import date

from ..enrich.labels import LIFE_DATES
from ..graph import RDF, XSD, Graph
from ..graph.terms import IRI, Literal, TermError, is_absolute_iri
from ..ingest.records import DcRecord
from .config import MappingConfig
from .marc import MappingError
from .rules import DC_HANDLERS, MappingRuleSet, Rule, load_rules
from .uris import MintError, pattern_uri

# "Surname, Forename" optionally followed by ", 1850-1894"
_PERSON = re.compile(r"^[^,\d()]+,\s*[^,\d()]+(,\s*\d{3,4}-?\d{0,4}\.?)?$")
_DATEISH = re.compile(
    r"^(c(irca|a)?\.?\s*)?\[?\d{3,4}(s|\?)?\]?(\s*-\s*\d{3,4}\??)?$|^\d{4}-\d{2}(-\d{2})?$",
    re.IGNORECASE)


def is_date_like(value: str) -> bool:
    return bool(_DATEISH.match(value.strip()))


def dc_date_literal(value: str) -> Literal:
    value = value.strip()
    if re.fullmatch(r"[0-9]{4}", value):
        return Literal(value, XSD.gYear.value)
    if re.fullmatch(r"[0-9]{4}-[0-9]{2}-[0-9]{2}", value):
        try:
            date.fromisoformat(value)
            return Literal(value, XSD.date.value)
        except ValueError:
            pass
    return Literal(value)


class DcMapper:
    def __init__(self, config: MappingConfig, rules: MappingRuleSet | None = None):
        self.config = config
        self.rules = rules or load_rules(config.dc_rules or "schema.org", DC_HANDLERS)
        self.entities = self.rules.extras.get("entities", {})
        self.org_keywords = tuple(k.lower() for k in self.rules.extras.get("organisation_keywords", ()))

    def record_id(self, record: DcRecord) -> str:
        id_element = self.rules.record.get("id_element", "identifier")
        for value in record.get(id_element):
            if value.strip():
                return value.strip()
        if self.config.synthesize_dc_ids:
            return f"{record.source_ordinal:04d}"
        raise MappingError(f"record {record.source_ordinal} has no {id_element} element")

    def is_organisation(self, name: str) -> bool:
        words = name.lower()
        return any(re.search(rf"(^|\W){re.escape(k)}($|\W)", words) for k in self.org_keywords)

    def _entity(self, graph: Graph, kind: str, name: str, warnings: list) -> IRI:
        spec = self.entities[kind]
        node = pattern_uri(self.config, spec["pattern"], name, warnings=warnings)
        for cls in self.rules.iris(spec["classes"]):
            graph.add((node, RDF.type, cls))
        graph.add((node, self.rules.iri(spec["name"]), Literal(name)))
        dates = LIFE_DATES.search(name)
        if dates and kind == "person":
            birth, _, death = dates.group(0).partition("-")
            if birth and spec.get("birth"):
                graph.add((node, self.rules.iri(spec["birth"]), Literal(birth, XSD.gYear.value)))
            if len(death) == 4 and spec.get("death"):
                graph.add((node, self.rules.iri(spec["death"]), Literal(death, XSD.gYear.value)))
        return node

    def transform(self, record: DcRecord, warnings: list | None = None) -> Graph:
        warnings = [] if warnings is None else warnings
        rid = self.record_id(record)
        graph = Graph(namespaces=dict(self.rules.prefixes))
        try:
            subject = pattern_uri(self.config, self.rules.record.get("pattern", "film"), rid,
                                  slug=False, warnings=warnings)
        except (MintError, TermError) as exc:
            raise MappingError(f"record {record.source_ordinal}: {exc}") from None
        for cls in self.rules.iris(self.rules.record.get("classes", [])):
            graph.add((subject, RDF.type, cls))
        for element, values in record.elements.items():
            rules = self.rules.rules_for_element(element)
            if not rules:
                warnings.append(("unmapped-element", f"{rid}: no rule for element {element!r}"))
                continue
            for rule in rules:
                for value in values:
                    try:
                        getattr(self, f"_{rule.handler}")(graph, subject, rule, value, warnings)
                    except (MintError, TermError) as exc:
                        warnings.append(("unmappable-field", f"{rid} {element}: {exc}"))
        return graph

    def _literal(self, graph, subject, rule: Rule, value, warnings):
        graph.add((subject, self.rules.iri(rule.get("predicate")), Literal(value)))

    def _date(self, graph, subject, rule: Rule, value, warnings):
        graph.add((subject, self.rules.iri(rule.get("predicate")), dc_date_literal(value)))

    def _rights(self, graph, subject, rule: Rule, value, warnings):
        if is_absolute_iri(value.strip()) and re.match(r"^https?://", value.strip()):
            graph.add((subject, self.rules.iri(rule.get("iri_predicate")), IRI(value.strip())))
        else:
            graph.add((subject, self.rules.iri(rule.get("text_predicate")), Literal(value)))

    def _agent(self, graph, subject, rule: Rule, value, warnings):
        name = value.strip()
        if self.is_organisation(name):
            node = self._entity(graph, "organisation", name, warnings)
            graph.add((subject, self.rules.iri(rule.get("organisation_predicate")), node))
        elif _PERSON.match(name):
            node = self._entity(graph, "person", name, warnings)
            graph.add((subject, self.rules.iri(rule.get("person_predicate")), node))
        else:
            graph.add((subject, self.rules.iri(rule.get("fallback_predicate")), Literal(name)))

    def _organisation(self, graph, subject, rule: Rule, value, warnings):
        node = self._entity(graph, "organisation", value.strip(), warnings)
        graph.add((subject, self.rules.iri(rule.get("predicate")), node))

    def _place(self, graph, subject, rule: Rule, value, warnings):
        value = value.strip()
        if is_date_like(value):
            graph.add((subject, self.rules.iri(rule.get("temporal_predicate")), Literal(value)))
            return
        node = self._entity(graph, "place", value, warnings)
        graph.add((subject, self.rules.iri(rule.get("predicate")), node))


def transform_dc_record(record: DcRecord, config: MappingConfig | None = None,
                        rules: MappingRuleSet | None = None, warnings: list | None = None) -> Graph:
    return DcMapper(config or MappingConfig(), rules).transform(record, warnings)
