"""MARC record to BIBFRAME-style graph fragment, driven by a rule set."""

from __future__ import annotations

import re
from datetime import date, datetime

from .. import __version__
from ..enrich.vocab import (TextFallback, VocabularyRejection, resolve_geographic_area,
                            resolve_language, resolve_relator)
from ..graph import RDF, XSD, Graph
from ..graph.terms import IRI, Literal, TermError
from ..ingest.records import DataField, MarcRecord
from .config import MappingConfig
from .rules import MARC_HANDLERS, MappingRuleSet, Rule, load_rules
from .uris import mint_uri

_ISBD_TAIL = re.compile(r"[\s/:;,=+]+$")
_INITIAL_END = re.compile(r"(^|[\s.,])[A-Za-z]\.$")
_BREAK_BEFORE = set("dfklmnoprs")


class MappingError(ValueError):
    """Record cannot be transformed at all (it is skipped, never fatal)."""


def trim_punctuation(text: str) -> str:
    """Drop ISBD trailing punctuation; keep a final period after an initial."""
    text = _ISBD_TAIL.sub("", text.strip())
    if text.endswith(".") and not text.endswith("..") and not _INITIAL_END.search(text):
        text = _ISBD_TAIL.sub("", text[:-1])
    return text


def join_subfields(f: DataField, codes: str, separator: str = " ") -> str:
    parts = [trim_punctuation(v) if separator != " " else v.strip() for v in f.values(codes)]
    return trim_punctuation(separator.join(p for p in parts if p))


def uniform_title(f: DataField, codes: str) -> str:
    """Join uniform-title subfields, adding '. ' before a part that lacks it."""
    out = ""
    for code, value in f.subfields:
        if code not in codes or not value.strip():
            continue
        value = value.strip()
        if not out:
            out = value
        elif code in _BREAK_BEFORE and not out.endswith((".", ":", ";", ",")):
            out = f"{out}. {value}"
        else:
            out = f"{out} {value}"
    return trim_punctuation(out)


def date_literal(text: str) -> Literal:
    """Keep the source string; add a datatype only for valid gYear/date forms."""
    value = trim_punctuation(text)
    if re.fullmatch(r"[0-9]{4}", value):
        return Literal(value, XSD.gYear.value)
    if re.fullmatch(r"[0-9]{4}-[0-9]{2}-[0-9]{2}", value):
        try:
            date.fromisoformat(value)
            return Literal(value, XSD.date.value)
        except ValueError:
            pass
    return Literal(value)


def _change_date(value: str) -> Literal:
    try:
        stamp = datetime.strptime(value.strip()[:14], "%Y%m%d%H%M%S")
        return Literal(stamp.isoformat(), XSD.dateTime.value)
    except ValueError:
        return Literal(value.strip())


class MarcMapper:
    def __init__(self, config: MappingConfig, rules: MappingRuleSet | None = None):
        self.config = config
        self.rules = rules or load_rules(config.marc_rules or "bibframe", MARC_HANDLERS)
        self.contribution = self.rules.extras.get("contribution", {})
        self.label = self.rules.iri(self.rules.record.get("label", "rdfs:label"))

    # -- helpers ------------------------------------------------------
    def _ordinal(self, record: MarcRecord, f) -> int:
        if self.config.ordinal_counts_control_fields:
            return f.ordinal
        pool = record.data_fields if isinstance(f, DataField) else record.control_fields
        return pool.index(f) + 1

    def _node(self, state: "_State", kind: str, tag: str, ordinal: int, classes,
              label: str | None) -> IRI:
        node = mint_uri(self.config, kind, state.record_id, tag, ordinal, state.warnings)
        for cls in self.rules.iris(classes):
            state.graph.add((node, RDF.type, cls))
        if label:
            state.graph.add((node, self.label, Literal(label)))
        return node

    def _target(self, state: "_State", name: str | None) -> IRI:
        return state.instance if name == "instance" else state.work

    # -- entry point --------------------------------------------------
    def transform(self, record: MarcRecord, warnings: list | None = None) -> Graph:
        warnings = [] if warnings is None else warnings
        record_id = record.identifier(self.config.id_field)
        if not record_id:
            raise MappingError(f"record {record.source_ordinal} lacks identifier field "
                               f"{self.config.id_field}")
        state = _State(self, record, record_id, warnings)
        rec = self.rules.record
        state.graph.add((state.work, self.rules.iri(rec["has_instance"]), state.instance))
        state.graph.add((state.instance, self.rules.iri(rec["instance_of"]), state.work))
        for cls in self.rules.iris(rec.get("work_classes", [])):
            state.graph.add((state.work, RDF.type, cls))
        content = rec.get("work_class_by_leader", {}).get(record.record_type)
        if content:
            state.graph.add((state.work, RDF.type, self.rules.iri(content)))
        for cls in self.rules.iris(rec.get("instance_classes", [])):
            state.graph.add((state.instance, RDF.type, cls))

        for rule in self.rules.record_rules():
            getattr(self, f"_record_{rule.handler}")(state, rule)
        for f in record.data_fields:
            rule = self.rules.rule_for_tag(f.tag)
            if rule is None:
                continue
            try:
                getattr(self, f"_field_{rule.handler}")(state, rule, f)
            except (TermError, ValueError) as exc:
                warnings.append(("unmappable-field", f"{record_id} {f.tag}-{f.ordinal}: {exc}"))

        title = state.title_label or f"Record {record_id}"
        state.graph.add((state.work, self.label, Literal(title)))
        state.graph.add((state.instance, self.label, Literal(title)))
        return state.graph

    # -- record-level handlers -----------------------------------------
    def _record_admin_metadata(self, state, rule: Rule):
        record = state.record
        id_field = next((f for f in record.control_fields if f.tag == self.config.id_field), None)
        if id_field is None:
            id_field = record.fields(self.config.id_field)[0]
        node = self._node(state, rule.get("kind", "AdminMetadata"), id_field.tag,
                          self._ordinal(record, id_field), rule.get("class"),
                          f"Administrative metadata for record {state.record_id}")
        state.graph.add((state.work, self.rules.iri(rule.get("link")), node))
        change = rule.get("change_date")
        if change and record.control(change["control"]):
            state.graph.add((node, self.rules.iri(change["predicate"]),
                             _change_date(record.control(change["control"]))))
        agency = record.control(rule.get("source_control", "003"))
        source = f"{agency} {state.record_id}" if agency else state.record_id
        state.graph.add((node, self.rules.iri(rule.get("source_predicate")), Literal(source)))
        state.graph.add((node, self.rules.iri(rule.get("process_predicate")),
                         Literal(f"lodforge {__version__} {self.rules.profile} rules")))

    def _record_language(self, state, rule: Rule):
        value = state.record.control(rule.get("control"))
        if not value:
            return
        start, end = rule.get("positions")
        code = value[start:end]
        if len(code) < end - start or not code.strip() or set(code) <= {"|", " "}:
            return
        self._language(state, rule, code)

    # -- field handlers -------------------------------------------------
    def _language(self, state, rule: Rule, code: str):
        try:
            iri = resolve_language(code, self.config.tables)
        except VocabularyRejection as exc:
            state.warnings.append(("vocabulary", f"{state.record_id}: {exc}"))
            return
        state.graph.add((state.work, self.rules.iri(rule.get("predicate")), iri))

    def _field_language(self, state, rule: Rule, f: DataField):
        for value in f.values(rule.get("subfields", "a")):
            value = value.strip()
            codes = ([value[i:i + 3] for i in range(0, len(value), 3)]
                     if len(value) > 3 and len(value) % 3 == 0 and " " not in value else [value])
            for code in codes:
                self._language(state, rule, code)

    def _field_geographic(self, state, rule: Rule, f: DataField):
        for value in f.values(rule.get("subfields", "a")):
            try:
                iri = resolve_geographic_area(value, self.config.tables)
            except VocabularyRejection as exc:
                state.warnings.append(("vocabulary", f"{state.record_id}: {exc}"))
                continue
            state.graph.add((state.work, self.rules.iri(rule.get("predicate")), iri))

    def _field_title(self, state, rule: Rule, f: DataField):
        main = join_subfields(f, rule.get("main_title", "a"))
        if not main:
            state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: empty title"))
            return
        sub = join_subfields(f, rule.get("subtitle", "b"))
        label = f"{main} : {sub}" if sub else main
        node = self._node(state, rule.get("kind", "Title"), f.tag, self._ordinal(state.record, f),
                          rule.get("class"), label)
        link = self.rules.iri(rule.get("link"))
        state.graph.add((state.work, link, node))
        state.graph.add((state.instance, link, node))
        state.graph.add((node, self.rules.iri(rule.get("main_predicate")), Literal(main)))
        if sub:
            state.graph.add((node, self.rules.iri(rule.get("subtitle_predicate")), Literal(sub)))
        resp = join_subfields(f, rule.get("responsibility", "c"))
        if resp:
            state.graph.add((state.instance, self.rules.iri(rule.get("responsibility_predicate")),
                             Literal(resp)))
        if state.title_label is None:
            state.title_label = label

    def agent_iri(self, state, f: DataField) -> IRI:
        return mint_uri(self.config, self.contribution.get("agent_kind", "Agent"), state.record_id,
                        f.tag, self._ordinal(state.record, f), state.warnings)

    def _field_contribution(self, state, rule: Rule, f: DataField):
        label = join_subfields(f, rule.get("label_subfields", "a"))
        if not label:
            state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: empty name"))
            return
        c = self.contribution
        ordinal = self._ordinal(state.record, f)
        classes = rule.get("agent_classes")
        if rule.get("family_classes") and f.indicator1 == "3":
            classes = rule.get("family_classes")
        agent = self._node(state, c.get("agent_kind", "Agent"), f.tag, ordinal, classes, label)
        contrib_classes = [c["class"]]
        if f.tag in c.get("primary_tags", ()):
            contrib_classes.append(c["primary_class"])
        contrib = self._node(state, c.get("kind", "Contribution"), f.tag, ordinal,
                             contrib_classes, label)
        state.graph.add((state.work, self.rules.iri(c["link"]), contrib))
        state.graph.add((contrib, self.rules.iri(c["agent_predicate"]), agent))
        roles = [v for v in f.values(rule.get("role_code_subfields", "4"))]
        roles += [v for v in f.values(rule.get("role_subfields", "e"))]
        role_pred = self.rules.iri(c["role_predicate"])
        for role in roles:
            if not role.strip():
                continue
            resolved = resolve_relator(role, self.config.tables)
            if isinstance(resolved, TextFallback):
                state.warnings.append(("unmapped-role", f"{state.record_id} {f.tag}: {resolved.text!r}"))
                state.graph.add((contrib, role_pred, Literal(resolved.text)))
            else:
                state.graph.add((contrib, role_pred, resolved))

    def _field_hub(self, state, rule: Rule, f: DataField):
        title = uniform_title(f, rule.get("uniform_subfields", "a"))
        if not title:
            state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: empty uniform title"))
            return
        ordinal = self._ordinal(state.record, f)
        hub = self._node(state, rule.get("kind", "Hub"), f.tag, ordinal, rule.get("class"), title)
        title_node = self._node(state, "Title", f.tag, ordinal, rule.get("title_class"), title)
        state.graph.add((hub, self.rules.iri(rule.get("title_link")), title_node))
        state.graph.add((title_node, self.rules.iri(rule.get("main_predicate")), Literal(title)))
        state.graph.add((state.work, self.rules.iri(rule.get("link")), hub))
        main_entry = state.record.fields(*rule.get("main_entry_tags", ()))
        if main_entry:
            c = self.contribution
            agent = self.agent_iri(state, main_entry[0])
            name = join_subfields(main_entry[0], "abcdq")
            contrib = self._node(state, c.get("kind", "Contribution"), f.tag, ordinal,
                                 [c["class"]], name or None)
            state.graph.add((hub, self.rules.iri(c["link"]), contrib))
            state.graph.add((contrib, self.rules.iri(c["agent_predicate"]), agent))

    def _field_literal(self, state, rule: Rule, f: DataField):
        value = join_subfields(f, rule.get("subfields", "a"))
        if value:
            state.graph.add((self._target(state, rule.get("target")),
                             self.rules.iri(rule.get("predicate")), Literal(value)))

    def _field_node(self, state, rule: Rule, f: DataField):
        label = join_subfields(f, rule.get("label_subfields", "a"),
                               rule.get("label_separator", " "))
        if not label:
            state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: empty heading"))
            return
        node = self._node(state, rule.get("kind"), f.tag, self._ordinal(state.record, f),
                          rule.get("classes"), label)
        state.graph.add((self._target(state, rule.get("target")), self.rules.iri(rule.get("link")),
                         node))

    def _field_provision(self, state, rule: Rule, f: DataField):
        ordinal = self._ordinal(state.record, f)
        label = join_subfields(f, "abc")
        if not label:
            state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: empty imprint"))
            return
        classes = list(rule.get("classes", []))
        if f.tag == "264":
            specific = rule.get("class_by_264_ind2", {}).get(f.indicator2)
            if specific is None:
                return  # copyright notice dates carry no activity
            classes.append(specific)
        else:
            classes.append(rule.get("default_class"))
        activity = self._node(state, rule.get("kind", "ProvisionActivity"), f.tag, ordinal,
                              classes, label)
        state.graph.add((state.instance, self.rules.iri(rule.get("link")), activity))
        place = trim_punctuation(f.first(rule.get("place_subfield", "a")) or "")
        if place:
            node = self._node(state, "Place", f.tag, ordinal, [rule.get("place_class")], place)
            state.graph.add((activity, self.rules.iri(rule.get("place_predicate")), node))
        agent = trim_punctuation(f.first(rule.get("agent_subfield", "b")) or "")
        if agent:
            node = self._node(state, "Agent", f.tag, ordinal, rule.get("agent_classes"), agent)
            state.graph.add((activity, self.rules.iri(rule.get("agent_predicate")), node))
        when = f.first(rule.get("date_subfield", "c"))
        if when and trim_punctuation(when):
            state.graph.add((activity, self.rules.iri(rule.get("date_predicate")), date_literal(when)))

    def _field_item(self, state, rule: Rule, f: DataField):
        label = join_subfields(f, rule.get("label_subfields", "a"))
        item = self._node(state, rule.get("kind", "Item"), f.tag, self._ordinal(state.record, f),
                          rule.get("classes"), label or f"Item of record {state.record_id}")
        state.graph.add((state.instance, self.rules.iri(rule.get("link")), item))
        state.graph.add((item, self.rules.iri(rule.get("inverse")), state.instance))
        code = rule.get("locator_subfield")
        if code:
            for url in f.values(code):
                try:
                    target = IRI(url.strip())
                except TermError:
                    state.warnings.append(("unmappable-field", f"{state.record_id} {f.tag}: bad URL {url!r}"))
                    continue
                state.graph.add((item, self.rules.iri(rule.get("locator_predicate")), target))


class _State:
    def __init__(self, mapper: MarcMapper, record: MarcRecord, record_id: str, warnings: list):
        self.record = record
        self.record_id = record_id
        self.warnings = warnings
        self.graph = Graph(namespaces={k: v for k, v in mapper.rules.prefixes.items()})
        self.work = mint_uri(mapper.config, "Work", record_id, warnings=warnings)
        self.instance = mint_uri(mapper.config, "Instance", record_id)
        self.title_label: str | None = None


def transform_marc_record(record: MarcRecord, config: MappingConfig | None = None,
                          rules: MappingRuleSet | None = None, warnings: list | None = None) -> Graph:
    """Map one record; raises ``MappingError`` when the id field is missing."""
    return MarcMapper(config or MappingConfig(), rules).transform(record, warnings)
