"""Loading and validating the declarative rule-set files.

A rule set is a JSON document with ``prefixes``, a ``record`` section for
the central resource, and an ordered ``rules`` list. Any key named like a
predicate or a class (``predicate``, ``link``, ``classes``, ...) is read as a
CURIE and must expand to an absolute IRI. Unknown handlers are rejected at
load time, not when the first record hits them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from ..graph.namespaces import STANDARD_PREFIXES, expand_curie
from ..graph.terms import IRI, TermError

MARC_HANDLERS = frozenset({"admin_metadata", "language", "title", "contribution", "hub",
                           "geographic", "literal", "provision", "node", "item"})
DC_HANDLERS = frozenset({"literal", "date", "rights", "agent", "organisation", "place"})
_BUILTIN = {"bibframe": "bibframe.json", "schema.org": "schemaorg.json"}


class RuleSetError(ValueError):
    pass


_PREDICATE_KEYS = ("link", "inverse", "has_instance", "instance_of", "label", "name", "birth", "death")


def _is_term_key(key: str) -> bool:
    return key.endswith("predicate") or "class" in key or key in _PREDICATE_KEYS


def _term_values(value) -> list:
    """CURIEs held under a term key: a string, a list, or a code -> CURIE map."""
    if isinstance(value, str):
        return [value]
    if isinstance(value, dict):
        return list(value.values())
    return list(value)


@dataclass
class Rule:
    id: str
    handler: str
    tags: tuple[str, ...] = ()
    element: str | None = None
    scope: str = "field"
    params: dict[str, Any] = field(default_factory=dict)

    def get(self, key: str, default=None):
        return self.params.get(key, default)


@dataclass
class MappingRuleSet:
    profile: str
    prefixes: dict[str, str]
    record: dict[str, Any]
    rules: list[Rule]
    extras: dict[str, Any] = field(default_factory=dict)
    source: str = ""

    def iri(self, curie: str) -> IRI:
        return expand_curie(curie, {**STANDARD_PREFIXES, **self.prefixes})

    def iris(self, curies) -> list[IRI]:
        if isinstance(curies, str):
            curies = [curies]
        return [self.iri(c) for c in curies]

    def rule_for_tag(self, tag: str) -> Rule | None:
        """First field-scoped rule listing ``tag`` (rule order is total)."""
        for rule in self.rules:
            if rule.scope == "field" and tag in rule.tags:
                return rule
        return None

    def rules_for_element(self, element: str) -> list[Rule]:
        return [r for r in self.rules if r.element == element]

    def record_rules(self) -> list[Rule]:
        return [r for r in self.rules if r.scope == "record"]

    def vocabulary(self) -> tuple[set[IRI], set[IRI]]:
        """(classes, predicates) this rule set can emit."""
        classes: set[IRI] = set()
        predicates: set[IRI] = set()

        def walk(obj):
            if isinstance(obj, dict):
                for k, v in obj.items():
                    if _is_term_key(k):
                        target = classes if "class" in k else predicates
                        target.update(self.iri(c) for c in _term_values(v))
                    else:
                        walk(v)
            elif isinstance(obj, list):
                for v in obj:
                    walk(v)

        walk(self.record)
        walk(self.extras)
        for rule in self.rules:
            walk(rule.params)
        return classes, predicates


_IRI_SCHEMES = ("http", "https", "urn")


def _resolve_strict(ruleset: MappingRuleSet, curie: str) -> IRI:
    # an undeclared prefix parses as an IRI scheme; in a rule file it is almost
    # always a typo, so only a few real schemes are let through unbracketed
    prefix = curie.partition(":")[0]
    known = {**STANDARD_PREFIXES, **ruleset.prefixes}
    if not curie.startswith("<") and prefix not in known and prefix not in _IRI_SCHEMES:
        raise TermError(f"unknown prefix {prefix!r}")
    return ruleset.iri(curie)


def _check_terms(ruleset: MappingRuleSet, obj, where: str) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _is_term_key(k):
                for curie in _term_values(v):
                    try:
                        _resolve_strict(ruleset, curie)
                    except (TermError, TypeError):
                        raise RuleSetError(f"{where}.{k}: {curie!r} is not an absolute IRI or known CURIE") from None
            else:
                _check_terms(ruleset, v, f"{where}.{k}")
    elif isinstance(obj, list):
        for n, v in enumerate(obj):
            _check_terms(ruleset, v, f"{where}[{n}]")


def parse_rules(data: dict, handlers: frozenset[str], source: str = "") -> MappingRuleSet:
    try:
        raw_rules = data["rules"]
        record = data["record"]
    except KeyError as exc:
        raise RuleSetError(f"rule set lacks {exc.args[0]!r}") from None
    rules = []
    seen = set()
    for n, raw in enumerate(raw_rules):
        raw = dict(raw)
        rid = raw.pop("id", None) or f"rule-{n + 1}"
        if rid in seen:
            raise RuleSetError(f"duplicate rule id {rid!r}")
        seen.add(rid)
        handler = raw.pop("handler", None)
        if handler not in handlers:
            raise RuleSetError(f"rule {rid!r}: unknown handler {handler!r}")
        tags = tuple(raw.pop("tags", ()))
        for tag in tags:
            if not (len(tag) == 3 and tag.isdigit()):
                raise RuleSetError(f"rule {rid!r}: bad tag {tag!r}")
        rules.append(Rule(rid, handler, tags, raw.pop("element", None), raw.pop("scope", "field"), raw))
    extras = {k: v for k, v in data.items()
              if k not in ("rules", "record", "prefixes", "profile", "description")}
    ruleset = MappingRuleSet(data.get("profile", ""), dict(data.get("prefixes", {})), record,
                             rules, extras, source)
    _check_terms(ruleset, record, "record")
    _check_terms(ruleset, extras, "rule set")
    for rule in rules:
        _check_terms(ruleset, rule.params, f"rule {rule.id}")
    return ruleset


def load_rules(name_or_path: str | Path, handlers: frozenset[str]) -> MappingRuleSet:
    """Load a built-in profile (``bibframe``, ``schema.org``) or a rule file."""
    key = str(name_or_path)
    if key in _BUILTIN:
        text = resources.files(__package__).joinpath("data").joinpath(_BUILTIN[key]).read_text("utf-8")
    else:
        text = Path(name_or_path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleSetError(f"{key}: invalid JSON ({exc})") from None
    return parse_rules(data, handlers, key)
