from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..enrich.vocab import VocabularyTables
from ..graph.terms import is_absolute_iri

SERIALIZATIONS = ("turtle", "rdfxml", "ntriples")
DEFAULT_BASE_URI = "http://example.org/"
DEFAULT_DC_URL_PATTERNS = {
    "film": "film/{id}",
    "author": "author/{name}",
    "location": "location/{name}",
    "organisation": "organisation/{name}",
}
_PLACEHOLDER = re.compile(r"\{[^{}]*\}")


class ConfigError(ValueError):
    pass


@dataclass
class MappingConfig:
    """Everything that shapes the RDF output of a transform."""

    base_uri: str = DEFAULT_BASE_URI
    id_field: str = "001"
    serialization: str = "turtle"
    dc_url_patterns: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_DC_URL_PATTERNS))
    ordinal_counts_control_fields: bool = True
    vocabulary_tables: VocabularyTables | None = None
    marc_rules: str | Path | None = None
    dc_rules: str | Path | None = None
    synthesize_dc_ids: bool = True
    dc_record_element: str = "dc"

    def __post_init__(self):
        if not is_absolute_iri(self.base_uri) or not self.base_uri.endswith("/"):
            raise ConfigError(f"base_uri must be an absolute IRI ending in '/': {self.base_uri!r}")
        if not re.fullmatch(r"[0-9]{3}", self.id_field or ""):
            raise ConfigError(f"id_field must be a three-digit MARC tag: {self.id_field!r}")
        if self.serialization not in SERIALIZATIONS:
            raise ConfigError(f"serialization must be one of {SERIALIZATIONS}")
        patterns = dict(DEFAULT_DC_URL_PATTERNS)
        patterns.update(self.dc_url_patterns or {})
        for kind, template in patterns.items():
            if len(_PLACEHOLDER.findall(template)) != 1:
                raise ConfigError(f"URL pattern for {kind!r} needs exactly one placeholder: {template!r}")
            if template.startswith("/"):
                patterns[kind] = template.lstrip("/")
        self.dc_url_patterns = patterns

    @property
    def tables(self) -> VocabularyTables:
        if self.vocabulary_tables is None:
            self.vocabulary_tables = VocabularyTables.default()
        return self.vocabulary_tables
