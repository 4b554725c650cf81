"""Controlled-vocabulary tables and validated lookups.

Every IRI handed out here comes from a shipped table. Codes that are not
in the table are rejected instead of being pasted into an IRI template.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..graph.terms import IRI

LOC_VOCABULARY = "http://id.loc.gov/vocabulary/"
_TABLE_FILES = {
    "languages": "languages.tsv",
    "geographicAreas": "geographic_areas.tsv",
    "relators": "relators.tsv",
}
_SPACE = re.compile(r"\s|%20|%09|%0[aAdD]")
_TRAILING = re.compile(r"[\s.,;:]+$")


class VocabularyRejection(ValueError):
    """A code that does not resolve; ``value`` is the offending input."""

    def __init__(self, table: str, value: str, reason: str):
        super().__init__(f"{table}: {value!r} rejected ({reason})")
        self.table = table
        self.value = value
        self.reason = reason


@dataclass(frozen=True)
class TextFallback:
    """Relator term with no mapped IRI; the mapper keeps it as a literal."""
    text: str


@dataclass(frozen=True)
class VocabularyTable:
    name: str
    entries: dict[str, str]          # code -> label
    base: str

    def iri(self, code: str) -> IRI:
        return IRI(self.base + code)

    def __contains__(self, code: str) -> bool:
        return code in self.entries


def _read_table(text: str, name: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        code, _, label = line.partition("\t")
        code = code.strip()
        if not code or re.search(r"\s", code):
            raise ValueError(f"{name} line {n}: bad code {code!r}")
        if code in entries:
            raise ValueError(f"{name} line {n}: duplicate code {code!r}")
        entries[code] = label.strip()
    return entries


def load_table(name: str, path: str | Path | None = None) -> VocabularyTable:
    """Load a shipped table, or an override file in the same TSV layout."""
    if name not in _TABLE_FILES:
        raise ValueError(f"unknown vocabulary table {name!r}")
    if path is None:
        text = resources.files(__package__).joinpath("data").joinpath(_TABLE_FILES[name]).read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return VocabularyTable(name, _read_table(text, name), f"{LOC_VOCABULARY}{name}/")


@lru_cache(maxsize=None)
def default_table(name: str) -> VocabularyTable:
    return load_table(name)


@lru_cache(maxsize=None)
def relator_terms() -> frozenset[str]:
    """Well-formed relator terms, mapped or not (used by the literal audit)."""
    text = resources.files(__package__).joinpath("data").joinpath("relator_terms.txt").read_text("utf-8")
    return frozenset(l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#"))


@dataclass
class VocabularyTables:
    languages: VocabularyTable
    geographic_areas: VocabularyTable
    relators: VocabularyTable

    @classmethod
    def default(cls) -> "VocabularyTables":
        return cls(default_table("languages"), default_table("geographicAreas"),
                   default_table("relators"))

    @classmethod
    def from_paths(cls, languages=None, geographic_areas=None, relators=None) -> "VocabularyTables":
        return cls(load_table("languages", languages),
                   load_table("geographicAreas", geographic_areas),
                   load_table("relators", relators))


def _lookup(table: VocabularyTable, code: str, strip_hyphens: bool = False) -> IRI:
    if code is None:
        raise VocabularyRejection(table.name, "", "missing code")
    raw = code
    code = code.strip()
    if _SPACE.search(code):
        raise VocabularyRejection(table.name, raw, "whitespace inside code")
    code = code.lower()
    if strip_hyphens:
        code = code.rstrip("-")
    if not code:
        raise VocabularyRejection(table.name, raw, "empty code")
    if code not in table:
        raise VocabularyRejection(table.name, raw, "not in table")
    return table.iri(code)


def resolve_language(code: str, tables: VocabularyTables | None = None) -> IRI:
    tables = tables or VocabularyTables.default()
    return _lookup(tables.languages, code)


def resolve_geographic_area(code: str, tables: VocabularyTables | None = None) -> IRI:
    """MARC 043 codes are hyphen-padded to 7 characters; padding is dropped."""
    tables = tables or VocabularyTables.default()
    return _lookup(tables.geographic_areas, code, strip_hyphens=True)


def normalize_role(term: str) -> str:
    return _TRAILING.sub("", term.strip()).strip().lower()


def resolve_relator(term: str, tables: VocabularyTables | None = None) -> IRI | TextFallback:
    """Map a relator term (or three-letter code) to its IRI, else fall back to text."""
    tables = tables or VocabularyTables.default()
    table = tables.relators
    key = normalize_role(term or "")
    if key in table:
        return table.iri(key)
    for code, label in table.entries.items():
        if label == key:
            return table.iri(code)
    return TextFallback(_TRAILING.sub("", (term or "").strip()))
