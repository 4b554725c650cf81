from __future__ import annotations

from dataclasses import dataclass, field

MARCXML_NS = "http://www.loc.gov/MARC21/slim"
DC_NS = "http://purl.org/dc/elements/1.1/"
DCTERMS_NS = "http://purl.org/dc/terms/"

DC_ELEMENTS = frozenset({
    "contributor", "coverage", "creator", "date", "description", "format", "identifier",
    "language", "publisher", "relation", "rights", "source", "subject", "title", "type",
})


class IngestError(Exception):
    """Fatal parse failure; ``offset`` is the byte offset in the (decompressed) input."""

    def __init__(self, message: str, offset: int | None = None,
                 line: int | None = None, column: int | None = None):
        where = f" at byte {offset}" if offset is not None else ""
        if line is not None:
            where += f" (line {line}, column {column})"
        super().__init__(message + where)
        self.offset = offset
        self.line = line
        self.column = column


@dataclass(frozen=True)
class RecordError:
    record_ordinal: int
    message: str


@dataclass(frozen=True)
class ControlField:
    tag: str
    value: str
    ordinal: int


@dataclass(frozen=True)
class DataField:
    tag: str
    indicator1: str
    indicator2: str
    subfields: tuple[tuple[str, str], ...]
    ordinal: int

    def values(self, codes: str | None = None) -> list[str]:
        return [v for c, v in self.subfields if codes is None or c in codes]

    def first(self, code: str) -> str | None:
        for c, v in self.subfields:
            if c == code:
                return v
        return None


@dataclass(frozen=True)
class MarcRecord:
    leader: str
    control_fields: tuple[ControlField, ...]
    data_fields: tuple[DataField, ...]
    source_ordinal: int = 0

    def control(self, tag: str) -> str | None:
        for f in self.control_fields:
            if f.tag == tag:
                return f.value
        return None

    def fields(self, *tags: str) -> list[DataField]:
        return [f for f in self.data_fields if not tags or f.tag in tags]

    def identifier(self, tag: str = "001", code: str = "a") -> str | None:
        """Record id from a control field, or from ``code`` of a data field."""
        value = self.control(tag)
        if value is None:
            for f in self.fields(tag):
                value = f.first(code)
                if value:
                    break
        value = value.strip() if value else None
        return value or None

    @property
    def record_type(self) -> str:
        return self.leader[6] if len(self.leader) > 6 else " "


@dataclass
class DcRecord:
    elements: dict[str, list[str]]
    source_ordinal: int
    warnings: list[str] = field(default_factory=list)

    def get(self, name: str) -> list[str]:
        return self.elements.get(name, [])

    def first(self, name: str) -> str | None:
        values = self.get(name)
        return values[0] if values else None
