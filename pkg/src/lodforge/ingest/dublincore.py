"""Dublin Core XML reader (OAI-DC or a plain container of record elements)."""

from __future__ import annotations

from .records import DC_ELEMENTS, DC_NS, DCTERMS_NS, DcRecord
from .xmlstream import CHUNK_SIZE, RecordStream


class DublinCoreReader(RecordStream):
    """Yields one ``DcRecord`` per ``record_element`` element.

    Children in the DC elements namespace are recorded under their element
    name. Qualified ``dcterms`` children are kept under their local name.
    Anything else is preserved under its local name and flagged in the
    record's ``warnings``. An unrecognised name in the DC namespace is kept
    and flagged too.
    """

    def __init__(self, source, record_element: str = "dc", id_element: str | None = None,
                 chunk_size: int = CHUNK_SIZE):
        super().__init__(source, chunk_size)
        self.record_element = record_element
        self.id_element = id_element
        self._depth = 0
        self._elements: dict[str, list[str]] | None = None
        self._warnings: list[str] = []
        self._buffer: list[str] | None = None
        self._child: tuple[str, str] | None = None

    def start(self, ns, local, attrs):
        if self._elements is None:
            if local == self.record_element:
                self.records_seen += 1
                self._elements = {}
                self._warnings = []
                self._depth = 0
            return
        self._depth += 1
        if self._depth == 1:
            self._child = (ns, local)
            self._buffer = []

    def text(self, data):
        if self._buffer is not None and self._depth >= 1:
            self._buffer.append(data)

    def end(self, ns, local):
        if self._elements is None:
            return
        if self._depth == 0:
            self._finish()
            return
        if self._depth == 1 and self._child is not None:
            value = "".join(self._buffer or []).strip()
            self._store(self._child[0], self._child[1], value)
            self._child = None
            self._buffer = None
        self._depth -= 1

    def _store(self, ns: str, local: str, value: str) -> None:
        if ns == DC_NS:
            if local not in DC_ELEMENTS:
                self._warnings.append(f"unknown Dublin Core element {local!r}")
        elif ns != DCTERMS_NS:
            where = f"{{{ns}}}" if ns else ""
            self._warnings.append(f"element {where}{local} is outside the Dublin Core namespace")
        if value:
            self._elements.setdefault(local, []).append(value)

    def _finish(self):
        ordinal = self.records_seen
        record = DcRecord(self._elements, ordinal, self._warnings)
        self._elements = None
        self.warnings.extend(f"record {ordinal}: {w}" for w in record.warnings)
        if self.id_element and not record.get(self.id_element):
            self.skip(ordinal, f"missing identifier element {self.id_element}")
            return
        self.emit(record)


def parse_dublin_core(stream, record_element: str = "dc",
                      id_element: str | None = None) -> DublinCoreReader:
    """Parse a Dublin Core dump; ``record_element`` names the per-record container."""
    return DublinCoreReader(stream, record_element=record_element, id_element=id_element)
