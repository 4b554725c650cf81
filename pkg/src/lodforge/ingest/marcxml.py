"""MARCXML reader."""

from __future__ import annotations

import re

from .records import MARCXML_NS, ControlField, DataField, MarcRecord
from .xmlstream import CHUNK_SIZE, RecordStream

_TAG = re.compile(r"^[0-9]{3}$")


class MarcXmlReader(RecordStream):
    """Lazily yields ``MarcRecord`` objects from a MARCXML collection.

    Field ordinals number control and data fields together in document
    order, starting at 1. Fields that break the record model (non-numeric
    tags, data fields without subfields) are dropped with a warning and do
    not consume an ordinal. When ``id_field`` is given, records lacking it
    are skipped and reported in ``errors``.
    """

    def __init__(self, source, id_field: str | None = None, chunk_size: int = CHUNK_SIZE):
        super().__init__(source, chunk_size)
        self.id_field = id_field
        self._in_record = False
        self._buffer: list[str] | None = None
        self._reset()

    def _reset(self):
        self._leader = ""
        self._fields: list = []
        self._current = None

    def _is_marc(self, ns: str) -> bool:
        return ns in (MARCXML_NS, "")

    def start(self, ns, local, attrs):
        if not self._is_marc(ns):
            return
        if local == "record":
            self._in_record = True
            self.records_seen += 1
            self._reset()
        elif not self._in_record:
            return
        elif local in ("leader", "controlfield", "subfield"):
            self._buffer = []
            if local == "controlfield":
                self._current = ["control", attrs.get("tag", "").strip()]
            elif local == "subfield" and self._current and self._current[0] == "data":
                self._current[4].append([attrs.get("code", ""), None])
        elif local == "datafield":
            self._current = ["data", attrs.get("tag", "").strip(),
                             attrs.get("ind1", " ") or " ", attrs.get("ind2", " ") or " ", []]

    def text(self, data):
        if self._buffer is not None:
            self._buffer.append(data)

    def end(self, ns, local):
        if not self._is_marc(ns) or not self._in_record:
            return
        value = "".join(self._buffer) if self._buffer is not None else ""
        if local == "leader":
            self._leader = value
        elif local == "controlfield" and self._current:
            self._fields.append(("control", self._current[1], value))
            self._current = None
        elif local == "subfield" and self._current and self._current[0] == "data":
            self._current[4][-1][1] = value
        elif local == "datafield" and self._current:
            _, tag, ind1, ind2, subfields = self._current
            self._fields.append(("data", tag, ind1, ind2, subfields))
            self._current = None
        elif local == "record":
            self._in_record = False
            self._finish()
        if local in ("leader", "controlfield", "subfield"):
            self._buffer = None

    def _finish(self):
        ordinal_seq = self.records_seen
        controls, datas = [], []
        position = 0
        for entry in self._fields:
            tag = entry[1]
            if not _TAG.match(tag):
                self.warnings.append(f"record {ordinal_seq}: dropped field with tag {tag!r}")
                continue
            if entry[0] == "control":
                position += 1
                controls.append(ControlField(tag, entry[2], position))
                continue
            subfields = tuple((code, val) for code, val in entry[4] if val is not None)
            if not subfields:
                self.warnings.append(f"record {ordinal_seq}: dropped field {tag} without subfields")
                continue
            ind1 = entry[2][:1] or " "
            ind2 = entry[3][:1] or " "
            position += 1
            datas.append(DataField(tag, ind1, ind2, subfields, position))
        record = MarcRecord(self._leader, tuple(controls), tuple(datas), ordinal_seq)
        if self.id_field and record.identifier(self.id_field) is None:
            self.skip(ordinal_seq, f"missing identifier field {self.id_field}")
            return
        self.emit(record)


def parse_marcxml(stream, id_field: str | None = None) -> MarcXmlReader:
    """Parse a MARCXML byte stream, path or bytes object (gzip allowed)."""
    return MarcXmlReader(stream, id_field=id_field)
