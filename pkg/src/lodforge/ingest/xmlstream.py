"""Streaming XML plumbing shared by the MARCXML and Dublin Core readers."""

from __future__ import annotations

import io
import logging
import os
import zlib
import xml.parsers.expat as expat
from typing import Iterator

from .records import IngestError, RecordError

log = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16
_GZIP_MAGIC = b"\x1f\x8b"


def _open(source):
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source), True
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    return source, False


def byte_chunks(source, chunk_size: int = CHUNK_SIZE) -> Iterator[bytes]:
    """Yield raw bytes, transparently inflating gzip input (by magic bytes)."""
    stream, owned = _open(source)
    try:
        first = stream.read(chunk_size)
        if isinstance(first, str):
            raise IngestError("expected a byte stream, got text")
        if first.startswith(_GZIP_MAGIC):
            inflater = zlib.decompressobj(16 + zlib.MAX_WBITS)
            chunk = first
            while chunk:
                try:
                    yield inflater.decompress(chunk)
                except zlib.error as exc:
                    raise IngestError(f"corrupt gzip stream: {exc}") from None
                chunk = stream.read(chunk_size)
            yield inflater.flush()
        else:
            chunk = first
            while chunk:
                yield chunk
                chunk = stream.read(chunk_size)
    finally:
        if owned:
            stream.close()


class RecordStream:
    """Iterable over records produced by an expat-driven handler.

    Subclasses implement ``start``/``end``/``text`` callbacks and call
    ``emit`` for every finished record. Records are yielded lazily as the
    input is consumed; a fatal error surfaces as ``IngestError`` after all
    records completed before it have been yielded.

    After iteration ``errors`` lists record-level problems (those records
    were skipped) and ``warnings`` lists non-fatal oddities.
    """

    def __init__(self, source, chunk_size: int = CHUNK_SIZE):
        self._source = source
        self._chunk_size = chunk_size
        self.errors: list[RecordError] = []
        self.warnings: list[str] = []
        self.records_seen = 0
        self._ready: list = []

    @property
    def skipped(self) -> int:
        return len(self.errors)

    def emit(self, record) -> None:
        self._ready.append(record)

    def skip(self, ordinal: int, message: str) -> None:
        log.warning("record %d skipped: %s", ordinal, message)
        self.errors.append(RecordError(ordinal, message))

    # callbacks -----------------------------------------------------
    def start(self, ns: str, local: str, attrs: dict) -> None:
        raise NotImplementedError

    def end(self, ns: str, local: str) -> None:
        raise NotImplementedError

    def text(self, data: str) -> None:
        raise NotImplementedError

    # driver --------------------------------------------------------
    def _parser(self):
        parser = expat.ParserCreate(namespace_separator="}")
        parser.buffer_text = True

        def split(name):
            ns, sep, local = name.rpartition("}")
            return (ns, local) if sep else ("", name)

        def start(name, attrs):
            ns, local = split(name)
            self.start(ns, local, {split(k)[1]: v for k, v in attrs.items()})

        def end(name):
            self.end(*split(name))

        def xml_decl(version, encoding, standalone):
            if encoding and encoding.lower().replace("_", "-") not in ("utf-8", "utf8"):
                raise IngestError(f"unsupported encoding {encoding!r}; input must be UTF-8",
                                  parser.CurrentByteIndex)

        parser.StartElementHandler = start
        parser.EndElementHandler = end
        parser.CharacterDataHandler = self.text
        parser.XmlDeclHandler = xml_decl
        return parser

    def __iter__(self):
        parser = self._parser()
        first = True
        for chunk in byte_chunks(self._source, self._chunk_size):
            if first and chunk[:2] in (b"\xff\xfe", b"\xfe\xff"):
                raise IngestError("UTF-16 input is not supported; input must be UTF-8", 0)
            first = False
            yield from self._feed(parser, chunk, False)
        yield from self._feed(parser, b"", True)

    def _feed(self, parser, chunk: bytes, final: bool):
        try:
            parser.Parse(chunk, final)
        except expat.ExpatError as exc:
            yield from self._drain()
            raise IngestError(f"malformed XML: {expat.errors.messages[exc.code]}",
                              parser.ErrorByteIndex, exc.lineno, exc.offset) from None
        yield from self._drain()

    def _drain(self):
        ready, self._ready = self._ready, []
        yield from ready
