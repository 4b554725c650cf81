"""Dump files and the publication directory."""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from ..graph import FORMAT_EXTENSIONS, Graph, dump_graph, parse_rdfxml, parse_turtle, serialize_turtle, stats
from .void import VoidError, void_counts

VOID_FILE = "void.ttl"
QUALITY_JSON = "quality.json"
QUALITY_TEXT = "quality.txt"
TRANSFORM_FILE = "transform.json"


class PublishError(RuntimeError):
    pass


@dataclass(frozen=True)
class DumpManifest:
    path: str
    format: str
    bytes: int
    triples: int
    sha256: str

    def to_dict(self) -> dict:
        return asdict(self)


def dump_name(fmt: str) -> str:
    try:
        return f"dump.{FORMAT_EXTENSIONS[fmt]}"
    except KeyError:
        raise PublishError(f"unknown dump format {fmt!r}; expected one of {sorted(FORMAT_EXTENSIONS)}") from None


def write_dump(graph: Graph, fmt: str, path: str | Path) -> DumpManifest:
    """Serialize ``graph`` to ``path``; the digest covers the exact bytes written."""
    dump_name(fmt)
    data = dump_graph(graph, fmt).encode("utf-8")
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise PublishError(f"cannot write dump {path}: {exc.strerror or exc}") from exc
    return DumpManifest(str(path), fmt, len(data), len(graph), hashlib.sha256(data).hexdigest())


def bundle_files(formats) -> list[str]:
    return sorted({dump_name(f) for f in formats} | {VOID_FILE, QUALITY_JSON, QUALITY_TEXT, TRANSFORM_FILE})


def _reparse(path: Path, fmt: str) -> Graph:
    text = path.read_text(encoding="utf-8")
    return parse_rdfxml(text) if fmt == "rdfxml" else parse_turtle(text)


def bundle(graph: Graph, void: Graph | None, report, transform_report, out_dir: str | Path,
           formats=("turtle",)) -> list[DumpManifest]:
    """Write the publication directory.

    Files: one ``dump.<ext>`` per format, ``void.ttl``, ``quality.json``,
    ``quality.txt`` and ``transform.json``. Everything is staged in a
    temporary sibling directory and moved into place only when complete, so
    a failure leaves no partial bundle behind.
    """
    missing = [name for name, value in (("VoID description", void), ("quality report", report),
                                        ("transform report", transform_report)) if value is None]
    if missing:
        raise PublishError(f"missing artifact: {', '.join(missing)}")
    formats = list(dict.fromkeys(formats))
    if not formats:
        raise PublishError("at least one dump format is required")
    out_dir = Path(out_dir)
    expected = set(bundle_files(formats))
    if out_dir.exists():
        if not out_dir.is_dir():
            raise PublishError(f"{out_dir} exists and is not a directory")
        foreign = sorted(p.name for p in out_dir.iterdir() if p.name not in expected)
        if foreign:
            raise PublishError(f"{out_dir} holds files outside the bundle layout: {foreign}")

    try:
        counts = void_counts(void)
    except VoidError as exc:
        raise PublishError(f"VoID description unusable: {exc}") from exc
    s = stats(graph)
    if (counts.classes, counts.properties, counts.triples) != (s.classes, s.properties, len(graph)):
        raise PublishError("VoID counts do not match the graph being published")

    out_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}.", dir=out_dir.parent))
    try:
        manifests = []
        for fmt in formats:
            m = write_dump(graph, fmt, staging / dump_name(fmt))
            back = _reparse(staging / dump_name(fmt), fmt)
            bs = stats(back)
            if (bs.classes, bs.properties, len(back)) != (counts.classes, counts.properties, counts.triples):
                raise PublishError(f"{dump_name(fmt)} does not reparse to the counts in the VoID description")
            manifests.append(m)
        _write(staging / VOID_FILE, serialize_turtle(void))
        _write(staging / QUALITY_JSON, report.to_json())
        _write(staging / QUALITY_TEXT, report.to_text())
        text = transform_report.to_json() if hasattr(transform_report, "to_json") else \
            json.dumps(transform_report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        _write(staging / TRANSFORM_FILE, text)
        if out_dir.exists():
            shutil.rmtree(out_dir)
        os.replace(staging, out_dir)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return [DumpManifest(str(out_dir / Path(m.path).name), m.format, m.bytes, m.triples, m.sha256)
            for m in manifests]


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def digest_directory(path: str | Path) -> dict[str, str]:
    """sha256 per file name, for comparing two bundles."""
    path = Path(path)
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(path.iterdir()) if p.is_file()}
