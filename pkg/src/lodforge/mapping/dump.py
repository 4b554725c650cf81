"""Whole-dump transform with a reconciled report."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from ..graph import STANDARD_PREFIXES, Graph
from ..ingest.records import DcRecord, MarcRecord, RecordError
from .config import MappingConfig
from .dc import DcMapper
from .marc import MappingError, MarcMapper


@dataclass
class TransformReport:
    processed: int = 0
    emitted: int = 0
    skipped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    warnings: Counter = field(default_factory=Counter)
    warning_examples: dict[str, list[str]] = field(default_factory=dict)
    triples: int = 0

    def warn(self, category: str, message: str, keep: int = 5) -> None:
        self.warnings[category] += 1
        examples = self.warning_examples.setdefault(category, [])
        if len(examples) < keep:
            examples.append(message)

    def add_ingest_errors(self, errors: Iterable[RecordError]) -> None:
        """Records the reader already dropped count as processed and skipped."""
        for err in errors:
            self.processed += 1
            self.skipped += 1
            self.errors.append((err.record_ordinal, err.message))

    @property
    def reconciles(self) -> bool:
        return self.processed == self.emitted + self.skipped

    def to_dict(self) -> dict:
        return {
            "processed": self.processed,
            "emitted": self.emitted,
            "skipped": self.skipped,
            "triples": self.triples,
            "errors": [{"record": n, "message": m} for n, m in sorted(self.errors)],
            "warnings": dict(sorted(self.warnings.items())),
            "warning_examples": {k: v for k, v in sorted(self.warning_examples.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def transform_dump(records: Iterable[MarcRecord | DcRecord],
                   config: MappingConfig | None = None) -> tuple[Graph, TransformReport]:
    """Union of per-record fragments; record problems go to the report."""
    config = config or MappingConfig()
    report = TransformReport()
    graph = Graph(namespaces=dict(STANDARD_PREFIXES))
    mappers: dict[type, object] = {}
    for record in records:
        report.processed += 1
        kind = type(record)
        if kind not in mappers:
            mappers[kind] = (MarcMapper if isinstance(record, MarcRecord) else DcMapper)(config)
        mapper = mappers[kind]
        warnings: list = []
        try:
            fragment = mapper.transform(record, warnings)
        except MappingError as exc:
            report.skipped += 1
            report.errors.append((record.source_ordinal, str(exc)))
            continue
        for category, message in warnings:
            report.warn(category, message)
        report.emitted += 1
        graph.update(fragment)
        for prefix, ns in fragment.namespaces.items():
            graph.namespaces.setdefault(prefix, ns)
    # records dropped by the reader (missing id field) are reported by the caller
    report.triples = len(graph)
    return graph, report
