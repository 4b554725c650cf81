"""Source profiling: record counts, field frequencies, value histograms."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .records import DcRecord, MarcRecord

_TYPE_NAMES = {
    "a": "language material", "c": "notated music", "d": "manuscript music",
    "e": "cartographic material", "g": "projected medium", "i": "nonmusical sound recording",
    "j": "musical sound recording", "k": "two-dimensional nonprojectable graphic",
    "m": "computer file", "o": "kit", "p": "mixed materials", "r": "three-dimensional artifact",
    "t": "manuscript language material",
}


@dataclass(frozen=True)
class SourceProfile:
    total_records: int = 0
    field_frequency: dict[str, int] = field(default_factory=dict)
    distinct_values: dict[str, dict[str, int]] = field(default_factory=dict)
    record_type_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "total_records": self.total_records,
            "field_frequency": dict(sorted(self.field_frequency.items())),
            "distinct_values": {k: dict(v) for k, v in sorted(self.distinct_values.items())},
            "record_type_counts": dict(sorted(self.record_type_counts.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _top(counter: Counter, k: int) -> dict[str, int]:
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return dict(ranked[:k])


def _marc_values(record: MarcRecord):
    for f in record.control_fields:
        yield f.tag, f.value
    for f in record.data_fields:
        for code, value in f.subfields:
            yield f"{f.tag}${code}", value


def profile(records: Iterable[MarcRecord | DcRecord], k: int = 10) -> SourceProfile:
    """Fold records into a profile.

    Field frequency counts occurrences (a repeated field counts each time).
    Histogram keys are ``tag`` for control fields, ``tag$code`` for
    subfields, and the element name for Dublin Core.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    total = 0
    freq: Counter = Counter()
    values: dict[str, Counter] = {}
    types: Counter = Counter()
    for record in records:
        total += 1
        if isinstance(record, MarcRecord):
            freq.update(f.tag for f in record.control_fields)
            freq.update(f.tag for f in record.data_fields)
            pairs = _marc_values(record)
            code = record.record_type
            types[_TYPE_NAMES.get(code, f"type {code!r}")] += 1
        else:
            for name, vals in record.elements.items():
                freq[name] += len(vals)
            pairs = ((name, v) for name, vals in record.elements.items() for v in vals)
            kinds = record.get("type")
            types[kinds[0] if kinds else "unspecified"] += 1
        for key, value in pairs:
            values.setdefault(key, Counter())[value] += 1
    return SourceProfile(
        total_records=total,
        field_frequency=dict(freq),
        distinct_values={key: _top(c, k) for key, c in values.items()},
        record_type_counts=dict(types),
    )
