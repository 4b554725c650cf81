"""Criteria catalogue and the quality report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from statistics import fmean

KINDS = ("AUTOMATIC", "NETWORK", "ASSISTED", "DECLARED")
STATUSES = ("evaluated", "declared", "skipped", "not-evaluated")


@dataclass(frozen=True)
class CatalogueEntry:
    id: str
    dimension: str
    kind: str
    title: str


@lru_cache(maxsize=None)
def _catalogue_data() -> dict:
    text = resources.files(__package__).joinpath("data").joinpath("catalogue.json").read_text("utf-8")
    return json.loads(text)


def catalogue() -> list[CatalogueEntry]:
    """The shipped criteria, one per row of the quality table, in table order."""
    return [CatalogueEntry(c["id"], c["dimension"], c["kind"], c["title"])
            for c in _catalogue_data()["criteria"]]


def dimensions() -> list[str]:
    return list(_catalogue_data()["dimensions"])


def declared_defaults() -> dict[str, float]:
    return dict(_catalogue_data()["declared_defaults"])


@dataclass
class Criterion:
    id: str
    dimension: str
    kind: str
    title: str
    score: float | None = None
    status: str = "not-evaluated"
    evidence: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown evaluator kind {self.kind!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"{self.id}: score {self.score} outside [0, 1]")

    @property
    def scored(self) -> bool:
        return self.score is not None

    def to_dict(self) -> dict:
        return {"id": self.id, "dimension": self.dimension, "kind": self.kind, "title": self.title,
                "status": self.status, "score": self.score, "evidence": list(self.evidence)}


@dataclass
class QualityReport:
    criteria: list[Criterion]
    config: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)

    def __getitem__(self, criterion_id: str) -> Criterion:
        for c in self.criteria:
            if c.id == criterion_id:
                return c
        raise KeyError(criterion_id)

    def score(self, criterion_id: str) -> float | None:
        return self[criterion_id].score

    def rollups(self) -> dict[str, float | None]:
        """Mean score per dimension over the criteria that carry a score."""
        out = {}
        for dim in dimensions():
            scores = [c.score for c in self.criteria if c.dimension == dim and c.scored]
            out[dim] = fmean(scores) if scores else None
        return out

    def to_dict(self) -> dict:
        return {
            "criteria": [c.to_dict() for c in self.criteria],
            "dimensions": self.rollups(),
            "config": self.config,
            "seeds": self.seeds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        """Plain table: dimension, criterion, kind, score."""
        width = max(len(c.title) for c in self.criteria)
        lines = [f"{'Dimension':<20} {'Criterion':<{width}} {'Kind':<9} Score",
                 "-" * (width + 38)]
        previous = None
        for c in self.criteria:
            dim = c.dimension if c.dimension != previous else ""
            previous = c.dimension
            shown = _fmt(c.score) if c.scored else c.status
            lines.append(f"{dim:<20} {c.title:<{width}} {c.kind:<9} {shown}")
        lines.append("-" * (width + 38))
        for dim, value in self.rollups().items():
            lines.append(f"{dim:<20} {'(mean)':<{width}} {'':<9} {_fmt(value) if value is not None else '-'}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "QualityReport":
        crits = [Criterion(c["id"], c["dimension"], c["kind"], c["title"], c["score"], c["status"],
                           list(c["evidence"])) for c in data["criteria"]]
        return cls(crits, data.get("config", {}), data.get("seeds", {}))


def _fmt(value: float) -> str:
    return f"{value:.3f}".rstrip("0").rstrip(".") if value not in (0, 1) else str(int(value))
