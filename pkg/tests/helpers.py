"""Shared builders for the test modules."""

from __future__ import annotations

from pathlib import Path

from lodforge.graph import Graph, canonical_ntriples
from lodforge.ingest import parse_dublin_core, parse_marcxml
from lodforge.mapping import MappingConfig, transform_dump
from lodforge.publish import VoidMetadata, generate_void

FIXTURES = Path(__file__).parent / "fixtures"
LICENSE = "https://creativecommons.org/publicdomain/mark/1.0/"
PINNED = "2022-11-09"


def marc_graph(name: str, config: MappingConfig | None = None) -> Graph:
    records = parse_marcxml(FIXTURES / name, "001")
    return transform_dump(records, config or MappingConfig())[0]


def dc_graph(name: str, config: MappingConfig | None = None) -> Graph:
    return transform_dump(parse_dublin_core(FIXTURES / name), config or MappingConfig())[0]


def void_for(graph: Graph, base: str = "http://example.org/", formats=("turtle",)) -> Graph:
    meta = VoidMetadata(title="Test dataset", license=LICENSE, publisher="http://example.org/NLS",
                        modified=PINNED)
    return generate_void(graph, meta, base, formats)


def nt(graph: Graph) -> str:
    return canonical_ntriples(graph)


def write_config(path: Path, data: dict) -> Path:
    import json
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def licensed_config(**extra) -> dict:
    cfg = {"publish": {"pin_modified": PINNED,
                       "void": {"title": "Test dataset", "license": LICENSE,
                                "publisher": "http://example.org/NLS"}}}
    cfg.update(extra)
    return cfg
