"""Command line entry point: one subcommand per pipeline stage.

Exit status: 0 success, 1 fatal error, 2 configuration error, 3 finished
but some records were skipped (the count is in the transform report).
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .audit import (AuditConfig, HttpLinkClient, QualityReport, StubTransport, evaluate, load_gold)
from .audit.evaluate import DEFAULT_SEED
from .enrich import (EndpointClient, FixtureClient, VocabularyTables, apply_sameas, auto_accept,
                     read_acceptance, reconcile, write_acceptance)
from .graph import FORMAT_EXTENSIONS, STANDARD_PREFIXES, Graph, dump_graph, load_graph
from .graph.query import QueryCompileError, parse_query
from .graph.query import evaluate as run_query
from .graph.terms import Literal
from .ingest import IngestError, parse_dublin_core, parse_marcxml, profile
from .mapping import ConfigError, MappingConfig, TransformReport, transform_dump
from .publish import PublishError, VoidError, VoidMetadata, bundle, generate_void

log = logging.getLogger("lodforge")

EXIT_OK, EXIT_FATAL, EXIT_CONFIG, EXIT_RECORDS = 0, 1, 2, 3
SOURCE_KINDS = ("marcxml", "dublin-core")
CONFIG_ENV = "LODFORGE_CONFIG"

DEFAULTS: dict = {
    "input": [],
    "source_kind": "marcxml",
    "out": None,
    "mapping": {
        "base_uri": "http://example.org/",
        "id_field": "001",
        "dc_url_patterns": {},
        "ordinal_counts_control_fields": True,
        "marc_rules": None,
        "dc_rules": None,
        "synthesize_dc_ids": True,
        "dc_record_element": "dc",
        "vocabularies": {"languages": None, "geographic_areas": None, "relators": None},
    },
    "enrich": {
        "endpoint": None,
        "fixture": None,
        "accept_file": None,
        "auto_accept": False,
        "entity_kind": "person",
        "floor": 0.4,
        "budget": 4,
        "timeout": 10.0,
    },
    "audit": {
        "gold": None,
        "reference": None,
        "link_sample": 500,
        "document_sample": 100,
        "seed": DEFAULT_SEED,
        "allow_network": False,
        "link_stub": None,
        "budget": 4,
        "timeout": 10.0,
        "declared": {},
        "literal_rules": None,
        "axioms": None,
    },
    "publish": {
        "formats": ["turtle"],
        "pin_modified": None,
        "void": {
            "title": "Linked data export",
            "license": None,
            "description": "",
            "publisher": None,
            "contributor": None,
            "sources": [],
            "example_resource": None,
            "dataset": None,
        },
    },
}


class UsageError(Exception):
    """Bad configuration or arguments; exit status 2."""


class FatalError(Exception):
    """Stage could not complete; exit status 1."""


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise UsageError(f"unknown configuration key: {where}")
        # free-form maps: patterns and declared scores are checked where they are used
        if isinstance(base[key], dict) and base[key] and isinstance(value, dict):
            out[key] = _merge(base[key], value, where + ".")
        elif isinstance(base[key], dict) and not isinstance(value, dict):
            raise UsageError(f"configuration key {where} must be an object")
        else:
            out[key] = value
    return out


@dataclass
class PipelineConfig:
    data: dict

    @classmethod
    def load(cls, path: str | None) -> "PipelineConfig":
        if not path:
            return cls(copy.deepcopy(DEFAULTS))
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError(f"config {path} must hold a JSON object")
        return cls(_merge(DEFAULTS, raw))

    def __getitem__(self, key):
        return self.data[key]

    def apply_flags(self, args: argparse.Namespace) -> None:
        d = self.data
        if getattr(args, "input", None):
            d["input"] = list(args.input)
        if getattr(args, "source_kind", None):
            d["source_kind"] = args.source_kind
        if getattr(args, "base_uri", None):
            d["mapping"]["base_uri"] = args.base_uri
        if getattr(args, "format", None):
            d["publish"]["formats"] = list(args.format)
        if getattr(args, "out", None):
            d["out"] = args.out
        if getattr(args, "seed", None) is not None:
            d["audit"]["seed"] = args.seed
        if getattr(args, "link_sample", None) is not None:
            d["audit"]["link_sample"] = args.link_sample
        if getattr(args, "allow_network", False):
            d["audit"]["allow_network"] = True
        if getattr(args, "fixture", None):
            d["enrich"]["fixture"] = args.fixture
        if getattr(args, "gold", None):
            d["audit"]["gold"] = args.gold
        if getattr(args, "accept_file", None):
            d["enrich"]["accept_file"] = args.accept_file
        if getattr(args, "auto_accept", False):
            d["enrich"]["auto_accept"] = True
        if getattr(args, "pin_modified", None):
            d["publish"]["pin_modified"] = args.pin_modified

    def validate(self) -> None:
        d = self.data
        if isinstance(d["input"], str):
            d["input"] = [d["input"]]
        if d["source_kind"] not in SOURCE_KINDS:
            raise UsageError(f"source_kind must be one of {SOURCE_KINDS}, got {d['source_kind']!r}")
        formats = d["publish"]["formats"]
        if isinstance(formats, str):
            formats = d["publish"]["formats"] = [formats]
        bad = [f for f in formats if f not in FORMAT_EXTENSIONS]
        if bad or not formats:
            raise UsageError(f"formats must be drawn from {sorted(FORMAT_EXTENSIONS)}, got {formats}")
        d["publish"]["formats"] = list(dict.fromkeys(formats))
        if d["enrich"]["fixture"] and d["enrich"]["endpoint"]:
            raise UsageError("enrich: give either a fixture or an endpoint, not both")
        for section, key in (("audit", "link_sample"), ("audit", "document_sample"),
                             ("audit", "budget"), ("enrich", "budget")):
            value = d[section][key]
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise UsageError(f"{section}.{key} must be a positive integer")
        if not isinstance(d["audit"]["seed"], int):
            raise UsageError("audit.seed must be an integer")
        pinned = d["publish"]["pin_modified"]
        if pinned is not None:
            import datetime
            try:
                datetime.date.fromisoformat(pinned)
            except (TypeError, ValueError):
                raise UsageError(f"pin_modified must be an ISO date, got {pinned!r}") from None
        self.mapping_config()
        self.audit_config()

    def mapping_config(self) -> MappingConfig:
        m = self.data["mapping"]
        vocab = m["vocabularies"]
        tables = VocabularyTables.from_paths(**vocab) if any(vocab.values()) else None
        try:
            return MappingConfig(
                base_uri=m["base_uri"], id_field=m["id_field"],
                serialization=self.data["publish"]["formats"][0],
                dc_url_patterns=dict(m["dc_url_patterns"]),
                ordinal_counts_control_fields=m["ordinal_counts_control_fields"],
                vocabulary_tables=tables, marc_rules=m["marc_rules"], dc_rules=m["dc_rules"],
                synthesize_dc_ids=m["synthesize_dc_ids"], dc_record_element=m["dc_record_element"])
        except (ConfigError, OSError, ValueError) as exc:
            raise UsageError(f"mapping: {exc}") from None

    def audit_config(self) -> AuditConfig:
        a = self.data["audit"]
        from .audit import declared_defaults, catalogue
        known = {c.id for c in catalogue() if c.kind == "DECLARED"}
        unknown = sorted(set(a["declared"]) - known)
        if unknown:
            raise UsageError(f"audit.declared names criteria that are not DECLARED: {unknown}")
        declared = declared_defaults()
        declared.update(a["declared"])
        try:
            return AuditConfig(mapping=self.mapping_config(), formats=tuple(self.data["publish"]["formats"]),
                               declared=declared, seed=a["seed"], link_sample=a["link_sample"],
                               document_sample=a["document_sample"], link_budget=a["budget"],
                               timeout=float(a["timeout"]), literal_rules=a["literal_rules"],
                               axioms=a["axioms"])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"audit: {exc}") from None

    def void_metadata(self) -> VoidMetadata:
        v = dict(self.data["publish"]["void"])
        v["modified"] = self.data["publish"]["pin_modified"]
        return VoidMetadata.from_dict(v)

    def echo(self) -> dict:
        return copy.deepcopy(self.data)


# -------------------------------------------------------------------- stages

def _inputs(cfg: PipelineConfig) -> list[Path]:
    if not cfg["input"]:
        raise UsageError("no input given (use --input or the config 'input' key)")
    paths = [Path(p) for p in cfg["input"]]
    for p in paths:
        if not p.exists():
            raise FatalError(f"input not found: {p}")
    return paths


def _out_dir(cfg: PipelineConfig, required: bool = True) -> Path | None:
    if not cfg["out"]:
        if required:
            raise UsageError("no output directory given (use --out or the config 'out' key)")
        return None
    return Path(cfg["out"])


def _read_records(cfg: PipelineConfig, report: TransformReport | None = None, require_id: bool = True):
    mapping = cfg.mapping_config()
    for path in _inputs(cfg):
        if cfg["source_kind"] == "marcxml":
            reader = parse_marcxml(str(path), id_field=mapping.id_field if require_id else None)
        else:
            reader = parse_dublin_core(str(path), record_element=mapping.dc_record_element)
        yield from reader
        for w in reader.warnings:
            log.warning("%s: %s", path.name, w)
        if report is not None:
            report.add_ingest_errors(reader.errors)


def _load_dump(cfg: PipelineConfig) -> tuple[Path, Graph]:
    path = _inputs(cfg)[0]
    try:
        graph = load_graph(path)
    except (ValueError, OSError) as exc:
        raise FatalError(f"cannot read dump {path}: {exc}") from None
    for prefix, ns in STANDARD_PREFIXES.items():
        graph.namespaces.setdefault(prefix, ns)
    return path, graph


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _primary_format(cfg: PipelineConfig) -> str:
    return cfg["publish"]["formats"][0]


def stage_analyze(cfg: PipelineConfig) -> int:
    # profiling describes the source as it is, so records without an id still count
    records = list(_read_records(cfg, require_id=False))
    text = profile(records).to_json()
    out = _out_dir(cfg, required=False)
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out / "profile.json", text)
    return EXIT_OK


def do_transform(cfg: PipelineConfig) -> tuple[Graph, TransformReport]:
    holder = TransformReport()
    graph, report = transform_dump(_read_records(cfg, holder), cfg.mapping_config())
    # records the reader dropped were never seen by the mapper
    report.processed += holder.processed
    report.skipped += holder.skipped
    report.errors.extend(holder.errors)
    return graph, report


def stage_transform(cfg: PipelineConfig) -> int:
    out = _out_dir(cfg)
    graph, report = do_transform(cfg)
    fmt = _primary_format(cfg)
    _write(out / f"dump.{FORMAT_EXTENSIONS[fmt]}", dump_graph(graph, fmt))
    _write(out / "transform.json", report.to_json())
    return EXIT_RECORDS if report.skipped else EXIT_OK


def _lookup_client(cfg: PipelineConfig):
    e = cfg["enrich"]
    if e["fixture"]:
        try:
            return FixtureClient.from_file(e["fixture"])
        except (OSError, ValueError) as exc:
            raise FatalError(f"cannot read reconciliation fixture {e['fixture']}: {exc}") from None
    if e["endpoint"]:
        return EndpointClient(e["endpoint"], timeout=float(e["timeout"]))
    return None


def do_enrich(cfg: PipelineConfig, graph: Graph):
    """Returns (enriched graph, candidates, accepted pairs); unchanged when no source is set."""
    e = cfg["enrich"]
    client = _lookup_client(cfg)
    candidates = []
    accepted = []
    if client is not None:
        result = reconcile(graph, e["entity_kind"], client, floor=float(e["floor"]), budget=e["budget"])
        for subject, message in result.errors:
            log.warning("reconciliation error for %s: %s", subject, message)
        candidates = result.candidates
        if e["auto_accept"]:
            accepted.extend(auto_accept(candidates))
    if e["accept_file"]:
        try:
            accepted.extend(read_acceptance(e["accept_file"]))
        except OSError as exc:
            raise FatalError(f"cannot read acceptance file: {exc}") from None
    accepted = sorted(set(accepted), key=lambda pair: (pair[0].value, pair[1].value))
    if accepted:
        try:
            graph = apply_sameas(graph, accepted)
        except ValueError as exc:
            raise FatalError(str(exc)) from None
    return graph, candidates, accepted


def _candidates_tsv(candidates) -> str:
    lines = ["source\texternal\tscore\tlabel\tevidence"]
    lines += [f"{c.source.value}\t{c.external.value}\t{c.score}\t{c.label}\t{'; '.join(c.evidence)}"
              for c in candidates]
    return "\n".join(lines) + "\n"


def stage_enrich(cfg: PipelineConfig) -> int:
    out = _out_dir(cfg)
    _, graph = _load_dump(cfg)
    graph, candidates, accepted = do_enrich(cfg, graph)
    fmt = _primary_format(cfg)
    _write(out / f"enriched.{FORMAT_EXTENSIONS[fmt]}", dump_graph(graph, fmt))
    _write(out / "candidates.tsv", _candidates_tsv(candidates))
    _write(out / "accepted.txt", write_acceptance(accepted))
    return EXIT_OK


def _link_client(cfg: PipelineConfig):
    a = cfg["audit"]
    if a["link_stub"]:
        try:
            return StubTransport.from_file(a["link_stub"])
        except (OSError, ValueError) as exc:
            raise UsageError(f"link stub: {exc}") from None
    if a["allow_network"]:
        return HttpLinkClient()
    return None


def _void(cfg: PipelineConfig, graph: Graph, required: bool) -> Graph | None:
    meta = cfg.void_metadata()
    if not meta.license and not required:
        return None
    try:
        return generate_void(graph, meta, cfg.mapping_config().base_uri, cfg["publish"]["formats"])
    except VoidError as exc:
        raise FatalError(f"VoID: {exc}") from None


def do_audit(cfg: PipelineConfig, graph: Graph, void: Graph | None) -> QualityReport:
    gold_path = cfg["audit"]["gold"]
    try:
        gold = load_gold(None if gold_path == "builtin" else gold_path) if gold_path else None
    except (OSError, ValueError) as exc:
        raise FatalError(f"cannot read gold standard {gold_path}: {exc}") from None
    if not len(graph):
        raise FatalError("cannot audit an empty graph")
    try:
        return evaluate(graph, cfg.audit_config(), gold=gold, void=void, link_client=_link_client(cfg),
                        reference=cfg["audit"]["reference"])
    except OSError as exc:
        raise FatalError(f"audit input unreadable: {exc}") from None


def stage_audit(cfg: PipelineConfig) -> int:
    out = _out_dir(cfg)
    _, graph = _load_dump(cfg)
    report = do_audit(cfg, graph, _void(cfg, graph, required=False))
    _write(out / "quality.json", report.to_json())
    _write(out / "quality.txt", report.to_text())
    return EXIT_OK


def stage_publish(cfg: PipelineConfig) -> int:
    out = _out_dir(cfg)
    path, graph = _load_dump(cfg)
    here = path.parent
    artifacts = {}
    for name in ("quality.json", "transform.json"):
        candidate = here / name
        if not candidate.exists():
            raise FatalError(f"missing artifact: {name} (expected next to {path.name})")
        artifacts[name] = json.loads(candidate.read_text(encoding="utf-8"))
    report = QualityReport.from_dict(artifacts["quality.json"])
    void = _void(cfg, graph, required=True)
    try:
        bundle(graph, void, report, artifacts["transform.json"], out, cfg["publish"]["formats"])
    except PublishError as exc:
        raise FatalError(str(exc)) from None
    return EXIT_OK


def stage_pipeline(cfg: PipelineConfig) -> int:
    out = _out_dir(cfg)
    graph, transform_report = do_transform(cfg)
    graph, _, _ = do_enrich(cfg, graph)
    void = _void(cfg, graph, required=True)
    report = do_audit(cfg, graph, void)
    try:
        bundle(graph, void, report, transform_report, out, cfg["publish"]["formats"])
    except PublishError as exc:
        raise FatalError(str(exc)) from None
    return EXIT_RECORDS if transform_report.skipped else EXIT_OK


def _cell(term) -> str:
    if term is None:
        return ""
    return term.lexical if isinstance(term, Literal) else str(term)


def stage_query(cfg: PipelineConfig, query_file: str) -> int:
    _, graph = _load_dump(cfg)
    try:
        text = Path(query_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise FatalError(f"cannot read query {query_file}: {exc.strerror}") from None
    try:
        query = parse_query(text)
    except QueryCompileError as exc:
        raise FatalError(f"query not supported: {exc}") from None
    rows = run_query(graph, query)
    columns = [v.name for v in query.output_vars()]
    table = [columns] + [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
    lines = [" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    sys.stdout.write("\n".join(lines) + f"\n({len(rows)} rows)\n")
    out = _out_dir(cfg, required=False)
    if out is not None:
        payload = {"columns": columns, "rows": [[_cell(r.get(c)) for c in columns] for r in rows]}
        _write(out / "results.json", json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- arguments

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lodforge", description="GLAM metadata to linked open data.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, stage_flags=()):
        p.add_argument("--config", help=f"JSON config file (falls back to ${CONFIG_ENV})")
        p.add_argument("--input", action="append", help="input file; repeat for several")
        p.add_argument("--out", help="output directory")
        p.add_argument("--base-uri", help="namespace for minted IRIs")
        p.add_argument("--format", action="append", choices=sorted(FORMAT_EXTENSIONS),
                       help="dump serialization; repeat to emit several")
        for flag in stage_flags:
            flag(p)

    source = lambda p: p.add_argument("--source-kind", choices=SOURCE_KINDS)
    seed = lambda p: p.add_argument("--seed", type=int, help="seed for sampling audits")
    sample = lambda p: p.add_argument("--link-sample", type=int, help="number of external IRIs to probe")
    network = lambda p: p.add_argument("--allow-network", action="store_true",
                                       help="grant the audit a network budget")
    fixture = lambda p: p.add_argument("--fixture", help="SPARQL JSON results answering reconciliation")
    gold = lambda p: p.add_argument("--gold", help="gold standard file, or 'builtin'")
    accept = lambda p: p.add_argument("--accept-file", help="reviewed owl:sameAs pairs to apply")
    auto = lambda p: p.add_argument("--auto-accept", action="store_true",
                                    help="apply candidates with a perfect score")
    pin = lambda p: p.add_argument("--pin-modified", help="ISO date written as the VoID modified date")
    audit_flags = (seed, sample, network, gold)

    common(sub.add_parser("analyze", help="profile the source records"), (source,))
    common(sub.add_parser("transform", help="map records to RDF"), (source,))
    common(sub.add_parser("enrich", help="reconcile agents and add owl:sameAs links"),
           (fixture, accept, auto))
    common(sub.add_parser("audit", help="score a dump against the quality criteria"), audit_flags + (pin,))
    common(sub.add_parser("publish", help="write the publication bundle"), (pin,))
    common(sub.add_parser("pipeline", help="run every stage"),
           (source, fixture, accept, auto, pin) + audit_flags)
    q = sub.add_parser("query", help="run a pattern query over a dump")
    common(q)
    q.add_argument("query", help="file holding the query text")
    return parser


STAGES = {
    "analyze": stage_analyze,
    "transform": stage_transform,
    "enrich": stage_enrich,
    "audit": stage_audit,
    "publish": stage_publish,
    "pipeline": stage_pipeline,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = PipelineConfig.load(args.config or os.environ.get(CONFIG_ENV))
        cfg.apply_flags(args)
        cfg.validate()
        if args.command == "query":
            return stage_query(cfg, args.query)
        return STAGES[args.command](cfg)
    except UsageError as exc:
        print(f"lodforge: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FatalError, IngestError, VoidError, PublishError, OSError) as exc:
        print(f"lodforge: error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
