"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed as the tests run and repeated in the pytest terminal
summary. ``python tests/test_acceptance.py`` runs the suite on its own.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

import pytest

from helpers import FIXTURES, PINNED, dc_graph, licensed_config, marc_graph, nt, void_for, write_config
from lodforge.audit import (AuditConfig, GoldStandard, HttpLinkClient, StubServer, catalogue,
                            check_links, completeness, detect_duplicate_agents, dimensions, evaluate,
                            mine_shapes, validate_shapes)
from lodforge.cli import main
from lodforge.enrich import VocabularyRejection, resolve_geographic_area, resolve_language
from lodforge.graph import (BF, RDF, SCHEMA, Graph, IRI, Literal, canonical_ntriples, isomorphic,
                            parse_rdfxml, parse_turtle, serialize_rdfxml, serialize_turtle)
from lodforge.graph.query import evaluate as run_query
from lodforge.graph.query import match, parse_query
from lodforge.mapping import MappingConfig, mint_uri, pattern_uri
from lodforge.publish.bundle import digest_directory
from lodforge.publish.void import void_counts
from oracles import brute_force, engine_rows, ntriples_stats, render, same_rows
from strategies import join_graph, random_graph, random_query
from test_query import SPANISH_QUERY, STEVENSON_QUERY

RESULTS: list[str] = []

# the quality table as printed: dimension, then the criterion titles in row order
QUALITY_TABLE = [
    ("Accuracy", ["Syntactic validity of RDF documents", "Syntactic validity of literals",
                  "Semantic validity of triples", "Check of duplicate entities"]),
    ("Trustworthiness", ["On dataset level", "On statement level", "Using unknown and empty values"]),
    ("Consistency", ["Consistency of schema restrictions during insertion of new statements",
                     "Consistency of statements with respect to class constraints",
                     "Consistency of statements with respect to relations constraints"]),
    ("Relevancy", ["Creating a ranking of statements"]),
    ("Completeness", ["Schema completeness", "Column completeness", "Population completeness"]),
    ("Timeliness", ["Frequency", "Specification of the validity period of statements",
                    "Specification of the modification date of statements"]),
    ("EaseOfUnderstanding", ["Description of resources", "Labels in multiple languages",
                             "Understandable RDF serialization", "Self-describing URIs"]),
    ("Interoperability", ["Avoiding blank nodes and RDF reification",
                          "Provisioning of several serialization formats", "Using external vocabulary",
                          "Interoperability of proprietary vocabulary"]),
    ("Accessibility", ["Dereferencing possibility of resources", "Availability of the repository",
                       "Availability of a public SPARQL endpoint", "Provisioning of an RDF export",
                       "Support of content negotiation", "Linking HTML sites to RDF serializations",
                       "Provisioning of metadata"]),
    ("Licensing", ["Provisioning machine-readable licensing information"]),
    ("Interlinking", ["Interlinking via owl:sameAs", "Validity of external URIs"]),
]


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the body, then record and print one PASS/FAIL line."""
    start = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - start
    if failure is None and elapsed > limit:
        failure = AssertionError(f"took {elapsed:.2f} s, limit {limit} s")
    status = "PASS" if failure is None else "FAIL"
    line = f"criterion {number:>2} {status}  {title}  ({elapsed:.2f} s / {limit} s)"
    if failure is not None:
        line += f"  [{str(failure).splitlines()[0] if str(failure) else 'assertion failed'}]"
    RESULTS.append(line)
    print(line)
    if failure is not None:
        raise failure


def test_criterion_01_attested_iris():
    with criterion(1, "URI minting reproduces the attested IRIs", 1.0):
        cfg = MappingConfig()
        expected = {
            "http://example.org/9923749153804341#Agent100-12",
            "http://example.org/9923749153804341#Agent800-28",
            "http://example.org/15726#Hub240-10",
            "http://example.org/9944730413804341#Work",
            "http://example.org/(filmRef)0002#Instance",
            "http://example.org/film/0001",
        }
        minted = {
            mint_uri(cfg, "Agent", "9923749153804341", 100, 12).value,
            mint_uri(cfg, "Agent", "9923749153804341", 800, 28).value,
            mint_uri(cfg, "Hub", "15726", 240, 10).value,
            mint_uri(cfg, "Work", "9944730413804341").value,
            mint_uri(cfg, "Instance", "(filmRef)0002").value,
            pattern_uri(cfg, "film", "0001", slug=False).value,
        }
        assert minted == expected, minted ^ expected
        # the same IRIs come out of the transformation of the fixtures
        produced = set()
        for g in (marc_graph("stevenson.xml"), marc_graph("boslit.xml"), marc_graph("spanish.xml"),
                  marc_graph("marc10.xml"), dc_graph("films.xml")):
            produced |= {t.value for t in g.subjects() if isinstance(t, IRI)}
        missing = expected - produced - {"http://example.org/(filmRef)0002#Instance"}
        assert not missing, missing
        assert "http://example.org/(filmRef)0002#Instance" in produced


def test_criterion_02_stevenson_duplicates():
    graph = marc_graph("stevenson.xml")
    with criterion(2, "duplicate agents: one cluster of five", 1.0):
        result = detect_duplicate_agents(graph)
        assert [len(c) for c in result.clusters] == [5], result.clusters
        labels = {graph.value(IRI(a), IRI("http://www.w3.org/2000/01/rdf-schema#label")).lexical
                  for a in result.clusters[0]}
        assert labels == {"Stevenson, Robert Louis, 1850-1894"}


ARCHIVE_VOID = """
@prefix void: <http://rdfs.org/ns/void#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
<http://example.org/dataset> a void:Dataset ;
    void:classes 7 ;
    void:properties 23 ;
    void:triples 263476 .
"""


def test_criterion_03_void_counts():
    with criterion(3, "VoID counts equal the text-scan oracle; archive counts round-trip", 5.0):
        graphs = [Graph(), marc_graph("minimal.xml"), marc_graph("marc10.xml"), marc_graph("marc100.xml"),
                  marc_graph("boslit.xml"), dc_graph("films.xml")]
        for g in graphs:
            expected = ntriples_stats(nt(g))
            c = void_counts(void_for(g))
            assert (c.classes, c.properties, c.triples) == \
                (expected.classes, expected.properties, expected.triples)
        archive = parse_turtle(ARCHIVE_VOID)
        for text in (serialize_turtle(archive), canonical_ntriples(archive)):
            back = parse_turtle(text)
            assert canonical_ntriples(back) == canonical_ntriples(archive)
            c = void_counts(back)
            assert (c.classes, c.properties, c.triples) == (7, 23, 263476)


def test_criterion_04_query_engine():
    with criterion(4, "query engine equals brute force on 120 random pairs; agent and language row counts", 30.0):
        for seed in range(120):
            rng = random.Random(seed)
            graph = join_graph(rng, rng.randrange(0, 1001))
            assert len(graph) <= 1000
            spec = random_query(rng, graph)
            got = engine_rows(run_query(graph, parse_query(render(spec))), spec)
            assert same_rows(got, brute_force(list(graph), spec)), f"seed {seed}: {render(spec)}"
        assert len(match(marc_graph("stevenson.xml"), STEVENSON_QUERY)) == 5
        assert len(match(marc_graph("spanish.xml"), SPANISH_QUERY)) == 4


def test_criterion_05_shape_fixpoint():
    graphs = {name: marc_graph(name) for name in ("minimal.xml", "stevenson.xml", "spanish.xml", "boslit.xml",
                                                  "marc10.xml", "marc100.xml")}
    graphs["films.xml"] = dc_graph("films.xml")
    with criterion(5, "shapes mined at 1.0 validate their own graph", 10.0):
        for name, g in graphs.items():
            report = validate_shapes(g, mine_shapes(g, 1.0))
            assert report.rate == 1.0 and report.results, name


def archive_profile() -> tuple[Graph, Graph]:
    """The 100-record dump with a licensed VoID description and one dump format."""
    g = marc_graph("marc100.xml")
    return g, void_for(g)


def test_criterion_06_report_totality():
    graph, void = archive_profile()
    with criterion(6, "quality report: one entry per table row, forced scores reproduced", 30.0):
        rows = [(dim, title) for dim, titles in QUALITY_TABLE for title in titles]
        assert len(rows) == 35 and len(QUALITY_TABLE) == 11
        report = evaluate(graph, AuditConfig(), void=void)
        got = [(c.dimension, c.title) for c in report.criteria]
        assert got == rows
        assert len({c.id for c in report.criteria}) == len(rows) == len(catalogue())
        assert set(dimensions()) == {dim for dim, _ in QUALITY_TABLE}
        assert all(c.kind in ("AUTOMATIC", "NETWORK", "ASSISTED", "DECLARED") for c in report.criteria)
        forced = {
            "accessibility.sparql_endpoint": 0.0,
            "accessibility.dereferencing": 0.0,
            "accessibility.content_negotiation": 0.0,
            "licensing.machine_readable": 1.0,
            "interoperability.avoid_blank_nodes_reification": 1.0,
            "accessibility.rdf_export": 1.0,
            "timeliness.frequency": 0.5,
        }
        scores = {cid: report.score(cid) for cid in forced}
        assert scores == forced, scores


def test_criterion_07_link_checker():
    urls = [f"http://links.test/item/{i}" for i in range(9)]
    graph = Graph((IRI(f"http://example.org/{i}#Work"), BF.subject, IRI(u)) for i, u in enumerate(urls))
    script = "\n".join(f"{u} 200" for u in urls[:6]) + "\nhttp://links.test/* 404\n"
    with criterion(7, "link checker 6 of 9 through the stub server; defective codes never emitted", 10.0):
        with StubServer(script) as server:
            client = HttpLinkClient(proxies=server.proxies)
            client.session.trust_env = False
            result = check_links(graph, "http://example.org/", 500, 7, client, budget=4, timeout=5)
        assert abs(result.rate - 0.6666666) <= 1e-3, result.rate
        assert sorted(status for _, status in result.failures) == [404, 404, 404]
        for code, resolve in (("d", resolve_language), ("e-uk- st", resolve_geographic_area),
                              ("e-uk-%20st", resolve_geographic_area)):
            with pytest.raises(VocabularyRejection):
                resolve(code)
        text = nt(marc_graph("marc10.xml"))
        assert "vocabulary/languages/d>" not in text
        assert "e-uk-%20st" not in text and "e-uk- st" not in text
        assert "<http://id.loc.gov/vocabulary/geographicAreas/e-uk-st>" in text


def test_criterion_08_determinism(tmp_path):
    config = write_config(tmp_path / "config.json", licensed_config())
    with criterion(8, "two pipeline runs on 100 records give byte-identical bundles", 60.0):
        for name in ("first", "second"):
            code = main(["pipeline", "--config", str(config), "--input", str(FIXTURES / "marc100.xml"),
                         "--out", str(tmp_path / name), "--pin-modified", PINNED, "--gold", "builtin"])
            assert code in (0, 3), code
        a, b = digest_directory(tmp_path / "first"), digest_directory(tmp_path / "second")
        assert len(a) == 5 and a == b


def test_criterion_09_completeness():
    gold = GoldStandard.from_dict({
        "classes": {"Author": {"classes": ["schema:Person"],
                               "properties": {"name": ["schema:name"], "birth": ["schema:birthDate"],
                                              "death": ["schema:deathDate"]}},
                    "Video": {"classes": ["schema:VideoObject"],
                              "properties": {"title": ["schema:name"], "author": ["schema:author"]}}},
        "population": [{"label": "Stevenson, Robert Louis, 1850-1894"}, {"label": "Scott, Walter, 1771-1832"},
                       {"label": "Burns, Robert, 1759-1796"}, {"label": "Hogg, James, 1770-1835"}]})
    g = Graph()
    base = "http://example.org/"
    # 8 authors: 8 named, 6 with birth, 3 with death; 5 videos: 5 titled, 2 with an author
    for i in range(8):
        a = IRI(f"{base}author/{i}")
        g.add((a, RDF.type, SCHEMA.Person))
        g.add((a, SCHEMA.name, Literal(["Stevenson, Robert Louis", "Scott, Walter, 1771-1832"][i % 2]
                                       if i < 2 else f"Person {i}")))
        if i < 6:
            g.add((a, SCHEMA.birthDate, Literal("1900")))
        if i < 3:
            g.add((a, SCHEMA.deathDate, Literal("1950")))
    for i in range(5):
        v = IRI(f"{base}film/{i:04d}")
        g.add((v, RDF.type, SCHEMA.VideoObject))
        g.add((v, SCHEMA.name, Literal(f"Film {i}")))
        if i < 2:
            g.add((v, SCHEMA.author, IRI(f"{base}author/{i}")))
    hand = (8 / 8 + 6 / 8 + 3 / 8 + 5 / 5 + 2 / 5) / 5
    with criterion(9, "column completeness equals the hand tally; population 2 of 4", 5.0):
        result = completeness(g, gold)
        assert abs(result.column - hand) < 1e-9, (result.column, hand)
        assert result.population == 0.5


def test_criterion_10_round_trip():
    parsers = {"turtle": (serialize_turtle, parse_turtle), "rdfxml": (serialize_rdfxml, parse_rdfxml),
               "ntriples": (canonical_ntriples, parse_turtle)}
    with criterion(10, "serializer round trip on 100 random graphs per format", 30.0):
        failures = []
        for fmt, (write, read) in parsers.items():
            for seed in range(100):
                g = random_graph(random.Random(seed), random.Random(seed).randrange(0, 120))
                if not isomorphic(g, read(write(g))):
                    failures.append(f"{fmt} seed {seed}")
        assert not failures, failures[:5]


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
