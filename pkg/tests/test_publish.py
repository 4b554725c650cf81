import json

import pytest

from helpers import FIXTURES, LICENSE, PINNED, dc_graph, marc_graph, nt, void_for
from lodforge.audit import evaluate
from lodforge.graph import DCTERMS, VOID, Graph, IRI, Literal, canonical_ntriples, parse_turtle, serialize_turtle
from lodforge.mapping import transform_dump
from lodforge.ingest import parse_marcxml
from lodforge.publish import PublishError, VoidError, VoidMetadata, bundle, generate_void, write_dump
from lodforge.publish.bundle import digest_directory
from lodforge.publish.void import void_counts
from oracles import ntriples_stats

ARCHIVE_VOID = """
@prefix void: <http://rdfs.org/ns/void#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix formats: <http://www.w3.org/ns/formats/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

<http://example.org/dataset> a void:Dataset ;
    dcterms:title "Moving Image Archive catalogue" ;
    dcterms:license <https://creativecommons.org/publicdomain/mark/1.0/> ;
    dcterms:modified "2022-11-09"^^xsd:date ;
    void:feature formats:Turtle ;
    void:dataDump <http://example.org/dump.ttl> ;
    void:classes 7 ;
    void:properties 23 ;
    void:triples 263476 ;
    void:exampleResource <http://example.org/film/0001> .
"""


class TestVoid:
    @pytest.mark.parametrize("name", ["films.xml", "marc10.xml", "boslit.xml"])
    def test_counts_equal_text_scan(self, name):
        g = dc_graph(name) if name == "films.xml" else marc_graph(name)
        expected = ntriples_stats(nt(g))
        counts = void_counts(void_for(g))
        assert (counts.classes, counts.properties, counts.triples) == \
            (expected.classes, expected.properties, expected.triples)

    def test_empty_graph(self):
        counts = void_counts(void_for(Graph()))
        assert (counts.classes, counts.properties, counts.triples) == (0, 0, 0)

    @pytest.mark.parametrize("license", [None, "", "CC0 public domain"])
    def test_license_must_be_iri(self, license):
        with pytest.raises(VoidError):
            generate_void(Graph(), VoidMetadata(title="T", license=license), "http://example.org/")

    def test_archive_counts_round_trip(self):
        g = parse_turtle(ARCHIVE_VOID)
        counts = void_counts(g)
        assert (counts.classes, counts.properties, counts.triples) == (7, 23, 263476)
        again = parse_turtle(serialize_turtle(g))
        assert canonical_ntriples(again) == canonical_ntriples(g)
        assert void_counts(again) == counts

    def test_all_description_predicates_present(self, films_graph):
        meta = VoidMetadata(title="Films", license=LICENSE, publisher="National Library of Scotland",
                            contributor="http://example.org/MIA", sources=["http://example.org/source"],
                            modified=PINNED, description="Test")
        void = generate_void(films_graph, meta, "http://example.org/")
        ds = IRI("http://example.org/dataset")
        for p in (DCTERMS["title"], DCTERMS.description, DCTERMS.license, DCTERMS.publisher,
                  DCTERMS.contributor, DCTERMS.source, DCTERMS.modified, VOID.feature, VOID.dataDump,
                  VOID.vocabulary, VOID.classes, VOID.properties, VOID.triples, VOID.exampleResource):
            assert void.count(ds, p, None) >= 1, p
        assert void.value(ds, DCTERMS.publisher) == Literal("National Library of Scotland")
        assert void.value(ds, VOID.exampleResource) == IRI("http://example.org/film/0001")
        assert IRI("https://schema.org/") in void.objects(ds, VOID.vocabulary)

    def test_bad_modified(self):
        with pytest.raises(VoidError):
            generate_void(Graph(), VoidMetadata(title="T", license=LICENSE, modified="9 Nov 2022"), "http://e.org/")

    def test_unknown_metadata_key(self):
        with pytest.raises(VoidError):
            VoidMetadata.from_dict({"title": "T", "license": LICENSE, "colour": "blue"})


class TestDump:
    def test_empty_turtle(self, tmp_path):
        m = write_dump(Graph(), "turtle", tmp_path / "dump.ttl")
        assert m.triples == 0 and m.bytes == len((tmp_path / "dump.ttl").read_bytes())

    def test_ntriples_line_count(self, tmp_path, marc10_graph):
        m = write_dump(marc10_graph, "ntriples", tmp_path / "dump.nt")
        lines = (tmp_path / "dump.nt").read_text(encoding="utf-8").splitlines()
        assert m.triples == len(lines) == len(marc10_graph)

    @pytest.mark.parametrize("fmt", ["turtle", "rdfxml", "ntriples"])
    def test_digest_stable(self, tmp_path, fmt, films_graph):
        a = write_dump(films_graph, fmt, tmp_path / "a")
        b = write_dump(films_graph.copy(), fmt, tmp_path / "b")
        assert a.sha256 == b.sha256 and a.bytes == b.bytes

    def test_unknown_format(self, tmp_path):
        with pytest.raises(PublishError):
            write_dump(Graph(), "json-ld", tmp_path / "x")

    def test_unwritable(self, tmp_path):
        with pytest.raises(PublishError):
            write_dump(Graph(), "turtle", tmp_path / "missing" / "dump.ttl")


def publish_once(out, formats=("turtle",)):
    reader = parse_marcxml(FIXTURES / "marc10.xml", "001")
    graph, treport = transform_dump(reader)
    void = void_for(graph, formats=formats)
    report = evaluate(graph, void=void)
    return bundle(graph, void, report, treport, out, formats)


class TestBundle:
    def test_layout(self, tmp_path):
        publish_once(tmp_path / "out")
        assert sorted(p.name for p in (tmp_path / "out").iterdir()) == \
            ["dump.ttl", "quality.json", "quality.txt", "transform.json", "void.ttl"]

    def test_rerun_identical(self, tmp_path):
        publish_once(tmp_path / "a")
        publish_once(tmp_path / "b")
        assert digest_directory(tmp_path / "a") == digest_directory(tmp_path / "b")
        publish_once(tmp_path / "a")
        assert digest_directory(tmp_path / "a") == digest_directory(tmp_path / "b")

    def test_all_formats(self, tmp_path):
        manifests = publish_once(tmp_path / "out", ("turtle", "rdfxml", "ntriples"))
        assert [m.format for m in manifests] == ["turtle", "rdfxml", "ntriples"]
        assert len(list((tmp_path / "out").iterdir())) == 7

    def test_missing_report_named(self, tmp_path, films_graph):
        with pytest.raises(PublishError, match="quality report"):
            bundle(films_graph, void_for(films_graph), None, {}, tmp_path / "out")
        assert not (tmp_path / "out").exists()

    def test_foreign_files_refused(self, tmp_path):
        out = tmp_path / "out"
        out.mkdir()
        (out / "notes.txt").write_text("mine")
        with pytest.raises(PublishError, match="notes.txt"):
            publish_once(out)
        assert (out / "notes.txt").read_text() == "mine"

    def test_stale_void_rejected(self, tmp_path, films_graph, marc10_graph):
        report = evaluate(films_graph)
        with pytest.raises(PublishError, match="counts"):
            bundle(films_graph, void_for(marc10_graph), report, {}, tmp_path / "out")

    def test_quality_json_parses(self, tmp_path):
        publish_once(tmp_path / "out")
        data = json.loads((tmp_path / "out" / "quality.json").read_text())
        assert len(data["criteria"]) == 35
