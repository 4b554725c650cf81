import json

import pytest
from hypothesis import given, strategies as st

from helpers import FIXTURES
from lodforge.enrich import (ExternalEntry, FixtureClient, ReconcileError, ReconciliationCandidate,
                             TextFallback, VocabularyRejection, apply_sameas, auto_accept,
                             life_dates, load_table, name_key, normalize_label, read_acceptance,
                             reconcile, resolve_geographic_area, resolve_language, resolve_relator,
                             score_candidate, write_acceptance)
from lodforge.enrich.reconcile import parse_sparql_json
from lodforge.graph import OWL, RDFS, BF, Graph, IRI, Literal

LOC = "http://id.loc.gov/vocabulary/"
STEVENSON = "Stevenson, Robert Louis, 1850-1894"
AGENTS = FIXTURES / "agents.srj"


class TestVocabularies:
    @pytest.mark.parametrize("code", ["spa", "SPA", " gla "])
    def test_language(self, code):
        assert resolve_language(code) == IRI(LOC + "languages/" + code.strip().lower())

    @pytest.mark.parametrize("code,reason", [("d", "not in table"), ("", "empty"), ("s pa", "whitespace"),
                                             ("sp%20a", "whitespace"), (None, "missing")])
    def test_language_rejected(self, code, reason):
        with pytest.raises(VocabularyRejection, match=reason):
            resolve_language(code)

    def test_geographic_padding(self):
        assert resolve_geographic_area("e-uk-st") == IRI(LOC + "geographicAreas/e-uk-st")
        assert resolve_geographic_area("n-us---") == IRI(LOC + "geographicAreas/n-us")

    @pytest.mark.parametrize("code", ["e-uk- st", "zz-fake", "-------"])
    def test_geographic_rejected(self, code):
        with pytest.raises(VocabularyRejection):
            resolve_geographic_area(code)

    def test_relators(self):
        assert resolve_relator("author.") == IRI(LOC + "relators/aut")
        assert resolve_relator("aut") == IRI(LOC + "relators/aut")
        assert resolve_relator("Translator,") == TextFallback("Translator")
        assert resolve_relator("auhtor") == TextFallback("auhtor")

    def test_relator_table_size(self):
        assert len(load_table("relators").entries) == 15

    def test_override_table(self, tmp_path):
        path = tmp_path / "langs.tsv"
        path.write_text("# code\tlabel\nxyz\tInvented\n", encoding="utf-8")
        assert load_table("languages", path).iri("xyz") == IRI(LOC + "languages/xyz")

    def test_bad_table_file(self, tmp_path):
        path = tmp_path / "langs.tsv"
        path.write_text("eng\tEnglish\neng\tagain\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            load_table("languages", path)


class TestLabels:
    def test_normalize(self):
        assert normalize_label("  Scott,   Walter, Sir. ") == "scott, walter, sir"

    def test_dates(self):
        assert life_dates(STEVENSON) == "1850-1894"
        assert life_dates("MacDiarmid, Hugh, 1892-") == "1892-"
        assert life_dates("Anonymous") is None

    def test_name_key_drops_dates_and_diacritics(self):
        assert name_key("Núñez, José, 1900-1980.") == name_key("Nunez, Jose")

    @given(st.text(max_size=30))
    def test_normalize_idempotent(self, text):
        once = normalize_label(text)
        assert normalize_label(once) == once


def agents_graph(*labels) -> Graph:
    g = Graph()
    for n, label in enumerate(labels):
        s = IRI(f"http://example.org/{n}#Agent100-1")
        g.add((s, RDFS.label, Literal(label)))
        g.add((s, IRI("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), BF.Person))
    return g


class TestReconcile:
    def test_scores(self):
        assert score_candidate(STEVENSON, ExternalEntry("http://x.org/1", STEVENSON, "1850", "1894"))[0] == 1.0
        assert score_candidate("Scott, Walter", ExternalEntry("http://x.org/1", "Scott, Walter"))[0] == 0.7
        assert score_candidate(STEVENSON, ExternalEntry("http://x.org/1", "stevenson, robert louis"))[0] == 0.4
        assert score_candidate(STEVENSON, ExternalEntry("http://x.org/1", "Stevenson, Robert Louis",
                                                        "1921", "1990")) is None

    def test_stevenson_against_fixture(self):
        result = reconcile(agents_graph(STEVENSON), "agent", FixtureClient.from_file(AGENTS))
        (best,) = [c for c in result.candidates if c.score == 1.0]
        assert best.external == IRI("http://www.wikidata.org/entity/Q1512")
        assert "dates:match" in best.evidence
        assert {c.external.value.rsplit("/", 1)[1] for c in result.candidates} == {"Q1512"}

    def test_normalized_fallback_sorted(self):
        result = reconcile(agents_graph("stevenson, robert louis 1850-1894"), "agent",
                           FixtureClient.from_file(AGENTS))
        # the 1921-1990 namesake is ruled out by its dates
        assert [(c.external.value.rsplit("/", 1)[1], c.score) for c in result.candidates] == \
            [("Q1512", 0.4), ("Q90000001", 0.4)]

    def test_absent_gives_nothing(self):
        result = reconcile(agents_graph("Nobody, Anne"), "agent", FixtureClient.from_file(AGENTS))
        assert result.candidates == [] and result.errors == []

    def test_unknown_kind(self):
        with pytest.raises(ReconcileError):
            reconcile(Graph(), "ship", FixtureClient([]))

    def test_client_failure_is_recorded(self):
        class Broken:
            def lookup(self, label):
                raise ReconcileError("endpoint down")
            lookup_normalized = lookup

        result = reconcile(agents_graph("A", "B"), "agent", Broken())
        assert len(result.errors) == 2 and result.candidates == []

    def test_auto_accept_only_perfect(self):
        s = IRI("http://example.org/0#Agent100-1")
        cands = [ReconciliationCandidate(s, IRI("http://x.org/a"), "a", 1.0),
                 ReconciliationCandidate(s, IRI("http://x.org/b"), "b", 0.7)]
        assert auto_accept(cands) == [(s, IRI("http://x.org/a"))]

    def test_bad_score(self):
        with pytest.raises(ValueError):
            ReconciliationCandidate(IRI("http://x.org/a"), IRI("http://x.org/b"), "", 1.5)

    def test_malformed_results(self):
        with pytest.raises(ReconcileError):
            parse_sparql_json({"results": {"bindings": [{"item": {"value": "not an iri"},
                                                        "label": {"value": "x"}}]}})
        with pytest.raises(ReconcileError):
            parse_sparql_json({"head": {}})


class TestSameAs:
    def test_empty_acceptance_leaves_graph(self):
        g = agents_graph(STEVENSON)
        assert set(apply_sameas(g, [])) == set(g)

    def test_one_pair_adds_one_triple(self):
        g = agents_graph(STEVENSON)
        s, o = IRI("http://example.org/0#Agent100-1"), IRI("http://www.wikidata.org/entity/Q1512")
        out = apply_sameas(g, [(s, o)])
        assert len(out) == len(g) + 1 and (s, OWL.sameAs, o) in out
        assert len(g) == 2
        assert set(apply_sameas(out, [(s, o)])) == set(out)

    def test_missing_subject(self):
        with pytest.raises(ReconcileError, match="nowhere"):
            apply_sameas(Graph(), [(IRI("http://example.org/nowhere"), IRI("http://x.org/a"))])

    def test_acceptance_file_round_trip(self, tmp_path):
        pairs = [(IRI("http://example.org/1#Agent100-9"), IRI("http://www.wikidata.org/entity/Q1512"))]
        path = tmp_path / "accepted.txt"
        path.write_text("# reviewed\n" + write_acceptance(pairs), encoding="utf-8")
        assert read_acceptance(path) == pairs

    def test_acceptance_file_bad_line(self, tmp_path):
        path = tmp_path / "accepted.txt"
        path.write_text("http://example.org/a\n", encoding="utf-8")
        with pytest.raises(ReconcileError, match=":1:"):
            read_acceptance(path)


def test_fixture_file_is_valid_json():
    assert len(json.loads(AGENTS.read_text())["results"]["bindings"]) == 4
