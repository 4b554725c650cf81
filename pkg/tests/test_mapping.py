import io
import json
from importlib.resources import files

import pytest

from conftest import GOLDEN
from helpers import FIXTURES, dc_graph, marc_graph, nt
from lodforge.graph import BF, RDF, RDFS, SCHEMA, Graph, IRI, Literal, stats
from lodforge.ingest import DcRecord, parse_dublin_core, parse_marcxml
from lodforge.mapping import (ConfigError, MappingConfig, MappingRuleSet, MintError, RuleSetError,
                              MARC_HANDLERS, load_rules, mint_uri, parse_rules, pattern_regexes,
                              pattern_uri, slugify, transform_dc_record, transform_dump)
from oracles import ntriples_stats, slug

BASE = "http://example.org/"
CONFIG = MappingConfig()


class TestMinting:
    @pytest.mark.parametrize("args,expected", [
        (("Work", "9944730413804341"), "http://example.org/9944730413804341#Work"),
        (("Agent", "9923749153804341", 800, 28), "http://example.org/9923749153804341#Agent800-28"),
        (("Agent", "9923749153804341", "100", 12), "http://example.org/9923749153804341#Agent100-12"),
        (("Hub", "15726", 240, 10), "http://example.org/15726#Hub240-10"),
        (("Instance", "(filmRef)0002"), "http://example.org/(filmRef)0002#Instance"),
    ])
    def test_attested_iris(self, args, expected):
        assert mint_uri(CONFIG, *args) == IRI(expected)

    def test_idempotent(self):
        assert mint_uri(CONFIG, "Agent", "1", 100, 3) == mint_uri(CONFIG, "Agent", "1", 100, 3)

    def test_illegal_characters_encoded_with_warning(self):
        warnings = []
        iri = mint_uri(CONFIG, "Work", "ab cd<1>", warnings=warnings)
        assert iri.value == "http://example.org/ab%20cd%3C1%3E#Work"
        assert warnings and warnings[0][0] == "iri-encoding"

    def test_non_ascii_kept(self):
        assert mint_uri(CONFIG, "Work", "Gàidhlig").value == "http://example.org/Gàidhlig#Work"

    @pytest.mark.parametrize("args", [("Work", "1", 245, 1), ("Agent", "1"), ("Agent", "")])
    def test_bad_arguments(self, args):
        with pytest.raises(MintError):
            mint_uri(CONFIG, *args)

    def test_base_uri_is_configurable(self):
        cfg = MappingConfig(base_uri="https://data.example.net/nbs/")
        assert mint_uri(cfg, "Work", "1").value == "https://data.example.net/nbs/1#Work"

    @pytest.mark.parametrize("base", ["film/", "http://example.org", "not an iri/"])
    def test_bad_base(self, base):
        with pytest.raises(ConfigError):
            MappingConfig(base_uri=base)

    def test_pattern_uri(self):
        assert pattern_uri(CONFIG, "film", "0001", slug=False) == IRI("http://example.org/film/0001")
        assert pattern_uri(CONFIG, "location", "Glasgow") == IRI("http://example.org/location/glasgow")

    def test_custom_pattern_and_bad_template(self):
        cfg = MappingConfig(dc_url_patterns={"film": "/video/{id}.html"})
        assert pattern_uri(cfg, "film", "7", slug=False).value == "http://example.org/video/7.html"
        with pytest.raises(ConfigError):
            MappingConfig(dc_url_patterns={"film": "film/{id}/{id}"})

    def test_slug(self):
        assert slugify("  Isle of  Lewis ") == "isle-of-lewis"
        assert slugify("Ferguson, Jenny") == "ferguson%2C-jenny"

    def test_regexes_recognise_minted_shapes(self):
        rx = pattern_regexes(CONFIG)
        assert rx["record"].match("http://example.org/15726#Work")
        assert rx["field"].match("http://example.org/15726#Hub240-10")
        assert rx["film"].match("http://example.org/film/0001")
        assert not rx["film"].match("http://example.org/film/0001/extra")


class TestMarc:
    def test_hub(self, boslit_graph):
        hub = IRI(BASE + "15726#Hub240-10")
        assert BF.Hub in boslit_graph.types(hub)
        title = boslit_graph.value(hub, BF["title"])
        assert boslit_graph.value(title, BF.mainTitle) == \
            Literal("Strange case of Doctor Jekyll and Mister Hyde. Italian")
        assert (IRI(BASE + "15726#Work"), BF.expressionOf, hub) in boslit_graph

    def test_agent_label(self, stevenson_graph):
        agent = IRI(BASE + "9923749153804341#Agent100-12")
        assert stevenson_graph.value(agent, RDFS.label) == Literal("Stevenson, Robert Louis, 1850-1894")
        assert BF.Person in stevenson_graph.types(agent)

    def test_series_entry_is_a_contribution(self, stevenson_graph):
        agent = IRI(BASE + "9923749153804341#Agent800-28")
        (contribution,) = stevenson_graph.subjects(BF.agent, agent)
        assert (IRI(BASE + "9923749153804341#Work"), BF.contribution, contribution) in stevenson_graph

    def test_work_instance_pair(self, marc10_graph):
        for work in marc10_graph.instances(BF.Work):
            (instance,) = marc10_graph.objects(work, BF.hasInstance)
            assert (instance, BF.instanceOf, work) in marc10_graph
            admin = marc10_graph.value(work, BF.adminMetadata)
            assert admin is not None and marc10_graph.value(admin, IRI("http://purl.org/dc/terms/source"))

    def test_admin_metadata_timestamp(self, stevenson_graph):
        admin = stevenson_graph.value(IRI(BASE + "9929751083804341#Work"), BF.adminMetadata)
        assert stevenson_graph.value(admin, BF.changeDate).lexical == "2021-03-15T12:00:00"

    def test_minimal_record_golden(self):
        g = marc_graph("minimal.xml")
        assert nt(g) == (GOLDEN / "minimal.nt").read_text(encoding="utf-8")
        kinds = {t.value.rsplit("/", 1)[1] for t in g.objects(None, RDF.type)}
        assert kinds == {"Work", "Text", "Instance", "Title", "AdminMetadata"}
        assert not g.instances(BF.Agent) and not g.instances(BF.Hub)

    def test_ten_record_golden(self, marc10_graph):
        golden = (GOLDEN / "marc10.nt").read_text(encoding="utf-8")
        expected = ntriples_stats(golden)
        s = stats(marc10_graph)
        assert (s.classes, s.properties, len(marc10_graph)) == \
            (expected.classes, expected.properties, expected.triples)
        assert nt(marc10_graph) == golden

    def test_vocabulary_links(self, marc10_graph):
        text = nt(marc10_graph)
        assert "<http://id.loc.gov/vocabulary/languages/gla>" in text
        assert "<http://id.loc.gov/vocabulary/geographicAreas/e-uk-st>" in text
        assert "languages/d>" not in text
        assert "e-uk-%20st" not in text and "e-uk- st" not in text

    def test_roles(self, marc10_graph):
        roles = marc10_graph.objects(None, BF.role)
        assert IRI("http://id.loc.gov/vocabulary/relators/aut") in roles
        assert Literal("auhtor") in roles and Literal("printer") in roles

    def test_items_from_holdings_and_links(self, marc10_graph):
        items = {i.value.rsplit("#", 1)[1] for i in marc10_graph.instances(BF.Item)}
        assert items == {"Item852-10", "Item856-12"}

    def test_report_counts_and_warnings(self):
        reader = parse_marcxml(FIXTURES / "marc10.xml", "001")
        graph, report = transform_dump(reader)
        report.add_ingest_errors(reader.errors)
        assert (report.processed, report.emitted, report.skipped) == (10, 9, 1)
        assert report.reconciles
        assert report.warnings["vocabulary"] == 2
        assert report.warnings["unmapped-role"] == 4
        assert report.triples == len(graph)
        assert json.loads(report.to_json())["skipped"] == 1

    def test_two_missing_ids(self):
        rec = '<record><leader>00000nam a2200000 i 4500</leader><datafield tag="245" ind1="0" ind2="0">' \
              '<subfield code="a">T</subfield></datafield></record>'
        xml = f'<collection xmlns="http://www.loc.gov/MARC21/slim">{rec}{rec}</collection>'
        reader = parse_marcxml(io.BytesIO(xml.encode()), "001")
        graph, report = transform_dump(reader)
        report.add_ingest_errors(reader.errors)
        assert report.skipped == 2 and len(graph) == 0

    def test_no_records(self):
        graph, report = transform_dump([])
        assert len(graph) == 0 and (report.processed, report.emitted, report.triples) == (0, 0, 0)

    def test_ordinals_can_skip_control_fields(self):
        cfg = MappingConfig(ordinal_counts_control_fields=False)
        g = marc_graph("stevenson.xml", cfg)
        assert IRI(BASE + "9929751083804341#Agent100-5") in g.subjects()


class TestDublinCore:
    def test_film_iri(self, films_graph):
        film = IRI(BASE + "film/0001")
        assert SCHEMA.VideoObject in films_graph.types(film)
        assert films_graph.value(film, SCHEMA.name) == Literal("Glasgow Today")

    def test_location(self, films_graph):
        place = IRI(BASE + "location/glasgow")
        assert films_graph.value(place, SCHEMA.name) == Literal("Glasgow")
        assert (IRI(BASE + "film/0001"), SCHEMA.contentLocation, place) in films_graph

    def test_entity_slugs_match_independent_slug(self, films_graph):
        for kind, cls in (("location", SCHEMA.Place), ("organisation", SCHEMA.Organization),
                          ("author", SCHEMA.Person)):
            for node in films_graph.instances(cls):
                name = films_graph.value(node, SCHEMA.name).lexical
                assert node.value == f"{BASE}{kind}/{slug(name)}"

    def test_title_only(self):
        g = transform_dc_record(DcRecord({"title": ["Only a title"]}, 1))
        assert len(g) == 2
        assert len(g.subjects()) == 1

    def test_creators(self, films_graph):
        assert films_graph.value(IRI(BASE + "film/0002"), SCHEMA.producer) == \
            IRI(BASE + "organisation/templar-film-studios")
        author = IRI(BASE + "author/grierson%2C-john%2C-1898-1972")
        assert films_graph.value(author, SCHEMA.birthDate).lexical == "1898"

    def test_unparseable_creator_is_credit_text(self):
        g = transform_dc_record(DcRecord({"title": ["T"], "creator": ["camera work by the crew"]}, 4))
        assert g.value(IRI(BASE + "film/0004"), SCHEMA.creditText) == Literal("camera work by the crew")

    def test_license_iri_and_text(self):
        g = transform_dc_record(DcRecord({"rights": ["https://creativecommons.org/publicdomain/mark/1.0/"]}, 1))
        assert g.value(IRI(BASE + "film/0001"), SCHEMA.license).value.startswith("https://creativecommons")
        g = transform_dc_record(DcRecord({"rights": ["All rights reserved"]}, 1))
        assert g.value(IRI(BASE + "film/0001"), SCHEMA.copyrightNotice) == Literal("All rights reserved")

    def test_dates(self, films_graph):
        assert films_graph.value(IRI(BASE + "film/0003"), SCHEMA.dateCreated) == Literal("1951-08")
        year = films_graph.value(IRI(BASE + "film/0001"), SCHEMA.dateCreated)
        assert year.datatype.endswith("#gYear")

    def test_identifier_element_wins(self):
        g = transform_dc_record(DcRecord({"identifier": ["MIA-77"], "title": ["T"]}, 1))
        assert IRI(BASE + "film/MIA-77") in g.subjects()

    def test_unmapped_element_warns(self):
        warnings = []
        transform_dc_record(DcRecord({"title": ["T"], "shelf": ["A1"]}, 1), warnings=warnings)
        assert warnings[0][0] == "unmapped-element"

    def test_mixed_dump(self):
        records = list(parse_marcxml(FIXTURES / "minimal.xml", "001")) + \
            list(parse_dublin_core(FIXTURES / "films.xml"))
        graph, report = transform_dump(records)
        assert report.emitted == 7
        assert len(graph) == len(marc_graph("minimal.xml")) + len(dc_graph("films.xml"))


class TestRuleSets:
    def test_builtin_profiles_load(self):
        assert isinstance(load_rules("bibframe", MARC_HANDLERS), MappingRuleSet)

    def test_required_tags_covered(self):
        rules = load_rules("bibframe", MARC_HANDLERS)
        for tag in ("041", "043", "100", "130", "240", "245", "260", "264", "650", "700", "800"):
            assert rules.rule_for_tag(tag) is not None, tag

    def test_unknown_handler(self):
        with pytest.raises(RuleSetError, match="unknown handler"):
            parse_rules({"record": {}, "rules": [{"handler": "magic", "tags": ["245"]}]}, MARC_HANDLERS)

    def test_unresolvable_curie(self):
        data = {"record": {}, "rules": [{"handler": "literal", "tags": ["250"], "predicate": "nope:x"}]}
        with pytest.raises(RuleSetError, match="nope:x"):
            parse_rules(data, MARC_HANDLERS)

    def test_custom_rule_file(self, tmp_path):
        rules = json.loads(files("lodforge.mapping").joinpath("data/bibframe.json").read_text(encoding="utf-8"))
        rules["rules"] = [r for r in rules["rules"] if "250" not in r.get("tags", [])]
        path = tmp_path / "rules.json"
        path.write_text(json.dumps(rules))
        g = marc_graph("marc10.xml", MappingConfig(marc_rules=path))
        assert not g.objects(None, BF.editionStatement)
        assert marc_graph("marc10.xml").objects(None, BF.editionStatement)


def test_empty_graph_helper():
    assert len(Graph()) == 0
