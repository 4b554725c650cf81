"""Regenerate the XML fixtures in this directory.

The files are checked in; rerun this only when a fixture has to change:

    python3 tests/fixtures/build_fixtures.py
"""

from __future__ import annotations

import random
from pathlib import Path
from xml.sax.saxutils import escape

HERE = Path(__file__).parent
MARC_NS = "http://www.loc.gov/MARC21/slim"


def control(tag, value):
    return ("c", tag, value)


def data(tag, subfields, ind1=" ", ind2=" "):
    return ("d", tag, ind1, ind2, subfields)


def filler(tag="500", text="General note."):
    return data(tag, [("a", text)])


def lang008(code, year="1990"):
    return control("008", f"900101s{year}    stk           000 0 {code} d")


def record_xml(leader, fields):
    out = ["  <record>", f"    <leader>{escape(leader)}</leader>"]
    for f in fields:
        if f[0] == "c":
            out.append(f'    <controlfield tag="{f[1]}">{escape(f[2])}</controlfield>')
        else:
            _, tag, i1, i2, subs = f
            out.append(f'    <datafield tag="{tag}" ind1="{i1}" ind2="{i2}">')
            for code, value in subs:
                out.append(f'      <subfield code="{code}">{escape(value)}</subfield>')
            out.append("    </datafield>")
    out.append("  </record>")
    return "\n".join(out)


def collection(records) -> str:
    body = "\n".join(record_xml(leader, fields) for leader, fields in records)
    return f'<?xml version="1.0" encoding="UTF-8"?>\n<collection xmlns="{MARC_NS}">\n{body}\n</collection>\n'


def pad_to(fields, ordinal, tag="500"):
    """Append notes until the next field lands at ``ordinal``."""
    out = list(fields)
    n = 0
    while len(out) + 1 < ordinal:
        n += 1
        out.append(filler(tag, f"Note {n}."))
    return out


BOOK = "00000nam a2200000 i 4500"
STEVENSON = "Stevenson, Robert Louis,"
RLS_DATES = "1850-1894."


def head(rid, lang="eng", year="1990"):
    return [control("001", rid), control("003", "StEdNL"), control("005", "20210315120000.0"),
            lang008(lang, year)]


def stevenson_records():
    recs = []
    # 100 at ordinal 9
    f = pad_to(head("9929751083804341"), 9)
    f += [data("100", [("a", STEVENSON), ("d", RLS_DATES), ("e", "author.")], "1"),
          data("245", [("a", "Treasure island /"), ("c", "Robert Louis Stevenson.")], "1", "0"),
          data("264", [("a", "London :"), ("b", "Cassell,"), ("c", "1883.")], " ", "1")]
    recs.append((BOOK, f))
    # 100 at ordinal 12, 800 series entry at ordinal 28
    f = pad_to(head("9923749153804341"), 12)
    f += [data("100", [("a", STEVENSON), ("d", RLS_DATES), ("e", "author.")], "1"),
          data("245", [("a", "Kidnapped :"), ("b", "being memoirs of the adventures of David Balfour /"),
                       ("c", "by Robert Louis Stevenson.")], "1", "0"),
          data("264", [("a", "Edinburgh :"), ("b", "Canongate,"), ("c", "1994.")], " ", "1")]
    f = pad_to(f, 28, "504")
    f.append(data("800", [("a", STEVENSON), ("d", RLS_DATES), ("t", "Works."), ("v", "v. 3.")], "1"))
    recs.append((BOOK, f))
    # 100 at ordinal 13
    f = pad_to(head("9915244463804341"), 13)
    f += [data("100", [("a", STEVENSON), ("d", RLS_DATES)], "1"),
          data("245", [("a", "The master of Ballantrae.")], "1", "4"),
          data("260", [("a", "Glasgow :"), ("b", "Collins,"), ("c", "1953.")])]
    recs.append((BOOK, f))
    # 100 at ordinal 10
    f = pad_to(head("9944502973804341"), 10)
    f += [data("100", [("a", STEVENSON), ("d", RLS_DATES), ("4", "aut")], "1"),
          data("245", [("a", "Travels with a donkey in the Cevennes.")], "1", "0"),
          data("264", [("a", "Oxford :"), ("b", "Oxford University Press,"), ("c", "1985.")], " ", "1")]
    recs.append((BOOK, f))
    return recs


def spanish_records():
    titles = [
        ("9944730413804341", "El Palacio de Holyroodhouse", "spa"),
        ("999356403804341", "La gente y los lugares", "spa"),
        ("9929767743804341", "El Ingenioso Hidalgo Don Quixote de la Mancha. (Del Ingenioso Caballero "
                             "Don Quixote de la Mancha.)", "spa"),
        ("9919385013804341", "Una Gramática colonial del Quichua del Ecuador", "spa"),
        ("9900000013804341", "Holyrood Palace", "eng"),
        ("9900000023804341", "Guida di Edimburgo", "ita"),
    ]
    recs = []
    for rid, title, lang in titles:
        f = head(rid, lang)
        f += [data("041", [("a", lang)], "0"),
              data("245", [("a", title)], "0", "0"),
              data("264", [("a", "Edinburgh :"), ("b", "Historic Scotland,"), ("c", "2001.")], " ", "1")]
        recs.append((BOOK, f))
    return recs


JEKYLL = "Strange case of Doctor Jekyll and Mister Hyde."
TREASURE = "Treasure island."


def translation(rid, title, uniform, language, hub_ordinal, lang_code):
    f = pad_to([control("001", rid), control("005", "20190101000000.0"), lang008(lang_code, "1960")],
               hub_ordinal - 1)
    f.append(data("100", [("a", STEVENSON), ("d", RLS_DATES)], "1"))
    f.append(data("240", [("a", uniform), ("l", language)], "1", "0"))
    f.append(data("245", [("a", title)], "1", "0"))
    f.append(data("700", [("a", "Traduttore, Anonimo."), ("e", "translator.")], "1"))
    return (BOOK, f)


def boslit_records():
    recs = [
        translation("15726", "Lo strano caso del dottor Jekyll e del dottor [sic] Hyde ; "
                             "Il signore di Ballantrae", JEKYLL, "Italian", 10, "ita"),
        translation("9803", "Lo strano caso del dottor Jekyll e del signor Hyde", JEKYLL, "Italian", 9, "ita"),
        translation("9962", "Lo strano caso del dottor Jekyll e del signor Hyde", JEKYLL, "Italian", 8, "ita"),
        translation("16238", "Il dottor Jekyll", JEKYLL, "Italian", 9, "ita"),
        translation("12727", "Il dottor Jekill [sic]", JEKYLL, "Italian", 9, "ita"),
        translation("12333", "Lo strano caso del dottor Jekill [sic]", JEKYLL, "Italian", 9, "ita"),
        translation("20001", "El extraño caso del doctor Jekyll y Mr. Hyde", JEKYLL, "Spanish", 6, "spa"),
        translation("20002", "El doctor Jekyll y Mister Hyde", JEKYLL, "Spanish", 7, "spa"),
        translation("20003", "La isla del tesoro", TREASURE, "Spanish", 6, "spa"),
        translation("20004", "La isla del tesoro", TREASURE, "Spanish", 8, "spa"),
        translation("20005", "La isla del tesoro : novela", TREASURE, "Spanish", 9, "spa"),
        translation("20006", "Die Schatzinsel", TREASURE, "German", 6, "ger"),
        translation("20007", "Die Schatzinsel", TREASURE, "German", 7, "ger"),
        translation("20008", "L'île au trésor", TREASURE, "French", 6, "fre"),
    ]
    return recs


def ten_records():
    recs = [stevenson_records()[0], spanish_records()[0], boslit_records()[0]]
    recs.append((BOOK, head("(filmRef)0002") + [
        data("245", [("a", "Seawards the great ships /"), ("c", "Grierson.")], "1", "0"),
        data("260", [("a", "Glasgow :"), ("b", "Templar Film Studios,"), ("c", "1960.")])]))
    recs.append(("00000ngm a2200000 i 4500", head("9901000013804341", "gla") + [
        data("041", [("a", "gla"), ("a", "eng")], "1"),
        data("043", [("a", "e-uk-st")]),
        data("110", [("a", "Comunn Gàidhealach.")], "2"),
        data("245", [("a", "Òrain Ghàidhlig :"), ("b", "Gaelic songs of the Highlands.")], "1", "0"),
        data("264", [("a", "Inverness :"), ("b", "An Comunn,"), ("c", "1936.")], " ", "1"),
        data("650", [("a", "Folk songs, Gaelic"), ("z", "Scotland.")], " ", "0"),
        data("651", [("a", "Highlands (Scotland)"), ("x", "Social life and customs.")], " ", "0"),
        data("856", [("u", "http://digital.nls.uk/gaelic-songs/1936")], "4", "0")]))
    recs.append((BOOK, head("9902000023804341", "sco") + [
        data("100", [("a", "Burns, Robert,"), ("d", "1759-1796."), ("e", "author.")], "1"),
        data("245", [("a", "Poems, chiefly in the Scottish dialect /"), ("c", "by Robert Burns.")], "1", "0"),
        data("250", [("a", "Facsimile edition.")]),
        data("264", [("a", "Kilmarnock :"), ("b", "John Wilson,"), ("c", "1786.")], " ", "1"),
        data("700", [("a", "Wilson, John,"), ("d", "1751-1821,"), ("e", "printer.")], "1"),
        data("852", [("a", "National Library of Scotland"), ("h", "RB.s.1234")])]))
    recs.append((BOOK, head("9903000033804341", "eng") + [
        data("100", [("a", "Scott, Walter,"), ("c", "Sir,"), ("d", "1771-1832."), ("e", "auhtor.")], "1"),
        data("245", [("a", "Waverley ; or, 'Tis sixty years since.")], "1", "0"),
        data("264", [("a", "Edinburgh :"), ("b", "Constable,"), ("c", "1814.")], " ", "1"),
        data("043", [("a", "e-uk- st")]),
        data("041", [("a", "d")], "0"),
        data("651", [("a", "Scotland"), ("x", "History"), ("y", "18th century"), ("v", "Fiction.")], " ", "0")]))
    recs.append((BOOK, head("9904000043804341", "eng") + [
        data("111", [("a", "Edinburgh International Book Festival"), ("d", "(1999)")], "2"),
        data("245", [("a", "Festival programme.")], "0", "0"),
        data("264", [("a", "Edinburgh :"), ("b", "The Festival,"), ("c", "1999.")], " ", "1"),
        data("710", [("a", "Scottish Arts Council."), ("4", "spn")], "2")]))
    recs.append((BOOK, head("9905000053804341", "eng") + [
        data("100", [("a", "Doyle, Arthur Conan,"), ("d", "1859-1930.")], "1"),
        data("130", [("a", "Sherlock Holmes stories."), ("l", "English."), ("s", "Selections.")], "0"),
        data("245", [("a", "Adventures of Sherlock Holmes.")], "1", "0"),
        data("264", [("a", "London :"), ("b", "George Newnes,"), ("c", "1892.")], " ", "1"),
        data("650", [("a", "Detective and mystery stories, English.")], " ", "0")]))
    # a record without 001 is skipped by the reader when an id field is required
    recs.append((BOOK, [control("005", "20200101000000.0"),
                        data("245", [("a", "Untitled pamphlet without an identifier.")], "0", "0")]))
    return recs


SURNAMES = ["Macdonald", "Campbell", "Stewart", "Fraser", "Murray", "Grant", "Ross", "Reid",
            "Hamilton", "Graham", "Kerr", "Lindsay", "Duncan", "Ferguson", "Munro"]
FORENAMES = ["Mary", "James", "Margaret", "John", "Agnes", "William", "Janet", "Alexander", "Isobel"]
WORDS = ["history", "island", "Highland", "ballads", "voyage", "letters", "parish", "memoirs",
         "poems", "glen", "tales", "kirk", "burgh", "songs", "chronicle", "estate", "journal"]
PLACES = ["Edinburgh", "Glasgow", "Aberdeen", "Dundee", "Inverness", "Perth", "Stirling", "London"]
PUBLISHERS = ["Blackwood", "Canongate", "Collins", "Chambers", "Polygon", "Birlinn", "Mercat Press"]
LANGS = ["eng", "eng", "eng", "sco", "gla", "fre", "ger", "spa"]
ROLES = ["author.", "editor.", "illustrator.", "translator.", "compiler.", "author"]


def hundred_records(seed=1850):
    rng = random.Random(seed)
    recs = []
    for n in range(100):
        rid = f"99{rng.randrange(10**9, 10**10)}3804341"
        lang = rng.choice(LANGS)
        year = str(rng.randrange(1700, 2021))
        f = head(rid, lang, year)
        surname, forename = rng.choice(SURNAMES), rng.choice(FORENAMES)
        birth = rng.randrange(1650, 1990)
        if rng.random() < 0.85:
            dates = f"{birth}-{birth + rng.randrange(30, 95)}." if birth < 1930 else f"{birth}-"
            f.append(data("100", [("a", f"{surname}, {forename},"), ("d", dates),
                                  ("e", rng.choice(ROLES))], "1"))
        if rng.random() < 0.3:
            f.append(data("041", [("a", lang), ("h", rng.choice(LANGS))], "1"))
        title = " ".join(rng.choice(WORDS) for _ in range(rng.randrange(2, 6))).capitalize()
        f.append(data("245", [("a", title + ".")], "1", "0"))
        if rng.random() < 0.2:
            f.append(data("250", [("a", f"{rng.randrange(2, 9)}th ed.")]))
        place, pub = rng.choice(PLACES), rng.choice(PUBLISHERS)
        tag = rng.choice(["260", "264"])
        f.append(data(tag, [("a", f"{place} :"), ("b", f"{pub},"), ("c", f"{year}.")], " ",
                      "1" if tag == "264" else " "))
        for _ in range(rng.randrange(0, 3)):
            f.append(data("650", [("a", rng.choice(WORDS).capitalize()), ("z", "Scotland.")], " ", "0"))
        if rng.random() < 0.25:
            f.append(data("043", [("a", rng.choice(["e-uk-st", "e-uk-en", "e-uk---", "n-us---"]))]))
        if rng.random() < 0.3:
            f.append(data("700", [("a", f"{rng.choice(SURNAMES)}, {rng.choice(FORENAMES)},"),
                                  ("e", rng.choice(ROLES))], "1"))
        if rng.random() < 0.15:
            f.append(data("856", [("u", f"http://digital.nls.uk/{rid}")], "4", "0"))
        recs.append((BOOK, f))
    return recs


DC_NS = "http://purl.org/dc/elements/1.1/"


def dc_collection(records) -> str:
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<records xmlns:dc="{DC_NS}">']
    for rec in records:
        out.append("  <dc>")
        for name, value in rec:
            out.append(f"    <dc:{name}>{escape(value)}</dc:{name}>")
        out.append("  </dc>")
    out.append("</records>")
    return "\n".join(out) + "\n"


def dc_records():
    return [
        [("title", "Glasgow Today"), ("creator", "Grierson, John, 1898-1972"),
         ("date", "1935"), ("publisher", "Glasgow Film Society"), ("coverage", "Glasgow"),
         ("subject", "Industry"), ("subject", "Gaelic culture"), ("type", "Documentary"),
         ("format", "16mm"), ("language", "eng"),
         ("rights", "https://creativecommons.org/publicdomain/mark/1.0/"),
         ("description", "A portrait of the city and its shipyards.")],
        [("title", "Seawards the Great Ships"), ("creator", "Templar Film Studios"),
         ("date", "1960"), ("coverage", "Clydebank"), ("subject", "Shipbuilding"),
         ("rights", "https://creativecommons.org/publicdomain/mark/1.0/")],
        [("title", "Highland Gathering"), ("creator", "Ferguson, Jenny"), ("date", "1951-08"),
         ("coverage", "Braemar"), ("subject", "Gaelic music"), ("subject", "Highland games"),
         ("description", "Piping, dancing and heavy events.")],
        [("title", "Island of Lewis"), ("creator", "Filmed by the Scottish Educational Film Association"),
         ("date", "c1938"), ("coverage", "Lewis"), ("subject", "Crofting"), ("subject", "Gaelic language")],
        [("title", "The Big Pit"), ("creator", "Stewart, Ian"), ("contributor", "Murray, Alan"),
         ("date", "196u"), ("coverage", "Fife"), ("subject", "Coal mining")],
        [("title", "Waverley Steps"), ("creator", "Eldridge, John, 1917-1962"), ("date", "1948"),
         ("publisher", "Scottish Home Department"), ("coverage", "Edinburgh"),
         ("subject", "City life")],
    ]


def write(name: str, text: str) -> None:
    (HERE / name).write_text(text, encoding="utf-8")


def main() -> None:
    write("stevenson.xml", collection(stevenson_records()))
    write("spanish.xml", collection(spanish_records()))
    write("boslit.xml", collection(boslit_records()))
    write("marc10.xml", collection(ten_records()))
    write("marc100.xml", collection(hundred_records()))
    write("minimal.xml", collection([(BOOK, [control("001", "1001"),
                                             data("245", [("a", "A minimal record.")], "0", "0")])]))
    write("films.xml", dc_collection(dc_records()))


if __name__ == "__main__":
    main()
