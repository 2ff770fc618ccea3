"""Store behavior: atomic idempotent saves, sizes, indexes, checkpoints, TSV."""

import os
import sqlite3

import pytest

from wiktmrd.store import (
    Checkpoint,
    CorruptStore,
    LangPosBundle,
    MalformedRow,
    MeaningRow,
    MrdStore,
    RelationRow,
    SoftRedirectRow,
    TranslationEntryRow,
    TranslationRow,
    WordBundle,
    MAX_WIKI_TEXT_BYTES,
)


def simple_bundle(title="toe", record_id=0, relations=7):
    types = ["synonym", "antonym", "hyponym", "holonym", "meronym",
             "coordinate_term", "synonym", "hypernym", "troponym"]
    return WordBundle(title=title, record_id=record_id, lang_pos=[
        LangPosBundle(
            lang_code="en", pos_name="noun", etymology_ordinal=0,
            meanings=[MeaningRow(ordinal=1, wikitext="A [[thing]].", ref_words=["thing"])],
            relations=[
                RelationRow(type_name=types[i % len(types)], target_word=f"w{i}",
                            target_wikitext=f"[[w{i}]]", meaning_ordinal=1)
                for i in range(relations)
            ],
            translations=[TranslationRow(
                gloss_wikitext="a thing", entries=[
                    TranslationEntryRow(lang_code="fi", word="juttu",
                                        wikitext="{{t|fi|juttu}}")])],
        )
    ])


@pytest.fixture
def store(tmp_path):
    with MrdStore(tmp_path / "mrd.db", native_code="en", dialect="en") as s:
        yield s


def test_fresh_store_sizes(store):
    sizes = store.table_sizes()
    assert sizes["relation_type"] == 9
    assert sizes["index_native"] == 0
    for name, count in sizes.items():
        if name != "relation_type":
            assert count == 0, name


def test_save_word_relation_rows(store):
    store.save_word(simple_bundle())
    assert store.table_sizes()["relation"] == 7


def test_save_empty_bundle_page_row_only(store):
    store.save_word(WordBundle(title="ghost", record_id=3))
    sizes = store.table_sizes()
    assert sizes["page"] == 1
    assert sizes["lang_pos"] == 0


def test_resave_is_idempotent(store):
    store.save_word(simple_bundle())
    before = store.table_sizes()
    store.save_word(simple_bundle())
    assert store.table_sizes() == before


def test_meaning_counts_multiply(store):
    for n in range(10):
        bundle = WordBundle(title=f"w{n}", record_id=n, lang_pos=[
            LangPosBundle(lang_code="en", pos_name="noun", etymology_ordinal=0,
                          meanings=[MeaningRow(ordinal=k + 1, wikitext=f"def {n}.{k}")
                                    for k in range(3)])])
        store.save_word(bundle)
    assert store.table_sizes()["meaning"] == 30


def test_wiki_text_deduplicated(store):
    store.save_word(simple_bundle(title="a"))
    one = store.table_sizes()["wiki_text"]
    store.save_word(simple_bundle(title="b"))
    assert store.table_sizes()["wiki_text"] == one  # identical texts share rows


def test_soft_redirect_stored(store):
    bundle = WordBundle(title="dogs", record_id=1, lang_pos=[
        LangPosBundle(lang_code="en", pos_name="noun", etymology_ordinal=0,
                      meanings=[MeaningRow(ordinal=1, wikitext="{{plural of|dog}}")],
                      soft_redirect=SoftRedirectRow(form_kind="plural of",
                                                    lemma_title="dog"))])
    store.save_word(bundle)
    rows = store.query("SELECT is_soft_redirect, redirect_target FROM page WHERE title='dogs'")
    assert rows == [(1, "dog")]
    assert store.table_sizes()["inflection"] == 1


def test_long_wiki_text_truncated(store):
    bundle = WordBundle(title="long", record_id=0, lang_pos=[
        LangPosBundle(lang_code="en", pos_name="noun", etymology_ordinal=0,
                      meanings=[MeaningRow(ordinal=1, wikitext="щ" * 70000)])])
    store.save_word(bundle)
    (stored,) = store.query("SELECT text FROM wiki_text")[0]
    assert len(stored.encode("utf-8")) <= MAX_WIKI_TEXT_BYTES
    assert stored and set(stored) == {"щ"}
    assert store.counters["wiki_text_truncated"] == 1


def test_uncommitted_save_invisible_to_readers(tmp_path):
    path = tmp_path / "mrd.db"
    writer = MrdStore(path, native_code="en", dialect="en")
    writer.begin()
    writer.save_word(simple_bundle())
    reader = sqlite3.connect(str(path))
    assert reader.execute("SELECT COUNT(*) FROM page").fetchone()[0] == 0
    writer.commit()
    assert reader.execute("SELECT COUNT(*) FROM page").fetchone()[0] == 1
    reader.close()
    writer.close()


def test_rollback_drops_partial_page(tmp_path):
    path = tmp_path / "mrd.db"
    writer = MrdStore(path, native_code="en", dialect="en")
    writer.begin()
    writer.save_word(simple_bundle())
    writer.rollback()
    assert writer.table_sizes()["page"] == 0
    # the writer stays usable and ids restart identically
    writer.save_word(simple_bundle())
    assert writer.table_sizes()["page"] == 1
    writer.close()


# -- index tables ---------------------------------------------------------------

def test_index_tables_native_only(store):
    store.save_word(simple_bundle(title="alpha"))
    store.save_word(simple_bundle(title="beta"))
    counts = store.build_index_tables()
    assert counts == {"index_native": 2}
    assert store.prefix_search("al") == ["alpha"]


def test_index_tables_ignore_translation_languages(store):
    # fi appears only as a translation target: no index_fi
    store.save_word(simple_bundle())
    counts = store.build_index_tables()
    assert "index_fi" not in counts
    assert store.query("SELECT COUNT(*) FROM lang WHERE code='fi'")[0][0] == 1


def test_index_tables_match_group_by_oracle(store):
    langs = ["en", "fi", "sq", "en", "fi", "en"]
    for i, code in enumerate(langs):
        store.save_word(WordBundle(title=f"w{i}", record_id=i, lang_pos=[
            LangPosBundle(lang_code=code, pos_name="noun", etymology_ordinal=0)]))
    counts = store.build_index_tables()
    oracle = {}
    for code in langs:
        key = "index_native" if code == "en" else f"index_{code}"
        oracle[key] = oracle.get(key, 0) + 1
    assert counts == oracle
    sizes = store.table_sizes()
    for key, n in oracle.items():
        assert sizes[key] == n


# -- checkpoints -------------------------------------------------------------------

def test_checkpoint_round_trip(store):
    cp = Checkpoint(last_record_id=42, dump_identity="abc123", counters={"x": 2})
    store.save_checkpoint(cp)
    assert store.load_checkpoint() == cp


def test_fresh_checkpoint_is_zero(store):
    cp = store.load_checkpoint()
    assert cp.last_record_id == 0
    assert cp.dump_identity == ""


# -- TSV interchange ------------------------------------------------------------------

def test_export_import_round_trip(store, tmp_path):
    store.save_word(simple_bundle(title="toe"))
    store.save_word(simple_bundle(title="paw", record_id=1))
    store.build_index_tables()
    out1 = tmp_path / "export1"
    store.export_tsv(out1)

    with MrdStore(tmp_path / "other.db", native_code="en", dialect="en") as other:
        other.import_tsv(out1)
        assert other.table_sizes() == store.table_sizes()
        out2 = tmp_path / "export2"
        other.export_tsv(out2)

    for name in sorted(os.listdir(out1)):
        a = (out1 / name).read_bytes()
        b = (out2 / name).read_bytes()
        assert a == b, f"{name} differs after round trip"


def test_export_empty_store_headers_only(store, tmp_path):
    out = tmp_path / "export"
    store.export_tsv(out)
    page_lines = (out / "page.tsv").read_text("utf-8").splitlines()
    assert page_lines == ["id\ttitle\trecord_id\tis_soft_redirect\tredirect_target"]
    rt_lines = (out / "relation_type.tsv").read_text("utf-8").splitlines()
    assert len(rt_lines) == 10


def test_import_handwritten_relation_rows(tmp_path):
    # a minimal consistent export written by hand, with two relation rows
    out = tmp_path / "hand"
    os.makedirs(out)
    tables = {
        "page": ["1\twarm\t0\t0\t\\N"],
        "lang": ["1\ten"],
        "pos": ["1\tnoun"],
        "lang_pos": ["1\t1\t1\t1\t0"],
        "wiki_text": ["1\t[[cold]]", "2\t[[hot]]"],
        "wiki_text_words": ["1\t1\tcold", "2\t2\thot"],
        "meaning": [],
        "relation_type": [f"{i}\t{n}" for i, n in enumerate(
            ["synonym", "antonym", "hypernym", "hyponym", "holonym", "meronym",
             "troponym", "coordinate_term", "see_also"], start=1)],
        "relation": ["1\t\\N\t1\t2\t1", "2\t\\N\t1\t1\t2"],
        "translation": [],
        "translation_entry": [],
        "inflection": [],
    }
    from wiktmrd.store import TABLE_COLUMNS
    for table, rows in tables.items():
        header = "\t".join(TABLE_COLUMNS[table])
        (out / f"{table}.tsv").write_text(
            "\n".join([header, *rows]) + "\n", encoding="utf-8")
    with MrdStore(tmp_path / "other.db", native_code="en", dialect="en") as other:
        other.import_tsv(out)
        assert other.table_sizes()["relation"] == 2
        assert other.lookup_word("warm")[0]["relations"] == [
            ("antonym", "[[cold]]", None), ("synonym", "[[hot]]", None)]


def test_import_rejects_bad_arity(store, tmp_path):
    out = tmp_path / "export"
    store.export_tsv(out)
    path = out / "relation.tsv"
    path.write_text(path.read_text("utf-8") + "1\t2\n", encoding="utf-8")
    with MrdStore(store.path + ".other", native_code="en", dialect="en") as other:
        with pytest.raises(MalformedRow) as exc:
            other.import_tsv(out)
        assert exc.value.table == "relation"


def test_escaping_round_trips_nasty_titles(store, tmp_path):
    nasty = "tab\there\nand\\slash"
    store.save_word(WordBundle(title=nasty, record_id=0, lang_pos=[
        LangPosBundle(lang_code="en", pos_name="noun", etymology_ordinal=0,
                      meanings=[MeaningRow(ordinal=1, wikitext=nasty)])]))
    out = tmp_path / "export"
    store.export_tsv(out)
    for line in (out / "page.tsv").read_text("utf-8").splitlines()[1:]:
        assert "\t".join(line.split("\t")[:0]) == ""  # lines stay one-per-row
    with MrdStore(tmp_path / "other.db", native_code="en", dialect="en") as other:
        other.import_tsv(out)
        assert other.query("SELECT title FROM page") == [(nasty,)]


def test_referential_integrity_enforced_on_export(store, tmp_path):
    store.save_word(simple_bundle())
    store._conn.execute("PRAGMA foreign_keys=OFF")
    store._conn.execute("INSERT INTO relation(meaning_id, lang_pos_id, relation_type_id, "
                        "wiki_text_id) VALUES (999, 999, 1, 1)")
    store._conn.execute("PRAGMA foreign_keys=ON")
    with pytest.raises(CorruptStore):
        store.export_tsv(tmp_path / "export")
