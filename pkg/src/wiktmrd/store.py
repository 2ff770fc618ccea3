"""The machine-readable dictionary store.

Logical schema: page, lang, pos, lang_pos, wiki_text, wiki_text_words,
meaning, relation_type, relation, translation, translation_entry, inflection,
plus one word-index table per language (index_native, index_XX). Backed by
SQLite; the durable contract is the logical schema and the TSV interchange
format, not the engine.

Writes happen through a single writer. save_word is atomic per page and
idempotent per title. Checkpoints commit in the same transaction as the data
they describe, so a killed process always restarts from a consistent point.
"""

from __future__ import annotations

import json
import os
import re
import sqlite3
from dataclasses import dataclass, field

from .registry import CODE_RE, RELATION_TYPE_NAMES

MAX_WIKI_TEXT_BYTES = 65535

TABLE_COLUMNS = {
    "page": ("id", "title", "record_id", "is_soft_redirect", "redirect_target"),
    "lang": ("id", "code"),
    "pos": ("id", "name"),
    "lang_pos": ("id", "page_id", "lang_id", "pos_id", "etymology_ordinal"),
    "wiki_text": ("id", "text"),
    "wiki_text_words": ("id", "wiki_text_id", "page_ref_title"),
    "meaning": ("id", "lang_pos_id", "ordinal", "wiki_text_id"),
    "relation_type": ("id", "name"),
    "relation": ("id", "meaning_id", "lang_pos_id", "relation_type_id", "wiki_text_id"),
    "translation": ("id", "lang_pos_id", "gloss_wiki_text_id"),
    "translation_entry": ("id", "translation_id", "lang_id", "wiki_text_id"),
    "inflection": ("id", "lang_pos_id", "form_kind", "lemma_title"),
}

_SCHEMA = """
CREATE TABLE IF NOT EXISTS meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS page(
    id INTEGER PRIMARY KEY, title TEXT UNIQUE NOT NULL, record_id INTEGER NOT NULL,
    is_soft_redirect INTEGER NOT NULL DEFAULT 0, redirect_target TEXT);
CREATE TABLE IF NOT EXISTS lang(id INTEGER PRIMARY KEY, code TEXT UNIQUE NOT NULL);
CREATE TABLE IF NOT EXISTS pos(id INTEGER PRIMARY KEY, name TEXT UNIQUE NOT NULL);
CREATE TABLE IF NOT EXISTS lang_pos(
    id INTEGER PRIMARY KEY, page_id INTEGER NOT NULL REFERENCES page(id),
    lang_id INTEGER NOT NULL REFERENCES lang(id),
    pos_id INTEGER NOT NULL REFERENCES pos(id),
    etymology_ordinal INTEGER NOT NULL,
    UNIQUE(page_id, lang_id, pos_id, etymology_ordinal));
CREATE TABLE IF NOT EXISTS wiki_text(id INTEGER PRIMARY KEY, text TEXT UNIQUE NOT NULL);
CREATE TABLE IF NOT EXISTS wiki_text_words(
    id INTEGER PRIMARY KEY, wiki_text_id INTEGER NOT NULL REFERENCES wiki_text(id),
    page_ref_title TEXT NOT NULL,
    UNIQUE(wiki_text_id, page_ref_title));
CREATE TABLE IF NOT EXISTS meaning(
    id INTEGER PRIMARY KEY, lang_pos_id INTEGER NOT NULL REFERENCES lang_pos(id),
    ordinal INTEGER NOT NULL, wiki_text_id INTEGER NOT NULL REFERENCES wiki_text(id));
CREATE TABLE IF NOT EXISTS relation_type(id INTEGER PRIMARY KEY, name TEXT UNIQUE NOT NULL);
CREATE TABLE IF NOT EXISTS relation(
    id INTEGER PRIMARY KEY, meaning_id INTEGER REFERENCES meaning(id),
    lang_pos_id INTEGER NOT NULL REFERENCES lang_pos(id),
    relation_type_id INTEGER NOT NULL REFERENCES relation_type(id),
    wiki_text_id INTEGER NOT NULL REFERENCES wiki_text(id));
CREATE TABLE IF NOT EXISTS translation(
    id INTEGER PRIMARY KEY, lang_pos_id INTEGER NOT NULL REFERENCES lang_pos(id),
    gloss_wiki_text_id INTEGER REFERENCES wiki_text(id));
CREATE TABLE IF NOT EXISTS translation_entry(
    id INTEGER PRIMARY KEY, translation_id INTEGER NOT NULL REFERENCES translation(id),
    lang_id INTEGER NOT NULL REFERENCES lang(id),
    wiki_text_id INTEGER NOT NULL REFERENCES wiki_text(id));
CREATE TABLE IF NOT EXISTS inflection(
    id INTEGER PRIMARY KEY, lang_pos_id INTEGER NOT NULL REFERENCES lang_pos(id),
    form_kind TEXT NOT NULL, lemma_title TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS checkpoint(
    id INTEGER PRIMARY KEY CHECK (id = 1), last_record_id INTEGER NOT NULL,
    dump_identity TEXT NOT NULL, counters TEXT NOT NULL);
CREATE INDEX IF NOT EXISTS idx_lang_pos_page ON lang_pos(page_id);
CREATE INDEX IF NOT EXISTS idx_meaning_lang_pos ON meaning(lang_pos_id);
CREATE INDEX IF NOT EXISTS idx_relation_lang_pos ON relation(lang_pos_id);
CREATE INDEX IF NOT EXISTS idx_translation_lang_pos ON translation(lang_pos_id);
CREATE INDEX IF NOT EXISTS idx_translation_entry_tr ON translation_entry(translation_id);
CREATE INDEX IF NOT EXISTS idx_wtw_text ON wiki_text_words(wiki_text_id);
CREATE INDEX IF NOT EXISTS idx_wtw_title ON wiki_text_words(page_ref_title);
CREATE INDEX IF NOT EXISTS idx_inflection_lang_pos ON inflection(lang_pos_id);
"""


class StoreError(Exception):
    pass


class StorageFull(StoreError):
    pass


class CorruptStore(StoreError):
    pass


class ChecksumMismatch(StoreError):
    """Checkpoint belongs to a different dump than the one being parsed."""


class MalformedRow(StoreError):
    def __init__(self, table, line_no, problem):
        super().__init__(f"{table}.tsv:{line_no}: {problem}")
        self.table = table
        self.line_no = line_no


@dataclass
class Checkpoint:
    last_record_id: int = 0
    dump_identity: str = ""
    counters: dict[str, int] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Parsed-page bundle: what one fully analyzed page hands to save_word.
# ---------------------------------------------------------------------------

@dataclass
class MeaningRow:
    ordinal: int
    wikitext: str
    ref_words: list[str] = field(default_factory=list)


@dataclass
class RelationRow:
    type_name: str
    target_word: str
    target_wikitext: str
    meaning_ordinal: int | None = None


@dataclass
class TranslationEntryRow:
    lang_code: str
    word: str
    wikitext: str


@dataclass
class TranslationRow:
    gloss_wikitext: str
    gloss_refs: list[str] = field(default_factory=list)
    entries: list[TranslationEntryRow] = field(default_factory=list)


@dataclass
class SoftRedirectRow:
    form_kind: str
    lemma_title: str


@dataclass
class LangPosBundle:
    lang_code: str
    pos_name: str
    etymology_ordinal: int
    meanings: list[MeaningRow] = field(default_factory=list)
    relations: list[RelationRow] = field(default_factory=list)
    translations: list[TranslationRow] = field(default_factory=list)
    soft_redirect: SoftRedirectRow | None = None


@dataclass
class WordBundle:
    title: str
    record_id: int
    lang_pos: list[LangPosBundle] = field(default_factory=list)


def _translate_error(exc: sqlite3.Error) -> StoreError:
    msg = str(exc).lower()
    if "full" in msg:
        return StorageFull(str(exc))
    return CorruptStore(str(exc))


class MrdStore:
    """Single-writer, multi-reader dictionary store."""

    def __init__(self, path, native_code: str | None = None, dialect: str | None = None):
        self.path = str(path)
        try:
            self._conn = sqlite3.connect(self.path, isolation_level=None)
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute("PRAGMA synchronous=NORMAL")
            self._conn.execute("PRAGMA foreign_keys=ON")
            self._conn.executescript(_SCHEMA)
        except sqlite3.Error as exc:
            raise _translate_error(exc) from exc
        self.counters: dict[str, int] = {}
        self._wiki_text_cache: dict[str, int] = {}
        self._init_fixed_rows()
        if native_code is not None:
            self._set_meta("native_code", native_code)
        if dialect is not None:
            self._set_meta("dialect", dialect)
        self._ensure_index_table("index_native")

    # -- lifecycle ----------------------------------------------------------

    def close(self):
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        if self._conn.in_transaction:
            self._conn.rollback()
        self.close()

    def _init_fixed_rows(self):
        cur = self._conn.execute("SELECT COUNT(*) FROM relation_type")
        if cur.fetchone()[0] == 0:
            self._conn.execute("BEGIN")
            self._conn.executemany(
                "INSERT INTO relation_type(id, name) VALUES (?, ?)",
                list(enumerate(RELATION_TYPE_NAMES, start=1)))
            self._conn.commit()

    def _set_meta(self, key, value):
        self._conn.execute(
            "INSERT INTO meta(key, value) VALUES (?, ?) "
            "ON CONFLICT(key) DO UPDATE SET value=excluded.value", (key, str(value)))

    def get_meta(self, key, default=None):
        row = self._conn.execute("SELECT value FROM meta WHERE key=?", (key,)).fetchone()
        return row[0] if row else default

    @property
    def native_code(self) -> str:
        return self.get_meta("native_code", "en")

    # -- transactions ---------------------------------------------------------

    def begin(self):
        if not self._conn.in_transaction:
            self._conn.execute("BEGIN")

    def commit(self):
        try:
            if self._conn.in_transaction:
                self._conn.commit()
        except sqlite3.Error as exc:
            raise _translate_error(exc) from exc

    def rollback(self):
        if self._conn.in_transaction:
            self._conn.rollback()
        self._wiki_text_cache.clear()

    # -- shared row helpers ---------------------------------------------------

    def _lang_id(self, code: str) -> int:
        if not CODE_RE.match(code):
            raise CorruptStore(f"invalid language code for storage: {code!r}")
        return self._intern("lang", "code", code)

    def _pos_id(self, name: str) -> int:
        return self._intern("pos", "name", name)

    def _intern(self, table, column, value) -> int:
        row = self._conn.execute(
            f"SELECT id FROM {table} WHERE {column}=?", (value,)).fetchone()
        if row:
            return row[0]
        cur = self._conn.execute(
            f"INSERT INTO {table}({column}) VALUES (?)", (value,))
        return cur.lastrowid

    def _truncate(self, text: str) -> str:
        data = text.encode("utf-8", "surrogatepass")
        if len(data) <= MAX_WIKI_TEXT_BYTES:
            return text
        cut = MAX_WIKI_TEXT_BYTES
        while cut > 0 and (data[cut] & 0xC0) == 0x80:
            cut -= 1
        self.counters["wiki_text_truncated"] = self.counters.get("wiki_text_truncated", 0) + 1
        return data[:cut].decode("utf-8", "surrogatepass")

    def _wiki_text_id(self, text: str, ref_words=()) -> int:
        text = self._truncate(text)
        wid = self._wiki_text_cache.get(text)
        if wid is None:
            row = self._conn.execute(
                "SELECT id FROM wiki_text WHERE text=?", (text,)).fetchone()
            if row:
                wid = row[0]
            else:
                wid = self._conn.execute(
                    "INSERT INTO wiki_text(text) VALUES (?)", (text,)).lastrowid
            if len(self._wiki_text_cache) < 200_000:
                self._wiki_text_cache[text] = wid
        for word in ref_words:
            if word:
                self._conn.execute(
                    "INSERT OR IGNORE INTO wiki_text_words(wiki_text_id, page_ref_title) "
                    "VALUES (?, ?)", (wid, word))
        return wid

    # -- saving ---------------------------------------------------------------

    def save_word(self, bundle: WordBundle) -> int:
        """Write one parsed page atomically; re-saving a title replaces it."""
        own_txn = not self._conn.in_transaction
        try:
            if own_txn:
                self._conn.execute("BEGIN")
            page_id = self._save_word_rows(bundle)
            if own_txn:
                self._conn.commit()
            return page_id
        except sqlite3.Error as exc:
            if self._conn.in_transaction:
                self._conn.rollback()
            self._wiki_text_cache.clear()
            raise _translate_error(exc) from exc
        except Exception:
            if own_txn and self._conn.in_transaction:
                self._conn.rollback()
                self._wiki_text_cache.clear()
            raise

    def _save_word_rows(self, bundle: WordBundle) -> int:
        conn = self._conn
        existing = conn.execute(
            "SELECT id FROM page WHERE title=?", (bundle.title,)).fetchone()
        if existing:
            self._delete_page_rows(existing[0])
        soft = next((lp.soft_redirect for lp in bundle.lang_pos
                     if lp.soft_redirect is not None), None)
        page_id = conn.execute(
            "INSERT INTO page(title, record_id, is_soft_redirect, redirect_target) "
            "VALUES (?, ?, ?, ?)",
            (bundle.title, bundle.record_id, 1 if soft else 0,
             soft.lemma_title if soft else None)).lastrowid

        for lp in bundle.lang_pos:
            lang_pos_id = conn.execute(
                "INSERT INTO lang_pos(page_id, lang_id, pos_id, etymology_ordinal) "
                "VALUES (?, ?, ?, ?)",
                (page_id, self._lang_id(lp.lang_code), self._pos_id(lp.pos_name),
                 lp.etymology_ordinal)).lastrowid

            meaning_ids: dict[int, int] = {}
            for m in lp.meanings:
                wid = self._wiki_text_id(m.wikitext, m.ref_words)
                meaning_ids[m.ordinal] = conn.execute(
                    "INSERT INTO meaning(lang_pos_id, ordinal, wiki_text_id) "
                    "VALUES (?, ?, ?)", (lang_pos_id, m.ordinal, wid)).lastrowid

            type_ids = {name: i for i, name in enumerate(RELATION_TYPE_NAMES, start=1)}
            for r in lp.relations:
                wid = self._wiki_text_id(r.target_wikitext, [r.target_word])
                conn.execute(
                    "INSERT INTO relation(meaning_id, lang_pos_id, relation_type_id, "
                    "wiki_text_id) VALUES (?, ?, ?, ?)",
                    (meaning_ids.get(r.meaning_ordinal), lang_pos_id,
                     type_ids[r.type_name], wid))

            for tr in lp.translations:
                gloss_id = (self._wiki_text_id(tr.gloss_wikitext, tr.gloss_refs)
                            if tr.gloss_wikitext else None)
                translation_id = conn.execute(
                    "INSERT INTO translation(lang_pos_id, gloss_wiki_text_id) "
                    "VALUES (?, ?)", (lang_pos_id, gloss_id)).lastrowid
                for te in tr.entries:
                    wid = self._wiki_text_id(te.wikitext, [te.word])
                    conn.execute(
                        "INSERT INTO translation_entry(translation_id, lang_id, "
                        "wiki_text_id) VALUES (?, ?, ?)",
                        (translation_id, self._lang_id(te.lang_code), wid))

            if lp.soft_redirect is not None:
                conn.execute(
                    "INSERT INTO inflection(lang_pos_id, form_kind, lemma_title) "
                    "VALUES (?, ?, ?)",
                    (lang_pos_id, lp.soft_redirect.form_kind, lp.soft_redirect.lemma_title))
        return page_id

    def _delete_page_rows(self, page_id: int):
        conn = self._conn
        lang_pos_ids = [r[0] for r in conn.execute(
            "SELECT id FROM lang_pos WHERE page_id=?", (page_id,))]
        if lang_pos_ids:
            marks = ",".join("?" * len(lang_pos_ids))
            conn.execute(
                f"DELETE FROM translation_entry WHERE translation_id IN "
                f"(SELECT id FROM translation WHERE lang_pos_id IN ({marks}))", lang_pos_ids)
            conn.execute(f"DELETE FROM translation WHERE lang_pos_id IN ({marks})", lang_pos_ids)
            conn.execute(f"DELETE FROM relation WHERE lang_pos_id IN ({marks})", lang_pos_ids)
            conn.execute(f"DELETE FROM meaning WHERE lang_pos_id IN ({marks})", lang_pos_ids)
            conn.execute(f"DELETE FROM inflection WHERE lang_pos_id IN ({marks})", lang_pos_ids)
            for table in self.index_tables():
                conn.execute(f'DELETE FROM "{table}" WHERE lang_pos_id IN ({marks})',
                             lang_pos_ids)
            conn.execute(f"DELETE FROM lang_pos WHERE id IN ({marks})", lang_pos_ids)
        conn.execute("DELETE FROM page WHERE id=?", (page_id,))

    # -- index tables -----------------------------------------------------------

    def index_tables(self) -> list[str]:
        rows = self._conn.execute(
            "SELECT name FROM sqlite_master WHERE type='table' AND name LIKE 'index_%' "
            "ORDER BY name").fetchall()
        return [r[0] for r in rows]

    def _ensure_index_table(self, table: str):
        self._conn.execute(
            f'CREATE TABLE IF NOT EXISTS "{table}"('
            f"word TEXT NOT NULL, lang_pos_id INTEGER NOT NULL REFERENCES lang_pos(id))")
        self._conn.execute(
            f'CREATE INDEX IF NOT EXISTS "idx_{table}_word" ON "{table}"(word)')

    def build_index_tables(self) -> dict[str, int]:
        """(Re)build index_native and one index_XX per foreign entry language."""
        own_txn = not self._conn.in_transaction
        try:
            if own_txn:
                self._conn.execute("BEGIN")
            for table in self.index_tables():
                if table != "index_native":
                    self._conn.execute(f'DROP TABLE "{table}"')
            self._conn.execute("DELETE FROM index_native")
            native = self.native_code
            counts: dict[str, int] = {}
            self._conn.execute(
                "INSERT INTO index_native(word, lang_pos_id) "
                "SELECT p.title, lp.id FROM lang_pos lp "
                "JOIN page p ON p.id = lp.page_id "
                "JOIN lang l ON l.id = lp.lang_id WHERE l.code=? ORDER BY lp.id",
                (native,))
            counts["index_native"] = self._conn.execute(
                "SELECT COUNT(*) FROM index_native").fetchone()[0]
            foreign = self._conn.execute(
                "SELECT DISTINCT l.code FROM lang_pos lp JOIN lang l ON l.id=lp.lang_id "
                "WHERE l.code != ? ORDER BY l.code", (native,)).fetchall()
            for (code,) in foreign:
                table = f"index_{code}"
                self._ensure_index_table(table)
                self._conn.execute(
                    f'INSERT INTO "{table}"(word, lang_pos_id) '
                    "SELECT p.title, lp.id FROM lang_pos lp "
                    "JOIN page p ON p.id = lp.page_id "
                    "JOIN lang l ON l.id = lp.lang_id WHERE l.code=? ORDER BY lp.id",
                    (code,))
                counts[table] = self._conn.execute(
                    f'SELECT COUNT(*) FROM "{table}"').fetchone()[0]
            if own_txn:
                self._conn.commit()
            return counts
        except sqlite3.Error as exc:
            self.rollback()
            raise _translate_error(exc) from exc

    def prefix_search(self, prefix: str, lang_code: str | None = None) -> list[str]:
        """Words starting with `prefix` in one language's index (None = native)."""
        table = "index_native" if lang_code is None else f"index_{lang_code}"
        if table not in self.index_tables():
            return []
        escaped = prefix.replace("\\", "\\\\").replace("%", r"\%").replace("_", r"\_")
        rows = self._conn.execute(
            f'SELECT DISTINCT word FROM "{table}" WHERE word LIKE ? ESCAPE \'\\\' '
            "ORDER BY word", (escaped + "%",)).fetchall()
        return [r[0] for r in rows]

    # -- statistics hooks ---------------------------------------------------------

    def table_sizes(self) -> dict[str, int]:
        """Row counts for every logical table including index tables."""
        try:
            sizes = {}
            for table in TABLE_COLUMNS:
                sizes[table] = self._conn.execute(
                    f"SELECT COUNT(*) FROM {table}").fetchone()[0]
            for table in self.index_tables():
                sizes[table] = self._conn.execute(
                    f'SELECT COUNT(*) FROM "{table}"').fetchone()[0]
            return sizes
        except sqlite3.Error as exc:
            raise _translate_error(exc) from exc

    def query(self, sql, params=()):
        return self._conn.execute(sql, params).fetchall()

    # -- lookup (the wiwordik-style read side) ------------------------------------

    def lookup_word(self, title: str, lang_code: str | None = None) -> list[dict]:
        """Everything stored for one page title, one dict per lang_pos."""
        sql = ("SELECT lp.id, l.code, po.name, lp.etymology_ordinal "
               "FROM lang_pos lp JOIN page p ON p.id=lp.page_id "
               "JOIN lang l ON l.id=lp.lang_id JOIN pos po ON po.id=lp.pos_id "
               "WHERE p.title=?")
        params = [title]
        if lang_code is not None:
            sql += " AND l.code=?"
            params.append(lang_code)
        out = []
        for lang_pos_id, code, pos_name, etym in self.query(sql + " ORDER BY lp.id", params):
            meanings = self.query(
                "SELECT m.ordinal, w.text FROM meaning m "
                "JOIN wiki_text w ON w.id=m.wiki_text_id "
                "WHERE m.lang_pos_id=? ORDER BY m.ordinal", (lang_pos_id,))
            inflections = self.query(
                "SELECT form_kind, lemma_title FROM inflection "
                "WHERE lang_pos_id=? ORDER BY id", (lang_pos_id,))
            rels = self.query(
                "SELECT rt.name, w.text, m.ordinal FROM relation r "
                "JOIN relation_type rt ON rt.id=r.relation_type_id "
                "JOIN wiki_text w ON w.id=r.wiki_text_id "
                "LEFT JOIN meaning m ON m.id=r.meaning_id "
                "WHERE r.lang_pos_id=? ORDER BY r.id", (lang_pos_id,))
            translations = []
            for tr_id, gloss in self.query(
                    "SELECT t.id, w.text FROM translation t "
                    "LEFT JOIN wiki_text w ON w.id=t.gloss_wiki_text_id "
                    "WHERE t.lang_pos_id=? ORDER BY t.id", (lang_pos_id,)):
                entries = self.query(
                    "SELECT l.code, COALESCE(MIN(ww.page_ref_title), w.text) "
                    "FROM translation_entry e "
                    "JOIN lang l ON l.id=e.lang_id "
                    "JOIN wiki_text w ON w.id=e.wiki_text_id "
                    "LEFT JOIN wiki_text_words ww ON ww.wiki_text_id=w.id "
                    "WHERE e.translation_id=? GROUP BY e.id ORDER BY e.id", (tr_id,))
                translations.append({"gloss": gloss or "", "entries": entries})
            out.append({
                "lang_code": code, "pos": pos_name, "etymology_ordinal": etym,
                "meanings": meanings, "relations": rels, "translations": translations,
                "inflections": inflections,
            })
        return out

    def reverse_lookup(self, word: str) -> list[tuple[str, str]]:
        """(page title, translation language code) pairs whose translation
        entries reference `word`."""
        return self.query(
            "SELECT DISTINCT p.title, l.code FROM translation_entry e "
            "JOIN wiki_text_words w ON w.wiki_text_id = e.wiki_text_id "
            "JOIN lang l ON l.id = e.lang_id "
            "JOIN translation t ON t.id = e.translation_id "
            "JOIN lang_pos lp ON lp.id = t.lang_pos_id "
            "JOIN page p ON p.id = lp.page_id "
            "WHERE w.page_ref_title = ? ORDER BY p.title", (word,))

    # -- checkpoints ------------------------------------------------------------

    def save_checkpoint(self, cp: Checkpoint):
        own_txn = not self._conn.in_transaction
        if own_txn:
            self._conn.execute("BEGIN")
        self._conn.execute(
            "INSERT INTO checkpoint(id, last_record_id, dump_identity, counters) "
            "VALUES (1, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET "
            "last_record_id=excluded.last_record_id, "
            "dump_identity=excluded.dump_identity, counters=excluded.counters",
            (cp.last_record_id, cp.dump_identity, json.dumps(cp.counters, sort_keys=True)))
        if own_txn:
            self._conn.commit()

    def load_checkpoint(self) -> Checkpoint:
        row = self._conn.execute(
            "SELECT last_record_id, dump_identity, counters FROM checkpoint WHERE id=1"
        ).fetchone()
        if row is None:
            return Checkpoint()
        return Checkpoint(last_record_id=row[0], dump_identity=row[1],
                          counters=json.loads(row[2]))

    # -- TSV interchange -----------------------------------------------------------

    def check_referential_integrity(self):
        violations = self._conn.execute("PRAGMA foreign_key_check").fetchall()
        if violations:
            table, rowid, parent, _ = violations[0]
            raise CorruptStore(
                f"foreign key violation in {table} (rowid {rowid}) -> {parent}; "
                f"{len(violations)} total")

    def export_tsv(self, directory):
        """One sorted TSV per logical table; values escape tab/newline/backslash."""
        self.check_referential_integrity()
        os.makedirs(directory, exist_ok=True)
        for table, columns in TABLE_COLUMNS.items():
            rows = self._conn.execute(
                f"SELECT {', '.join(columns)} FROM {table} ORDER BY id").fetchall()
            _write_tsv(os.path.join(directory, f"{table}.tsv"), columns, rows)
        for table in self.index_tables():
            rows = self._conn.execute(
                f'SELECT word, lang_pos_id FROM "{table}" '
                "ORDER BY word, lang_pos_id").fetchall()
            _write_tsv(os.path.join(directory, f"{table}.tsv"),
                       ("word", "lang_pos_id"), rows)

    def import_tsv(self, directory):
        """Replace store content with a TSV export; ids are preserved."""
        try:
            self._conn.execute("BEGIN")
            self._conn.execute("PRAGMA defer_foreign_keys=ON")
            for table in self.index_tables():
                self._conn.execute(f'DROP TABLE "{table}"')
            for table in reversed(list(TABLE_COLUMNS)):
                self._conn.execute(f"DELETE FROM {table}")
            self._wiki_text_cache.clear()
            for table, columns in TABLE_COLUMNS.items():
                path = os.path.join(directory, f"{table}.tsv")
                if os.path.exists(path):
                    self._import_table(path, table, columns)
            for name in sorted(os.listdir(directory)):
                if name.startswith("index_") and name.endswith(".tsv"):
                    table = name[:-4]
                    if not re.fullmatch(r"index_(native|[a-z0-9][a-z0-9-]{1,10})", table):
                        raise MalformedRow(table, 0, "bad index table name")
                    self._ensure_index_table(table)
                    self._import_table(os.path.join(directory, name), table,
                                       ("word", "lang_pos_id"))
            self._conn.commit()
            self.check_referential_integrity()
        except sqlite3.Error as exc:
            self.rollback()
            raise _translate_error(exc) from exc
        except Exception:
            self.rollback()
            raise

    def _import_table(self, path, table, columns):
        with open(path, encoding="utf-8", newline="\n") as f:
            header = f.readline().rstrip("\n")
            if header.split("\t") != list(columns):
                raise MalformedRow(table, 1, f"unexpected header {header!r}")
            ph = ",".join("?" * len(columns))
            quoted = f'"{table}"' if table.startswith("index_") else table
            for line_no, line in enumerate(f, start=2):
                line = line.rstrip("\n")
                fields = line.split("\t")
                if len(fields) != len(columns):
                    raise MalformedRow(table, line_no,
                                       f"expected {len(columns)} fields, got {len(fields)}")
                values = [_tsv_unescape(v) for v in fields]
                self._conn.execute(
                    f"INSERT INTO {quoted}({', '.join(columns)}) VALUES ({ph})", values)


def _tsv_escape(value) -> str:
    if value is None:
        return "\\N"  # unambiguous: a literal backslash always doubles
    s = str(value)
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _tsv_unescape(fieldtext: str):
    if fieldtext == "\\N":
        return None
    out = []
    i = 0
    while i < len(fieldtext):
        c = fieldtext[i]
        if c == "\\" and i + 1 < len(fieldtext):
            nxt = fieldtext[i + 1]
            if nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            elif nxt == "\\":
                out.append("\\")
            else:
                out.append(nxt)
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _write_tsv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\t".join(columns) + "\n")
        for row in rows:
            f.write("\t".join(_tsv_escape(v) for v in row) + "\n")
