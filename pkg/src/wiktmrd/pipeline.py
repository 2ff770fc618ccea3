"""Dump ingestion and the extract / analyze / save pipeline.

A run streams pages out of a (possibly compressed) MediaWiki pages-articles
XML export, analyzes each page into a WordBundle, and commits bundles to the
store in record order. Checkpoints are written inside the same transaction
as the data, every `checkpoint_interval` pages, so a killed run resumes from
the last checkpoint and produces output identical to an uninterrupted run.
Pages may be analyzed in parallel worker processes; commits stay ordered.
"""

from __future__ import annotations

import bz2
import gzip
import hashlib
import multiprocessing
import os
import sys
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from . import entry, relations, translations
from . import wikitext as wt
from .registry import Registry, builtin_registry, load_registry
from .store import (
    Checkpoint,
    ChecksumMismatch,
    LangPosBundle,
    MeaningRow,
    MrdStore,
    RelationRow,
    SoftRedirectRow,
    TranslationEntryRow,
    TranslationRow,
    WordBundle,
)

# test seam: abort the process abruptly (no cleanup, like kill -9) after this
# many pages have been saved; exercises crash recovery end to end
_CRASH_ENV = "WIKTMRD_CRASH_AFTER_PAGES"


class MalformedDump(Exception):
    def __init__(self, byte_offset: int, detail: str):
        super().__init__(f"malformed dump at byte offset {byte_offset}: {detail}")
        self.byte_offset = byte_offset


@dataclass
class ParseConfig:
    dialect: str
    dump_path: str
    store_path: str
    start_record: int | None = None  # None: resume from a matching checkpoint
    registry_path: str | None = None
    worker_count: int = 1
    checkpoint_interval: int = 1000


@dataclass
class ParseReport:
    pages_seen: int = 0
    pages_parsed: int = 0
    pages_skipped_redirect: int = 0
    pages_skipped_namespace: int = 0
    pages_failed: int = 0
    sections_skipped_unknown_language: int = 0
    translation_lines_skipped: int = 0
    elapsed: float = 0.0
    pages_per_second: float = 0.0

    def accounted(self) -> bool:
        return self.pages_seen == (self.pages_parsed + self.pages_skipped_redirect
                                   + self.pages_skipped_namespace + self.pages_failed)


# ---------------------------------------------------------------------------
# Dump reading
# ---------------------------------------------------------------------------

class _CountingReader:
    def __init__(self, raw):
        self._raw = raw
        self.bytes_read = 0

    def read(self, size=-1):
        data = self._raw.read(size)
        self.bytes_read += len(data)
        return data

    def close(self):
        self._raw.close()


def open_dump(path):
    """Open plain, gzip or bzip2 XML by magic bytes."""
    with open(path, "rb") as probe:
        magic = probe.read(3)
    if magic.startswith(b"BZh"):
        return bz2.open(path, "rb")
    if magic.startswith(b"\x1f\x8b"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def dump_identity(path) -> str:
    """Fingerprint of the dump: hash of the first 64 KiB of XML."""
    f = open_dump(path)
    try:
        head = f.read(65536)
    finally:
        f.close()
    return hashlib.sha256(head).hexdigest()


def _localname(tag) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _child(elem, name):
    for c in elem:
        if _localname(c.tag) == name:
            return c
    return None


def iterate_dump(dump_path):
    """Yield main-namespace pages in file order, record_id counted from 0.

    Truncated or invalid XML raises MalformedDump with the byte offset;
    pages completed before the damage are still yielded first.
    """
    stream = _CountingReader(open_dump(dump_path))
    record_id = 0
    parser = ET.XMLPullParser(events=("start", "end"))
    root = None

    def drain():
        nonlocal record_id, root
        for event, elem in parser.read_events():
            if event == "start":
                if root is None:
                    root = elem
                continue
            if _localname(elem.tag) != "page":
                continue
            page = _page_from_element(elem, record_id)
            elem.clear()
            if root is not None:
                root.clear()
            if page is not None:
                record_id += 1
                yield page

    try:
        while True:
            chunk = stream.read(65536)
            error = None
            try:
                if chunk:
                    parser.feed(chunk)
                else:
                    parser.close()
            except ET.ParseError as exc:
                error = exc
            yield from drain()  # pages completed before any damage
            if error is not None:
                raise MalformedDump(stream.bytes_read, str(error)) from error
            if not chunk:
                break
    finally:
        stream.close()


def _page_from_element(elem, record_id):
    ns = _child(elem, "ns")
    if ns is not None and (ns.text or "").strip() not in ("", "0"):
        return None
    title_el = _child(elem, "title")
    title = (title_el.text or "") if title_el is not None else ""
    if not title:
        return None
    revision = _child(elem, "revision")
    text_el = _child(revision, "text") if revision is not None else None
    text = (text_el.text or "") if text_el is not None else ""
    is_redirect = _child(elem, "redirect") is not None
    return entry.Page(title=title, raw_text=text,
                      is_redirect=is_redirect, record_id=record_id)


# ---------------------------------------------------------------------------
# Analysis (pure, parallelizable)
# ---------------------------------------------------------------------------

@dataclass
class AnalyzedPage:
    record_id: int
    title: str
    kind: str  # "parsed" | "redirect" | "namespace" | "failed"
    bundle: WordBundle | None = None
    skipped_sections: int = 0
    skipped_lines: int = 0
    error: str = ""


def analyze_page(page: entry.Page, dialect_cfg, registry: Registry) -> AnalyzedPage:
    if page.is_redirect:
        return AnalyzedPage(page.record_id, page.title, "redirect")
    if ":" in page.title:
        return AnalyzedPage(page.record_id, page.title, "namespace")
    try:
        sections, skipped = entry.split_language_sections(page, dialect_cfg, registry)
        bundle = WordBundle(title=page.title, record_id=page.record_id)
        skipped_lines = 0
        seen_ordinals: dict[tuple[str, str], set[int]] = {}
        for sec in sections:
            for ps in entry.split_pos_sections(sec, dialect_cfg, registry):
                meanings = entry.extract_definitions(ps, dialect_cfg, registry)
                soft = entry.classify_soft_redirect(page, ps, meanings, registry)
                records = relations.extract_relations(ps, meanings, dialect_cfg, registry)
                if dialect_cfg.dialect == "en":
                    boxes, sk = translations.extract_translations_en(ps, registry)
                else:
                    boxes, sk = translations.extract_translations_ru(ps, registry)
                skipped_lines += len(sk)
                # duplicated headings act like extra homonym blocks; keep
                # (lang, pos, etymology) unique within the page
                key = (ps.language.code, ps.pos.canonical_name)
                taken = seen_ordinals.setdefault(key, set())
                ordinal = ps.etymology_ordinal
                if ordinal in taken:
                    ordinal = max(taken) + 1
                taken.add(ordinal)
                lp = LangPosBundle(
                    lang_code=ps.language.code,
                    pos_name=ps.pos.canonical_name,
                    etymology_ordinal=ordinal,
                    soft_redirect=(SoftRedirectRow(form_kind=soft.form_kind,
                                                   lemma_title=soft.lemma_title)
                                   if soft else None),
                )
                for m in meanings:
                    lp.meanings.append(MeaningRow(
                        ordinal=m.ordinal, wikitext=m.definition_wikitext,
                        ref_words=[l.target for l in wt.scan_wikilinks(m.definition_wikitext)]))
                for r in records:
                    lp.relations.append(RelationRow(
                        type_name=r.relation_type.canonical_name,
                        target_word=r.target_word, target_wikitext=r.target_wikitext,
                        meaning_ordinal=r.meaning.ordinal if r.meaning else None))
                for box, entries in boxes:
                    lp.translations.append(TranslationRow(
                        gloss_wikitext=box.gloss,
                        gloss_refs=[],
                        entries=[TranslationEntryRow(lang_code=e.language.code,
                                                     word=e.target_word,
                                                     wikitext=e.target_wikitext)
                                 for e in entries]))
                bundle.lang_pos.append(lp)
        return AnalyzedPage(page.record_id, page.title, "parsed", bundle=bundle,
                            skipped_sections=len(skipped), skipped_lines=skipped_lines)
    except Exception as exc:  # robustness contract: one page never kills a run
        return AnalyzedPage(page.record_id, page.title, "failed", error=repr(exc))


_pool_dialect_cfg = None
_pool_registry = None


def _pool_init(dialect: str, registry_path):
    global _pool_dialect_cfg, _pool_registry
    _pool_registry = load_registry(registry_path) if registry_path else builtin_registry()
    _pool_dialect_cfg = _pool_registry.dialect_config(dialect)


def _pool_analyze(page):
    return analyze_page(page, _pool_dialect_cfg, _pool_registry)


# ---------------------------------------------------------------------------
# The run
# ---------------------------------------------------------------------------

def run_parse(config: ParseConfig) -> ParseReport:
    t0 = time.monotonic()
    registry = (load_registry(config.registry_path)
                if config.registry_path else builtin_registry())
    dialect_cfg = registry.dialect_config(config.dialect)
    identity = dump_identity(config.dump_path)
    store = MrdStore(config.store_path, native_code=config.dialect, dialect=config.dialect)
    try:
        report = _run_parse_inner(config, store, dialect_cfg, registry, identity)
    finally:
        store.rollback()
        store.close()
    report.elapsed = time.monotonic() - t0
    report.pages_per_second = report.pages_seen / report.elapsed if report.elapsed else 0.0
    return report


def _resolve_start(config, store, identity) -> tuple[int, dict]:
    cp = store.load_checkpoint()
    if config.start_record is None:
        if cp.last_record_id > 0:
            if cp.dump_identity != identity:
                raise ChecksumMismatch(
                    f"checkpoint belongs to dump {cp.dump_identity[:12]}…, "
                    f"current dump is {identity[:12]}…")
            return cp.last_record_id, dict(cp.counters)
        return 0, {}
    if config.start_record > 0:
        if cp.dump_identity and cp.dump_identity != identity:
            raise ChecksumMismatch(
                f"checkpoint belongs to dump {cp.dump_identity[:12]}…, "
                f"current dump is {identity[:12]}…")
        return config.start_record, dict(cp.counters)
    return 0, {}


def _run_parse_inner(config, store, dialect_cfg, registry, identity) -> ParseReport:
    start, base_counters = _resolve_start(config, store, identity)
    report = ParseReport()
    crash_after = int(os.environ.get(_CRASH_ENV, "0") or "0")
    truncated_before = base_counters.get("wiki_text_truncated", 0)

    def pages():
        for page in iterate_dump(config.dump_path):
            if page.record_id >= start:
                yield page

    def results():
        if config.worker_count <= 1:
            for page in pages():
                yield analyze_page(page, dialect_cfg, registry)
        else:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(config.worker_count, initializer=_pool_init,
                          initargs=(config.dialect, config.registry_path)) as pool:
                yield from pool.imap(_pool_analyze, pages(), chunksize=8)

    def checkpoint_counters():
        merged = dict(base_counters)
        merged["sections_skipped_unknown_language"] = (
            base_counters.get("sections_skipped_unknown_language", 0)
            + report.sections_skipped_unknown_language)
        merged["translation_lines_skipped"] = (
            base_counters.get("translation_lines_skipped", 0)
            + report.translation_lines_skipped)
        merged["pages_failed"] = (base_counters.get("pages_failed", 0)
                                  + report.pages_failed)
        merged["wiki_text_truncated"] = (
            truncated_before + store.counters.get("wiki_text_truncated", 0))
        return merged

    next_record = start
    saved = 0
    in_batch = 0
    store.begin()
    for result in results():
        report.pages_seen += 1
        next_record = result.record_id + 1
        if result.kind == "redirect":
            report.pages_skipped_redirect += 1
            print(f"skip redirect: {result.title}", file=sys.stderr)
        elif result.kind == "namespace":
            report.pages_skipped_namespace += 1
            print(f"skip namespace: {result.title}", file=sys.stderr)
        elif result.kind == "failed":
            report.pages_failed += 1
            print(f"failed page: {result.title}: {result.error}", file=sys.stderr)
        else:
            store.save_word(result.bundle)
            report.pages_parsed += 1
            report.sections_skipped_unknown_language += result.skipped_sections
            report.translation_lines_skipped += result.skipped_lines
            saved += 1
            if crash_after and saved >= crash_after:
                os._exit(86)  # abrupt death: no commit, no cleanup
        in_batch += 1
        if in_batch >= config.checkpoint_interval:
            store.save_checkpoint(Checkpoint(next_record, identity, checkpoint_counters()))
            store.commit()
            store.begin()
            in_batch = 0
    store.save_checkpoint(Checkpoint(next_record, identity, checkpoint_counters()))
    store.commit()
    store.build_index_tables()
    return report
