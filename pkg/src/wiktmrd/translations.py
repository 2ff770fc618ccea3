"""Translation extraction for both dialects.

en dialect: {{trans-top|gloss}} ... {{trans-bottom}} blocks with
"* Language: {{t+|code|word}}" lines (bare "[[word]] (translit)" accepted).
ru dialect: one {{перев-блок}} template per translated sense whose named
parameters are language codes holding wikilinked words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import wikitext as wt
from .entry import PosSection
from .registry import TRANSLATION_BLOCK_RU, TRANSLATION_TEMPLATES_EN, LanguageCode, Registry

_TRANSLATIONS_HEADING = "translations"
_TRANS_TOP = "trans-top"
_TRANS_BOTTOM = "trans-bottom"
_LINE_RE = re.compile(r"^([*#:]+)\s*(.*)$")
_TRAILING_PAREN_RE = re.compile(r"^\s*\(([^)]*)\)")


@dataclass
class TranslationBox:
    gloss: str
    source_span: tuple[int, int] = (0, 0)


@dataclass
class TranslationEntry:
    language: LanguageCode
    target_word: str
    target_wikitext: str
    transliteration: str = ""


@dataclass
class SkippedLine:
    line: str
    reason: str


def extract_translations_en(
    pos_section: PosSection, registry: Registry
) -> tuple[list[tuple[TranslationBox, list[TranslationEntry]]], list[SkippedLine]]:
    body = pos_section.body
    data = wt.encode(body)
    skipped: list[SkippedLine] = []
    regions = _en_box_regions(body, data)
    boxes = []
    for gloss_wikitext, span, start, end in regions:
        box = TranslationBox(gloss=wt.strip_markup(gloss_wikitext), source_span=span)
        entries = _entries_from_en_lines(wt.decode(data[start:end]), registry, skipped)
        boxes.append((box, entries))
    return boxes, skipped


def _en_box_regions(body: str, data: bytes):
    """(gloss wikitext, box span, content start, content end) per box."""
    openers = []
    closers = []
    for tpl in wt.scan_templates(body):
        name = tpl.name.strip().casefold()
        if name == _TRANS_TOP:
            openers.append(tpl)
        elif name == _TRANS_BOTTOM:
            closers.append(tpl.source_span[0])
    regions = []
    for i, tpl in enumerate(openers):
        start = tpl.source_span[1]
        next_open = (openers[i + 1].source_span[0]
                     if i + 1 < len(openers) else len(data))
        end = next_open
        for c in closers:
            if start <= c < next_open:
                end = c
                break
        regions.append((tpl.first_param(), tpl.source_span, start, end))
    if regions:
        return regions
    # bare "Translations" heading with no trans-top: one box, empty gloss
    heads = wt.scan_headings(body)
    for i, head in enumerate(heads):
        if head.inner_text.strip().casefold() != _TRANSLATIONS_HEADING:
            continue
        start = head.source_span[1]
        if start < len(data) and data[start] == 0x0A:
            start += 1
        end = len(data)
        for nxt in heads[i + 1:]:
            if nxt.level <= head.level:
                end = nxt.source_span[0]
                break
        return [("", head.source_span, start, end)]
    return []


def _entries_from_en_lines(region: str, registry: Registry, skipped: list[SkippedLine]):
    entries: list[TranslationEntry] = []
    parent_lang: LanguageCode | None = None
    for line in region.splitlines():
        m = _LINE_RE.match(line)
        if not m:
            continue
        markers, rest = m.groups()
        name, sep, payload = rest.partition(":")
        if not sep:
            continue
        name = name.strip()
        lang = registry.find_english_name(name) or registry.find_english_name(wt.strip_markup(name))
        is_sub_line = markers != "*"
        if lang is None:
            if is_sub_line and parent_lang is not None:
                lang = parent_lang
            else:
                skipped.append(SkippedLine(line=line, reason=f"unknown language name: {name!r}"))
                continue
        elif not is_sub_line:
            parent_lang = lang
        _entries_from_en_payload(payload, lang, registry, entries, skipped, line)
    return entries


def _entries_from_en_payload(payload, line_lang, registry, entries, skipped, line):
    data = wt.encode(payload)
    templates = [t for t in wt.scan_templates(payload)
                 if t.name.strip().casefold() in TRANSLATION_TEMPLATES_EN]
    if templates:
        for tpl in templates:
            params = tpl.positional_params
            code = params[0].strip() if params else ""
            word_wikitext = params[1].strip() if len(params) > 1 else ""
            word = wt.strip_markup(word_wikitext)
            if not word:
                continue
            lang = registry.find_code(code)
            if lang is None:
                skipped.append(SkippedLine(line=line, reason=f"unknown language code: {code!r}"))
                continue
            if lang.code != line_lang.code:
                # the template's code wins; the conflict is recorded
                skipped.append(SkippedLine(line=line, reason="code–name conflict"))
            s, e = tpl.source_span
            entries.append(TranslationEntry(
                language=lang, target_word=word,
                target_wikitext=wt.decode(data[s:e]),
                transliteration=tpl.named_params.get("tr", "")))
        return
    for s, e in wt._kernel.wikilink_spans(data):
        link = wt._build_wikilink(data, s, e)
        if link is None:
            continue
        translit = ""
        m = _TRAILING_PAREN_RE.match(wt.decode(data[e:]))
        if m:
            translit = m.group(1).strip()
        entries.append(TranslationEntry(
            language=line_lang, target_word=link.target,
            target_wikitext=wt.decode(data[s:e]), transliteration=translit))


def extract_translations_ru(
    pos_section: PosSection, registry: Registry
) -> tuple[list[tuple[TranslationBox, list[TranslationEntry]]], list[SkippedLine]]:
    boxes = []
    skipped: list[SkippedLine] = []
    for tpl in wt.scan_templates(pos_section.body):
        if tpl.name.strip().casefold() != TRANSLATION_BLOCK_RU:
            continue
        box = TranslationBox(gloss=wt.strip_markup(tpl.first_param()),
                             source_span=tpl.source_span)
        entries: list[TranslationEntry] = []
        for key, value in tpl.named_params.items():
            if key == "1":
                continue  # the gloss slot
            lang = registry.find_code(key)
            if lang is None:
                skipped.append(SkippedLine(
                    line=f"{key}={value}", reason=f"unknown language code: {key!r}"))
                continue
            data = wt.encode(value)
            for s, e in wt._kernel.wikilink_spans(data):
                link = wt._build_wikilink(data, s, e)
                if link is None:
                    continue
                translit = ""
                m = _TRAILING_PAREN_RE.match(wt.decode(data[e:]))
                if m:
                    translit = m.group(1).strip()
                entries.append(TranslationEntry(
                    language=lang, target_word=link.target,
                    target_wikitext=wt.decode(data[s:e]), transliteration=translit))
        boxes.append((box, entries))
    return boxes, skipped
