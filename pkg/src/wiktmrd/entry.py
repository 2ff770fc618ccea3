"""Splitting one page into language sections, part-of-speech sections and
numbered definitions, plus word-form ("soft redirect") detection.

The two supported dialects differ structurally: the en edition marks
languages with level-2 name headings ("==English=="), the ru edition with
level-1 template headings ("= {{-en-}} ="), reads definitions from the
"Значение" subsection and takes the part of speech from the morphology
template block. Anything unresolvable is skipped and recorded, never fatal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import wikitext as wt
from .registry import (
    RU_DEFINITIONS_HEADING,
    DialectConfig,
    LanguageCode,
    PartOfSpeech,
    Registry,
)

# headings recognized as a part-of-speech slot but outside the canonical set
UNKNOWN_POS_HEADINGS_EN = frozenset(
    h.casefold() for h in (
        "Abbreviation", "Initialism", "Acronym", "Symbol", "Letter",
        "Prefix", "Suffix", "Contraction", "Determiner", "Article",
    )
)

_ETYMOLOGY_RE = re.compile(r"^etymology(?:\s+(\d+))?$", re.IGNORECASE)
_RU_LANG_TEMPLATE_RE = re.compile(r"^-([a-z0-9][a-z0-9-]{1,10})-$")


@dataclass
class Page:
    title: str
    raw_text: str
    is_redirect: bool = False
    record_id: int = 0


@dataclass
class SkippedSection:
    heading: str
    reason: str


@dataclass
class LanguageSection:
    language: LanguageCode
    body: str
    span: tuple[int, int]  # byte offsets of the body within the page text


@dataclass
class PosSection:
    language: LanguageCode
    etymology_ordinal: int
    pos: PartOfSpeech
    body: str


@dataclass
class Meaning:
    ordinal: int
    definition_wikitext: str
    definition_plain: str


@dataclass
class SoftRedirect:
    form_title: str
    lemma_title: str
    form_kind: str


def split_language_sections(
    page: Page, dialect: DialectConfig, registry: Registry
) -> tuple[list[LanguageSection], list[SkippedSection]]:
    """Partition the page body at language headings.

    Unresolvable headings produce SkippedSection records; the text under them
    is not parsed further.
    """
    data = wt.encode(page.raw_text)
    level = 2 if dialect.dialect == "en" else 1
    heads = [h for h in wt.scan_headings(page.raw_text) if h.level == level]
    sections: list[LanguageSection] = []
    skipped: list[SkippedSection] = []
    for i, head in enumerate(heads):
        body_start = head.source_span[1]
        if body_start < len(data) and data[body_start] == 0x0A:
            body_start += 1
        body_end = heads[i + 1].source_span[0] if i + 1 < len(heads) else len(data)
        if dialect.dialect == "en":
            language, reason = _resolve_language_en(head.inner_text, registry)
        else:
            language, reason = _resolve_language_ru(head.inner_text, registry)
        if language is None:
            skipped.append(SkippedSection(heading=head.inner_text.strip(), reason=reason))
            continue
        sections.append(LanguageSection(
            language=language,
            body=wt.decode(data[body_start:body_end]),
            span=(body_start, body_end),
        ))
    return sections, skipped


def _resolve_language_en(inner: str, registry: Registry):
    name = wt.strip_markup(inner) or inner.strip()
    lang = registry.find_english_name(name)
    if lang is None:
        return None, f"unknown language name: {name!r}"
    return lang, ""


def _resolve_language_ru(inner: str, registry: Registry):
    templates = wt.scan_templates(inner)
    if len(templates) != 1:
        return None, "expected a single language template in the heading"
    m = _RU_LANG_TEMPLATE_RE.match(templates[0].name.casefold())
    if not m:
        return None, f"not a language template: {templates[0].name!r}"
    lang = registry.find_code(m.group(1))
    if lang is None:
        return None, f"unknown language code: {m.group(1)!r}"
    return lang, ""


def split_pos_sections(
    section: LanguageSection, dialect: DialectConfig, registry: Registry
) -> list[PosSection]:
    """Split a language section into one PosSection per (etymology, POS) pair.

    A section with nothing recognizable yields a single pos=unknown section
    spanning the whole body.
    """
    if dialect.dialect == "en":
        out = _split_pos_en(section, registry)
    else:
        out = _split_pos_ru(section, registry)
    if not out:
        out = [PosSection(language=section.language, etymology_ordinal=0,
                          pos=registry.unknown_pos(), body=section.body)]
    return out


def _split_pos_en(section: LanguageSection, registry: Registry) -> list[PosSection]:
    data = wt.encode(section.body)
    marks = []  # (heading, kind, payload)
    for head in wt.scan_headings(section.body):
        inner = head.inner_text.strip()
        m = _ETYMOLOGY_RE.match(inner)
        if m:
            marks.append((head, "etym", int(m.group(1) or 0)))
            continue
        pos = registry.pos_for_heading_en(inner)
        if pos is None and inner.casefold() in UNKNOWN_POS_HEADINGS_EN:
            pos = registry.unknown_pos()
        if pos is not None:
            marks.append((head, "pos", pos))
    out = []
    etym = 0
    for i, (head, kind, payload) in enumerate(marks):
        if kind == "etym":
            etym = payload
            continue
        start = head.source_span[1]
        if start < len(data) and data[start] == 0x0A:
            start += 1
        end = marks[i + 1][0].source_span[0] if i + 1 < len(marks) else len(data)
        out.append(PosSection(language=section.language, etymology_ordinal=etym,
                              pos=payload, body=wt.decode(data[start:end])))
    return out


def _split_pos_ru(section: LanguageSection, registry: Registry) -> list[PosSection]:
    data = wt.encode(section.body)
    homonym_heads = [h for h in wt.scan_headings(section.body) if h.level == 2]
    blocks: list[tuple[int, int, int]] = []  # (ordinal, start, end)
    if not homonym_heads:
        blocks.append((0, 0, len(data)))
    else:
        for i, head in enumerate(homonym_heads):
            start = head.source_span[1]
            if start < len(data) and data[start] == 0x0A:
                start += 1
            end = (homonym_heads[i + 1].source_span[0]
                   if i + 1 < len(homonym_heads) else len(data))
            blocks.append((i + 1, start, end))
    out = []
    for ordinal, start, end in blocks:
        body = wt.decode(data[start:end])
        pos = registry.unknown_pos()
        for tpl in wt.scan_templates(body):
            found = registry.pos_for_ru_template(tpl.name)
            if found is not None:
                pos = found
                break
        out.append(PosSection(language=section.language, etymology_ordinal=ordinal,
                              pos=pos, body=body))
    return out


def is_definition_line(line: str) -> bool:
    """True for "#..." lines that are definitions, not quotes or sub-items."""
    return line.startswith("#") and not line.startswith(("#:", "#*", "##"))


def extract_definitions(
    pos_section: PosSection, dialect: DialectConfig, registry: Registry
) -> list[Meaning]:
    """Numbered definitions of one PosSection, ordinals consecutive from 1."""
    if dialect.dialect == "en":
        region = pos_section.body
    else:
        region = _ru_subsection(pos_section.body, RU_DEFINITIONS_HEADING)
        if region is None:
            return []
    meanings = []
    for line in region.splitlines():
        if is_definition_line(line):
            wikitext = line[1:].strip()
            meanings.append(Meaning(
                ordinal=len(meanings) + 1,
                definition_wikitext=wikitext,
                definition_plain=wt.strip_markup(wikitext),
            ))
    return meanings


def _ru_subsection(body: str, heading_name: str) -> str | None:
    """Body of the first subsection whose heading matches `heading_name`."""
    heads = wt.scan_headings(body)
    data = wt.encode(body)
    for i, head in enumerate(heads):
        if head.inner_text.strip().casefold() != heading_name:
            continue
        start = head.source_span[1]
        if start < len(data) and data[start] == 0x0A:
            start += 1
        end = len(data)
        for nxt in heads[i + 1:]:
            if nxt.level <= head.level:
                end = nxt.source_span[0]
                break
        return wt.decode(data[start:end])
    return None


def classify_soft_redirect(
    page: Page, pos_section: PosSection, meanings: list[Meaning], registry: Registry
) -> SoftRedirect | None:
    """A word-form entry: exactly one meaning made of a single form-of template."""
    if len(meanings) != 1:
        return None
    text = meanings[0].definition_wikitext.strip()
    templates = wt.scan_templates(text)
    if len(templates) != 1:
        return None
    tpl = templates[0]
    if tpl.source_span != (0, len(wt.encode(text))):
        return None
    if tpl.name.strip().casefold() not in registry.form_of_templates:
        return None
    lemma = wt.strip_markup(tpl.first_param()).strip()
    if not lemma or lemma == page.title:
        return None
    return SoftRedirect(form_title=page.title, lemma_title=lemma, form_kind=tpl.name.strip())
