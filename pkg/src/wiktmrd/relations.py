"""Semantic-relation (thesaurus) extraction from a PosSection.

en dialect: each relation subsection lists "* [[word]]" lines; a leading
{{sense|...}} template aligns the line to the meaning whose text contains
the gloss. ru dialect: the i-th list line belongs to meaning ordinal i, and
"-"/"—" placeholder lines hold the position without contributing records.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import wikitext as wt
from .entry import Meaning, PosSection
from .registry import DialectConfig, Registry, RelationType

_LIST_LINE_RE = re.compile(r"^([*#:]+)\s*(.*)$")
_PLACEHOLDERS = ("", "-", "—")

# templates acting as plain wikilinks: {{l|en|word}}, {{link|en|word}}
_LINK_TEMPLATES = frozenset({"l", "link"})
_SENSE_TEMPLATE = "sense"


@dataclass
class RelationRecord:
    relation_type: RelationType
    target_word: str
    target_wikitext: str
    sense_gloss: str = ""
    meaning: Meaning | None = None


def extract_relations(
    pos_section: PosSection,
    meanings: list[Meaning],
    dialect: DialectConfig,
    registry: Registry,
) -> list[RelationRecord]:
    """All relation records of one PosSection, in source order.

    Empty relation subsections are legal and contribute nothing.
    """
    records: list[RelationRecord] = []
    for rel_type, subsection in _relation_subsections(pos_section.body, dialect, registry):
        if dialect.dialect == "en":
            _extract_en(rel_type, subsection, meanings, records)
        else:
            _extract_ru(rel_type, subsection, meanings, records)
    return records


def _relation_subsections(body: str, dialect: DialectConfig, registry: Registry):
    heads = wt.scan_headings(body)
    data = wt.encode(body)
    for i, head in enumerate(heads):
        rel_type = registry.find_relation_heading(head.inner_text, dialect.dialect)
        if rel_type is None:
            continue
        start = head.source_span[1]
        if start < len(data) and data[start] == 0x0A:
            start += 1
        end = len(data)
        for nxt in heads[i + 1:]:
            if nxt.level <= head.level:
                end = nxt.source_span[0]
                break
        yield rel_type, wt.decode(data[start:end])


def _extract_en(rel_type, subsection, meanings, records):
    for line in subsection.splitlines():
        m = _LIST_LINE_RE.match(line)
        if not m:
            continue
        content = m.group(2).strip()
        if content in _PLACEHOLDERS:
            continue
        gloss, meaning, content = _take_sense_gloss(content, meanings)
        _records_from_line(rel_type, content, gloss, meaning, records)


def _extract_ru(rel_type, subsection, meanings, records):
    index = 0
    for line in subsection.splitlines():
        m = _LIST_LINE_RE.match(line)
        if not m:
            continue
        index += 1
        content = m.group(2).strip()
        if content in _PLACEHOLDERS:
            continue
        meaning = meanings[index - 1] if index <= len(meanings) else None
        _records_from_line(rel_type, content, "", meaning, records)


def _take_sense_gloss(content: str, meanings: list[Meaning]):
    """Split off a leading {{sense|...}} template; align it to a meaning."""
    templates = wt.scan_templates(content)
    if not templates or templates[0].source_span[0] != 0:
        return "", None, content
    tpl = templates[0]
    if tpl.name.strip().casefold() != _SENSE_TEMPLATE:
        return "", None, content
    gloss = wt.strip_markup(", ".join(tpl.positional_params))
    meaning = None
    if gloss:
        needle = gloss.casefold()
        for cand in meanings:
            if needle in cand.definition_plain.casefold():
                meaning = cand
                break
    rest = wt.decode(wt.encode(content)[tpl.source_span[1]:]).strip()
    return gloss, meaning, rest


def _records_from_line(rel_type, content, gloss, meaning, records):
    data = wt.encode(content)
    spans = _link_like_spans(content)
    if spans:
        for s, e in spans:
            piece = wt.decode(data[s:e])
            if piece.startswith("{{"):
                tpl = wt.scan_templates(piece)[0]
                wikitext = (tpl.positional_params[1]
                            if len(tpl.positional_params) > 1 else "").strip()
            else:
                wikitext = piece
            word = wt.strip_markup(wikitext)
            if word:
                records.append(RelationRecord(
                    relation_type=rel_type, target_word=word,
                    target_wikitext=wikitext, sense_gloss=gloss, meaning=meaning))
        return
    # no links on the line: comma/semicolon-separated bare words
    for token in re.split(r"[,;]", content):
        token = token.strip()
        if token in _PLACEHOLDERS:
            continue
        word = wt.strip_markup(token)
        if word:
            records.append(RelationRecord(
                relation_type=rel_type, target_word=word,
                target_wikitext=token, sense_gloss=gloss, meaning=meaning))


def _link_like_spans(content: str):
    """Byte spans of wikilinks and {{l|...}} link templates, in source order.

    Overlaps (a link inside a link template) keep the earlier-starting span.
    """
    spans = list(wt._kernel.wikilink_spans(wt.encode(content)))
    for tpl in wt.scan_templates(content):
        if tpl.name.strip().casefold() in _LINK_TEMPLATES:
            spans.append(tpl.source_span)
    spans.sort(key=lambda se: (se[0], -se[1]))
    out = []
    for span in spans:
        if not out or span[0] >= out[-1][1]:
            out.append(span)
    return out


def count_relations_per_word(records) -> tuple[int, int]:
    """(record count, distinct relation-type count) for one PosSection group."""
    records = list(records)
    types = {r.relation_type.canonical_name for r in records}
    return len(records), len(types)
