"""Registries: language codes and names, parts of speech, semantic relation
types, and the per-dialect heading/template vocabulary.

The built-in language table ships as data/languages.tsv (one line per code:
code, english names, russian name). A user registry file in the same format
extends or overrides it. Everything is immutable after load and safe to share
across threads and worker processes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

CODE_RE = re.compile(r"^[a-z0-9][a-z0-9-]{1,10}$")

RELATION_TYPE_NAMES = (
    "synonym",
    "antonym",
    "hypernym",
    "hyponym",
    "holonym",
    "meronym",
    "troponym",
    "coordinate_term",
    "see_also",
)

POS_NAMES = (
    "noun", "verb", "adjective", "adverb", "pronoun", "preposition",
    "conjunction", "interjection", "numeral", "particle", "proper_noun",
    "phrase", "unknown",
)


class UnknownLanguage(LookupError):
    """The code or name is not in the registry; callers skip and count."""


class NotARelationHeading(LookupError):
    """The heading does not open a semantic-relation subsection."""


class MalformedRegistryFile(ValueError):
    def __init__(self, path, line_no, problem):
        super().__init__(f"{path}:{line_no}: {problem}")
        self.path = str(path)
        self.line_no = line_no


@dataclass(frozen=True)
class LanguageCode:
    code: str
    english_name: str
    russian_name: str = ""
    name_aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class RelationType:
    canonical_name: str
    heading_aliases_en: tuple[str, ...]
    heading_aliases_ru: tuple[str, ...]


@dataclass(frozen=True)
class PartOfSpeech:
    canonical_name: str
    heading_aliases_en: tuple[str, ...] = ()
    ru_template_prefixes: tuple[str, ...] = ()


@dataclass(frozen=True)
class DialectConfig:
    dialect: str  # "en" | "ru"
    native_language: LanguageCode

    def __post_init__(self):
        if self.dialect not in ("en", "ru"):
            raise ValueError(f"unsupported dialect: {self.dialect!r}")
        if self.native_language.code != self.dialect:
            raise ValueError("native language must match the dialect edition")


_RELATION_ALIASES = {
    "synonym": (("Synonyms", "Synonym"), ("Синонимы",)),
    "antonym": (("Antonyms", "Antonym"), ("Антонимы",)),
    "hypernym": (("Hypernyms", "Hypernym"), ("Гиперонимы",)),
    "hyponym": (("Hyponyms", "Hyponym"), ("Гипонимы",)),
    "holonym": (("Holonyms", "Holonym"), ("Холонимы",)),
    "meronym": (("Meronyms", "Meronym"), ("Меронимы",)),
    "troponym": (("Troponyms", "Troponym"), ("Тропонимы",)),
    "coordinate_term": (("Coordinate terms", "Coordinate term"), ("Согипонимы",)),
    "see_also": (("See also",), ("См. также",)),
}

_POS_ALIASES = {
    "noun": (("Noun",), ("сущ",)),
    "verb": (("Verb",), ("гл", "глагол")),
    "adjective": (("Adjective",), ("прил",)),
    "adverb": (("Adverb",), ("нареч", "adv")),
    "pronoun": (("Pronoun",), ("мест",)),
    "preposition": (("Preposition",), ("предл",)),
    "conjunction": (("Conjunction",), ("союз",)),
    "interjection": (("Interjection",), ("межд",)),
    "numeral": (("Numeral", "Number"), ("числ",)),
    "particle": (("Particle",), ("част",)),
    "proper_noun": (("Proper noun",), ()),
    "phrase": (("Phrase",), ("фраз",)),
    "unknown": ((), ()),
}

FORM_OF_TEMPLATES = frozenset({
    "plural of", "past of", "present participle of", "comparative of",
    "superlative of", "form of",
})

TRANSLATION_TEMPLATES_EN = frozenset({"t", "t+", "t-", "tø"})
TRANSLATION_BLOCK_RU = "перев-блок"
RU_DEFINITIONS_HEADING = "значение"
RU_SEMANTICS_HEADING = "семантические свойства"


class Registry:
    """Immutable lookup tables for one parse run."""

    def __init__(self, languages: dict[str, LanguageCode],
                 form_of_templates: frozenset[str] = FORM_OF_TEMPLATES):
        self.languages = dict(languages)
        self.form_of_templates = form_of_templates
        self._by_english: dict[str, str] = {}
        for lang in self.languages.values():
            self._by_english.setdefault(lang.english_name.casefold(), lang.code)
            for alias in lang.name_aliases:
                self._by_english.setdefault(alias.casefold(), lang.code)

        self.relation_types = {
            name: RelationType(name, *_RELATION_ALIASES[name])
            for name in RELATION_TYPE_NAMES
        }
        self._relation_by_heading = {"en": {}, "ru": {}}
        for rt in self.relation_types.values():
            for alias in rt.heading_aliases_en:
                self._relation_by_heading["en"][alias.casefold()] = rt
            for alias in rt.heading_aliases_ru:
                self._relation_by_heading["ru"][alias.casefold()] = rt

        self.parts_of_speech = {
            name: PartOfSpeech(name, *_POS_ALIASES[name]) for name in POS_NAMES
        }
        self._pos_by_heading_en = {}
        self._pos_by_ru_prefix = {}
        for pos in self.parts_of_speech.values():
            for alias in pos.heading_aliases_en:
                self._pos_by_heading_en[alias.casefold()] = pos
            for prefix in pos.ru_template_prefixes:
                self._pos_by_ru_prefix[prefix.casefold()] = pos

    # -- languages ----------------------------------------------------------

    def find_code(self, code: str) -> LanguageCode | None:
        return self.languages.get(code.strip().casefold())

    def lookup_code(self, code: str) -> LanguageCode:
        lang = self.find_code(code)
        if lang is None:
            raise UnknownLanguage(f"unknown language code: {code!r}")
        return lang

    def find_english_name(self, name: str) -> LanguageCode | None:
        code = self._by_english.get(name.strip().casefold())
        return self.languages[code] if code else None

    def lookup_english_name(self, name: str) -> LanguageCode:
        lang = self.find_english_name(name)
        if lang is None:
            raise UnknownLanguage(f"unknown language name: {name!r}")
        return lang

    # -- relation headings ---------------------------------------------------

    def find_relation_heading(self, inner: str, dialect: str) -> RelationType | None:
        return self._relation_by_heading[dialect].get(inner.strip().casefold())

    def classify_relation_heading(self, inner: str, dialect: str) -> RelationType:
        rt = self.find_relation_heading(inner, dialect)
        if rt is None:
            raise NotARelationHeading(inner)
        return rt

    # -- parts of speech ------------------------------------------------------

    def pos_for_heading_en(self, inner: str) -> PartOfSpeech | None:
        return self._pos_by_heading_en.get(inner.strip().casefold())

    def pos_for_ru_template(self, template_name: str) -> PartOfSpeech | None:
        token = template_name.strip().split()[0].casefold() if template_name.strip() else ""
        pos = self._pos_by_ru_prefix.get(token)
        if pos is None and "-" in token:
            pos = self._pos_by_ru_prefix.get(token.split("-", 1)[0])
        return pos

    def unknown_pos(self) -> PartOfSpeech:
        return self.parts_of_speech["unknown"]

    # -- dialects -------------------------------------------------------------

    def dialect_config(self, dialect: str) -> DialectConfig:
        return DialectConfig(dialect=dialect, native_language=self.lookup_code(dialect))


def _parse_registry_lines(lines, path) -> dict[str, LanguageCode]:
    out: dict[str, LanguageCode] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise MalformedRegistryFile(path, line_no, f"expected 2 or 3 columns, got {len(cols)}")
        code = cols[0].strip().casefold()
        if not CODE_RE.match(code):
            raise MalformedRegistryFile(path, line_no, f"bad language code {cols[0]!r}")
        names = [n.strip() for n in cols[1].split(";") if n.strip()]
        if not names:
            raise MalformedRegistryFile(path, line_no, "empty language name")
        russian = cols[2].strip() if len(cols) == 3 else ""
        out[code] = LanguageCode(code=code, english_name=names[0],
                                 russian_name=russian, name_aliases=tuple(names[1:]))
    return out


@lru_cache(maxsize=1)
def _builtin_languages() -> dict[str, LanguageCode]:
    text = resources.files("wiktmrd.data").joinpath("languages.tsv").read_text("utf-8")
    return _parse_registry_lines(text.splitlines(), "<builtin languages.tsv>")


def builtin_registry() -> Registry:
    return Registry(_builtin_languages())


def load_registry(path) -> Registry:
    """Built-in table extended/overridden by the entries in `path`."""
    languages = dict(_builtin_languages())
    with open(path, encoding="utf-8") as f:
        languages.update(_parse_registry_lines(f, path))
    return Registry(languages)
