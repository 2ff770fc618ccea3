"""wiktmrd: Wiktionary wikitext to machine-readable dictionary pipeline."""

__version__ = "0.1.0"
