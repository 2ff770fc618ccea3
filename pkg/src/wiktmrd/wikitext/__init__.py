"""Structural wikitext scanning: templates, wikilinks, headings, markup stripping.

Scanning never fails on malformed input; broken markup just yields fewer
results. All source spans are byte offsets into the UTF-8 encoding of the
scanned string, so `text.encode()[start:end]` recovers the source slice.

The byte-level kernel has two interchangeable implementations: a compiled
Cython module and a pure-Python fallback. The compiled one is used when
importable unless WIKTMRD_KERNEL=python is set in the environment.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from . import _kernel_py

if os.environ.get("WIKTMRD_KERNEL", "").lower() == "python":
    _kernel = _kernel_py
else:
    try:
        from . import _kernel_cy as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _kernel_py

MAX_TEMPLATE_DEPTH = _kernel_py.MAX_TEMPLATE_DEPTH

_PIPE = 0x7C
_EQ = 0x3D
_QUOTE_RUN = re.compile(r"''+")


def kernel_name() -> str:
    """Which kernel implementation is active: "compiled" or "python"."""
    return "python" if _kernel is _kernel_py else "compiled"


@dataclass
class Template:
    """One {{...}} occurrence. Positional params are verbatim, named params
    are whitespace-trimmed (MediaWiki convention); both keep source order."""

    name: str
    positional_params: list[str] = field(default_factory=list)
    named_params: dict[str, str] = field(default_factory=dict)
    source_span: tuple[int, int] = (0, 0)

    def first_param(self) -> str:
        """First positional param, falling back to the "1" named param."""
        if self.positional_params:
            return self.positional_params[0]
        return self.named_params.get("1", "")


@dataclass
class WikiLink:
    target: str
    label: str
    source_span: tuple[int, int] = (0, 0)


@dataclass
class Heading:
    level: int
    inner_text: str
    source_span: tuple[int, int] = (0, 0)


def encode(text: str) -> bytes:
    return text.encode("utf-8", "surrogatepass")


def decode(data: bytes) -> str:
    return data.decode("utf-8", "surrogatepass")


def scan_templates(text: str) -> list[Template]:
    """All top-level templates in source order.

    Nested templates stay inside the enclosing template's parameter strings.
    An unclosed "{{" produces no template, but balanced groups inside it are
    still found. Groups with an empty name are not templates; any balanced
    groups inside them are promoted instead.
    """
    data = encode(text)
    out: list[Template] = []
    _collect_templates(data, _kernel.template_spans(data), 0, out)
    return out


def _collect_templates(data: bytes, spans, shift: int, out: list[Template]) -> None:
    for s, e in spans:
        tpl = _build_template(data, s, e, shift)
        if tpl is not None:
            out.append(tpl)
        else:
            body = data[s + 2:e - 2]
            _collect_templates(body, _kernel.template_spans(body), shift + s + 2, out)


def _build_template(data: bytes, s: int, e: int, shift: int = 0) -> Template | None:
    bs, be = s + 2, e - 2
    pipes = _kernel.top_level_marks(data, bs, be, _PIPE)
    name_end = pipes[0] if pipes else be
    name = decode(data[bs:name_end]).strip()
    if not name:
        return None
    tpl = Template(name=name, source_span=(shift + s, shift + e))
    starts = [p + 1 for p in pipes]
    ends = pipes[1:] + [be]
    for seg_start, seg_end in zip(starts, ends):
        eqs = _kernel.top_level_marks(data, seg_start, seg_end, _EQ)
        key = decode(data[seg_start:eqs[0]]).strip() if eqs else ""
        if key:
            tpl.named_params[key] = decode(data[eqs[0] + 1:seg_end]).strip()
        else:
            tpl.positional_params.append(decode(data[seg_start:seg_end]))
    return tpl


def scan_wikilinks(text: str) -> list[WikiLink]:
    """All [[...]] links in source order; "[[a|b]]" has target a, label b.

    Namespace-prefixed targets are returned verbatim. Links with an empty
    target are dropped; an empty label falls back to the target.
    """
    data = encode(text)
    out = []
    for s, e in _kernel.wikilink_spans(data):
        link = _build_wikilink(data, s, e)
        if link is not None:
            out.append(link)
    return out


def _build_wikilink(data: bytes, s: int, e: int) -> WikiLink | None:
    inner = data[s + 2:e - 2]
    pipe = inner.find(b"|")
    if pipe == -1:
        target = decode(inner).strip()
        label = target
    else:
        target = decode(inner[:pipe]).strip()
        label = decode(inner[pipe + 1:]).strip() or target
    if not target:
        return None
    return WikiLink(target=target, label=label, source_span=(s, e))


def scan_headings(text: str) -> list[Heading]:
    """One Heading per "=...=" line; level = min of the marker runs, max 6.

    The span covers the whole line without its newline; inner text is kept
    untrimmed.
    """
    data = encode(text)
    return [
        Heading(level=lvl, inner_text=decode(data[is_:ie]), source_span=(ls, le))
        for ls, le, lvl, is_, ie in _kernel.heading_spans(data)
    ]


def strip_markup(text: str) -> str:
    """Plain text: links become their labels, templates vanish, quote runs
    ('' and ''') are dropped, whitespace collapses to single spaces."""
    s = text
    for _ in range(4):
        t = _strip_once(s)
        if t == s:
            break
        s = t
    s = _QUOTE_RUN.sub("", s)
    return " ".join(s.split())


def _strip_once(text: str) -> str:
    data = encode(text)
    events = [(s, e, False) for s, e in _kernel.template_spans(data)]
    events += [(s, e, True) for s, e in _kernel.wikilink_spans(data)]
    if not events:
        return text
    events.sort()
    parts = []
    pos = 0
    for s, e, is_link in events:
        if s < pos:
            continue
        parts.append(decode(data[pos:s]))
        if is_link:
            inner = data[s + 2:e - 2]
            pipe = inner.find(b"|")
            target = decode(inner if pipe == -1 else inner[:pipe]).strip()
            label = target if pipe == -1 else decode(inner[pipe + 1:]).strip()
            parts.append(label or target)
        pos = e
    parts.append(decode(data[pos:]))
    return "".join(parts)
