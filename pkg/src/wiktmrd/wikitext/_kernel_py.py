"""Pure-Python scanning kernel.

All functions take UTF-8 bytes and return byte offsets. The scan is a token
automaton over two-byte tokens ("{{", "}}", "[[", "]]"): a recognized token
consumes two bytes whether or not it binds, anything else consumes one.
The compiled twin (_kernel_cy) implements the identical semantics; the
equivalence is enforced by fuzz tests.
"""

from __future__ import annotations

MAX_TEMPLATE_DEPTH = 8


def template_spans(data: bytes, max_depth: int = MAX_TEMPLATE_DEPTH) -> list[tuple[int, int]]:
    """Spans of maximal balanced "{{...}}" groups.

    Opens beyond max_depth are literal text; unclosed opens yield no span,
    but balanced groups inside them are still reported.
    """
    closed: list[tuple[int, int]] = []
    stack: list[int] = []
    i = 0
    while True:
        c = data.find(b"}}", i)
        if c == -1:
            break
        o = data.find(b"{{", i)
        if o != -1 and o < c:
            if len(stack) < max_depth:
                stack.append(o)
            i = o + 2
        else:
            if stack:
                closed.append((stack.pop(), c + 2))
            i = c + 2
    if not closed:
        return closed
    # keep only spans not contained in another closed span
    closed.sort(key=lambda se: (se[0], -se[1]))
    out = [closed[0]]
    for span in closed[1:]:
        if span[0] >= out[-1][1]:
            out.append(span)
    return out


def wikilink_spans(data: bytes) -> list[tuple[int, int]]:
    """Spans of "[[...]]" pairs; a second "[[" restarts the link."""
    spans: list[tuple[int, int]] = []
    open_pos = -1
    i = 0
    while True:
        c = data.find(b"]]", i)
        if c == -1:
            break
        o = data.find(b"[[", i)
        if o != -1 and o < c:
            open_pos = o
            i = o + 2
        else:
            if open_pos >= 0:
                spans.append((open_pos, c + 2))
                open_pos = -1
            i = c + 2
    return spans


def heading_spans(data: bytes) -> list[tuple[int, int, int, int, int]]:
    """Per heading line: (line_start, line_end, level, inner_start, inner_end).

    line_end excludes the newline. The "=" runs must not overlap; trailing
    spaces, tabs and CR are ignored. Level is capped at 6; excess markers
    belong to the inner text.
    """
    out: list[tuple[int, int, int, int, int]] = []
    n = len(data)
    ls = 0
    while ls < n:
        le = data.find(b"\n", ls)
        if le == -1:
            le = n
        if ls < le and data[ls] == 0x3D:  # '='
            e = le
            while e > ls and data[e - 1] in b" \t\r":
                e -= 1
            lead = 1
            while ls + lead < e and data[ls + lead] == 0x3D:
                lead += 1
            trail = 0
            while e - 1 - trail >= ls and data[e - 1 - trail] == 0x3D:
                trail += 1
            if trail >= 1 and lead + trail <= e - ls:
                level = min(lead, trail, 6)
                out.append((ls, le, level, ls + level, e - level))
        ls = le + 1
    return out


def top_level_marks(data: bytes, start: int, end: int, needle: int) -> list[int]:
    """Positions of `needle` (a byte) at bracket depth 0 within [start, end).

    "{{" and "[[" raise one shared depth counter, "}}" and "]]" lower it;
    unmatched closers are literal. Intended for needle in (0x7C, 0x3D).
    """
    marks: list[int] = []
    depth = 0
    i = start
    while i < end:
        c = data[i]
        if i + 1 < end:
            c2 = data[i + 1]
            if (c == 0x7B and c2 == 0x7B) or (c == 0x5B and c2 == 0x5B):
                depth += 1
                i += 2
                continue
            if (c == 0x7D and c2 == 0x7D) or (c == 0x5D and c2 == 0x5D):
                if depth > 0:
                    depth -= 1
                i += 2
                continue
        if c == needle and depth == 0:
            marks.append(i)
        i += 1
    return marks
