# cython: boundscheck=False, wraparound=False
"""Compiled scanning kernel; byte-for-byte the semantics of _kernel_py.

Two-byte tokens ("{{", "}}", "[[", "]]") consume two bytes whether or not
they bind, anything else consumes one byte.
"""

MAX_TEMPLATE_DEPTH = 8


def template_spans(bytes data, int max_depth=MAX_TEMPLATE_DEPTH):
    cdef const unsigned char* p = data
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t depth = 0
    closed = []
    stack = []
    while i + 1 < n:
        if p[i] == 0x7B and p[i + 1] == 0x7B:
            if depth < max_depth:
                stack.append(i)
                depth += 1
            i += 2
        elif p[i] == 0x7D and p[i + 1] == 0x7D:
            if depth > 0:
                closed.append((stack.pop(), i + 2))
                depth -= 1
            i += 2
        else:
            i += 1
    if not closed:
        return closed
    closed.sort(key=_span_order)
    out = [closed[0]]
    last_end = closed[0][1]
    for span in closed[1:]:
        if span[0] >= last_end:
            out.append(span)
            last_end = span[1]
    return out


def _span_order(span):
    return (span[0], -span[1])


def wikilink_spans(bytes data):
    cdef const unsigned char* p = data
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t open_pos = -1
    spans = []
    while i + 1 < n:
        if p[i] == 0x5B and p[i + 1] == 0x5B:
            open_pos = i
            i += 2
        elif p[i] == 0x5D and p[i + 1] == 0x5D:
            if open_pos >= 0:
                spans.append((open_pos, i + 2))
                open_pos = -1
            i += 2
        else:
            i += 1
    return spans


def heading_spans(bytes data):
    cdef const unsigned char* p = data
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t ls = 0, le, e, lead, trail, level
    cdef unsigned char c
    out = []
    while ls < n:
        le = ls
        while le < n and p[le] != 0x0A:
            le += 1
        if ls < le and p[ls] == 0x3D:
            e = le
            while e > ls:
                c = p[e - 1]
                if c == 0x20 or c == 0x09 or c == 0x0D:
                    e -= 1
                else:
                    break
            lead = 1
            while ls + lead < e and p[ls + lead] == 0x3D:
                lead += 1
            trail = 0
            while e - 1 - trail >= ls and p[e - 1 - trail] == 0x3D:
                trail += 1
            if trail >= 1 and lead + trail <= e - ls:
                level = lead if lead < trail else trail
                if level > 6:
                    level = 6
                out.append((ls, le, level, ls + level, e - level))
        ls = le + 1
    return out


def top_level_marks(bytes data, Py_ssize_t start, Py_ssize_t end, int needle):
    cdef const unsigned char* p = data
    cdef Py_ssize_t i = start
    cdef Py_ssize_t depth = 0
    cdef unsigned char c, c2
    marks = []
    while i < end:
        c = p[i]
        if i + 1 < end:
            c2 = p[i + 1]
            if (c == 0x7B and c2 == 0x7B) or (c == 0x5B and c2 == 0x5B):
                depth += 1
                i += 2
                continue
            if (c == 0x7D and c2 == 0x7D) or (c == 0x5D and c2 == 0x5D):
                if depth > 0:
                    depth -= 1
                i += 2
                continue
        if c == <unsigned char> needle and depth == 0:
            marks.append(i)
        i += 1
    return marks
