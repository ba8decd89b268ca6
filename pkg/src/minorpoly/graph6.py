"""graph6 encoding and decoding.

Vertex ``i`` of the encoding (0-based) maps to label ``i + 1``.  Graphs with
other labels are emitted in ascending label order.
"""

from __future__ import annotations

from typing import Iterator, TextIO

from .errors import DomainError
from .graph import SimpleGraph

HEADER = ">>graph6<<"


class Graph6Error(DomainError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _encode_n(n: int) -> str:
    if n < 0:
        raise DomainError("negative order")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise DomainError("order too large for graph6")


def to_graph6(g: SimpleGraph) -> str:
    order = g.sorted_vertices()
    n = len(order)
    bits = [
        1 if g.has_edge(order[i], order[j]) else 0
        for j in range(1, n)
        for i in range(j)
    ]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _encode_n(n) + body


def from_graph6(text: str, line: int | None = None) -> SimpleGraph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string", line)
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise Graph6Error("character outside graph6 range", line)
    data = [ord(ch) - 63 for ch in s]
    if data[0] != 63:
        n, pos = data[0], 1
    elif len(data) > 1 and data[1] != 63:
        if len(data) < 4:
            raise Graph6Error("truncated order field", line)
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    else:
        if len(data) < 8:
            raise Graph6Error("truncated order field", line)
        n = 0
        for x in data[2:8]:
            n = (n << 6) | x
        pos = 8
    nbits = n * (n - 1) // 2
    body = data[pos:]
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"expected {(nbits + 5) // 6} data bytes, got {len(body)}", line)
    bits = [(x >> (5 - k)) & 1 for x in body for k in range(6)]
    if any(bits[nbits:]):
        raise Graph6Error("non-zero padding bits", line)
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i + 1, j + 1))
            idx += 1
    return SimpleGraph(range(1, n + 1), edges)


def read_graph6_lines(stream: TextIO) -> Iterator[SimpleGraph]:
    """Parse one graph per non-blank line; errors carry the 1-based line number."""
    for lineno, raw in enumerate(stream, start=1):
        if raw.strip():
            yield from_graph6(raw, line=lineno)
