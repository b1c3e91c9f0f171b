"""Plain-text code and Turán-system files.

Both formats are UTF-8 with LF line endings: a header line
``n=<int> k=<int> r=<int>`` followed by one word (or one increasing
``r``-subset) per line, symbols separated by single spaces. Packings use the
same header with words of length ``k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .cover import TuranSystem
from .words import Code

HEADER_RE = re.compile(r"^n=(\d+) k=(\d+) r=(\d+)$")


class FormatError(ValueError):
    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Header:
    n: int
    k: int
    r: int

    def line(self) -> str:
        return f"n={self.n} k={self.k} r={self.r}"


def _parse(text: str, path, length_of) -> tuple[Header, list[tuple[int, ...]]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(path, 1, "missing header line 'n=<int> k=<int> r=<int>'")
    m = HEADER_RE.match(lines[0])
    if not m:
        raise FormatError(path, 1, f"bad header {lines[0]!r}, expected 'n=<int> k=<int> r=<int>'")
    head = Header(*(int(g) for g in m.groups()))
    if head.n < 1 or head.r < 1 or head.k <= head.r:
        raise FormatError(path, 1, "need n >= 1 and 1 <= r < k")
    length = length_of(head)
    rows = []
    seen = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if line.endswith("\r"):
            raise FormatError(path, lineno, "CRLF line ending")
        try:
            row = tuple(int(tok) for tok in line.split(" "))
        except ValueError:
            raise FormatError(path, lineno, f"non-integer symbol in {line!r}") from None
        if len(row) != length:
            raise FormatError(path, lineno, f"expected {length} symbols, got {len(row)}")
        if any(not 0 <= s < head.n for s in row):
            raise FormatError(path, lineno, f"symbol outside [0, {head.n})")
        if row in seen:
            raise FormatError(path, lineno, f"duplicate of line {seen[row]}")
        seen[row] = lineno
        rows.append((lineno, row))
    return head, rows


def parse_code(text: str, path="<code>") -> tuple[Code, Header]:
    head, rows = _parse(text, path, lambda h: h.r)
    return Code(head.n, head.r, frozenset(row for _, row in rows)), head


def parse_system(text: str, path="<system>") -> tuple[TuranSystem, Header]:
    head, rows = _parse(text, path, lambda h: h.r)
    for lineno, row in rows:
        if any(a >= b for a, b in zip(row, row[1:])):
            raise FormatError(path, lineno, "symbols must be strictly increasing")
    return TuranSystem(head.n, head.r, frozenset(row for _, row in rows)), head


def parse_packing(text: str, path="<packing>") -> tuple[list[tuple[int, ...]], Header]:
    head, rows = _parse(text, path, lambda h: h.k)
    return [row for _, row in rows], head


def _read(path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def read_code(path) -> tuple[Code, Header]:
    return parse_code(_read(path), path)


def read_system(path) -> tuple[TuranSystem, Header]:
    return parse_system(_read(path), path)


def read_packing(path) -> tuple[list[tuple[int, ...]], Header]:
    return parse_packing(_read(path), path)


def format_rows(head: Header, rows: Iterable[Sequence[int]]) -> str:
    body = "".join(" ".join(map(str, row)) + "\n" for row in sorted(tuple(r) for r in rows))
    return head.line() + "\n" + body


def format_code(c: Code, k: int) -> str:
    return format_rows(Header(c.n, k, c.r), c.words)


def format_system(t: TuranSystem, k: int) -> str:
    return format_rows(Header(t.n, k, t.r), t.sets)


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
