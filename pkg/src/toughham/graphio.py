"""Plain-text edge lists and JSON certificate documents.

Graph files look like::

    # optional comments
    4 3
    0 1
    1 2
    2 3

Vertex-set files hold whitespace-separated vertex ids, comments allowed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import MalformedInput
from .graph import Graph


class ParseError(MalformedInput):
    """The text is not a well-formed graph or vertex-set file."""

    def __init__(self, message, line=None):
        super().__init__(message, witness={"line": line} if line is not None else None)
        self.line = line


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _ints(line: str, number: int, count: int) -> list[int]:
    fields = line.split()
    if len(fields) != count:
        raise ParseError(f"expected {count} integers, got {len(fields)}", number)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(f"non-integer field in {line!r}", number) from None


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    try:
        number, header = next(lines)
    except StopIteration:
        raise ParseError("missing header line 'n m'") from None
    n, m = _ints(header, number, 2)
    if n < 0 or m < 0:
        raise ParseError("n and m must be non-negative", number)
    seen = set()
    for number, line in lines:
        u, v = _ints(line, number, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range in edge {u} {v}", number)
        if u == v:
            raise ParseError(f"self-loop at {u}", number)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {u} {v}", number)
        seen.add(key)
    if len(seen) != m:
        raise ParseError(f"header promises {m} edges, found {len(seen)}")
    return Graph.from_edges(n, sorted(seen))


def format_graph(g: Graph, comment: str | None = None) -> str:
    edges = g.edges()
    out = [f"# {line}" for line in (comment or "").splitlines()]
    out.append(f"{g.n} {len(edges)}")
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def parse_vertex_set(text: str, n: int) -> list[int]:
    found = []
    for number, line in _content_lines(text):
        for field in line.split():
            try:
                v = int(field)
            except ValueError:
                raise ParseError(f"non-integer vertex {field!r}", number) from None
            if not 0 <= v < n:
                raise ParseError(f"vertex {v} out of range", number)
            found.append(v)
    if len(set(found)) != len(found):
        raise ParseError("vertex listed twice")
    return sorted(found)


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def read_graph(path) -> Graph:
    return parse_graph(_read(path))


def write_graph(path, g: Graph, comment: str | None = None) -> None:
    Path(path).write_text(format_graph(g, comment))


def read_vertex_set(path, n: int) -> list[int]:
    return parse_vertex_set(_read(path), n)


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)


def dump_document(doc: dict) -> str:
    return json.dumps(doc, default=_plain, indent=2, sort_keys=True)


def load_document(path) -> dict:
    try:
        doc = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"certificate is not JSON: {exc}") from None
    if not isinstance(doc, dict) or "query" not in doc or "result" not in doc:
        raise ParseError("certificate lacks query/result fields")
    return doc
