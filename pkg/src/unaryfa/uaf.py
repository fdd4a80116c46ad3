"""Line-based text format for unary automata (UAF v1)."""

from __future__ import annotations

from typing import Union

from .core import Bits, ChrobakNF, UnaryNfa
from .errors import FormatError


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _ints(words, what):
    try:
        return [int(w) for w in words]
    except ValueError:
        raise FormatError(f"bad integer in {what} line: {' '.join(words)}") from None


def parse_uaf(text: str) -> Union[UnaryNfa, ChrobakNF]:
    rows = list(_lines(text))
    if len(rows) < 2 or rows[0] != ["uaf", "1"]:
        raise FormatError("expected header 'uaf 1'")
    if rows[1][0] != "kind" or len(rows[1]) != 2:
        raise FormatError("expected 'kind nfa' or 'kind chrobak' on line 2")
    kind = rows[1][1]
    body = rows[2:]
    if kind == "nfa":
        return _parse_nfa(body)
    if kind == "chrobak":
        return _parse_chrobak(body)
    raise FormatError(f"unknown kind {kind!r}")


def _parse_nfa(rows) -> UnaryNfa:
    n = None
    starts, accepts, edges = set(), set(), []
    for row in rows:
        key, rest = row[0], row[1:]
        if key == "states":
            if len(rest) != 1:
                raise FormatError("'states' takes one count")
            n = _ints(rest, key)[0]
        elif key == "start":
            starts.update(_ints(rest, key))
        elif key == "accept":
            accepts.update(_ints(rest, key))
        elif key == "edge":
            if len(rest) != 2:
                raise FormatError("'edge' takes two state ids")
            edges.append(tuple(_ints(rest, key)))
        else:
            raise FormatError(f"unknown nfa line {key!r}")
    if n is None:
        raise FormatError("missing 'states' line")
    try:
        return UnaryNfa.from_edges(n, starts, accepts, edges)
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from exc


def _parse_chrobak(rows) -> ChrobakNF:
    stem = None
    cycles = []
    for row in rows:
        key, rest = row[0], row[1:]
        if len(rest) != 1:
            raise FormatError(f"'{key}' takes one bit string")
        try:
            bits = Bits.from_str(rest[0])
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
        if key == "stem":
            if stem is not None:
                raise FormatError("more than one stem line")
            stem = bits
        elif key == "cycle":
            if bits.length == 0:
                raise FormatError("cycles must be non-empty")
            cycles.append(bits)
        else:
            raise FormatError(f"unknown chrobak line {key!r}")
    return ChrobakNF(stem or Bits(0, 0), tuple(cycles))


def print_uaf(a: Union[UnaryNfa, ChrobakNF]) -> str:
    if isinstance(a, ChrobakNF):
        lines = ["uaf 1", "kind chrobak", f"stem {a.stem or '-'}"]
        lines += [f"cycle {c}" for c in a.cycles]
    else:
        lines = ["uaf 1", "kind nfa", f"states {a.num_states}"]
        lines.append(" ".join(["start"] + [str(q) for q in sorted(a.starts)]))
        lines.append(" ".join(["accept"] + [str(q) for q in sorted(a.accepts)]))
        lines += [f"edge {u} {v}" for u, v in a.edges()]
    return "\n".join(lines) + "\n"
