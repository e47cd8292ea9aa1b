"""Reader and writer for the ``.crn`` network text format.

Line-oriented, ``#`` starts a comment::

    species P T C
    rxn P + T <-> C          # reaction notation
    rxn C -> 0
    edge (-2.3,0,0) -> (-1.3,0.3,0)   # raw vertex coordinates
    vertex (1,1,1)           # isolated vertex (rarely needed)
    epsilon 0.5

Numbers are decimal literals (scientific notation allowed) or ``p/q``
rationals, and are read exactly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .egraph import EGraph, GraphError

_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_NUM_RE = re.compile(_NUM)
_NAME_RE = re.compile(_NAME)
_TERM_RE = re.compile(rf"\s*(?P<coef>{_NUM})?\s*(?P<name>{_NAME})\s*")
_VEC_RE = re.compile(r"\s*\(([^()]*)\)\s*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message, self.line, self.column = message, line, column


@dataclass(frozen=True)
class NetworkDocument:
    species: tuple[str, ...]
    graph: EGraph
    epsilon: Fraction | None = None


def parse_number(text: str) -> Fraction:
    if not _NUM_RE.fullmatch(text.strip()):
        raise ValueError(f"not a number: {text!r}")
    return Fraction(text.strip())


def format_number(x) -> str:
    """Shortest exact literal: integer, terminating decimal, or p/q."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d, k2, k5 = x.denominator, 0, 0
    while d % 2 == 0:
        d //= 2
        k2 += 1
    while d % 5 == 0:
        d //= 5
        k5 += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    k = max(k2, k5)
    digits = str(abs(x.numerator) * 10**k // x.denominator).rjust(k + 1, "0")
    out = f"{digits[:-k]}.{digits[-k:]}"
    return "-" + out if x < 0 else out


def _split_arrow(body: str, line_no: int, offset: int):
    for arrow in ("<->", "->"):
        idx = body.find(arrow)
        if idx >= 0:
            return body[:idx], arrow, body[idx + len(arrow):], offset + idx
    raise ParseError("expected '->' or '<->'", line_no, offset + 1)


def _parse_complex(text: str, line_no: int, col: int) -> dict[str, Fraction]:
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty complex", line_no, col)
    if stripped == "0":
        return {}
    out: dict[str, Fraction] = {}
    pos = 0
    while True:
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"malformed term in complex {stripped!r}", line_no, col + pos)
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if coef < 0:
            raise ParseError("negative stoichiometric coefficient", line_no, col + m.start("coef"))
        out[m.group("name")] = out.get(m.group("name"), Fraction(0)) + coef
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise ParseError(f"unexpected character {text[pos]!r}", line_no, col + pos)
        pos += 1
    return out


def _parse_vector(text: str, line_no: int, col: int) -> tuple[Fraction, ...]:
    m = _VEC_RE.fullmatch(text)
    if not m:
        raise ParseError("expected a parenthesised coordinate list", line_no, col)
    parts = m.group(1).split(",")
    out = []
    for p in parts:
        try:
            out.append(parse_number(p))
        except ValueError:
            raise ParseError(f"bad coordinate {p.strip()!r}", line_no, col + m.start(1)) from None
    return tuple(out)


def parse_document(text: str) -> NetworkDocument:
    species: list[str] | None = None
    epsilon = None
    pairs: list[tuple[tuple, tuple, int]] = []
    isolated: list[tuple] = []
    dim = None

    def check_dim(v, line_no, col):
        nonlocal dim
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise ParseError(f"dimension mismatch: expected {dim} coordinates, got {len(v)}",
                             line_no, col)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        keyword, _, rest = line.strip().partition(" ")
        rest_col = indent + len(keyword) + 2
        if keyword == "species":
            if species is not None:
                raise ParseError("species declared twice", line_no, indent + 1)
            names = rest.split()
            if not names:
                raise ParseError("species list is empty", line_no, rest_col)
            for name in names:
                if not _NAME_RE.fullmatch(name):
                    raise ParseError(f"invalid species name {name!r}", line_no,
                                     rest_col + rest.find(name))
            if len(set(names)) != len(names):
                raise ParseError("duplicate species name", line_no, rest_col)
            if pairs or isolated:
                raise ParseError("species must be declared before edges", line_no, indent + 1)
            species = names
            dim = len(names)
        elif keyword == "rxn":
            lhs, arrow, rhs, acol = _split_arrow(rest, line_no, rest_col - 1)
            left = _parse_complex(lhs, line_no, rest_col)
            right = _parse_complex(rhs, line_no, acol + len(arrow) + 1)
            if {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}:
                raise ParseError("zero edge vector (identical complexes)", line_no, rest_col)
            if species is None:
                raise ParseError("reaction notation requires a species declaration", line_no,
                                 indent + 1)
            for name in list(left) + list(right):
                if name not in species:
                    raise ParseError(f"undeclared species {name!r}", line_no,
                                     rest_col + rest.find(name))
            s = tuple(left.get(n, Fraction(0)) for n in species)
            t = tuple(right.get(n, Fraction(0)) for n in species)
            pairs.append((s, t, line_no))
            if arrow == "<->":
                pairs.append((t, s, line_no))
        elif keyword == "edge":
            lhs, arrow, rhs, acol = _split_arrow(rest, line_no, rest_col - 1)
            s = _parse_vector(lhs, line_no, rest_col)
            t = _parse_vector(rhs, line_no, acol + len(arrow) + 1)
            check_dim(s, line_no, rest_col)
            check_dim(t, line_no, acol + len(arrow) + 1)
            if s == t:
                raise ParseError("zero edge vector", line_no, rest_col)
            pairs.append((s, t, line_no))
            if arrow == "<->":
                pairs.append((t, s, line_no))
        elif keyword == "vertex":
            v = _parse_vector(rest, line_no, rest_col)
            check_dim(v, line_no, rest_col)
            isolated.append(v)
        elif keyword == "epsilon":
            try:
                epsilon = parse_number(rest)
            except ValueError:
                raise ParseError(f"bad epsilon {rest.strip()!r}", line_no, rest_col) from None
            if not 0 < epsilon <= 1:
                raise ParseError("epsilon must lie in (0, 1]", line_no, rest_col)
        else:
            raise ParseError(f"unknown statement {keyword!r}", line_no, indent + 1)

    if dim is None:
        raise ParseError("no species declaration and no coordinates: dimension unknown", 1, 1)
    seen: dict[tuple, int] = {}
    for s, t, line_no in pairs:
        if (s, t) in seen:
            raise ParseError(f"duplicate edge (first declared on line {seen[(s, t)]})", line_no)
        seen[(s, t)] = line_no
    names = tuple(species) if species else tuple(f"x{i + 1}" for i in range(dim))
    try:
        graph = EGraph.from_edges([(s, t) for s, t, _ in pairs], dim=dim, species=names,
                                  extra_vertices=isolated)
    except GraphError as exc:
        raise ParseError(str(exc), 1) from exc
    return NetworkDocument(names, graph, epsilon)


def parse_network(text: str) -> EGraph:
    """Parse ``.crn`` text into an :class:`EGraph`."""
    return parse_document(text).graph


def load_network(path) -> NetworkDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def _vec(v) -> str:
    return "(" + ",".join(format_number(c) for c in v) + ")"


def serialize_network(G: EGraph, epsilon=None) -> str:
    """Canonical vector-notation text; ``parse_network`` inverts it exactly."""
    lines = ["species " + " ".join(G.species_names())]
    for s, t in sorted(G.edge_coords()):
        lines.append(f"edge {_vec(s)} -> {_vec(t)}")
    used = {v for pair in G.edge_coords() for v in pair}
    for v in sorted(set(G.vertices) - used):
        lines.append(f"vertex {_vec(v)}")
    if epsilon is not None:
        lines.append(f"epsilon {format_number(epsilon)}")
    return "\n".join(lines) + "\n"
