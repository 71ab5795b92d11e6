"""Quivers, their doubles, dimension vectors, paths and cycles.

Conventions used throughout the package:

* Words compose left to right: in a word (w_1, ..., w_k) the target of w_i is
  the source of w_{i+1}, and a cycle additionally closes up,
  t(w_k) = s(w_1).  The base point of a cycle is s(w_1).
* The double of a quiver carries one reversed arrow ``a*`` per original arrow
  ``a``; the involution is stored explicitly (never recovered by string
  surgery), and the total order on the doubled arrows interleaves the pairs:
  a < a* < b < b* < ...  This order is what canonical rotations and the
  normal-form orderings downstream refer to.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class QuiverError(ValueError):
    pass


class QuiverFormatError(QuiverError):
    """Raised by the file parser, carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DimensionError(QuiverError):
    """A dimension vector does not fit the quiver (or a word's junctions)."""


@dataclass(frozen=True, eq=False)
class Quiver:
    name: str
    vertices: tuple[str, ...]
    arrows: tuple[str, ...]
    source: dict[str, str]
    target: dict[str, str]
    # involution on arrows; empty for a base (undoubled) quiver
    star: dict[str, str] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return (
            self.name == other.name
            and self.vertices == other.vertices
            and self.arrows == other.arrows
            and self.source == other.source
            and self.target == other.target
            and self.star == other.star
        )

    def __hash__(self):
        return hash((self.name, self.vertices, self.arrows))

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if not _NAME_RE.match(v):
                raise QuiverError(f"bad vertex name {v!r}")
            if v in seen:
                raise QuiverError(f"duplicate vertex {v!r}")
            seen.add(v)
        seen_a = set()
        for a in self.arrows:
            base = a[:-1] if a.endswith("*") else a
            if not _NAME_RE.match(base) or a.count("*") > 1:
                raise QuiverError(f"bad arrow name {a!r}")
            if a in seen_a:
                raise QuiverError(f"duplicate arrow {a!r}")
            seen_a.add(a)
            for end, where in ((self.source.get(a), "source"), (self.target.get(a), "target")):
                if end not in seen:
                    raise QuiverError(f"arrow {a!r} has unknown {where} {end!r}")
        for a, b in self.star.items():
            if self.star.get(b) != a:
                raise QuiverError(f"star map is not an involution at {a!r}")

    # --- basic queries -------------------------------------------------

    @property
    def is_doubled(self) -> bool:
        return bool(self.star)

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise QuiverError(f"unknown vertex {v!r}") from None

    def arrow_index(self, a: str) -> int:
        try:
            return self.arrows.index(a)
        except ValueError:
            raise QuiverError(f"unknown arrow {a!r}") from None

    def base_arrows(self) -> tuple[str, ...]:
        """The unstarred arrows (all arrows if the quiver is not doubled)."""
        if not self.is_doubled:
            return self.arrows
        return tuple(a for a in self.arrows if not a.endswith("*"))

    # --- doubling ------------------------------------------------------

    def double(self) -> "Quiver":
        if self.is_doubled:
            raise QuiverError("quiver is already doubled")
        arrows = []
        source = {}
        target = {}
        star = {}
        for a in self.arrows:
            rev = a + "*"
            if rev in self.arrows:
                raise QuiverError(f"arrow name {rev!r} already taken")
            arrows.extend([a, rev])
            source[a], target[a] = self.source[a], self.target[a]
            source[rev], target[rev] = self.target[a], self.source[a]
            star[a], star[rev] = rev, a
        return Quiver(self.name, self.vertices, tuple(arrows), source, target, star)

    # --- words and cycles ----------------------------------------------

    def validate_path(self, word: tuple[str, ...]) -> tuple[str, str]:
        """Check left-to-right composability; returns (start, end) vertices."""
        if not word:
            raise QuiverError("empty word needs an explicit base vertex")
        for a in word:
            if a not in self.source:
                raise QuiverError(f"unknown arrow {a!r}")
        for i in range(len(word) - 1):
            if self.target[word[i]] != self.source[word[i + 1]]:
                raise QuiverError(
                    f"word breaks at position {i + 1}: target of {word[i]!r} is "
                    f"{self.target[word[i]]!r} but source of {word[i + 1]!r} is "
                    f"{self.source[word[i + 1]]!r}"
                )
        return self.source[word[0]], self.target[word[-1]]

    def validate_cycle(self, word: tuple[str, ...]) -> str:
        """Check that word is a closed cycle; returns its base vertex s(w_1)."""
        start, end = self.validate_path(word)
        if end != start:
            raise QuiverError(
                f"word does not close up: ends at {end!r}, started at {start!r}"
            )
        return start

    def paths(self, max_len: int) -> list[tuple[str, tuple[str, ...]]]:
        """All paths of length <= max_len as (start_vertex, word); length-0
        paths are the vertex idempotents."""
        out = [(v, ()) for v in self.vertices]
        frontier = [((a,), self.source[a]) for a in self.arrows]
        length = 1
        while length <= max_len and frontier:
            out.extend((start, word) for word, start in frontier)
            nxt = []
            for word, start in frontier:
                tail = self.target[word[-1]]
                for a in self.arrows:
                    if self.source[a] == tail:
                        nxt.append((word + (a,), start))
            frontier = nxt
            length += 1
        return out

    def cycles(self, max_len: int) -> list[tuple[str, tuple[str, ...]]]:
        return [
            (start, word)
            for start, word in self.paths(max_len)
            if word and self.target[word[-1]] == start
        ]

    # --- numerics -------------------------------------------------------

    def p_value(self, dim: dict[str, int]) -> int:
        """1 + sum over arrows of d_s*d_t minus sum over vertices of d^2.

        Meant for a base quiver (on a double every pair would count twice).
        """
        total = 1
        for a in self.arrows:
            total += dim[self.source[a]] * dim[self.target[a]]
        for v in self.vertices:
            total -= dim[v] ** 2
        return total


def check_dim(quiver: Quiver, dim: dict[str, int]) -> dict[str, int]:
    """Validate a dimension vector against the quiver's vertex set."""
    missing = [v for v in quiver.vertices if v not in dim]
    extra = [v for v in dim if v not in quiver.vertices]
    if missing or extra:
        raise DimensionError(
            f"dimension vector mismatch: missing {missing}, unknown {extra}"
        )
    for v, d in dim.items():
        if not isinstance(d, int) or d < 1:
            raise DimensionError(f"dimension at {v!r} must be a positive integer")
    return dim


# --- builtin quivers -----------------------------------------------------


def jordan_quiver() -> Quiver:
    """One vertex, one loop."""
    return Quiver("jordan", ("v",), ("a",), {"a": "v"}, {"a": "v"})


def a2_quiver() -> Quiver:
    """Two vertices, one arrow v1 -> v2."""
    return Quiver("a2", ("v1", "v2"), ("a",), {"a": "v1"}, {"a": "v2"})


BUILTIN_QUIVERS = {"jordan": jordan_quiver, "a2": a2_quiver}


def builtin_quiver(name: str) -> Quiver:
    try:
        return BUILTIN_QUIVERS[name]()
    except KeyError:
        raise QuiverError(f"unknown builtin quiver {name!r}") from None


# --- file format ----------------------------------------------------------
#
#   # comments and blank lines are ignored
#   quiver NAME
#   vertices v1 v2 ...
#   arrow a v1 v2
#
# Arrows keep file order; the serializer writes exactly this shape, so
# parse(serialize(q)) == q.


def parse_quiver(text: str) -> Quiver:
    name = None
    vertices: list[str] = []
    arrows: list[str] = []
    source: dict[str, str] = {}
    target: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key, rest = fields[0], fields[1:]
        if key == "quiver":
            if name is not None:
                raise QuiverFormatError("repeated quiver line", lineno)
            if len(rest) != 1:
                raise QuiverFormatError("expected: quiver NAME", lineno)
            name = rest[0]
        elif key == "vertices":
            if vertices:
                raise QuiverFormatError("repeated vertices line", lineno)
            if not rest:
                raise QuiverFormatError("expected at least one vertex", lineno)
            vertices = rest
        elif key == "arrow":
            if len(rest) != 3:
                raise QuiverFormatError("expected: arrow NAME SOURCE TARGET", lineno)
            a, s, t = rest
            arrows.append(a)
            source[a], target[a] = s, t
        else:
            raise QuiverFormatError(f"unknown directive {key!r}", lineno)
    if not vertices:
        raise QuiverFormatError("no vertices line", len(text.splitlines()) or 1)
    try:
        return Quiver(name or "Q", tuple(vertices), tuple(arrows), source, target)
    except QuiverError as exc:
        raise QuiverFormatError(str(exc), len(text.splitlines()) or 1) from exc


def serialize_quiver(q: Quiver) -> str:
    if q.is_doubled:
        raise QuiverError("serialize the base quiver, not its double")
    lines = [f"quiver {q.name}", "vertices " + " ".join(q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {a} {q.source[a]} {q.target[a]}")
    return "\n".join(lines) + "\n"
