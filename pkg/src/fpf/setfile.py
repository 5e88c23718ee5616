"""Text formats for point sets and pairs.

Set file::

    # optional comments
    p d
    x_1 ... x_d        (one element per line)

A pair file is two set files separated by a line ``---``; each section
carries its own ``p d`` header and the two headers must agree.
"""

from __future__ import annotations

from pathlib import Path

from fpf.core import Ambient, PointSet
from fpf.errors import DimensionMismatchError, SetFileError

SEPARATOR = "---"


def _data_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line))
    return out


def _ints(lineno: int, line: str) -> list[int]:
    try:
        return [int(tok, 10) for tok in line.split()]
    except ValueError:
        raise SetFileError(f"line {lineno}: expected base-10 integers, got {line!r}") from None


def _parse_section(lines: list[tuple[int, str]]) -> PointSet:
    if not lines:
        raise SetFileError("missing 'p d' header")
    lineno, header = lines[0]
    fields = _ints(lineno, header)
    if len(fields) != 2:
        raise SetFileError(f"line {lineno}: header must be 'p d'")
    try:
        ambient = Ambient(*fields)
    except ValueError as exc:
        raise SetFileError(f"line {lineno}: {exc}") from None
    seen: set[int] = set()
    for lineno, line in lines[1:]:
        coords = _ints(lineno, line)
        if len(coords) != ambient.d:
            raise SetFileError(f"line {lineno}: expected {ambient.d} residues")
        if any(not 0 <= c < ambient.p for c in coords):
            raise SetFileError(f"line {lineno}: residues must lie in [0, {ambient.p})")
        idx = ambient.vector(coords).index
        if idx in seen:
            raise SetFileError(f"line {lineno}: duplicate element {tuple(coords)}")
        seen.add(idx)
    return PointSet(ambient, tuple(seen))


def parse_set(text: str) -> PointSet:
    lines = _data_lines(text)
    if any(line == SEPARATOR for _, line in lines):
        raise SetFileError("unexpected '---' in a set file")
    return _parse_section(lines)


def parse_pair(text: str) -> tuple[PointSet, PointSet]:
    lines = _data_lines(text)
    cuts = [i for i, (_, line) in enumerate(lines) if line == SEPARATOR]
    if len(cuts) != 1:
        raise SetFileError("a pair file needs exactly one '---' separator")
    first = _parse_section(lines[: cuts[0]])
    second = _parse_section(lines[cuts[0] + 1 :])
    if first.ambient != second.ambient:
        raise DimensionMismatchError(
            f"pair sections disagree: {first.ambient.p} {first.ambient.d} "
            f"vs {second.ambient.p} {second.ambient.d}"
        )
    return first, second


def format_set(E: PointSet) -> str:
    lines = [f"{E.ambient.p} {E.ambient.d}"]
    lines += [" ".join(map(str, v.coords)) for v in E]
    return "\n".join(lines) + "\n"


def format_pair(E: PointSet, other: PointSet) -> str:
    return format_set(E) + SEPARATOR + "\n" + format_set(other)


def read_set(path: str | Path) -> PointSet:
    return parse_set(Path(path).read_text(encoding="utf-8"))


def read_pair(path: str | Path) -> tuple[PointSet, PointSet]:
    return parse_pair(Path(path).read_text(encoding="utf-8"))
