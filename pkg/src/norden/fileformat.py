"""Line-oriented structure files: parsing and canonical export.

Grammar (1-based indices; ``#`` starts a comment, blank lines ignored):

    dim <2n>                 required first non-comment line
    scalar rational|float    optional, default rational
    C <i> <j> <k> <value>    structure constant C^k_ij; antisymmetric
                             counterpart is filled in automatically
    g <i> <j> <value>        metric entry, symmetric fill
    J <i> <j> <value>        endomorphism entry J^i_j (row i = output)

Values are signed integers or ``p/q`` rationals; decimal literals are
accepted in float mode only.  Omitted entries are zero.  Conflicting
duplicates (directly or via the symmetry fills) are parse errors carrying
both line numbers.  ``export_text`` emits the canonical serialization:
sorted nonzero entries, C with i<j only, g upper triangle, J row-major.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .tensor import DOWN, FLOAT, RATIONAL, FrameTensor, Scalar, UP

_INT_RE = re.compile(r"[+-]?\d+\Z")
_RAT_RE = re.compile(r"([+-]?\d+)/(\d+)\Z")
_FLOAT_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\Z")


@dataclass
class RawStructure:
    """Parsed but unvalidated file contents.  Indices are 1-based."""

    dim: int
    mode: str = RATIONAL
    # entry -> (value, line_number of first definition)
    c_entries: dict[tuple[int, int, int], tuple[Scalar, int]] = field(default_factory=dict)
    g_entries: dict[tuple[int, int], tuple[Scalar, int]] = field(default_factory=dict)
    j_entries: dict[tuple[int, int], tuple[Scalar, int]] = field(default_factory=dict)

    def tensors(self) -> tuple[FrameTensor, FrameTensor, FrameTensor]:
        """(C, g, J) as 0-based FrameTensors; missing entries are zero."""
        d = self.dim
        zero = 0.0 if self.mode == FLOAT else 0

        def c_at(k, i, j):
            return self.c_entries.get((i + 1, j + 1, k + 1), (zero, 0))[0]

        def g_at(i, j):
            return self.g_entries.get((i + 1, j + 1), (zero, 0))[0]

        def j_at(i, j):
            return self.j_entries.get((i + 1, j + 1), (zero, 0))[0]

        C = FrameTensor.build(d, (UP, DOWN, DOWN), c_at)
        g = FrameTensor.build(d, (DOWN, DOWN), g_at)
        J = FrameTensor.build(d, (UP, DOWN), j_at)
        return C, g, J


def parse_value(token: str, mode: str, line_no: int) -> Scalar:
    if _INT_RE.match(token):
        return float(token) if mode == FLOAT else int(token)
    m = _RAT_RE.match(token)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {token!r}", (line_no,))
        return num / den if mode == FLOAT else Fraction(num, den)
    if mode == FLOAT and _FLOAT_RE.match(token):
        return float(token)
    raise ParseError(f"bad value {token!r}", (line_no,))


def _parse_index(token: str, dim: int, line_no: int) -> int:
    if not token.isdigit():
        raise ParseError(f"bad index {token!r}", (line_no,))
    i = int(token)
    if not 1 <= i <= dim:
        raise ParseError(f"index {i} out of range 1..{dim}", (line_no,))
    return i


def _strip(line: str) -> str:
    hash_pos = line.find("#")
    if hash_pos >= 0:
        line = line[:hash_pos]
    return line.strip()


def parse_text(text: str) -> RawStructure:
    lines = text.splitlines()
    body: list[tuple[int, list[str]]] = []
    for no, line in enumerate(lines, start=1):
        stripped = _strip(line)
        if stripped:
            body.append((no, stripped.split()))

    if not body:
        raise ParseError("empty input", ())
    no, fields = body[0]
    if fields[0] != "dim" or len(fields) != 2 or not fields[1].isdigit():
        raise ParseError("first line must be 'dim <2n>'", (no,))
    dim = int(fields[1])
    if dim <= 0:
        raise ParseError("dimension must be positive", (no,))

    # Mode can appear anywhere; resolve it before parsing any values.
    mode = RATIONAL
    mode_line = None
    for no, fields in body[1:]:
        if fields[0] == "scalar":
            if len(fields) != 2 or fields[1] not in (RATIONAL, FLOAT):
                raise ParseError("scalar line must be 'scalar rational|float'", (no,))
            if mode_line is not None:
                raise ParseError("duplicate scalar line", (mode_line, no))
            mode, mode_line = fields[1], no

    raw = RawStructure(dim=dim, mode=mode)

    def put(table, key, value, no, label):
        if key in table:
            old_value, old_no = table[key]
            if old_value != value:
                raise ParseError(
                    f"conflicting duplicate {label} entry {key}", (old_no, no))
            return
        table[key] = (value, no)

    for no, fields in body[1:]:
        kind = fields[0]
        if kind == "scalar":
            continue
        if kind == "dim":
            raise ParseError("duplicate dim line", (body[0][0], no))
        if kind == "C":
            if len(fields) != 5:
                raise ParseError("C line needs 'C <i> <j> <k> <value>'", (no,))
            i, j, k = (_parse_index(t, dim, no) for t in fields[1:4])
            v = parse_value(fields[4], mode, no)
            put(raw.c_entries, (i, j, k), v, no, "C")
            put(raw.c_entries, (j, i, k), -v, no, "C")
        elif kind == "g":
            if len(fields) != 4:
                raise ParseError("g line needs 'g <i> <j> <value>'", (no,))
            i, j = (_parse_index(t, dim, no) for t in fields[1:3])
            v = parse_value(fields[3], mode, no)
            put(raw.g_entries, (i, j), v, no, "g")
            put(raw.g_entries, (j, i), v, no, "g")
        elif kind == "J":
            if len(fields) != 4:
                raise ParseError("J line needs 'J <i> <j> <value>'", (no,))
            i, j = (_parse_index(t, dim, no) for t in fields[1:3])
            v = parse_value(fields[3], mode, no)
            put(raw.j_entries, (i, j), v, no, "J")
        else:
            raise ParseError(f"unknown directive {kind!r}", (no,))
    return raw


def parse_file(path) -> RawStructure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read())


# ---------------------------------------------------------------------------
# Canonical export
# ---------------------------------------------------------------------------

def format_value(v: Scalar, mode: str) -> str:
    if mode == FLOAT:
        return repr(float(v))
    if isinstance(v, float):
        v = Fraction(v)
    return str(v)


def export_text(structure) -> str:
    """Canonical serialization; ``parse(export(s))`` reproduces ``s`` exactly."""
    d = structure.dim
    mode = structure.mode
    C = structure.frame.C
    g = structure.metric.g
    J = structure.J
    out = [f"dim {d}", f"scalar {mode}"]
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                v = C[k, i, j]
                if v != 0:
                    out.append(f"C {i + 1} {j + 1} {k + 1} {format_value(v, mode)}")
    for i in range(d):
        for j in range(i, d):
            v = g[i, j]
            if v != 0:
                out.append(f"g {i + 1} {j + 1} {format_value(v, mode)}")
    for i in range(d):
        for j in range(d):
            v = J[i, j]
            if v != 0:
                out.append(f"J {i + 1} {j + 1} {format_value(v, mode)}")
    return "\n".join(out) + "\n"


def write_file(structure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(export_text(structure))
