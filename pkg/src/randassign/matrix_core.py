"""Cost matrices, generalized permutations and the exhaustive oracle.

Column indices are 0-based inside the library and 1-based in every external
format (CSV/JSON matrix files, CLI output).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Literal

import numpy as np

Objective = Literal["max", "min"]

ENUMERATION_CAP = 10**7

#: Marks a row left unmatched when an ``n > m`` problem is solved on its transpose.
UNASSIGNED = -1


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed."""


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Dense ``n x m`` matrix of finite reals stored row-major."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"cost matrix must be 2-D with n, m >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cost matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", np.ascontiguousarray(arr))

    @classmethod
    def from_flat(cls, n: int, m: int, data) -> CostMatrix:
        data = np.asarray(data, dtype=np.float64)
        if data.size != n * m:
            raise ValueError(f"expected {n * m} entries for a {n}x{m} matrix, got {data.size}")
        return cls(data.reshape(n, m))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __eq__(self, other):
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))

    def __neg__(self) -> CostMatrix:
        return CostMatrix(-self.entries)

    def __repr__(self):
        return f"CostMatrix(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GeneralizedPermutation:
    """Injective map rows -> columns, held as a 0-based column per row.

    When a problem with more rows than columns is solved through its
    transpose, surplus rows carry :data:`UNASSIGNED`.
    """

    assignment: tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(j) for j in self.assignment)
        used = [j for j in assignment if j != UNASSIGNED]
        if any(j < 0 for j in used):
            raise ValueError(f"negative column index in {assignment}")
        if len(set(used)) != len(used):
            raise ValueError(f"assignment {assignment} is not injective")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def from_one_based(cls, values) -> GeneralizedPermutation:
        return cls(tuple(UNASSIGNED if v is None or int(v) == 0 else int(v) - 1 for v in values))

    def one_based(self) -> list[int | None]:
        return [None if j == UNASSIGNED else j + 1 for j in self.assignment]

    def __len__(self):
        return len(self.assignment)

    def __iter__(self):
        return iter(self.assignment)

    def validate_against(self, matrix: CostMatrix) -> None:
        if len(self.assignment) != matrix.n:
            raise ValueError(
                f"permutation length {len(self.assignment)} does not match n={matrix.n}"
            )
        if any(j >= matrix.m for j in self.assignment):
            raise ValueError(f"column index out of range for m={matrix.m}")
        assigned = sum(j != UNASSIGNED for j in self.assignment)
        if assigned != min(matrix.n, matrix.m):
            raise ValueError(
                f"{assigned} rows assigned, expected {min(matrix.n, matrix.m)}"
            )


@dataclass(frozen=True)
class AssignmentResult:
    value: float
    permutation: GeneralizedPermutation
    objective: Objective = "max"
    extras: dict = field(default_factory=dict, compare=False)


def evaluate(matrix: CostMatrix, perm: GeneralizedPermutation) -> float:
    """Sum of the entries picked by ``perm``, accumulated in row order."""
    if not isinstance(perm, GeneralizedPermutation):
        perm = GeneralizedPermutation(tuple(perm))
    perm.validate_against(matrix)
    total = 0.0
    entries = matrix.entries
    for i, j in enumerate(perm.assignment):
        if j != UNASSIGNED:
            total += float(entries[i, j])
    return total


def injection_count(n: int, m: int) -> int:
    if n > m:
        return 0
    return math.perm(m, n)


def enumerate_injections(n: int, m: int, cap: int = ENUMERATION_CAP) -> Iterator[GeneralizedPermutation]:
    """Yield every injection ``[n] -> [m]`` once, in lexicographic order."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if n > m:
        raise ValueError(f"no injection exists from {n} rows into {m} columns")
    count = injection_count(n, m)
    if count > cap:
        raise EnumerationTooLarge(f"{count} injections exceed the enumeration cap {cap}")
    for combo in itertools.permutations(range(m), n):
        yield GeneralizedPermutation(combo)


def brute_force_optimum(matrix: CostMatrix, objective: Objective = "max", cap: int = ENUMERATION_CAP) -> AssignmentResult:
    """Exact optimum by enumeration; ties go to the lexicographically smallest array.

    A matrix with ``n > m`` is enumerated on its transpose and mapped back.
    """
    if objective not in ("max", "min"):
        raise ValueError(f"objective must be 'max' or 'min', got {objective!r}")
    if matrix.n > matrix.m:
        inner = brute_force_optimum(transpose(matrix), objective, cap)
        return AssignmentResult(inner.value, _invert(inner.permutation, matrix.n), objective)

    n, m = matrix.shape
    count = injection_count(n, m)
    if count > cap:
        raise EnumerationTooLarge(f"{count} injections exceed the enumeration cap {cap}")
    entries = matrix.entries
    sign = 1.0 if objective == "max" else -1.0
    best_val = -math.inf
    best = None
    for combo in itertools.permutations(range(m), n):
        total = 0.0
        for i, j in enumerate(combo):
            total += entries[i, j]
        if sign * total > best_val:
            best_val = sign * total
            best = combo
    perm = GeneralizedPermutation(best)
    return AssignmentResult(evaluate(matrix, perm), perm, objective)


def row_maxima_sum(matrix: CostMatrix) -> float:
    """Sum of row maxima; bounds ``S(pi)`` from above for every ``pi``."""
    total = 0.0
    for value in matrix.entries.max(axis=1):
        total += float(value)
    return total


def transpose(matrix: CostMatrix) -> CostMatrix:
    return CostMatrix(matrix.entries.T)


def _invert(perm: GeneralizedPermutation, n_rows: int) -> GeneralizedPermutation:
    # perm maps columns of the original (rows of the transpose) to original rows.
    out = [UNASSIGNED] * n_rows
    for col, row in enumerate(perm.assignment):
        if row != UNASSIGNED:
            out[row] = col
    return GeneralizedPermutation(tuple(out))


# ---------------------------------------------------------------- file formats


def parse_csv_matrix(text: str) -> CostMatrix:
    """One row per line, comma-separated decimal literals, no header."""
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = next(csv.reader([line]))
        row = []
        for colno, cell in enumerate(cells, start=1):
            try:
                value = float(cell.strip())
            except ValueError:
                raise MatrixFormatError(
                    f"line {lineno}, column {colno}: cannot parse {cell.strip()!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise MatrixFormatError(f"line {lineno}, column {colno}: non-finite value {cell.strip()!r}")
            row.append(value)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixFormatError(
                f"line {lineno}, column {min(len(row), width) + 1}: expected {width} values, got {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise MatrixFormatError("line 1, column 1: empty matrix")
    return CostMatrix(np.array(rows))


def parse_json_matrix(text: str) -> CostMatrix:
    """Object with fields ``n``, ``m`` and ``data`` (flat, row-major)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        n, m, data = int(doc["n"]), int(doc["m"]), doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix document needs integer n, m and a data array ({exc})") from None
    try:
        return CostMatrix.from_flat(n, m, [float(x) for x in data])
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(str(exc)) from None


def read_matrix(path, fmt: str | None = None) -> CostMatrix:
    path = Path(path)
    text = path.read_text()
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" or text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        return parse_json_matrix(text)
    if fmt == "csv":
        return parse_csv_matrix(text)
    raise ValueError(f"unknown matrix format {fmt!r}")


def format_csv_matrix(matrix: CostMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in matrix.entries:
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def format_json_matrix(matrix: CostMatrix) -> str:
    return json.dumps(
        {"n": matrix.n, "m": matrix.m, "data": [float(x) for x in matrix.entries.ravel()]}
    )
