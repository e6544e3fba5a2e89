"""Dense exact rational matrices: just enough linear algebra for block checks.

Matrices are small (block sizes stay below ~20), so everything is plain
row-major tuples of Fractions. Nullspaces are computed fraction-free: rows are
cleared to integers and eliminated Bareiss-style, so only exact integer
divisions occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

__all__ = ["RatMat", "nullspace", "rank", "inverse"]


@dataclass(frozen=True)
class RatMat:
    rows: int
    cols: int
    a: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Fraction]], cols: int | None = None) -> "RatMat":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else (cols if cols is not None else 0)
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        return RatMat(len(data), ncols, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "RatMat":
        z = Fraction(0)
        return RatMat(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "RatMat":
        return RatMat.build(n, n, lambda i, j: Fraction(i == j))

    @staticmethod
    def build(rows: int, cols: int, f: Callable[[int, int], Fraction]) -> "RatMat":
        return RatMat(rows, cols,
                      tuple(tuple(Fraction(f(i, j)) for j in range(cols))
                            for i in range(rows)))

    def entry(self, i: int, j: int) -> Fraction:
        return self.a[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.a)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.a for x in row)

    def __add__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other)
        return RatMat(self.rows, self.cols,
                      tuple(tuple(x + y for x, y in zip(r, s))
                            for r, s in zip(self.a, other.a)))

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other)
        return RatMat(self.rows, self.cols,
                      tuple(tuple(x - y for x, y in zip(r, s))
                            for r, s in zip(self.a, other.a)))

    def __neg__(self) -> "RatMat":
        return RatMat(self.rows, self.cols,
                      tuple(tuple(-x for x in r) for r in self.a))

    def scaled(self, s: Fraction) -> "RatMat":
        s = Fraction(s)
        return RatMat(self.rows, self.cols,
                      tuple(tuple(s * x for x in r) for r in self.a))

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ "
                             f"{other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Fraction(0)
                for k in range(self.cols):
                    acc += self.a[i][k] * other.a[k][j]
                row.append(acc)
            out.append(tuple(row))
        return RatMat(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((self.a[i][k] * vec[k] for k in range(self.cols)),
                         Fraction(0)) for i in range(self.rows))

    def transpose(self) -> "RatMat":
        return RatMat(self.cols, self.rows,
                      tuple(tuple(self.a[i][j] for i in range(self.rows))
                            for j in range(self.cols)))

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.a]

    def _same_shape(self, other: "RatMat") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")


def _integer_echelon(m: RatMat) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (rows, pivot column list)."""
    work: list[list[int]] = []
    for row in m.a:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        work.append([int(x * scale) for x in row])
    piv_cols: list[int] = []
    r = 0
    prev = 1
    for c in range(m.cols):
        pr = next((i for i in range(r, m.rows) if work[i][c] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        for i in range(r + 1, m.rows):
            head = work[i][c]
            for j in range(c + 1, m.cols):
                val = work[r][c] * work[i][j] - head * work[r][j]
                quot, rem = divmod(val, prev)
                assert rem == 0, "inexact division in fraction-free elimination"
                work[i][j] = quot
            work[i][c] = 0
        prev = work[r][c]
        piv_cols.append(c)
        r += 1
        if r == m.rows:
            break
    return work, piv_cols


def rank(m: RatMat) -> int:
    return len(_integer_echelon(m)[1])


def nullspace(m: RatMat) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {v : m v = 0}, one vector per free column."""
    work, piv_cols = _integer_echelon(m)
    pivset = set(piv_cols)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for i in reversed(range(len(piv_cols))):
            pc = piv_cols[i]
            s = sum((work[i][j] * v[j] for j in range(pc + 1, m.cols)),
                    Fraction(0))
            v[pc] = -s / work[i][pc]
        basis.append(tuple(v))
    return basis


def inverse(m: RatMat) -> RatMat:
    """Inverse of a square nonsingular matrix by Gauss-Jordan elimination."""
    if m.rows != m.cols:
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    left = [list(row) for row in m.a]
    right = [[Fraction(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        pr = next((i for i in range(c, n) if left[i][c] != 0), None)
        if pr is None:
            raise ValueError("matrix is singular")
        left[c], left[pr] = left[pr], left[c]
        right[c], right[pr] = right[pr], right[c]
        piv = left[c][c]
        left[c] = [x / piv for x in left[c]]
        right[c] = [x / piv for x in right[c]]
        for i in range(n):
            if i == c or left[i][c] == 0:
                continue
            f = left[i][c]
            left[i] = [x - f * y for x, y in zip(left[i], left[c])]
            right[i] = [x - f * y for x, y in zip(right[i], right[c])]
    return RatMat.from_rows(right)
