"""Small dense matrices over one scalar backend."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from .numerics import PrecisionConfig, format_scalar, parse_scalar, to_decimal


def _normalize(value):
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (Fraction, Decimal)):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"unsupported matrix entry type {type(value).__name__}")


@dataclass(frozen=True)
class Matrix:
    """Row-major dense matrix; entries are all Fractions or all Decimals.

    ``note`` records where the matrix came from (basis and nodes, say) and
    takes no part in equality.
    """

    rows: tuple[tuple, ...]
    note: str = field(default="", compare=False)

    def __post_init__(self):
        rows = tuple(tuple(_normalize(v) for v in row) for row in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        kinds = {type(v) for r in rows for v in r}
        if len(kinds) > 1:
            raise TypeError("mixed rational and decimal entries")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], note: str = "") -> "Matrix":
        return cls(tuple(tuple(r) for r in rows), note)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        zero = Decimal(0) if isinstance(values[0], Decimal) else Fraction(0)
        return cls(tuple(tuple(values[i] if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def backend(self) -> str:
        return "decimal" if isinstance(self.rows[0][0], Decimal) else "rational"

    @property
    def is_rational(self) -> bool:
        return self.backend == "rational"

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)), self.note)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        return Matrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                            for r in self.rows))

    def __neg__(self) -> "Matrix":
        return self.map(lambda v: -v)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def map(self, fn) -> "Matrix":
        return Matrix(tuple(tuple(fn(v) for v in r) for r in self.rows), self.note)

    def abs(self) -> "Matrix":
        return self.map(abs)

    def scale_rows(self, factors: Sequence) -> "Matrix":
        return Matrix(tuple(tuple(f * v for v in r) for f, r in zip(factors, self.rows)), self.note)

    def to_decimal(self, cfg: PrecisionConfig) -> "Matrix":
        return self.map(lambda v: to_decimal(v, cfg))

    def entries(self):
        for r in self.rows:
            yield from r

    def is_nonnegative(self, tol=0) -> bool:
        return all(v >= -tol for v in self.entries())

    def dominates(self, other: "Matrix") -> bool:
        """True when ``|other[i, j]| <= self[i, j]`` for every entry."""
        return all(abs(c) <= a for r, s in zip(self.rows, other.rows) for a, c in zip(r, s))

    def norm_inf(self):
        """Maximum absolute row sum."""
        return max(sum(abs(v) for v in r) for r in self.rows)

    def norm_1(self):
        """Maximum absolute column sum."""
        return self.T.norm_inf()

    def row_sums(self) -> tuple:
        return tuple(sum(r) for r in self.rows)

    def to_json(self, cfg: PrecisionConfig | None = None) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "backend": self.backend,
            "data": [[format_scalar(v, cfg) for v in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        m = cls(tuple(tuple(parse_scalar(v) for v in r) for r in obj["data"]))
        if m.shape != (obj["rows"], obj["cols"]):
            raise ValueError("declared shape does not match data")
        if m.backend != obj.get("backend", m.backend):
            raise ValueError("declared backend does not match data")
        return m

    def __str__(self) -> str:
        body = "\n".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows)
        return f"Matrix {self.nrows}x{self.ncols} ({self.backend})\n{body}"
