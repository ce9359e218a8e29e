"""Prime-field arithmetic and the dense linear-algebra kernel.

Matrix entries are stored as plain ints reduced mod q; FieldElement is the
checked scalar wrapper handed out at the API boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from sniic.errors import (
    DimensionMismatch,
    DivisionByZero,
    InconsistentSystem,
    InvalidInput,
    NotDecodable,
    SingularSystem,
)

Scalar = Union[int, "FieldElement"]


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(q) for prime q."""

    q: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise InvalidInput(f"field modulus must be prime, got {self.q!r}")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.q, self)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def elements(self) -> List[FieldElement]:
        return [FieldElement(v, self) for v in range(self.q)]

    # int-level helpers used by the hot paths
    def inv(self, value: int) -> int:
        value %= self.q
        if value == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        return pow(value, self.q - 2, self.q)

    def reduce(self, values: Iterable[Scalar]) -> Tuple[int, ...]:
        return tuple(_as_int(v, self) for v in values)


GF2 = PrimeField(2)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField = GF2

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise InvalidInput(f"{self.value} is not an element of {self.field!r}")

    def _coerce(self, other: Scalar) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidInput(f"mixed fields {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, int):
            return other % self.field.q
        return NotImplemented  # type: ignore[return-value]

    def _wrap(self, value: int) -> FieldElement:
        return FieldElement(value % self.field.q, self.field)

    def __add__(self, other: Scalar) -> FieldElement:
        return self._wrap(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> FieldElement:
        return self._wrap(self.value - self._coerce(other))

    def __rsub__(self, other: Scalar) -> FieldElement:
        return self._wrap(self._coerce(other) - self.value)

    def __mul__(self, other: Scalar) -> FieldElement:
        return self._wrap(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return self._wrap(-self.value)

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __truediv__(self, other: Scalar) -> FieldElement:
        return self._wrap(self.value * self.field.inv(self._coerce(other)))

    def __rtruediv__(self, other: Scalar) -> FieldElement:
        return self._wrap(self._coerce(other) * self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other % self.field.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.q))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


def _as_int(v: Scalar, field: PrimeField) -> int:
    if isinstance(v, FieldElement):
        if v.field != field:
            raise InvalidInput(f"element of {v.field!r} used in {field!r}")
        return v.value
    return int(v) % field.q


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def div(a: FieldElement, b: FieldElement) -> FieldElement:
    return a / b


def inverse(a: FieldElement) -> FieldElement:
    return a.inverse()


@dataclass(frozen=True)
class FieldMatrix:
    """Dense row-major matrix over a prime field. Immutable and hashable."""

    rows: int
    cols: int
    entries: Tuple[int, ...]
    field: PrimeField = GF2

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InvalidInput("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        q = self.field.q
        if any(not 0 <= e < q for e in self.entries):
            raise InvalidInput(f"matrix entry outside GF({q})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], field: PrimeField = GF2,
                  cols: int | None = None) -> FieldMatrix:
        rows = [field.reduce(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField = GF2) -> FieldMatrix:
        return cls(rows, cols, (0,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: PrimeField = GF2) -> FieldMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)), field)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[Tuple[int, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij: Tuple[int, int]) -> FieldElement:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return FieldElement(self.entries[i * self.cols + j], self.field)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix.from_rows(list(zip(*self.to_rows())), self.field, cols=self.rows)

    def select_rows(self, indices: Iterable[int]) -> FieldMatrix:
        return FieldMatrix.from_rows([self.row(i) for i in indices], self.field, cols=self.cols)

    def with_entry(self, i: int, j: int, value: Scalar) -> FieldMatrix:
        entries = list(self.entries)
        entries[i * self.cols + j] = _as_int(value, self.field)
        return FieldMatrix(self.rows, self.cols, tuple(entries), self.field)

    def over(self, field: PrimeField) -> FieldMatrix:
        """Reinterpret integer entries in another field (entries reduced mod its q)."""
        return FieldMatrix.from_rows(self.to_rows(), field, cols=self.cols)

    def vecmul(self, vec: Sequence[Scalar]) -> Tuple[int, ...]:
        """Row vector times matrix: ``vec @ self``."""
        if len(vec) != self.rows:
            raise DimensionMismatch(f"vector of length {len(vec)} vs {self.rows} rows")
        q, n = self.field.q, self.cols
        out = [0] * n
        for i, v in enumerate(self.field.reduce(vec)):
            if v:
                base = i * n
                for j in range(n):
                    e = self.entries[base + j]
                    if e:
                        out[j] += v * e
        return tuple(x % q for x in out)

    def matvec(self, vec: Sequence[Scalar]) -> Tuple[int, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} vs {self.cols} columns")
        x = self.field.reduce(vec)
        q = self.field.q
        return tuple(sum(a * b for a, b in zip(self.row(i), x)) % q for i in range(self.rows))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(e) for e in r) for r in self.to_rows())


def _rref(rows: List[List[int]], q: int, pivot_cols: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form in place; first-nonzero pivoting over columns < pivot_cols."""
    pivots: List[int] = []
    r = 0
    m = len(rows)
    for c in range(pivot_cols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        if pr[c] != 1:
            inv = pow(pr[c], q - 2, q)
            pr = rows[r] = [x * inv % q for x in pr]
        for i in range(m):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _rank_gf2(rows: Iterable[Sequence[int]]) -> int:
    basis: dict[int, int] = {}
    for row in rows:
        v = 0
        for bit in row:
            v = (v << 1) | (bit & 1)
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def rank_rows(rows: Sequence[Sequence[int]], field: PrimeField = GF2) -> int:
    """Rank of a list of int row vectors over ``field``."""
    if not rows:
        return 0
    if field.q == 2:
        return _rank_gf2(rows)
    work = [[x % field.q for x in r] for r in rows]
    return len(_rref(work, field.q, len(work[0]))[1])


def rank(M: FieldMatrix) -> int:
    return rank_rows(M.to_rows(), M.field)


def in_span(rows: Sequence[Sequence[int]], vec: Sequence[int], field: PrimeField = GF2) -> bool:
    return rank_rows(list(rows) + [vec], field) == rank_rows(rows, field)


def solve(A: FieldMatrix, y: Sequence[Scalar]) -> Tuple[FieldElement, ...]:
    """Unique x with A x = y.

    Raises InconsistentSystem when no solution exists and SingularSystem when
    A lacks full column rank.
    """
    F = A.field
    if len(y) != A.rows:
        raise DimensionMismatch(f"rhs of length {len(y)} for {A.rows} equations")
    x = _solve_ints(A.to_rows(), F.reduce(y), A.cols, F.q)
    return tuple(FieldElement(v, F) for v in x)


def _solve_ints(rows: Sequence[Sequence[int]], y: Sequence[int], n: int, q: int,
                unique: bool = True) -> List[int]:
    aug = [list(r) + [v] for r, v in zip(rows, y)]
    aug, pivots = _rref(aug, q, n + 1)
    if pivots and pivots[-1] == n:
        raise InconsistentSystem("right-hand side outside the column space")
    if unique and len(pivots) < n:
        raise SingularSystem(f"column rank {len(pivots)} < {n}")
    x = [0] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]  # free variables stay 0
    return x


def inverse_matrix(M: FieldMatrix) -> FieldMatrix:
    if M.rows != M.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n, q = M.rows, M.field.q
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.to_rows())]
    aug, pivots = _rref(aug, q, n)
    if len(pivots) < n:
        raise SingularSystem(f"rank {len(pivots)} < {n}")
    return FieldMatrix.from_rows([r[n:] for r in aug], M.field, cols=n)


def annihilator(interference_rows: Sequence[Sequence[Scalar]], wanted_row: Sequence[Scalar],
                field: PrimeField = GF2) -> Tuple[FieldElement, ...]:
    """Functional phi with phi.r = 0 on every interference row and phi.wanted = 1.

    Free coordinates of phi are set to zero, so the result is deterministic.
    """
    n = len(wanted_row)
    if any(len(r) != n for r in interference_rows):
        raise DimensionMismatch("rows of unequal length")
    eqs = [field.reduce(r) for r in interference_rows] + [field.reduce(wanted_row)]
    rhs = [0] * len(interference_rows) + [1]
    try:
        phi = _solve_ints(eqs, rhs, n, field.q, unique=False)
    except InconsistentSystem:
        raise NotDecodable("wanted row lies in the span of the interference rows") from None
    return tuple(FieldElement(v, field) for v in phi)


def dot(u: Sequence[Scalar], v: Sequence[Scalar], field: PrimeField = GF2) -> FieldElement:
    return FieldElement(sum(a * b for a, b in zip(field.reduce(u), field.reduce(v))) % field.q, field)
