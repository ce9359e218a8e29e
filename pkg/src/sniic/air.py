"""Adjacent Independent Row (AIR) matrices.

An m x n AIR matrix (m >= n) is a 0/1 matrix in which every n cyclically
adjacent rows are linearly independent over every field. ``build_air`` uses a
mutual recursion between two block shapes:

* tall  (m >= n): stacked copies of I_n, followed by a wide block for the
  remainder rows;
* wide  (r < c):  horizontally repeated I_r, followed on the right by a tall
  block for the remainder columns.

Each level of the recursion is one step of Euclid's algorithm on (m, n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Sequence, Tuple, Union

from sniic.errors import InvalidDims, InvalidInput, NotDivisible, SchemaError
from sniic.galois import GF2, FieldMatrix, PrimeField, rank_rows

GF3 = PrimeField(3)
DEFAULT_TEST_FIELDS: Tuple[PrimeField, ...] = (GF2, GF3)

Rows = List[List[int]]


@dataclass(frozen=True)
class EuclidChain:
    """Remainder chain lambda_0 > lambda_1 > ... > lambda_l = gcd(m, n).

    ``stripped`` counts the leading I_n blocks removed so that
    lambda_0 = m' - n <= n, where m' = m - stripped * n.
    """

    lam: Tuple[int, ...]
    beta: Tuple[int, ...]
    l: int
    stripped: int = 0


@dataclass(frozen=True)
class AirMatrix:
    m: int
    n: int
    matrix: FieldMatrix

    def __post_init__(self) -> None:
        if not 1 <= self.n <= self.m:
            raise InvalidDims(f"AIR matrix needs m >= n >= 1, got {self.m}x{self.n}")
        if self.matrix.shape != (self.m, self.n):
            raise InvalidDims(f"matrix shape {self.matrix.shape} != ({self.m}, {self.n})")
        if any(e not in (0, 1) for e in self.matrix.entries):
            raise InvalidInput("AIR matrix entries must be 0/1")

    def rows(self) -> List[Tuple[int, ...]]:
        return self.matrix.to_rows()

    def to_text(self) -> str:
        return str(self.matrix) + "\n"

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "n": self.n, "rows": [list(r) for r in self.rows()]})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> AirMatrix:
        if any(v not in (0, 1) for r in rows for v in r):
            raise InvalidInput("AIR matrix entries must be 0/1")
        M = FieldMatrix.from_rows(rows, GF2)
        return cls(M.rows, M.cols, M)

    @classmethod
    def from_text(cls, text: str) -> AirMatrix:
        rows = [[int(tok) for tok in line.split()] for line in text.splitlines() if line.strip()]
        if not rows:
            raise SchemaError("empty matrix text")
        return cls.from_rows(rows)

    @classmethod
    def from_json(cls, text: str) -> AirMatrix:
        try:
            doc = json.loads(text)
            m, n, rows = doc["m"], doc["n"], doc["rows"]
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(f"bad AIR matrix JSON: {exc}") from None
        air = cls.from_rows(rows)
        if (air.m, air.n) != (m, n):
            raise SchemaError(f"declared {m}x{n} but rows are {air.m}x{air.n}")
        return air


def _stacked(a: int, b: int) -> Rows:
    return [[int(j == i % b) for j in range(b)] for i in range(a)]


def stacked_identity(a: int, b: int) -> FieldMatrix:
    """a x b matrix of a/b vertically stacked b x b identities."""
    if a < 1 or b < 1:
        raise InvalidDims(f"positive dimensions required, got {a}x{b}")
    if a % b:
        raise NotDivisible(f"{b} does not divide {a}")
    return FieldMatrix.from_rows(_stacked(a, b), GF2, cols=b)


def euclid_chain(m: int, n: int) -> EuclidChain:
    if not 1 <= n < m:
        raise InvalidDims(f"euclid_chain needs m > n >= 1, got ({m}, {n})")
    stripped = 0
    while m - n > n:
        m -= n
        stripped += 1
    prev, cur = n, m - n
    lam, beta = [cur], []
    while True:
        q, r = divmod(prev, cur)
        beta.append(q)
        if r == 0:
            break
        lam.append(r)
        prev, cur = cur, r
    return EuclidChain(tuple(lam), tuple(beta), len(lam) - 1, stripped)


def _tall(m: int, n: int) -> Rows:
    k, rho = divmod(m, n)
    top = _stacked(k * n, n)
    if rho == 0:
        return top
    return top + _wide(rho, n)


def _wide(r: int, c: int) -> Rows:
    k, rho = divmod(c, r)
    left = [list(col) for col in zip(*_stacked(k * r, r))]
    if rho == 0:
        return left
    return [lft + rgt for lft, rgt in zip(left, _tall(r, rho))]


@lru_cache(maxsize=512)
def build_air(m: int, n: int) -> AirMatrix:
    if not (isinstance(m, int) and isinstance(n, int)) or not 1 <= n <= m:
        raise InvalidDims(f"AIR matrix needs m >= n >= 1, got {m}x{n}")
    M = FieldMatrix.from_rows(_tall(m, n), GF2, cols=n)
    return AirMatrix(m, n, M)


def _as_rows(M: Union[AirMatrix, FieldMatrix]) -> List[Tuple[int, ...]]:
    return (M.matrix if isinstance(M, AirMatrix) else M).to_rows()


def window_violations(M: Union[AirMatrix, FieldMatrix], cyclic: bool = True,
                      fields: Sequence[PrimeField] = DEFAULT_TEST_FIELDS) -> List[Tuple[int, int]]:
    """(start row, q) for every n-row window that is rank deficient."""
    rows = _as_rows(M)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    starts = range(m) if cyclic else range(m - n + 1)
    bad = []
    for F in fields:
        for i in starts:
            if rank_rows([rows[(i + s) % m] for s in range(n)], F) < n:
                bad.append((i, F.q))
    return bad


def check_adjacent_independence(M: Union[AirMatrix, FieldMatrix], cyclic: bool = True,
                                fields: Sequence[PrimeField] = DEFAULT_TEST_FIELDS) -> bool:
    return not window_violations(M, cyclic, fields)


def span_exclusion_sets(m: int, n: int, k: int, orientation: str = "preceding") -> List[int]:
    """Row indices whose span must exclude row k.

    "preceding": n-1 rows with lower indices and gcd(m, n)-1 rows with higher
    indices, cyclic mod m. "following" mirrors the two sides.
    """
    g = gcd(m, n)
    if orientation == "preceding":
        wide, narrow = -1, 1
    elif orientation == "following":
        wide, narrow = 1, -1
    else:
        raise InvalidInput(f"unknown orientation {orientation!r}")
    idx = {(k + wide * s) % m for s in range(1, n)} | {(k + narrow * s) % m for s in range(1, g)}
    idx.discard(k)
    return sorted(idx)


def span_violations(M: Union[AirMatrix, FieldMatrix], orientation: str = "preceding",
                    fields: Sequence[PrimeField] = DEFAULT_TEST_FIELDS) -> List[Tuple[int, int]]:
    rows = _as_rows(M)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    bad = []
    for F in fields:
        for k in range(m):
            others = [rows[i] for i in span_exclusion_sets(m, n, k, orientation)]
            base = rank_rows(others, F)
            if rank_rows(others + [rows[k]], F) == base:
                bad.append((k, F.q))
    return bad


def check_span_exclusion(M: Union[AirMatrix, FieldMatrix], orientation: str = "preceding",
                         fields: Sequence[PrimeField] = DEFAULT_TEST_FIELDS) -> bool:
    return not span_violations(M, orientation, fields)
