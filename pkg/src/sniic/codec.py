"""Encoders and per-receiver decoders for the three linear constructions.

* partitioned   - b-dimensional vector code, each of the tau symbol classes
                  encoded separately with a t x gamma AIR matrix;
* scalar_padded - scalar code from a (K+a) x (D+1+a+b) AIR matrix, with a
                  zero messages appended;
* scalar_du     - scalar code from a K x (D+U+1) AIR matrix.

Decoders only see the broadcast and an explicit side-information map
{message index: its b symbols}; anything outside the receiver's side
information is rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple, Union

from sniic.air import build_air
from sniic.errors import (
    ConditionViolated,
    DimensionMismatch,
    InvalidInput,
    MissingSideInfo,
    SchemaError,
    SingularSystem,
    SingularWindow,
)
from sniic.galois import FieldElement, FieldMatrix, PrimeField, annihilator, inverse_matrix
from sniic.suicp import (
    DuScheme,
    PartitionScheme,
    ScalarPadding,
    SniProblem,
    interference_set,
    scalar_condition,
    side_info_set,
)

PARTITIONED = "partitioned"
SCALAR_PADDED = "scalar_padded"
SCALAR_DU = "scalar_du"
SCHEME_TAGS = (PARTITIONED, SCALAR_PADDED, SCALAR_DU)

Scheme = Union[PartitionScheme, ScalarPadding, DuScheme]
SideInfo = Mapping[int, Union[int, Sequence[int]]]


@dataclass(frozen=True)
class MessageVector:
    """Kb message symbols in flat order: y_w = x_{w // b, w % b}."""

    q: int
    K: int
    b: int
    symbols: Tuple[int, ...]

    def __post_init__(self) -> None:
        PrimeField(self.q)
        if self.K < 1 or self.b < 1:
            raise InvalidInput("K and b must be positive")
        if len(self.symbols) != self.K * self.b:
            raise DimensionMismatch(f"{len(self.symbols)} symbols, expected K*b = {self.K * self.b}")
        if any(not 0 <= s < self.q for s in self.symbols):
            raise InvalidInput(f"symbol outside GF({self.q})")

    @classmethod
    def zeros(cls, K: int, b: int = 1, q: int = 2) -> MessageVector:
        return cls(q, K, b, (0,) * (K * b))

    @classmethod
    def basis(cls, K: int, b: int, w: int, q: int = 2) -> MessageVector:
        return cls(q, K, b, tuple(int(i == w) for i in range(K * b)))

    @classmethod
    def from_messages(cls, messages: Sequence[Sequence[int]], q: int = 2) -> MessageVector:
        b = len(messages[0])
        return cls(q, len(messages), b, tuple(int(s) % q for m in messages for s in m))

    def message(self, k: int) -> Tuple[int, ...]:
        return self.symbols[k * self.b:(k + 1) * self.b]

    def side_info(self, p: SniProblem, k: int) -> Dict[int, Tuple[int, ...]]:
        """What receiver k legitimately knows."""
        return {i: self.message(i) for i in sorted(side_info_set(p, k))}

    def to_dict(self) -> dict:
        return {"q": self.q, "K": self.K, "b": self.b, "symbols": list(self.symbols)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: Mapping) -> MessageVector:
        try:
            return cls(int(doc["q"]), int(doc["K"]), int(doc["b"]), tuple(int(s) for s in doc["symbols"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad message file: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> MessageVector:
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise SchemaError(f"message file is not JSON: {exc}") from None
        return cls.from_dict(doc)


@dataclass(frozen=True)
class Broadcast:
    q: int
    scheme: str
    N: int
    symbols: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.scheme not in SCHEME_TAGS:
            raise InvalidInput(f"unknown scheme tag {self.scheme!r}")
        if len(self.symbols) != self.N:
            raise DimensionMismatch(f"{len(self.symbols)} symbols, declared N={self.N}")
        if any(not 0 <= s < self.q for s in self.symbols):
            raise InvalidInput(f"symbol outside GF({self.q})")

    def to_dict(self) -> dict:
        return {"q": self.q, "scheme": self.scheme, "N": self.N, "symbols": list(self.symbols)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: Mapping) -> Broadcast:
        try:
            return cls(int(doc["q"]), str(doc["scheme"]), int(doc["N"]), tuple(int(s) for s in doc["symbols"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad broadcast file: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> Broadcast:
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise SchemaError(f"broadcast file is not JSON: {exc}") from None
        return cls.from_dict(doc)


@dataclass(frozen=True)
class DecodeTrace:
    receiver: int
    slot: int
    code_indices: FrozenSet[int]
    solved: Dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def touched(self) -> int:
        return len(self.code_indices)


def _combine(L: FieldMatrix, vec: Sequence[int], q: int) -> Tuple[int, ...]:
    n = L.cols
    out = [0] * n
    entries = L.entries
    for i, v in enumerate(vec):
        if v:
            base = i * n
            for j in range(n):
                if entries[base + j]:
                    out[j] += v * entries[base + j]
    return tuple(x % q for x in out)


def _lookup(side_info: SideInfo, allowed: FrozenSet[int], msg: int, slot: int, b: int) -> int:
    try:
        val = side_info[msg]
    except KeyError:
        raise MissingSideInfo(f"message {msg} needed but not supplied") from None
    if isinstance(val, (int, FieldElement)):
        if b != 1:
            raise DimensionMismatch(f"message {msg}: scalar given, {b} symbols expected")
        return int(val)
    if len(val) != b:
        raise DimensionMismatch(f"message {msg}: {len(val)} symbols, expected {b}")
    return int(val[slot])


def _check_side_info(p: SniProblem, k: int, side_info: SideInfo) -> FrozenSet[int]:
    allowed = side_info_set(p, k)
    if not allowed.issuperset(side_info):
        illegal = set(side_info) - allowed
        raise InvalidInput(f"receiver {k} cannot know messages {sorted(illegal)}")
    return allowed


@lru_cache(maxsize=4096)
def _window_inverse(L: FieldMatrix, start: int, q: int) -> Tuple[Tuple[int, ...], ...]:
    """Inverse of the square block of cyclically adjacent rows start..start+n-1."""
    n = L.cols
    W = FieldMatrix.from_rows([L.row((start + s) % L.rows) for s in range(n)], PrimeField(q), cols=n)
    try:
        return tuple(inverse_matrix(W).to_rows())
    except SingularSystem:
        raise SingularWindow(f"rows {start}..{start + n - 1} (mod {L.rows}) are dependent") from None


def _solve_window(L: FieldMatrix, start: int, residual: Sequence[int], q: int) -> List[int]:
    """Solve u W = residual where W is the row window starting at ``start``."""
    Winv = _window_inverse(L, start, q)
    n = L.cols
    return [sum(residual[s] * Winv[s][j] for s in range(n)) % q for j in range(n)]


# --- partitioned vector code ----------------------------------------------


def encode_partitioned(scheme: PartitionScheme, msg: MessageVector) -> Broadcast:
    p = scheme.problem
    if (msg.K, msg.b) != (p.K, scheme.b):
        raise DimensionMismatch(f"message is {msg.K}x{msg.b}, scheme expects {p.K}x{scheme.b}")
    q, tau, t, gamma = msg.q, scheme.tau, scheme.t, scheme.gamma
    L = scheme.L.matrix
    y = msg.symbols
    c = [0] * scheme.N
    for i in range(tau):
        part = _combine(L, [y[i + h * tau] for h in range(t)], q)
        for s in range(gamma):
            c[i + s * tau] = part[s]
    return Broadcast(q, PARTITIONED, scheme.N, tuple(c))


def decode_symbol_partitioned(scheme: PartitionScheme, p: SniProblem, broadcast: Broadcast,
                              k: int, j: int, side_info: SideInfo) -> Tuple[FieldElement, DecodeTrace]:
    """Recover x_{k,j} from the gamma code symbols of its partition.

    Positions h..h+gamma-1 (cyclic mod t) of the partition are treated as
    unknown; everything else in the partition is side information.
    """
    if broadcast.N != scheme.N or broadcast.scheme != PARTITIONED:
        raise DimensionMismatch("broadcast does not belong to this partitioned scheme")
    if not 0 <= j < scheme.b:
        raise InvalidInput(f"slot {j} outside [0, {scheme.b})")
    allowed = _check_side_info(p, k, side_info)
    q, b, tau, t, gamma = broadcast.q, scheme.b, scheme.tau, scheme.t, scheme.gamma
    L = scheme.L.matrix
    w = k * b + j
    g, h = w % tau, w // tau
    window = {(h + s) % t for s in range(gamma)}
    code_idx = [g + s * tau for s in range(gamma)]
    residual = [broadcast.symbols[ci] for ci in code_idx]
    for pos in range(t):
        if pos in window:
            continue
        yw = g + pos * tau
        val = _lookup(side_info, allowed, yw // b, yw % b, b)
        if val:
            row = L.row(pos)
            for s in range(gamma):
                if row[s]:
                    residual[s] -= val * row[s]
    residual = [r % q for r in residual]
    u = _solve_window(L, h, residual, q)
    solved = {g + ((h + s) % t) * tau: u[s] for s in range(gamma)}
    trace = DecodeTrace(k, j, frozenset(code_idx), solved)
    return FieldElement(u[0], PrimeField(q)), trace


def decode_partitioned(scheme: PartitionScheme, p: SniProblem, broadcast: Broadcast, k: int,
                       side_info: SideInfo) -> Tuple[List[FieldElement], List[DecodeTrace]]:
    out = [decode_symbol_partitioned(scheme, p, broadcast, k, j, side_info) for j in range(scheme.b)]
    return [v for v, _ in out], [tr for _, tr in out]


# --- zero-padded scalar code ----------------------------------------------


def _padded_matrix(p: SniProblem, a: int, b: int) -> FieldMatrix:
    if not scalar_condition(p, a, b):
        raise ConditionViolated(f"gcd condition fails for padding (a={a}, b={b}) on {p}")
    return build_air(p.K + a, p.D + 1 + a + b).matrix


def encode_scalar_padded(p: SniProblem, a: int, b: int, msg: MessageVector) -> Broadcast:
    L = _padded_matrix(p, a, b)
    if (msg.K, msg.b) != (p.K, 1):
        raise DimensionMismatch(f"scalar code needs K={p.K} single-symbol messages")
    c = _combine(L, msg.symbols + (0,) * a, msg.q)
    return Broadcast(msg.q, SCALAR_PADDED, L.cols, c)


@lru_cache(maxsize=65536)
def _padded_functional(L: FieldMatrix, k: int, interferers: FrozenSet[int], q: int) -> Tuple[int, ...]:
    field_q = PrimeField(q)
    phi = annihilator([L.row(i) for i in sorted(interferers)], L.row(k), field_q)
    return tuple(int(v) for v in phi)


def decode_scalar_padded(p: SniProblem, a: int, b: int, broadcast: Broadcast, k: int,
                         side_info: SideInfo) -> Tuple[FieldElement, DecodeTrace]:
    """x_k = phi . (broadcast minus known rows), phi annihilating the interference rows."""
    L = _padded_matrix(p, a, b)
    if broadcast.N != L.cols or broadcast.scheme != SCALAR_PADDED:
        raise DimensionMismatch("broadcast does not belong to this scalar-padded code")
    allowed = _check_side_info(p, k, side_info)
    q = broadcast.q
    known = [0] * (p.K + a)
    for i in allowed:
        known[i] = _lookup(side_info, allowed, i, 0, 1)
    contrib = _combine(L, known, q)
    residual = [(c - x) % q for c, x in zip(broadcast.symbols, contrib)]
    phi = _padded_functional(L, k, interference_set(p, k), q)
    value = sum(f * r for f, r in zip(phi, residual)) % q
    trace = DecodeTrace(k, 0, frozenset(i for i, f in enumerate(phi) if f), {k: value})
    return FieldElement(value, PrimeField(q)), trace


# --- K x (D+U+1) scalar code -----------------------------------------------


def encode_scalar_du(p: SniProblem, msg: MessageVector) -> Broadcast:
    if (msg.K, msg.b) != (p.K, 1):
        raise DimensionMismatch(f"scalar code needs K={p.K} single-symbol messages")
    L = build_air(p.K, p.D + p.U + 1).matrix
    return Broadcast(msg.q, SCALAR_DU, L.cols, _combine(L, msg.symbols, msg.q))


def decode_scalar_du(p: SniProblem, broadcast: Broadcast, k: int,
                     side_info: SideInfo) -> Tuple[FieldElement, DecodeTrace]:
    """Solve for the D+U+1 adjacent unknown messages k-U..k+D after removing side information."""
    n = p.D + p.U + 1
    L = build_air(p.K, n).matrix
    if broadcast.N != n or broadcast.scheme != SCALAR_DU:
        raise DimensionMismatch("broadcast does not belong to this K x (D+U+1) code")
    allowed = _check_side_info(p, k, side_info)
    q = broadcast.q
    start = (k - p.U) % p.K
    window = {(start + s) % p.K for s in range(n)}
    known = [0] * p.K
    for i in range(p.K):
        if i not in window:
            known[i] = _lookup(side_info, allowed, i, 0, 1)
    contrib = _combine(L, known, q)
    residual = [(c - x) % q for c, x in zip(broadcast.symbols, contrib)]
    u = _solve_window(L, start, residual, q)
    solved = {(start + s) % p.K: u[s] for s in range(n)}
    trace = DecodeTrace(k, 0, frozenset(range(n)), solved)
    return FieldElement(u[p.U], PrimeField(q)), trace


# --- dispatch --------------------------------------------------------------


def scheme_tag(scheme: Scheme) -> str:
    if isinstance(scheme, PartitionScheme):
        return PARTITIONED
    if isinstance(scheme, ScalarPadding):
        return SCALAR_PADDED
    if isinstance(scheme, DuScheme):
        return SCALAR_DU
    raise InvalidInput(f"not a scheme: {scheme!r}")


def vector_dim(scheme: Scheme) -> int:
    return scheme.b if isinstance(scheme, PartitionScheme) else 1


def encode(p: SniProblem, scheme: Scheme, msg: MessageVector) -> Broadcast:
    if isinstance(scheme, PartitionScheme):
        return encode_partitioned(scheme, msg)
    if isinstance(scheme, ScalarPadding):
        return encode_scalar_padded(p, scheme.a, scheme.b, msg)
    return encode_scalar_du(p, msg)


def decode(p: SniProblem, scheme: Scheme, broadcast: Broadcast, k: int, j: int,
           side_info: SideInfo) -> Tuple[FieldElement, DecodeTrace]:
    if isinstance(scheme, PartitionScheme):
        return decode_symbol_partitioned(scheme, p, broadcast, k, j, side_info)
    if j != 0:
        raise InvalidInput("scalar codes have a single slot per receiver")
    if isinstance(scheme, ScalarPadding):
        return decode_scalar_padded(p, scheme.a, scheme.b, broadcast, k, side_info)
    return decode_scalar_du(p, broadcast, k, side_info)
