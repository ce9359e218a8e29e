"""The SUICP(SNI) instance, feasible-rate searches and broadcast-rate bounds.

Receiver k wants x_k and is interfered by the U messages before it and the D
messages after it (indices mod K); it knows every other message.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import gcd
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from sniic.air import AirMatrix, build_air
from sniic.errors import InvalidInput, NotInS


@dataclass(frozen=True)
class SniProblem:
    K: int
    D: int
    U: int

    def __post_init__(self) -> None:
        K, D, U = self.K, self.D, self.U
        if not all(isinstance(v, int) for v in (K, D, U)):
            raise InvalidInput("K, D, U must be integers")
        if K < 1:
            raise InvalidInput(f"K must be >= 1, got {K}")
        if not 0 <= U <= D:
            raise InvalidInput(f"need 0 <= U <= D, got U={U}, D={D}")
        if U + D >= K:
            raise InvalidInput(f"need U + D < K, got U+D={U + D}, K={K}")

    def __str__(self) -> str:
        return f"(K={self.K}, D={self.D}, U={self.U})"


def valid_problems(k_max: int, k_min: int = 1):
    """Every valid (K, D, U) with k_min <= K <= k_max, in (K, D, U) order."""
    for K in range(k_min, k_max + 1):
        for D in range(K):
            for U in range(min(D, K - 1 - D) + 1):
                yield SniProblem(K, D, U)


@lru_cache(maxsize=8192)
def interference_set(p: SniProblem, k: int) -> FrozenSet[int]:
    if not 0 <= k < p.K:
        raise InvalidInput(f"receiver {k} outside [0, {p.K})")
    before = {(k - s) % p.K for s in range(1, p.U + 1)}
    after = {(k + s) % p.K for s in range(1, p.D + 1)}
    return frozenset(before | after)


@lru_cache(maxsize=8192)
def side_info_set(p: SniProblem, k: int) -> FrozenSet[int]:
    blocked = interference_set(p, k) | {k}
    return frozenset(i for i in range(p.K) if i not in blocked)


# --- vector linear codes --------------------------------------------------


def in_set_S(p: SniProblem, a: int, b: int) -> bool:
    """gcd(bK, b(D+1)+a) >= b(U+1)."""
    if a < 0 or b < 1:
        raise InvalidInput(f"need a >= 0 and b >= 1, got a={a}, b={b}")
    return gcd(b * p.K, b * (p.D + 1) + a) >= b * (p.U + 1)


@dataclass(frozen=True)
class RateFraction:
    a: int
    b: int
    rate: Fraction

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.a, self.b)


def max_vector_dim(p: SniProblem) -> int:
    return p.K // (p.U + 1)


def find_min_rate_fraction(p: SniProblem) -> RateFraction:
    """(a, b) in S with a/b minimal; ties go to the smaller b, then the smaller a.

    b ranges over [1, K // (U+1)] and a over [0, b(K-D-1)]; a = b(K-D-1)
    always qualifies (rate K).
    """
    best: Optional[Tuple[Fraction, int, int]] = None
    for b in range(1, max_vector_dim(p) + 1):
        for a in range(b * (p.K - p.D - 1) + 1):
            if in_set_S(p, a, b):
                key = (Fraction(a, b), b, a)
                if best is None or key < best:
                    best = key
                break
    assert best is not None
    ratio, b, a = best
    return RateFraction(a, b, p.D + 1 + ratio)


@dataclass(frozen=True)
class PartitionScheme:
    """Parameters of the partitioned b-dimensional vector linear code."""

    problem: SniProblem
    a: int
    b: int
    c: int
    tau: int
    t: int
    gamma: int
    N: int
    L: AirMatrix = field(repr=False)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.N, self.b)

    @property
    def instantly_decodable(self) -> bool:
        return self.gamma == 1

    @property
    def dims(self) -> str:
        return f"{self.t}x{self.gamma}"


def partition_params(p: SniProblem, a: int, b: int) -> PartitionScheme:
    if not in_set_S(p, a, b):
        raise NotInS(f"(a={a}, b={b}) not in S for {p}")
    N = b * (p.D + 1) + a
    if N > p.K * b:
        raise InvalidInput(f"code length {N} exceeds uncoded length {p.K * b}")
    tau = gcd(p.K * b, N)
    t, gamma = p.K * b // tau, N // tau
    return PartitionScheme(p, a, b, tau - b * (p.U + 1), tau, t, gamma, N, build_air(t, gamma))


def min_rate_scheme(p: SniProblem) -> PartitionScheme:
    rf = find_min_rate_fraction(p)
    return partition_params(p, rf.a, rf.b)


def partition_sets(p: SniProblem, scheme: PartitionScheme) -> List[List[int]]:
    """Flat symbol indices of each partition; y_w is symbol w % b of message w // b."""
    return [[i + h * scheme.tau for h in range(scheme.t)] for i in range(scheme.tau)]


# --- scalar codes ---------------------------------------------------------


class ScalarPadding(NamedTuple):
    """Zero-padding (a zero messages, b extra code symbols) and resulting length."""

    a: int
    b: int
    length: int


def scalar_condition(p: SniProblem, a: int, b: int) -> bool:
    """gcd(K+a, D+1+a+b) >= U+1+a, with the AIR shape (K+a) x (D+1+a+b) valid."""
    if a < 0 or b < 0:
        raise InvalidInput(f"need a, b >= 0, got a={a}, b={b}")
    if p.D + 1 + b > p.K:
        return False
    return gcd(p.K + a, p.D + 1 + a + b) >= p.U + 1 + a


def find_scalar_padding(p: SniProblem) -> Optional[ScalarPadding]:
    """Smallest a+b (then smallest a) meeting the condition, searching a+b <= U+D."""
    for total in range(p.U + p.D + 1):
        for a in range(total + 1):
            if scalar_condition(p, a, total - a):
                return ScalarPadding(a, total - a, p.D + 1 + total)
    return None


@dataclass(frozen=True)
class DuScheme:
    """Scalar code from a K x (D+U+1) AIR matrix."""

    problem: SniProblem
    N: int
    L: AirMatrix = field(repr=False)


def du_scheme(p: SniProblem) -> DuScheme:
    n = p.D + p.U + 1
    return DuScheme(p, n, build_air(p.K, n))


# --- bounds ---------------------------------------------------------------


def d_interval(K: int, l: int) -> Tuple[int, int]:
    return l * K // (l + 1), (l + 1) * K // (l + 2) - 1


def u_interval(K: int, l: int) -> Tuple[int, int]:
    return K // (l + 2), K // (l + 1) - 1


def d_class(K: int, D: int) -> Optional[int]:
    """The l >= 1 whose D-interval contains D (the intervals tile [K//2, K-1))."""
    l = 1
    while l <= K and d_interval(K, l)[0] <= D:
        lo, hi = d_interval(K, l)
        if lo <= D <= hi:
            return l
        l += 1
    return None


def full_rate_class(p: SniProblem) -> Optional[int]:
    """The l with D in D_l and U in U_l, for which the best vector rate is K."""
    l = d_class(p.K, p.D)
    if l is None:
        return None
    lo, hi = u_interval(p.K, l)
    return l if lo <= p.U <= hi else None


def truncate_decimal(x: Fraction, places: int = 4) -> str:
    """Decimal string truncated toward zero, as printed in rate tables."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x.numerator) * 10**places // x.denominator
    whole, frac = divmod(scaled, 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def fraction_json(x: Fraction) -> Dict[str, Any]:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "decimal": truncate_decimal(x)}


@dataclass(frozen=True)
class BoundsReport:
    problem: SniProblem
    lower: int
    l1: Fraction
    l2: Optional[int]
    du1: int
    upper: Fraction
    full_rate_class: Optional[int]
    rate_fraction: RateFraction
    padding: Optional[ScalarPadding]

    def to_dict(self) -> Dict[str, Any]:
        p = self.problem
        return {
            "K": p.K,
            "D": p.D,
            "U": p.U,
            "lower": self.lower,
            "l1": fraction_json(self.l1),
            "a_min": self.rate_fraction.a,
            "b_min": self.rate_fraction.b,
            "l2": self.l2,
            "padding": None if self.padding is None else {"a": self.padding.a, "b": self.padding.b},
            "du1": self.du1,
            "upper": fraction_json(self.upper),
            "full_rate_class": self.full_rate_class,
        }


def broadcast_rate_bounds(p: SniProblem) -> BoundsReport:
    rf = find_min_rate_fraction(p)
    pad = find_scalar_padding(p)
    du1 = p.D + p.U + 1
    candidates = [rf.rate, Fraction(du1)]
    if pad is not None:
        candidates.append(Fraction(pad.length))
    return BoundsReport(
        problem=p,
        lower=p.D + 1,
        l1=rf.rate,
        l2=None if pad is None else pad.length,
        du1=du1,
        upper=min(candidates),
        full_rate_class=full_rate_class(p),
        rate_fraction=rf,
        padding=pad,
    )
