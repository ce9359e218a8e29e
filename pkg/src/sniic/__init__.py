"""Index codes for single-unicast index coding with symmetric neighboring interference.

AIR encoding matrices, feasible-rate search, partitioned vector linear codes,
scalar codes and broadcast-rate bounds.
"""

from sniic.air import AirMatrix, build_air, check_adjacent_independence, check_span_exclusion
from sniic.codec import Broadcast, MessageVector, decode, encode
from sniic.galois import GF2, FieldElement, FieldMatrix, PrimeField
from sniic.suicp import (
    BoundsReport,
    DuScheme,
    PartitionScheme,
    RateFraction,
    ScalarPadding,
    SniProblem,
    broadcast_rate_bounds,
    find_min_rate_fraction,
    find_scalar_padding,
    min_rate_scheme,
    partition_params,
)
from sniic.harness import VerificationReport, verify_scheme

__version__ = "0.1.0"

__all__ = [
    "AirMatrix",
    "BoundsReport",
    "Broadcast",
    "DuScheme",
    "FieldElement",
    "FieldMatrix",
    "GF2",
    "MessageVector",
    "PartitionScheme",
    "PrimeField",
    "RateFraction",
    "ScalarPadding",
    "SniProblem",
    "VerificationReport",
    "broadcast_rate_bounds",
    "build_air",
    "check_adjacent_independence",
    "check_span_exclusion",
    "decode",
    "encode",
    "find_min_rate_fraction",
    "find_scalar_padding",
    "min_rate_scheme",
    "partition_params",
    "verify_scheme",
]
