"""Shared domain types: code layouts, segment patterns, quantized LLR arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SEGMENT_SIZE = 16

MIN_WIDTH = 4
MAX_WIDTH = 8


class PatternTag(Enum):
    """Node / segment pattern kinds, ordered by per-segment information count."""

    RATE0 = "rate0"
    REP = "rep"
    REP2 = "rep2"
    PCR = "pcr"
    BCH_T2 = "bch_t2"
    BCH_T1 = "bch_t1"
    RPC = "rpc"
    SPC2 = "spc2"
    SPC = "spc"
    RATE1 = "rate1"
    SLOW = "slow"


# Bijection between the ten fast tags and their per-segment information counts.
FAST_TAG_BY_K = {
    0: PatternTag.RATE0,
    1: PatternTag.REP,
    2: PatternTag.REP2,
    3: PatternTag.PCR,
    7: PatternTag.BCH_T2,
    11: PatternTag.BCH_T1,
    13: PatternTag.RPC,
    14: PatternTag.SPC2,
    15: PatternTag.SPC,
    16: PatternTag.RATE1,
}
K_BY_FAST_TAG = {tag: k for k, tag in FAST_TAG_BY_K.items()}
FAST_SEGMENT_KS = frozenset(FAST_TAG_BY_K)

BCH_TAGS = frozenset({PatternTag.BCH_T1, PatternTag.BCH_T2})


@dataclass(frozen=True)
class SegmentPattern:
    """Classification of one length-16 segment: a pattern tag plus its info count."""

    tag: PatternTag
    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.k <= SEGMENT_SIZE:
            raise ValueError(f"segment info count out of range: {self.k}")
        if self.tag is not PatternTag.SLOW and K_BY_FAST_TAG[self.tag] != self.k:
            raise ValueError(f"tag {self.tag.value} requires k={K_BY_FAST_TAG[self.tag]}, got {self.k}")

    @classmethod
    def from_k(cls, k: int) -> "SegmentPattern":
        """Pattern for a canonical segment with k information bits (SLOW if unsupported)."""
        tag = FAST_TAG_BY_K.get(k, PatternTag.SLOW)
        return cls(tag, k)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CodeSpec:
    """Polar code layout: mother length N, info count K, and the info index set."""

    N: int
    K: int
    info_set: frozenset[int]

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.N) or not 2 <= self.N <= 1024:
            raise ValueError(f"N must be a power of two in [2, 1024], got {self.N}")
        if not 0 <= self.K <= self.N:
            raise ValueError(f"K out of range: {self.K}")
        object.__setattr__(self, "info_set", frozenset(self.info_set))
        if len(self.info_set) != self.K:
            raise ValueError(f"info_set has {len(self.info_set)} entries, expected K={self.K}")
        if self.info_set and not all(0 <= i < self.N for i in self.info_set):
            raise ValueError("info_set contains out-of-range indices")

    @property
    def n(self) -> int:
        """Number of polarization stages, log2(N)."""
        return self.N.bit_length() - 1

    @property
    def frozen_set(self) -> frozenset[int]:
        return frozenset(range(self.N)) - self.info_set

    @property
    def info_positions(self) -> np.ndarray:
        """Sorted info indices as an integer array."""
        return np.array(sorted(self.info_set), dtype=np.int64)

    @property
    def frozen_mask(self) -> np.ndarray:
        """Boolean mask over u-domain indices, True where frozen."""
        mask = np.ones(self.N, dtype=bool)
        mask[self.info_positions] = False
        return mask

    @property
    def segment_count(self) -> int:
        return self.N // SEGMENT_SIZE


@dataclass(frozen=True)
class FastPolarCode:
    """Fast-decodable layout: every length-16 segment carries a supported pattern.

    The embedded CodeSpec holds the canonical info positions. Inside BCH
    segments those positions are placeholders that fix the information count;
    per-bit frozen/info semantics do not apply there (the segment's u-block
    carries a 16-bit BCH codeword instead).
    """

    spec: CodeSpec
    segments: tuple[SegmentPattern, ...]
    bch_segments: dict[int, PatternTag] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        if len(self.segments) != self.spec.segment_count:
            raise ValueError("segment descriptor count does not match N/16")
        if any(seg.tag is PatternTag.SLOW for seg in self.segments):
            raise ValueError("fast layouts cannot contain slow segments")
        if sum(seg.k for seg in self.segments) != self.spec.K:
            raise ValueError("segment info counts do not sum to K")
        bch = {t: seg.tag for t, seg in enumerate(self.segments) if seg.tag in BCH_TAGS}
        if self.bch_segments != bch:
            raise ValueError("bch_segments inconsistent with segment tags")
        mask = self.spec.frozen_mask
        for t, seg in enumerate(self.segments):
            local = mask[t * SEGMENT_SIZE:(t + 1) * SEGMENT_SIZE]
            if not np.array_equal(local, canonical_frozen_mask(seg.k)):
                raise ValueError(f"segment {t} positions are not canonical for k={seg.k}")

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def K(self) -> int:
        return self.spec.K


def canonical_frozen_mask(k: int) -> np.ndarray:
    """Canonical length-16 frozen mask for a segment with k info bits.

    Frozen positions occupy the smallest local indices, information (or BCH
    placeholder) positions the largest.
    """
    if not 0 <= k <= SEGMENT_SIZE:
        raise ValueError(f"segment info count out of range: {k}")
    mask = np.zeros(SEGMENT_SIZE, dtype=bool)
    mask[: SEGMENT_SIZE - k] = True
    return mask


def saturation_limit(width: int) -> int:
    """Largest representable magnitude for a symmetric width-bit LLR."""
    if not MIN_WIDTH <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {width}")
    return (1 << (width - 1)) - 1


def saturate(values: np.ndarray, width: int) -> np.ndarray:
    """Clamp integer LLRs into the symmetric width-bit range."""
    limit = saturation_limit(width)
    return np.clip(values, -limit, limit)


@dataclass(frozen=True)
class QuantizedLLR:
    """Fixed-point LLR value(s) under symmetric saturation.

    value may be a scalar or an integer array; the most negative two's
    complement code is never used, so magnitudes fit in width-1 bits.
    """

    value: int | np.ndarray
    width: int

    def __post_init__(self) -> None:
        limit = saturation_limit(self.width)
        arr = np.asarray(self.value)
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("quantized LLRs must be integers")
        if np.any(arr > limit) or np.any(arr < -limit):
            raise ValueError(f"value outside [-{limit}, {limit}] for width {self.width}")

    @property
    def limit(self) -> int:
        return saturation_limit(self.width)


def hard_decision(alpha):
    """Map LLR(s) to bit(s): 0 for alpha >= 0, else 1."""
    arr = np.asarray(alpha)
    bits = (arr < 0).astype(np.uint8)
    if arr.ndim == 0:
        return int(bits)
    return bits


def saturating_add(a: QuantizedLLR, b: QuantizedLLR) -> QuantizedLLR:
    """Add two quantized LLRs of equal width, clamping into the symmetric range."""
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    total = np.add(a.value, b.value, dtype=np.int64)
    clamped = saturate(total, a.width)
    if np.asarray(clamped).ndim == 0:
        return QuantizedLLR(int(clamped), a.width)
    return QuantizedLLR(clamped, a.width)


@dataclass(frozen=True)
class TraversalStats:
    """Decode-tree traversal counters, a pure function of the code layout.

    terminal_nodes counts pattern-matched nodes; edges counts each
    parent-to-child edge entered once; f_ops counts scalar f and g LLR
    evaluations. The histogram maps each pattern tag to its node count.
    """

    terminal_nodes: int
    edges: int
    f_ops: int
    histogram: dict[PatternTag, int]

    def __post_init__(self) -> None:
        if self.terminal_nodes != sum(self.histogram.values()):
            raise ValueError("terminal_nodes must equal the histogram total")

    @property
    def visited_nodes(self) -> int:
        """All nodes entered during traversal, internal plus terminal."""
        return self.edges + 1

    def as_dict(self) -> dict:
        """JSON-friendly view with string pattern keys."""
        return {
            "terminal_nodes": self.terminal_nodes,
            "visited_nodes": self.visited_nodes,
            "edges": self.edges,
            "edges_directed": 2 * self.edges,
            "f_ops": self.f_ops,
            "histogram": {tag.value: count for tag, count in self.histogram.items()},
        }
