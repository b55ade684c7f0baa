"""Reliability orders (GA / PW), segment classification, and rate re-allocation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    FAST_SEGMENT_KS,
    SEGMENT_SIZE,
    BCH_TAGS,
    CodeSpec,
    FastPolarCode,
    PatternTag,
    SegmentPattern,
    canonical_frozen_mask,
    _is_power_of_two,
)

DEFAULT_DESIGN_SNR_DB = 4.5

_METHODS = ("ga", "pw")


class InfeasibleConstructionError(ValueError):
    """Raised when rate re-allocation cannot make every segment fast-decodable."""


@dataclass(frozen=True)
class ReliabilityOrder:
    """Permutation of u-domain indices from least to most reliable."""

    N: int
    order: np.ndarray
    method: str
    design_snr_db: float | None

    def __post_init__(self) -> None:
        order = np.asarray(self.order, dtype=np.int64)
        object.__setattr__(self, "order", order)
        if sorted(order.tolist()) != list(range(self.N)):
            raise ValueError("order must be a permutation of 0..N-1")


def _ln_phi(x: np.ndarray) -> np.ndarray:
    """log of the Gaussian-approximation phi function, numerically safe for large x."""
    x = np.asarray(x, dtype=float)
    small = x < 10.0
    xs = np.where(small, x, 1.0)
    out_small = -0.4527 * xs**0.86 + 0.0218
    xl = np.where(small, 10.0, x)
    out_large = 0.5 * np.log(np.pi / xl) + np.log1p(-10.0 / (7.0 * xl)) - xl / 4.0
    return np.where(small, out_small, out_large)


def _phi_inv_ln(ln_y: np.ndarray) -> np.ndarray:
    """Invert phi by bisection in the log domain (phi is monotone decreasing)."""
    ln_y = np.asarray(ln_y, dtype=float)
    lo = np.full_like(ln_y, 1e-12)
    hi = np.full_like(ln_y, 1e7)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        above = _ln_phi(mid) > ln_y
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def _ga_means(N: int, design_snr_db: float) -> np.ndarray:
    """Mean bit-channel LLRs in natural order via the two-function GA recursion.

    The all-zero BPSK channel has mean LLR 2/sigma^2 with
    sigma^2 = 1 / (2 * 10^(design_snr_db / 10)).
    """
    m = np.array([4.0 * 10.0 ** (design_snr_db / 10.0)])
    while len(m) < N:
        ln_phi_m = _ln_phi(m)
        phi_m = np.exp(ln_phi_m)
        y = 1.0 - (1.0 - phi_m) ** 2
        with np.errstate(divide="ignore"):
            ln_y = np.where(phi_m < 1e-10, np.log(2.0) + ln_phi_m, np.log(y))
        out = np.empty(2 * len(m))
        out[0::2] = _phi_inv_ln(ln_y)
        out[1::2] = 2.0 * m
        m = out
    return m


def _pw_weights(N: int) -> np.ndarray:
    """Polarization weights: beta-expansion of each index with beta = 2^(1/4)."""
    n = N.bit_length() - 1
    beta = 2.0 ** 0.25
    bits = (np.arange(N)[:, None] >> np.arange(n)[None, :]) & 1
    return bits @ (beta ** np.arange(n))


def _reliability_scores(N: int, method: str, design_snr_db: float) -> np.ndarray:
    if not _is_power_of_two(N) or not 2 <= N <= 1024:
        raise ValueError(f"N must be a power of two in [2, 1024], got {N}")
    if method not in _METHODS:
        raise ValueError(f"unknown construction method: {method!r}")
    if method == "pw":
        return _pw_weights(N)
    return _ga_means(N, design_snr_db)


def reliability_sequence(
    N: int, method: str = "ga", design_snr_db: float = DEFAULT_DESIGN_SNR_DB
) -> ReliabilityOrder:
    """Deterministic reliability permutation, least reliable first.

    PW ignores design_snr_db. Reliability ties break toward the lower index.
    """
    method = method.lower()
    scores = _reliability_scores(N, method, design_snr_db)
    order = np.argsort(scores, kind="stable")
    snr = None if method == "pw" else design_snr_db
    return ReliabilityOrder(N=N, order=order, method=method, design_snr_db=snr)


def construct_polar(
    N: int, K: int, method: str = "ga", design_snr_db: float = DEFAULT_DESIGN_SNR_DB
) -> CodeSpec:
    """Plain polar layout: freeze the N-K least reliable positions."""
    if not 0 <= K <= N:
        raise ValueError(f"K out of range: {K}")
    rel = reliability_sequence(N, method, design_snr_db)
    info = frozenset(int(i) for i in rel.order[N - K:])
    return CodeSpec(N=N, K=K, info_set=info)


def classify_segment(frozen_positions: Iterable[int]) -> SegmentPattern:
    """Classify a length-16 segment from its local frozen positions.

    Fast tags require both the information count and the canonical positions
    (frozen at the smallest local indices), except k in {7, 11} which map to
    the BCH variants regardless of positions. Everything else is SLOW.
    """
    frozen = frozenset(frozen_positions)
    if not all(0 <= p < SEGMENT_SIZE for p in frozen):
        raise ValueError("frozen positions must be local indices in 0..15")
    k = SEGMENT_SIZE - len(frozen)
    if k in (7, 11):
        return SegmentPattern.from_k(k)
    if k in FAST_SEGMENT_KS and frozen == frozenset(range(SEGMENT_SIZE - k)):
        return SegmentPattern.from_k(k)
    return SegmentPattern(PatternTag.SLOW, k)


def _reallocate(N: int, K: int, scores: np.ndarray):
    """Rate re-allocation: adjust per-segment info counts until all are supported.

    Walks segments in order. While segment t has an unsupported count, demote
    its least reliable information bit and promote the most reliable active
    frozen bit j of a later segment, provided the donor segment's count k_j
    satisfies (11 <= k_j < 16) or (k_j < 3); bits failing the gate become
    inactive. When no active later frozen bit remains, fall back to promoting
    the most reliable active frozen bit inside t and demoting the least
    reliable information bit of a later segment. Demoted bits become inactive
    so no bit moves twice. Ties break toward the lower index.

    Returns (info mask, per-segment info counts, move list).
    """
    n_seg = N // SEGMENT_SIZE
    order = np.argsort(scores, kind="stable")
    info = np.zeros(N, dtype=bool)
    info[order[N - K:]] = True
    active = ~info
    moves: list[tuple[str, int, int]] = []
    for t in range(n_seg):
        seg = slice(SEGMENT_SIZE * t, SEGMENT_SIZE * (t + 1))
        while int(info[seg].sum()) not in FAST_SEGMENT_KS:
            later = np.flatnonzero(~info & active)
            later = later[later >= SEGMENT_SIZE * (t + 1)]
            if len(later):
                j = later[np.argmax(scores[later])]
                seg_j = j // SEGMENT_SIZE
                k_j = int(info[SEGMENT_SIZE * seg_j:SEGMENT_SIZE * (seg_j + 1)].sum())
                if (11 <= k_j < 16) or (k_j < 3):
                    own_info = np.flatnonzero(info[seg]) + SEGMENT_SIZE * t
                    i = own_info[np.argmin(scores[own_info])]
                    info[i] = False
                    active[i] = False
                    info[j] = True
                    moves.append(("push", int(i), int(j)))
                else:
                    active[j] = False
            else:
                own_frozen = np.flatnonzero(~info[seg] & active[seg]) + SEGMENT_SIZE * t
                donors = np.flatnonzero(info)
                donors = donors[donors >= SEGMENT_SIZE * (t + 1)]
                if not len(own_frozen) or not len(donors):
                    raise InfeasibleConstructionError(
                        f"segment {t} cannot reach a supported pattern: "
                        "no active candidates remain"
                    )
                p = own_frozen[np.argmax(scores[own_frozen])]
                d = donors[np.argmin(scores[donors])]
                info[p] = True
                info[d] = False
                active[d] = False
                moves.append(("pull", int(d), int(p)))
    counts = [int(info[SEGMENT_SIZE * t:SEGMENT_SIZE * (t + 1)].sum()) for t in range(n_seg)]
    return info, counts, moves


def construct_fast_polar(
    N: int, K: int, method: str = "ga", design_snr_db: float = DEFAULT_DESIGN_SNR_DB
) -> FastPolarCode:
    """Build a fast-decodable layout via rate re-allocation plus canonicalization."""
    if N < 2 * SEGMENT_SIZE:
        raise ValueError(f"N must provide at least two segments, got {N}")
    if not 0 <= K <= N:
        raise ValueError(f"K out of range: {K}")
    method = method.lower()
    scores = _reliability_scores(N, method, design_snr_db)
    _, counts, _ = _reallocate(N, K, scores)
    segments = tuple(SegmentPattern.from_k(k) for k in counts)
    info: set[int] = set()
    for t, k in enumerate(counts):
        base = SEGMENT_SIZE * t
        info.update(range(base + SEGMENT_SIZE - k, base + SEGMENT_SIZE))
    spec = CodeSpec(N=N, K=K, info_set=frozenset(info))
    bch = {t: seg.tag for t, seg in enumerate(segments) if seg.tag in BCH_TAGS}
    return FastPolarCode(spec=spec, segments=segments, bch_segments=bch)


def layout_to_dict(
    layout: CodeSpec | FastPolarCode,
    method: str | None = None,
    design_snr_db: float | None = None,
) -> dict:
    """JSON-ready description of a layout (N, K, info positions, segment tags)."""
    spec = layout.spec if isinstance(layout, FastPolarCode) else layout
    doc = {
        "N": spec.N,
        "K": spec.K,
        "method": method,
        "design_snr_db": design_snr_db,
        "info_set": sorted(int(i) for i in spec.info_set),
    }
    if isinstance(layout, FastPolarCode):
        doc["segments"] = [seg.tag.value for seg in layout.segments]
    return doc


def layout_from_dict(doc: dict) -> CodeSpec | FastPolarCode:
    """Rebuild a CodeSpec or FastPolarCode from its JSON description."""
    try:
        spec = CodeSpec(N=int(doc["N"]), K=int(doc["K"]),
                        info_set=frozenset(int(i) for i in doc["info_set"]))
    except KeyError as exc:
        raise ValueError(f"layout document missing key: {exc}") from exc
    tags = doc.get("segments")
    if tags is None:
        return spec
    mask = spec.frozen_mask
    segments = []
    for t, tag_name in enumerate(tags):
        tag = PatternTag(tag_name)
        local = mask[SEGMENT_SIZE * t:SEGMENT_SIZE * (t + 1)]
        segments.append(SegmentPattern(tag, int(SEGMENT_SIZE - local.sum())))
    bch = {t: seg.tag for t, seg in enumerate(segments) if seg.tag in BCH_TAGS}
    return FastPolarCode(spec=spec, segments=tuple(segments), bch_segments=bch)
