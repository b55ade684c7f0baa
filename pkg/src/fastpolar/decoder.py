"""Fast SC decoding: pruned-tree traversal with pattern node decoders.

All node decoders accept leading batch axes; LLRs are float64 in the
reference path or saturating integers when a width is given.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bch import BchVariant, bch_node_decode
from .core import (
    BCH_TAGS,
    SEGMENT_SIZE,
    CodeSpec,
    FastPolarCode,
    PatternTag,
    QuantizedLLR,
    TraversalStats,
    hard_decision,
    saturate,
)
from .encoder import bch_message_positions, polar_transform


def f_check(a, b):
    """Min-sum check update: sign(a) * sign(b) * min(|a|, |b|), with sign(0) = 0."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_bit(a, b, u, width=None):
    """Variable update: b + (1 - 2u) * a, saturating when a width is given."""
    a = np.asarray(a)
    b = np.asarray(b)
    u = np.asarray(u)
    if np.issubdtype(a.dtype, np.integer) and np.issubdtype(b.dtype, np.integer):
        total = b.astype(np.int64) + (1 - 2 * u.astype(np.int64)) * a.astype(np.int64)
    else:
        total = b + (1.0 - 2.0 * u) * a
    if width is not None:
        total = saturate(total, width)
    return total


def parallel_min_mask(amplitudes, magnitude_bits: int) -> np.ndarray:
    """Mark every position attaining the minimum amplitude via bit-plane elimination.

    Scans planes from most to least significant: candidates showing a 1 where
    others show 0 are eliminated, unless that would eliminate everyone.
    Returns a boolean mask (possibly with several set bits).
    """
    amp = np.asarray(amplitudes)
    if amp.shape[-1] < 2:
        raise ValueError("need at least two amplitudes")
    if magnitude_bits < 1:
        raise ValueError("magnitude_bits must be positive")
    if np.any(amp < 0) or np.any(amp >= (1 << magnitude_bits)):
        raise ValueError(f"amplitudes must fit in {magnitude_bits} unsigned bits")
    eliminated = np.zeros(amp.shape, dtype=bool)
    for j in range(magnitude_bits - 1, -1, -1):
        plane = ((amp >> j) & 1).astype(bool)
        trial = eliminated | plane
        wipe_out = trial.all(axis=-1, keepdims=True)
        eliminated = np.where(wipe_out, eliminated, trial)
    return ~eliminated


def _wagner(alpha: np.ndarray, width: int | None) -> np.ndarray:
    """Wagner SPC decode: flip the weakest position when the parity fails.

    Duplicate minima resolve to the lowest index. The quantized path locates
    the minimum through the bit-plane mask, the float path through argmin.
    """
    bits = np.atleast_1d(hard_decision(alpha))
    parity = np.bitwise_xor.reduce(bits, axis=-1)
    if width is None:
        weakest = np.argmin(np.abs(alpha), axis=-1)
    else:
        mask = parallel_min_mask(np.abs(np.asarray(alpha)), width - 1)
        weakest = np.argmax(mask, axis=-1)
    flip = np.zeros_like(bits)
    np.put_along_axis(flip, np.asarray(weakest)[..., None],
                      np.asarray(parity)[..., None].astype(np.uint8), axis=-1)
    return bits ^ flip


def decode_classic_node(pattern, alpha, width: int | None = None) -> np.ndarray:
    """Decode a Rate0 / Rate1 / REP / SPC node of any size in one shot."""
    tag = PatternTag(pattern) if not isinstance(pattern, PatternTag) else pattern
    alpha = np.asarray(alpha)
    if tag is PatternTag.RATE0:
        return np.zeros(alpha.shape, dtype=np.uint8)
    if tag is PatternTag.RATE1:
        return np.atleast_1d(hard_decision(alpha))
    if tag is PatternTag.REP:
        total = alpha.sum(axis=-1, dtype=np.int64) \
            if np.issubdtype(alpha.dtype, np.integer) else alpha.sum(axis=-1)
        if width is not None:
            total = saturate(total, width)
        bit = np.asarray(hard_decision(total), dtype=np.uint8)
        return np.broadcast_to(bit[..., None], alpha.shape).copy()
    if tag is PatternTag.SPC:
        return _wagner(alpha, width)
    raise ValueError(f"not a classic pattern: {tag}")


def decode_spc2(alpha, width: int | None = None) -> np.ndarray:
    """Decode an SPC-2 node as two interleaved Wagner-SPC decodes."""
    alpha = np.asarray(alpha)
    if alpha.shape[-1] < 4:
        raise ValueError("SPC-2 nodes need at least 4 values")
    out = np.empty(alpha.shape, dtype=np.uint8)
    out[..., 0::2] = _wagner(alpha[..., 0::2], width)
    out[..., 1::2] = _wagner(alpha[..., 1::2], width)
    return out


def decode_rep2(alpha, width: int | None = None) -> np.ndarray:
    """Decode a REP-2 node as two interleaved repetition decisions."""
    alpha = np.asarray(alpha)
    if alpha.shape[-1] < 4:
        raise ValueError("REP-2 nodes need at least 4 values")
    integer = np.issubdtype(alpha.dtype, np.integer)
    sums = [
        alpha[..., 0::2].sum(axis=-1, dtype=np.int64) if integer else alpha[..., 0::2].sum(axis=-1),
        alpha[..., 1::2].sum(axis=-1, dtype=np.int64) if integer else alpha[..., 1::2].sum(axis=-1),
    ]
    if width is not None:
        sums = [saturate(s, width) for s in sums]
    out = np.empty(alpha.shape, dtype=np.uint8)
    out[..., 0::2] = np.asarray(hard_decision(sums[0]), dtype=np.uint8)[..., None]
    out[..., 1::2] = np.asarray(hard_decision(sums[1]), dtype=np.uint8)[..., None]
    return out


def _group_view(alpha: np.ndarray) -> np.ndarray:
    """Reshape (..., M) so the last axis indexes the four residue groups mod 4."""
    M = alpha.shape[-1]
    if M < 4 or M % 4:
        raise ValueError("node size must be a positive multiple of 4")
    return alpha.reshape(alpha.shape[:-1] + (M // 4, 4))


def decode_rpc(alpha, width: int | None = None) -> np.ndarray:
    """Decode an RPC node: equalize the four residue-group parities cheaply.

    Per group, take the sign parity c_i and the weakest member; flip the
    weakest member of every group on whichever parity side costs less.
    """
    alpha = np.asarray(alpha)
    view = _group_view(alpha)
    bits = np.atleast_2d(hard_decision(view))
    c = np.bitwise_xor.reduce(bits, axis=-2)
    mag = np.abs(view)
    delta = mag.min(axis=-2)
    weakest = mag.argmin(axis=-2)
    integer = np.issubdtype(alpha.dtype, np.integer)
    if integer:
        delta = delta.astype(np.int64)
    cost_ones = np.where(c == 1, delta, 0).sum(axis=-1)
    cost_zeros = np.where(c == 0, delta, 0).sum(axis=-1)
    flip_ones = cost_ones <= cost_zeros
    flip_group = np.where(np.asarray(flip_ones)[..., None], c == 1, c == 0)
    flips = np.zeros(bits.shape, dtype=np.uint8)
    np.put_along_axis(flips, np.asarray(weakest)[..., None, :],
                      flip_group[..., None, :].astype(np.uint8), axis=-2)
    return (bits ^ flips).reshape(alpha.shape)


def decode_pcr(alpha, width: int | None = None) -> np.ndarray:
    """Decode a PCR node: Wagner-decode the four group LLR sums, then broadcast."""
    alpha = np.asarray(alpha)
    view = _group_view(alpha)
    integer = np.issubdtype(alpha.dtype, np.integer)
    delta = view.sum(axis=-2, dtype=np.int64) if integer else view.sum(axis=-2)
    if width is not None:
        delta = saturate(delta, width)
    group_bits = _wagner(delta, width)
    out = np.broadcast_to(group_bits[..., None, :], view.shape)
    return np.ascontiguousarray(out).reshape(alpha.shape)


@dataclass(frozen=True)
class PatternLimits:
    """Maximum node size matched per pattern: None is unbounded, 0 disables.

    Defaults mirror the hardware parallelism: SPC and SPC-2 up to 128,
    Rate-1 up to 256, Rate-0 unbounded, everything else at 16.
    """

    rate0: int | None = None
    rate1: int | None = 256
    rep: int | None = 16
    spc: int | None = 128
    spc2: int | None = 128
    rep2: int | None = 16
    rpc: int | None = 16
    pcr: int | None = 16

    def allows(self, tag: PatternTag, size: int) -> bool:
        if tag in BCH_TAGS:
            return size == SEGMENT_SIZE
        cap = getattr(self, tag.value)
        if cap is not None and size > cap:
            return False
        return size >= _MIN_NODE_SIZE[tag]


_MIN_NODE_SIZE = {
    PatternTag.RATE0: 1,
    PatternTag.RATE1: 1,
    PatternTag.REP: 2,
    PatternTag.SPC: 2,
    PatternTag.SPC2: 4,
    PatternTag.REP2: 4,
    PatternTag.RPC: 4,
    PatternTag.PCR: 4,
}


DEFAULT_LIMITS = PatternLimits()

# SPC-2 / REP-2 / RPC / PCR are ML on their nodes rather than SC-equivalent;
# disabling them makes fast decoding match bit-by-bit SC exactly.
SC_EQUIVALENT_LIMITS = PatternLimits(spc2=0, rep2=0, rpc=0, pcr=0)


@dataclass(frozen=True)
class TreeNode:
    """Node of the pruned decode tree; tag is None for internal branches."""

    start: int
    size: int
    tag: PatternTag | None
    children: tuple["TreeNode", ...] = ()


def _match_span(mask, start, size, limits, bch_segments):
    lo_seg = start // SEGMENT_SIZE
    if bch_segments and size >= SEGMENT_SIZE:
        inside = [t for t in bch_segments if start <= SEGMENT_SIZE * t < start + size]
        if inside:
            return bch_segments[lo_seg] if size == SEGMENT_SIZE else None
    local = mask[start:start + size]
    nf = int(local.sum())
    k = size - nf
    if nf == size and limits.allows(PatternTag.RATE0, size):
        return PatternTag.RATE0
    if nf == 0 and limits.allows(PatternTag.RATE1, size):
        return PatternTag.RATE1
    if k == 1 and not local[-1] and limits.allows(PatternTag.REP, size):
        return PatternTag.REP
    if nf == 1 and local[0] and limits.allows(PatternTag.SPC, size):
        return PatternTag.SPC
    if nf == 2 and local[0] and local[1] and limits.allows(PatternTag.SPC2, size):
        return PatternTag.SPC2
    if k == 2 and not local[-1] and not local[-2] \
            and limits.allows(PatternTag.REP2, size):
        return PatternTag.REP2
    if nf == 3 and local[0] and local[1] and local[2] \
            and limits.allows(PatternTag.RPC, size):
        return PatternTag.RPC
    if k == 3 and not local[-1] and not local[-2] and not local[-3] \
            and limits.allows(PatternTag.PCR, size):
        return PatternTag.PCR
    return None


def build_tree(code: CodeSpec | FastPolarCode, limits: PatternLimits | None = None) -> TreeNode:
    """Prune the SC tree for a layout: stop at every matched pattern node."""
    limits = limits if limits is not None else DEFAULT_LIMITS
    spec = code.spec if isinstance(code, FastPolarCode) else code
    bch = code.bch_segments if isinstance(code, FastPolarCode) else {}
    mask = spec.frozen_mask

    def rec(start: int, size: int) -> TreeNode:
        tag = _match_span(mask, start, size, limits, bch)
        if tag is not None:
            return TreeNode(start, size, tag)
        if size == 1:
            raise ValueError(
                f"leaf at index {start} matches no enabled pattern; "
                "rate0/rate1 must be allowed at size 1"
            )
        half = size // 2
        return TreeNode(start, size, None, (rec(start, half), rec(start + half, half)))

    return rec(0, spec.N)


def tree_stats(root: TreeNode) -> TraversalStats:
    """Traversal counters for a pruned tree (layout-determined, channel-free)."""
    histogram: dict[PatternTag, int] = {}
    totals = {"nodes": 0, "f_ops": 0, "terminal": 0}

    def walk(node: TreeNode) -> None:
        totals["nodes"] += 1
        if node.tag is not None:
            totals["terminal"] += 1
            histogram[node.tag] = histogram.get(node.tag, 0) + 1
            return
        totals["f_ops"] += node.size
        for child in node.children:
            walk(child)

    walk(root)
    return TraversalStats(
        terminal_nodes=totals["terminal"],
        edges=totals["nodes"] - 1,
        f_ops=totals["f_ops"],
        histogram=histogram,
    )


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output: info bits, re-encoded codeword estimate, traversal stats."""

    info_bits: np.ndarray
    codeword_estimate: np.ndarray
    stats: TraversalStats


_NODE_DECODERS = {
    PatternTag.SPC2: decode_spc2,
    PatternTag.REP2: decode_rep2,
    PatternTag.RPC: decode_rpc,
    PatternTag.PCR: decode_pcr,
}


def _decode_terminal(node: TreeNode, alpha, width):
    tag = node.tag
    if tag in (PatternTag.RATE0, PatternTag.RATE1, PatternTag.REP, PatternTag.SPC):
        return decode_classic_node(tag, alpha, width)
    if tag in (PatternTag.BCH_T1, PatternTag.BCH_T2):
        variant = BchVariant.T1 if tag is PatternTag.BCH_T1 else BchVariant.T2
        return bch_node_decode(alpha, variant, width)
    return _NODE_DECODERS[tag](alpha, width)


def _walk(node: TreeNode, alpha, width):
    if node.tag is not None:
        return _decode_terminal(node, alpha, width)
    half = node.size // 2
    a = alpha[..., :half]
    b = alpha[..., half:]
    beta_left = _walk(node.children[0], f_check(a, b), width)
    beta_right = _walk(node.children[1], g_bit(a, b, beta_left, width), width)
    return np.concatenate([beta_left ^ beta_right, beta_right], axis=-1)


def _extract_info(code: CodeSpec | FastPolarCode, u_hat: np.ndarray) -> np.ndarray:
    if not isinstance(code, FastPolarCode) or not code.bch_segments:
        spec = code.spec if isinstance(code, FastPolarCode) else code
        return u_hat[..., spec.info_positions]
    parts = []
    for t, seg in enumerate(code.segments):
        base = SEGMENT_SIZE * t
        block = u_hat[..., base:base + SEGMENT_SIZE]
        if t in code.bch_segments:
            variant = BchVariant.T1 if seg.tag is PatternTag.BCH_T1 else BchVariant.T2
            word = polar_transform(block)
            parts.append(word[..., bch_message_positions(variant)])
        elif seg.k:
            parts.append(block[..., SEGMENT_SIZE - seg.k:])
    return np.concatenate(parts, axis=-1)


def fast_sc_decode(
    code: CodeSpec | FastPolarCode,
    alpha,
    width: int | None = None,
    limits: PatternLimits | None = None,
) -> DecodeResult:
    """Fast SC decode of channel LLRs (..., N), float or width-bit fixed point.

    alpha may also be a QuantizedLLR carrying the arithmetic width. Integer
    inputs are clamped into the internal width's range on entry.
    """
    if isinstance(alpha, QuantizedLLR):
        width = width if width is not None else alpha.width
        alpha = np.asarray(alpha.value)
    alpha = np.asarray(alpha)
    spec = code.spec if isinstance(code, FastPolarCode) else code
    if alpha.shape[-1] != spec.N:
        raise ValueError(f"expected {spec.N} LLRs, got {alpha.shape[-1]}")
    if width is not None:
        if not np.issubdtype(alpha.dtype, np.integer):
            raise ValueError("fixed-point decoding requires integer LLRs")
        alpha = saturate(alpha.astype(np.int64), width)
    else:
        alpha = alpha.astype(np.float64, copy=False)
    root = build_tree(code, limits)
    x_hat = _walk(root, alpha, width)
    u_hat = polar_transform(x_hat)
    return DecodeResult(
        info_bits=_extract_info(code, u_hat),
        codeword_estimate=x_hat,
        stats=tree_stats(root),
    )
