import numpy as np
import pytest

from fastpolar.construction import construct_fast_polar, construct_polar
from fastpolar.core import CodeSpec, PatternTag, QuantizedLLR
from fastpolar.decoder import (
    DEFAULT_LIMITS,
    SC_EQUIVALENT_LIMITS,
    PatternLimits,
    build_tree,
    decode_classic_node,
    decode_pcr,
    decode_rep2,
    decode_rpc,
    decode_spc2,
    f_check,
    fast_sc_decode,
    g_bit,
    parallel_min_mask,
    tree_stats,
)
from fastpolar.encoder import encode, polar_transform
from fastpolar.oracle import enumerate_codebook, ml_decode, sc_decode_baseline


def test_f_check_min_sum():
    assert f_check(4.0, -2.0) == -2.0
    assert f_check(-3.0, -5.0) == 3.0
    # a zero input dominates
    assert f_check(0.0, 9.0) == 0.0
    out = f_check(np.array([4.0, -3.0]), np.array([-2.0, -5.0]))
    assert list(out) == [-2.0, 3.0]


def test_g_bit_signed_add():
    assert g_bit(2.0, 3.0, 0) == 5.0
    assert g_bit(2.0, 3.0, 1) == 1.0
    assert g_bit(np.int64(14), np.int64(14), 0, width=5) == 15
    assert g_bit(np.int64(-14), np.int64(-14), 0, width=5) == -15


def test_classic_nodes():
    assert list(decode_classic_node(PatternTag.RATE0, np.array([-9.0, 2.0]))) == [0, 0]
    assert list(decode_classic_node(PatternTag.RATE1, np.array([1.0, -2.0, 0.0]))) == [0, 1, 0]
    assert list(decode_classic_node(PatternTag.REP, np.array([1.0, 1.0, -3.0, 0.0]))) == [1, 1, 1, 1]
    assert list(decode_classic_node(PatternTag.SPC, np.array([1.0, -2.0, 3.0, 4.0]))) == [1, 1, 0, 0]


def test_spc_passes_when_parity_holds():
    alpha = np.array([1.0, -2.0, 3.0, -4.0])
    assert list(decode_classic_node(PatternTag.SPC, alpha)) == [0, 1, 0, 1]


def test_spc2_interleaves_two_wagner_decodes():
    assert list(decode_spc2(np.array([1.0, -2.0, 3.0, -4.0]))) == [0, 1, 0, 1]
    assert not decode_spc2(np.abs(np.random.default_rng(0).normal(size=8)) + 0.1).any()
    # odd parity on the even sublist flips its weakest member
    out = decode_spc2(np.array([1.0, 5.0, -3.0, 6.0, 4.0, 7.0, 2.0, 8.0]))
    assert list(out) == [1, 0, 1, 0, 0, 0, 0, 0]


def test_rep2_fills_even_and_odd_independently():
    assert list(decode_rep2(np.array([1.0, 2.0, -3.0, 4.0]))) == [1, 0, 1, 0]
    assert list(decode_rep2(-np.ones(8))) == [1] * 8
    # zero even-sum resolves to 0
    assert list(decode_rep2(np.array([2.0, -5.0, -2.0, -1.0]))) == [0, 1, 0, 1]


def test_rpc_hand_traces():
    out = decode_rpc(np.array([1.0, -2.0, 3.0, 4.0, -5.0, 6.0, 7.0, 8.0]))
    assert list(out) == [1, 0, 0, 0, 1, 0, 0, 0]
    assert list(decode_rpc(np.array([1.0, 1.0, 1.0, -1.0]))) == [0, 0, 0, 0]
    clean = np.array([3.0, -4.0, 5.0, -6.0, 7.0, -8.0, 9.0, -10.0])
    assert list(decode_rpc(clean)) == [0, 1, 0, 1, 0, 1, 0, 1]


def test_pcr_hand_traces():
    assert list(decode_pcr(np.array([1.0, -2.0, 3.0, -4.0]))) == [0, 1, 0, 1]
    assert not decode_pcr(np.full(8, 2.0)).any()
    assert list(decode_pcr(np.array([1.0, 1.0, 1.0, -2.0]))) == [1, 0, 0, 1]


def test_node_decoders_validate_size():
    for fn in (decode_spc2, decode_rep2, decode_rpc, decode_pcr):
        with pytest.raises(ValueError):
            fn(np.ones(2))
    with pytest.raises(ValueError):
        decode_rpc(np.ones(6))


def test_parallel_min_mask_hand_trace():
    mask = parallel_min_mask(np.array([2, 1, 3, 1]), 2)
    assert list(mask.astype(int)) == [0, 1, 0, 1]
    assert parallel_min_mask(np.array([5, 5, 5]), 3).all()


def test_parallel_min_mask_matches_argmin_set():
    rng = np.random.default_rng(17)
    for bits in (3, 5, 7):
        top = 2 ** bits - 1
        for M in (4, 16, 64):
            amps = rng.integers(0, top + 1, size=(500, M))
            mask = parallel_min_mask(amps, bits)
            assert np.array_equal(mask, amps == amps.min(axis=-1, keepdims=True))


def test_parallel_min_mask_validation():
    with pytest.raises(ValueError):
        parallel_min_mask(np.array([1]), 3)
    with pytest.raises(ValueError):
        parallel_min_mask(np.array([1, 8]), 3)
    with pytest.raises(ValueError):
        parallel_min_mask(np.array([1, -1]), 3)


def test_quantized_wagner_matches_float_on_unique_min():
    rng = np.random.default_rng(23)
    count = 0
    while count < 300:
        alpha = rng.integers(-15, 16, size=8)
        mags = np.abs(alpha)
        if (mags == mags.min()).sum() != 1:
            continue
        count += 1
        fixed = decode_classic_node(PatternTag.SPC, alpha, width=5)
        floated = decode_classic_node(PatternTag.SPC, alpha.astype(np.float64))
        assert np.array_equal(fixed, floated)


@pytest.mark.parametrize("tag,decoder", [
    (PatternTag.SPC2, decode_spc2),
    (PatternTag.REP2, decode_rep2),
    (PatternTag.RPC, decode_rpc),
    (PatternTag.PCR, decode_pcr),
])
@pytest.mark.parametrize("M", [4, 8])
def test_new_node_decoders_are_ml(tag, decoder, M):
    rng = np.random.default_rng(31)
    codebook = enumerate_codebook(tag, M)
    alpha = rng.normal(size=(2000, M))
    fast = decoder(alpha)
    best = ml_decode(codebook, alpha)
    metric_fast = ((1.0 - 2.0 * fast) * alpha).sum(axis=-1)
    metric_best = ((1.0 - 2.0 * best) * alpha).sum(axis=-1)
    assert np.allclose(metric_fast, metric_best)


@pytest.mark.parametrize("tag,decoder", [
    (PatternTag.SPC2, decode_spc2),
    (PatternTag.REP2, decode_rep2),
    (PatternTag.RPC, decode_rpc),
    (PatternTag.PCR, decode_pcr),
])
def test_new_node_outputs_satisfy_frozen_constraints(tag, decoder):
    rng = np.random.default_rng(37)
    codebook = enumerate_codebook(tag, 16)
    words = {tuple(w) for w in codebook.codewords}
    alpha = rng.normal(size=(200, 16))
    for row in decoder(alpha):
        assert tuple(row) in words


def test_pattern_limits_allows():
    limits = DEFAULT_LIMITS
    assert limits.allows(PatternTag.RATE0, 1024)
    assert limits.allows(PatternTag.RATE1, 256)
    assert not limits.allows(PatternTag.RATE1, 512)
    assert limits.allows(PatternTag.SPC, 128)
    assert not limits.allows(PatternTag.SPC, 256)
    assert not limits.allows(PatternTag.REP, 32)
    assert not limits.allows(PatternTag.SPC2, 2)
    assert not SC_EQUIVALENT_LIMITS.allows(PatternTag.RPC, 16)
    assert SC_EQUIVALENT_LIMITS.allows(PatternTag.SPC, 16)


def test_tree_for_two_segment_fast_layout():
    code = construct_fast_polar(32, 28, "pw")
    stats = tree_stats(build_tree(code))
    assert stats.terminal_nodes == 2
    assert stats.edges == 2
    assert stats.f_ops == 32
    assert stats.histogram == {PatternTag.RPC: 1, PatternTag.SPC: 1}


def test_tree_merges_adjacent_segments():
    code = construct_fast_polar(32, 32, "ga")
    stats = tree_stats(build_tree(code))
    assert stats.terminal_nodes == 1
    assert stats.edges == 0
    assert stats.f_ops == 0
    assert stats.histogram == {PatternTag.RATE1: 1}


def test_tree_rejects_unmatchable_leaf():
    spec = CodeSpec(N=4, K=2, info_set=frozenset({2, 3}))
    with pytest.raises(ValueError):
        build_tree(spec, PatternLimits(rate0=0, rate1=1, rep=0, spc=0,
                                       spc2=0, rep2=0, rpc=0, pcr=0))


def test_fast_decode_validates_input():
    code = construct_fast_polar(64, 48, "ga")
    with pytest.raises(ValueError):
        fast_sc_decode(code, np.zeros(32))
    with pytest.raises(ValueError):
        fast_sc_decode(code, np.zeros(64), width=5)  # float input on fixed path


def test_fast_decode_noiseless_round_trip():
    rng = np.random.default_rng(41)
    for N, K in ((32, 28), (256, 200), (1024, 896)):
        code = construct_fast_polar(N, K, "ga")
        info = rng.integers(0, 2, size=(8, K), dtype=np.uint8)
        llr = (1.0 - 2.0 * encode(code, info)) * 9.0
        result = fast_sc_decode(code, llr)
        assert np.array_equal(result.info_bits, info)
        assert np.array_equal(result.codeword_estimate, encode(code, info))


def test_fast_decode_accepts_quantized_llr_container():
    code = construct_fast_polar(32, 28, "pw")
    info = np.ones(28, dtype=np.uint8)
    llr = (1 - 2 * encode(code, info).astype(np.int64)) * 7
    result = fast_sc_decode(code, QuantizedLLR(llr, 5))
    assert np.array_equal(result.info_bits, info)


def test_codeword_estimate_matches_info_bits():
    spec = construct_polar(128, 80, "ga")
    rng = np.random.default_rng(43)
    llr = rng.normal(size=128)
    result = fast_sc_decode(spec, llr)
    u_hat = polar_transform(result.codeword_estimate)
    assert not u_hat[spec.frozen_mask].any()
    assert np.array_equal(u_hat[spec.info_positions], result.info_bits)


def test_stats_are_layout_determined():
    code = construct_fast_polar(1024, 896, "ga")
    rng = np.random.default_rng(47)
    llr = rng.normal(size=1024) * 4
    float_stats = fast_sc_decode(code, llr).stats
    fixed = np.clip(np.rint(llr), -15, 15).astype(np.int64)
    fixed_stats = fast_sc_decode(code, fixed, width=5).stats
    assert float_stats == fixed_stats
    assert float_stats == tree_stats(build_tree(code))


def test_degenerate_limits_reduce_to_bit_by_bit_sc():
    # leaf-only Rate0/Rate1 matching makes the traversal classic SC
    leaf_only = PatternLimits(rate0=1, rate1=1, rep=0, spc=0,
                              spc2=0, rep2=0, rpc=0, pcr=0)
    spec = construct_polar(32, 20, "ga")
    rng = np.random.default_rng(53)
    llr = rng.normal(size=(100, 32))
    degenerate = fast_sc_decode(spec, llr, limits=leaf_only)
    assert np.array_equal(degenerate.info_bits, sc_decode_baseline(spec, llr))
    assert degenerate.stats.terminal_nodes == 32
    assert degenerate.stats.edges == 62


def test_classic_pattern_decoding_matches_baseline_sc():
    rng = np.random.default_rng(59)
    for N, K in ((32, 20), (64, 40), (64, 55)):
        spec = construct_polar(N, K, "ga")
        llr = rng.normal(size=(200, N))
        fast = fast_sc_decode(spec, llr, limits=SC_EQUIVALENT_LIMITS)
        assert np.array_equal(fast.info_bits, sc_decode_baseline(spec, llr))


def test_fixed_arithmetic_decode_matches_wide_float_when_unsaturated():
    # small integer LLRs never hit the rails, so both paths agree
    code = construct_fast_polar(64, 48, "ga")
    rng = np.random.default_rng(61)
    llr = rng.integers(-3, 4, size=(50, 64))
    fixed = fast_sc_decode(code, llr, width=8)
    floated = fast_sc_decode(code, llr.astype(np.float64))
    assert np.array_equal(fixed.info_bits, floated.info_bits)
