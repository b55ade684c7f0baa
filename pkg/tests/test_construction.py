import numpy as np
import pytest

from fastpolar.construction import (
    DEFAULT_DESIGN_SNR_DB,
    InfeasibleConstructionError,
    ReliabilityOrder,
    _pw_weights,
    classify_segment,
    construct_fast_polar,
    construct_polar,
    layout_from_dict,
    layout_to_dict,
    reliability_sequence,
)
from fastpolar.core import FastPolarCode, PatternTag, SegmentPattern

# Per-segment info counts for the reference layout (N=1024, K=896, GA at the
# default design SNR). Frozen as a regression golden.
REFERENCE_KS = [0, 1, 1, 7, 3, 11, 11, 15, 3, 11, 14, 16, 15, 16, 16, 16,
                3, 15, 15, 16, 15, 16, 16, 16, 15, 16, 16, 16, 16, 16, 16, 16,
                7, 15, 15, 16] + [16] * 28


def test_default_design_snr():
    assert DEFAULT_DESIGN_SNR_DB == 4.5


def test_reliability_order_is_permutation():
    for method in ("ga", "pw"):
        order = reliability_sequence(256, method)
        assert sorted(order.order) == list(range(256))
        assert order.N == 256
        assert order.method == method


def test_reliability_order_rejects_non_permutation():
    with pytest.raises(ValueError):
        ReliabilityOrder(N=4, order=np.array([0, 1, 1, 3]), method="ga",
                         design_snr_db=4.5)


def test_pw_length_two_order():
    order = reliability_sequence(2, "pw")
    assert list(order.order) == [0, 1]
    assert order.design_snr_db is None


def test_pw_length_four_weights():
    beta = 2.0 ** 0.25
    expected = np.array([0.0, 1.0, beta, 1.0 + beta])
    assert np.allclose(_pw_weights(4), expected)


def test_ga_most_reliable_channel_at_two_db():
    order = reliability_sequence(32, "ga", design_snr_db=2.0)
    assert order.order[-1] == 31
    assert order.design_snr_db == 2.0


def test_reliability_sequence_validation():
    with pytest.raises(ValueError):
        reliability_sequence(48, "ga")
    with pytest.raises(ValueError):
        reliability_sequence(64, "density_evolution")


def test_construct_polar_takes_most_reliable_positions():
    spec = construct_polar(16, 16, "pw")
    assert spec.info_set == frozenset(range(16))
    spec = construct_polar(64, 8, "ga")
    order = reliability_sequence(64, "ga")
    assert spec.info_set == frozenset(int(i) for i in order.order[-8:])


def test_classify_segment_canonical_fast_sets():
    for k, tag in ((0, PatternTag.RATE0), (1, PatternTag.REP), (2, PatternTag.REP2),
                   (3, PatternTag.PCR), (13, PatternTag.RPC), (14, PatternTag.SPC2),
                   (15, PatternTag.SPC), (16, PatternTag.RATE1)):
        pattern = classify_segment(range(16 - k))
        assert pattern.tag is tag
        assert pattern.k == k


def test_classify_segment_bch_ignores_positions():
    # 7 or 11 information bits always map to a BCH pattern
    assert classify_segment({0, 1, 2, 3, 4, 10, 12, 13, 15}).tag is PatternTag.BCH_T2
    assert classify_segment({1, 3, 5, 7, 9}).tag is PatternTag.BCH_T1
    assert classify_segment(range(9)).tag is PatternTag.BCH_T2
    assert classify_segment(range(5)).tag is PatternTag.BCH_T1


def test_classify_segment_non_canonical_falls_to_slow():
    # one info bit at local index 0 cannot decode as REP
    assert classify_segment(set(range(16)) - {0}).tag is PatternTag.SLOW
    assert classify_segment(range(4)).tag is PatternTag.SLOW


def test_classify_segment_total_over_random_sets():
    rng = np.random.default_rng(11)
    for _ in range(300):
        size = int(rng.integers(0, 17))
        frozen = rng.choice(16, size=size, replace=False)
        pattern = classify_segment(frozen)
        assert isinstance(pattern, SegmentPattern)
        assert pattern.k == 16 - size


def test_classify_segment_rejects_bad_positions():
    with pytest.raises(ValueError):
        classify_segment({16})
    with pytest.raises(ValueError):
        classify_segment({-1})


def test_fast_construction_reference_layout():
    code = construct_fast_polar(1024, 896, "ga")
    assert [seg.k for seg in code.segments] == REFERENCE_KS
    assert code.bch_segments == {
        3: PatternTag.BCH_T2,
        5: PatternTag.BCH_T1,
        6: PatternTag.BCH_T1,
        9: PatternTag.BCH_T1,
        32: PatternTag.BCH_T2,
    }


def test_fast_construction_pull_case():
    # the later segment must receive bits from the earlier one
    code = construct_fast_polar(32, 28, "pw")
    assert [seg.k for seg in code.segments] == [13, 15]
    assert [seg.tag for seg in code.segments] == [PatternTag.RPC, PatternTag.SPC]


def test_fast_construction_full_rate_needs_no_moves():
    code = construct_fast_polar(32, 32, "ga")
    assert [seg.k for seg in code.segments] == [16, 16]
    assert code.spec.info_set == frozenset(range(32))


def test_fast_construction_preserves_rate_and_patterns():
    rng = np.random.default_rng(5)
    for N in (64, 128, 512):
        for _ in range(4):
            K = int(rng.integers(N // 2, N + 1))
            try:
                code = construct_fast_polar(N, K, "ga")
            except InfeasibleConstructionError:
                continue
            assert sum(seg.k for seg in code.segments) == K
            assert all(seg.tag is not PatternTag.SLOW for seg in code.segments)


def test_fast_construction_infeasible_names_segment():
    with pytest.raises(InfeasibleConstructionError, match="segment 1"):
        construct_fast_polar(32, 5, "ga")


def test_fast_construction_rejects_single_segment():
    with pytest.raises(ValueError):
        construct_fast_polar(16, 16, "ga")


def test_layout_round_trip_plain():
    spec = construct_polar(128, 64, "ga")
    doc = layout_to_dict(spec, method="ga", design_snr_db=4.5)
    assert doc["N"] == 128 and doc["K"] == 64
    assert doc["info_set"] == sorted(spec.info_set)
    assert "segments" not in doc
    assert layout_from_dict(doc) == spec


def test_layout_round_trip_fast():
    code = construct_fast_polar(64, 48, "ga")
    doc = layout_to_dict(code)
    rebuilt = layout_from_dict(doc)
    assert isinstance(rebuilt, FastPolarCode)
    assert rebuilt.segments == code.segments
    assert rebuilt.spec == code.spec
    assert rebuilt.bch_segments == code.bch_segments


def test_layout_from_dict_rejects_missing_keys():
    with pytest.raises(ValueError):
        layout_from_dict({"N": 64, "K": 32})
