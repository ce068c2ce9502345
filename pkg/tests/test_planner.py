import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from warpwatch.errors import InfeasibleTarget, InvalidSpeed, OutOfRange, SpeedWarning, ZeroLengthOutput
from warpwatch.planner import (
    PerClass,
    ReadingRate,
    TargetDuration,
    build_warp_plan,
    plan_from_speeds,
    predict_duration,
    predict_duration_reading,
    round_half_up,
    solve_sm_for_target,
    unwarp_time,
    warp_time,
)
from warpwatch.subtitles import CountMode, SubtitleCue, SubtitleTrack, count_text_units
from warpwatch.timeline import Segment, SegmentKind, SegmentList, compute_r, segment_timeline

from helpers import exact_round_div, random_plan, random_track, reading_oracle

NL, L = SegmentKind.NONLANGUAGE, SegmentKind.LANGUAGE


def two_segment_plan():
    segs = SegmentList((Segment(0, 10_000, NL), Segment(10_000, 20_000, L, (1,))), 20_000)
    return build_warp_plan(segs, PerClass(2, 1))


# -- predict_duration --------------------------------------------------------

def test_predict_identity():
    assert predict_duration(1, 1, 0.7, 120_000) == 120_000


def test_predict_arithmetic():
    assert predict_duration(4, 2, 0.5, 100_000) == 37_500


def test_predict_with_reported_constants():
    # oracle: exact rational evaluation of r*L/S_m + (1-r)*L/S_s
    exact = Fraction("0.5777") * 10**6 / Fraction("11.14") + Fraction("0.4223") * 10**6 / Fraction("5.910")
    assert float(exact) == pytest.approx(123_313.3295, abs=1e-3)
    assert predict_duration(11.14, 5.910, 0.5777, 1_000_000) == 123_313


@pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
def test_predict_invalid_speed(bad):
    with pytest.raises(InvalidSpeed):
        predict_duration(bad, 1, 0.5, 1000)
    with pytest.raises(InvalidSpeed):
        predict_duration(1, bad, 0.5, 1000)


# -- reading-rate prediction -------------------------------------------------

def test_reading_no_cues():
    segs = segment_timeline(SubtitleTrack(), 100_000, 500)
    assert predict_duration_reading(5, 300, segs, SubtitleTrack()) == 20_000


def test_reading_one_segment():
    track = SubtitleTrack((SubtitleCue(1, 50_000, 100_000, ("x" * 100,)),))
    segs = segment_timeline(track, 100_000, 500)
    # 50000/5 + 60000*100/300
    assert predict_duration_reading(5, 300, segs, track) == 30_000


def test_reading_zero_text_falls_back_to_sm():
    track = SubtitleTrack((SubtitleCue(1, 0, 4000, ("<i></i>",)),))
    segs = segment_timeline(track, 10_000, 500)
    assert count_text_units(track.cues[0]) == 0
    assert predict_duration_reading(2, 300, segs, track) == 6000 // 2 + 4000 // 2
    plan = build_warp_plan(segs, ReadingRate(2, 300), track)
    assert plan.speeds == [2.0, 2.0]


# -- solver ------------------------------------------------------------------

def test_solve_plain():
    solved = solve_sm_for_target(37_500, 2, 0.5, 100_000)
    assert solved.s_m == pytest.approx(4.0, rel=1e-12)
    assert solved.s_s == 2 and not solved.adjusted


def test_solve_infeasible_at_language_floor():
    with pytest.raises(InfeasibleTarget):
        solve_sm_for_target(25_000, 2, 0.5, 100_000)


def test_solve_capped():
    solved = solve_sm_for_target(30_000, 2, 0.5, 100_000, s_m_max=8)
    assert solved.s_m == 8 and solved.adjusted
    assert solved.s_s == pytest.approx(50_000 / 23_750, rel=1e-12)
    assert predict_duration(solved.s_m, solved.s_s, 0.5, 100_000) == 30_000


def test_solve_capped_infeasible():
    # non-language alone needs 50000/8 = 6250 ms at the cap
    with pytest.raises(InfeasibleTarget):
        solve_sm_for_target(6250, 2, 0.5, 100_000, s_m_max=8)


def test_solve_edge_ratios():
    all_nonlang = solve_sm_for_target(10_000, 2, 1.0, 100_000)
    assert all_nonlang.s_m == pytest.approx(10.0) and not all_nonlang.adjusted
    all_lang = solve_sm_for_target(10_000, 2, 0.0, 100_000)
    assert all_lang.s_s == pytest.approx(10.0) and all_lang.adjusted


def test_solve_warns_on_huge_sm():
    with pytest.warns(SpeedWarning):
        solve_sm_for_target(25_100, 2, 0.5, 100_000)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(0.01, 0.99),
    st.integers(10_000, 10_000_000),
    st.floats(1.0, 10.0),
    st.floats(1.0, 40.0),
)
def test_solve_round_trip(r, l, s_s, s_m):
    target = predict_duration(s_m, s_s, r, l)
    assume(target > (1 - r) * l / s_s + 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SpeedWarning)
        solved = solve_sm_for_target(target, s_s, r, l)
    assert abs(predict_duration(solved.s_m, solved.s_s, r, l) - target) <= 1


# -- plan construction -------------------------------------------------------

def test_plan_two_segments():
    plan = two_segment_plan()
    assert [(s.out_start, s.out_end) for s in plan.segments] == [(0, 5000), (5000, 15_000)]
    assert plan.l_out == 15_000


def test_plan_identity():
    track = SubtitleTrack((SubtitleCue(1, 1234, 5678, ("a",)),))
    segs = segment_timeline(track, 9999, 0)
    plan = build_warp_plan(segs, PerClass(1, 1))
    assert plan.l_out == plan.l_in == 9999
    assert all(s.in_start == s.out_start and s.in_end == s.out_end for s in plan.segments)


def test_plan_reading_rate_speed():
    track = SubtitleTrack((SubtitleCue(1, 0, 2000, ("abcdefghij",)),))
    segs = segment_timeline(track, 2000, 0)
    plan = build_warp_plan(segs, ReadingRate(4, 600), track)
    # 2000 * 600 / (60000 * 10)
    assert plan.speeds == [2.0]
    assert plan.l_out == 1000


def test_plan_reading_rate_clamps():
    track = SubtitleTrack((SubtitleCue(1, 0, 2000, ("abcdefghij",)),))
    segs = segment_timeline(track, 2000, 0)
    assert build_warp_plan(segs, ReadingRate(4, 60, min_speed=1.0), track).speeds == [1.0]
    assert build_warp_plan(segs, ReadingRate(4, 6000, max_speed=3.0), track).speeds == [3.0]


def test_plan_target_duration():
    segs = SegmentList((Segment(0, 50_000, NL), Segment(50_000, 100_000, L, (1,))), 100_000)
    plan = build_warp_plan(segs, TargetDuration(37_500, 2))
    assert plan.l_out == 37_500
    assert plan.solved.s_m == pytest.approx(4.0)


def test_zero_length_segment_is_stretched():
    with pytest.warns(ZeroLengthOutput):
        plan = plan_from_speeds([(0, 1, L), (1, 1001, NL)], [1000.0, 1.0])
    assert [(s.out_start, s.out_end) for s in plan.segments] == [(0, 1), (1, 1001)]
    assert plan.l_out == 1001


def test_spec_validation():
    with pytest.raises(InvalidSpeed):
        PerClass(0, 1)
    with pytest.raises(InvalidSpeed):
        PerClass(1, 1001)
    with pytest.warns(SpeedWarning):
        PerClass(0.5, 1)
    with pytest.raises(InfeasibleTarget):
        TargetDuration(0, 2)


# -- warp map ----------------------------------------------------------------

def test_warp_examples():
    plan = two_segment_plan()
    assert warp_time(plan, 15_000) == 10_000
    assert warp_time(plan, 10_000) == 5000
    assert unwarp_time(plan, 10_000) == 15_000
    assert warp_time(plan, 0) == 0 and warp_time(plan, 20_000) == 15_000


def test_warp_identity():
    plan = build_warp_plan(SegmentList((Segment(0, 777, NL),), 777), PerClass(1, 1))
    assert all(warp_time(plan, t) == t == unwarp_time(plan, t) for t in range(778))


def test_warp_out_of_range():
    plan = two_segment_plan()
    with pytest.raises(OutOfRange):
        warp_time(plan, -1)
    with pytest.raises(OutOfRange):
        warp_time(plan, 20_001)
    with pytest.raises(OutOfRange):
        unwarp_time(plan, 15_001)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_warp_monotone_and_pinned(seed):
    rng = np.random.default_rng(seed)
    plan = random_plan(rng)
    assert warp_time(plan, 0) == 0 and warp_time(plan, plan.l_in) == plan.l_out
    ts = np.sort(rng.integers(0, plan.l_in + 1, size=50))
    out = [warp_time(plan, int(t)) for t in ts]
    assert out == sorted(out)
    starts = [s.out_start for s in plan.segments] + [plan.l_out]
    assert all(a < b for a, b in zip(starts, starts[1:]))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_inverse_bound(seed):
    rng = np.random.default_rng(seed)
    plan = random_plan(rng)
    bound = math.ceil(max(plan.speeds))
    for x in rng.integers(0, plan.l_out + 1, size=50):
        assert abs(warp_time(plan, unwarp_time(plan, int(x))) - int(x)) <= bound


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_inverse_bound_slow_speeds(seed):
    # below 1x the output clock is finer than the source clock
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        plan = random_plan(rng, speed_range=(0.1, 5.0))
    bound = max(math.ceil(max(plan.speeds)), math.ceil(1 / min(plan.speeds)))
    for x in rng.integers(0, plan.l_out + 1, size=50):
        assert abs(warp_time(plan, unwarp_time(plan, int(x))) - int(x)) <= bound


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_uniform_speed_exact_at_boundaries(seed):
    rng = np.random.default_rng(seed)
    plan = random_plan(rng, uniform=True, min_len=100)
    s = plan.speeds[0]
    for seg in plan.segments:
        assert warp_time(plan, seg.in_start) == exact_round_div(seg.in_start, s)
    assert plan.l_out == exact_round_div(plan.l_in, s)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_doubling_speeds_halves_exact_durations(seed):
    rng = np.random.default_rng(seed)
    plan = random_plan(rng, speed_range=(1.0, 10.0))
    bounds = [(s.in_start, s.in_end, s.kind) for s in plan.segments]
    doubled = plan_from_speeds(bounds, [2 * s for s in plan.speeds])
    assert doubled.exact_out_durations() == [d / 2 for d in plan.exact_out_durations()]


@settings(max_examples=200, deadline=None)
@given(seeds, st.floats(1.0, 30.0), st.floats(1.0, 10.0), st.integers(0, 3000))
def test_perclass_matches_closed_form(seed, s_m, s_s, gap):
    rng = np.random.default_rng(seed)
    total = int(rng.integers(1000, 5_000_000))
    track = random_track(rng, total)
    segs = segment_timeline(track, total, gap)
    plan = build_warp_plan(segs, PerClass(s_m, s_s))
    assert abs(plan.l_out - predict_duration(s_m, s_s, compute_r(segs), total)) <= len(segs)


@settings(max_examples=200, deadline=None)
@given(seeds, st.floats(1.0, 30.0), st.floats(100.0, 2000.0))
def test_reading_plan_matches_formula(seed, s_m, s_r):
    rng = np.random.default_rng(seed)
    total = int(rng.integers(10_000, 5_000_000))
    track = random_track(rng, total)
    segs = segment_timeline(track, total, 500)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        plan = build_warp_plan(segs, ReadingRate(s_m, s_r), track)
    predicted = predict_duration_reading(s_m, s_r, segs, track)
    assert abs(plan.l_out - predicted) <= len(segs)
    oracle = reading_oracle(segs, track, s_m, s_r, count_text_units)
    assert abs(predicted - float(oracle)) <= 0.5 + 1e-6
